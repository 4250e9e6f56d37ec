mod common;

use proptest::prelude::*;
use sellkit::kernels::{spmv_crs, spmv_crs_unrolled, spmv_sell, Executor, Kernel, Schedule};
use sellkit::model::simulate_rhs_traffic;
use sellkit::{CrsMatrix, SellConfig, SellMatrix};

const CS: [usize; 6] = [1, 2, 4, 8, 16, 32];

fn layout() -> impl Strategy<Value = (usize, usize)> {
    (0usize..6, 0usize..4).prop_map(|(ci, si)| {
        let c = CS[ci];
        (c, [1, c, 4 * c, 64 * c][si])
    })
}

fn matrix(max_n: usize) -> impl Strategy<Value = (CrsMatrix, u64)> {
    (1..=max_n, any::<u64>()).prop_map(|(n, seed)| {
        let mut rng = common::rng(seed);
        (
            CrsMatrix::from_coo(common::random_coo(&mut rng, n, n)).unwrap(),
            seed,
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn conversion_is_lossless((m, _) in matrix(120), (c, sigma) in layout(), permute: bool) {
        let s = SellMatrix::from_crs(&m, SellConfig::new(c, sigma).permute_cols(permute)).unwrap();
        prop_assert_eq!(s.to_coo(), m.to_coo());
        prop_assert_eq!(s.to_crs().unwrap(), m);
    }

    #[test]
    fn occupancy_matches_definition((m, _) in matrix(200), (c, sigma) in layout()) {
        let s = SellMatrix::from_crs(&m, SellConfig::new(c, sigma)).unwrap();
        let beta = s.chunk_occupancy();
        prop_assert_eq!(beta, common::beta_oracle(&m.row_lengths(), c, sigma));
        prop_assert!(beta <= 1.0);
        prop_assert!(m.nnz() == 0 || beta >= 1.0 / c as f64 / s.n_rows_padded() as f64);
    }

    #[test]
    fn occupancy_lower_bound(n_chunks in 1usize..20, ci in 0usize..6, sigma_k in 0u32..5, seed: u64) {
        let c = CS[ci];
        let n = n_chunks * c;
        let mut rng = common::rng(seed);
        // every row non-empty
        let mut coo = common::random_coo(&mut rng, n, n);
        for r in 0..n {
            coo.push(r, r, 1.0);
        }
        let m = CrsMatrix::from_coo(coo).unwrap();
        let sigma = if sigma_k == 0 { 1 } else { c << sigma_k };
        let beta = SellMatrix::from_crs(&m, SellConfig::new(c, sigma)).unwrap().chunk_occupancy();
        prop_assert!(beta >= (n + c - 1) as f64 / (c * n) as f64 - 1e-15);
    }

    #[test]
    fn alignment_only_widens_chunks((m, _) in matrix(150), ci in 0usize..6, align_k in 0u32..8) {
        let c = CS[ci];
        let align = 1usize << align_k;
        let plain = SellMatrix::from_crs(&m, SellConfig::new(c, 1)).unwrap();
        let aligned = SellMatrix::from_crs(&m, SellConfig::new(c, 1).align_bytes(align)).unwrap();
        for (a, p) in aligned.cl().iter().zip(plain.cl()) {
            prop_assert!(a >= p);
            prop_assert_eq!((c * *a as usize * 4) % align, 0);
        }
        prop_assert!(aligned.chunk_occupancy() <= plain.chunk_occupancy());
    }

    #[test]
    fn sell_matches_dense_oracle((m, seed) in matrix(200), (c, sigma) in layout(), permute: bool) {
        let mut rng = common::rng(seed ^ 0x5eed);
        let x = common::random_vector(&mut rng, m.n_cols);
        let y_ref = common::dense_matvec(&m.to_coo(), &x);
        let s = SellMatrix::from_crs(&m, SellConfig::new(c, sigma).permute_cols(permute)).unwrap();
        let mut y = vec![0.0; s.n_rows_padded()];
        spmv_sell(&s, &s.permute_rhs(&x).unwrap(), &mut y, false).unwrap();
        let nzr = m.nnz() as f64 / m.n_rows as f64;
        prop_assert!(common::rel_err(&s.unpermute_rows(&y).unwrap(), &y_ref) <= 1e-13 * nzr.max(1.0));
    }

    #[test]
    fn parallel_equals_serial_bitwise((m, seed) in matrix(300), (c, sigma) in layout(), threads in 1usize..5) {
        let mut rng = common::rng(seed);
        let x = common::random_vector(&mut rng, m.n_cols);
        let s = SellMatrix::from_crs(&m, SellConfig::new(c, sigma)).unwrap();
        let mut serial = vec![0.0; s.n_rows_padded()];
        spmv_sell(&s, &x, &mut serial, false).unwrap();
        let mut crs_serial = vec![0.0; m.n_rows];
        spmv_crs(&m, &x, &mut crs_serial, false).unwrap();
        for schedule in [Schedule::Static, Schedule::Guided1] {
            let exec = Executor::new(threads, schedule).unwrap();
            let mut y = vec![0.0; s.n_rows_padded()];
            Kernel::Sell(&s).apply(&x, &mut y, false, &exec).unwrap();
            prop_assert!(y.iter().zip(&serial).all(|(a, b)| a.to_bits() == b.to_bits()));
            let mut y = vec![0.0; m.n_rows];
            Kernel::Crs(&m).apply(&x, &mut y, false, &exec).unwrap();
            prop_assert!(y.iter().zip(&crs_serial).all(|(a, b)| a.to_bits() == b.to_bits()));
        }
    }

    #[test]
    fn padding_is_neutral((m, seed) in matrix(150), ci in 0usize..6, align_k in 3u32..9) {
        let c = CS[ci];
        let mut rng = common::rng(seed);
        let mut x = common::random_vector(&mut rng, m.n_cols);
        x[0] = 1e300;
        let plain = SellMatrix::from_crs(&m, SellConfig::new(c, 1)).unwrap();
        let padded = SellMatrix::from_crs(&m, SellConfig::new(c, 1).align_bytes(1 << align_k)).unwrap();
        let mut a = vec![0.0; plain.n_rows_padded()];
        let mut b = vec![0.0; padded.n_rows_padded()];
        spmv_sell(&plain, &x, &mut a, false).unwrap();
        spmv_sell(&padded, &x, &mut b, false).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn accumulate_adds_to_existing((m, seed) in matrix(100), (c, sigma) in layout()) {
        let mut rng = common::rng(seed);
        let x = common::random_vector(&mut rng, m.n_cols);
        let s = SellMatrix::from_crs(&m, SellConfig::new(c, sigma)).unwrap();
        let mut fresh = vec![0.0; s.n_rows_padded()];
        spmv_sell(&s, &x, &mut fresh, false).unwrap();
        let mut acc = vec![0.0; s.n_rows_padded()];
        spmv_sell(&s, &x, &mut acc, true).unwrap();
        spmv_sell(&s, &x, &mut acc, true).unwrap();
        let doubled: Vec<f64> = fresh.iter().map(|v| 2.0 * v).collect();
        prop_assert!(common::rel_err(&acc, &doubled) <= 1e-14);
    }

    #[test]
    fn unrolled_crs_close_to_plain((m, seed) in matrix(200)) {
        let mut rng = common::rng(seed);
        let x = common::random_vector(&mut rng, m.n_cols);
        let mut a = vec![0.0; m.n_rows];
        let mut b = vec![0.0; m.n_rows];
        spmv_crs(&m, &x, &mut a, false).unwrap();
        spmv_crs_unrolled(&m, &x, &mut b, false).unwrap();
        for i in 0..m.n_rows {
            let (cols, vals) = m.row(i);
            let scale: f64 = cols.iter().zip(vals).map(|(&c, v)| (v * x[c as usize]).abs()).sum();
            prop_assert!((a[i] - b[i]).abs() <= 1e-14 * scale.max(f64::MIN_POSITIVE));
        }
    }

    #[test]
    fn simulated_traffic_non_increasing_in_cache((m, _) in matrix(300), (c, sigma) in layout(), line_k in 3u32..8) {
        let line = 1usize << line_k;
        let s = SellMatrix::from_crs(&m, SellConfig::new(c, sigma)).unwrap();
        let mut prev = u64::MAX;
        for lines in [1usize, 2, 4, 16, 64, 1024] {
            let v = simulate_rhs_traffic(Kernel::Sell(&s), lines * line, line).unwrap().total();
            prop_assert!(v <= prev);
            prev = v;
        }
    }
}
