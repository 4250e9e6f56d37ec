mod common;

use std::path::Path;

use clap::Parser;
use sellkit::cli::{
    cmd_analyze, cmd_bench, cmd_convert, cmd_microbench, cmd_model, cmd_sweep_sigma, execute,
    AnalyzeArgs, BenchArgs, Cli, ConvertArgs, KernelKind, LayoutArgs, MicrobenchArgs,
    MicrobenchKind, ModelArgs, OutputFormat, Report, SchedArg, SweepArgs, ThreadArgs,
};
use sellkit::io::{gen_banded, write_matrix_market};

fn analyze(matrix: &str, c: usize, sigma: &[usize]) -> Report {
    cmd_analyze(&AnalyzeArgs {
        matrix: matrix.into(),
        layout: LayoutArgs::with_c(c),
        sigma: sigma.to_vec(),
    })
    .unwrap()
}

fn convert(
    matrix: &str,
    out: &Path,
    c: usize,
    sigma: usize,
    permute_cols: bool,
) -> sellkit::Result<Report> {
    cmd_convert(&ConvertArgs {
        matrix: matrix.into(),
        output: out.to_path_buf(),
        layout: LayoutArgs::with_c(c),
        sigma,
        align_bytes: 1,
        permute_cols,
    })
}

fn bench(
    matrix: &str,
    kernel: KernelKind,
    threads: usize,
    sched: SchedArg,
    bandwidth: Option<f64>,
) -> Report {
    cmd_bench(&BenchArgs {
        matrix: matrix.into(),
        kernel,
        layout: LayoutArgs::with_c(8),
        sigma: Some(64),
        permute_cols: false,
        reps: 3,
        threads: ThreadArgs {
            threads: Some(threads),
        },
        sched,
        llc_bytes: None,
        bandwidth,
    })
    .unwrap()
}

fn model_args(bandwidth: Vec<f64>) -> ModelArgs {
    ModelArgs {
        matrix: None,
        beta: None,
        beta_from: None,
        row: None,
        alpha: "ideal".into(),
        nnzr: None,
        nnzc: None,
        bandwidth,
        layout: LayoutArgs::default(),
        sigma: 1,
        cache_bytes: None,
        line_bytes: 64,
    }
}

fn sweep(matrix: &str, c: usize, reps: usize) -> Report {
    cmd_sweep_sigma(&SweepArgs {
        matrix: matrix.into(),
        layout: LayoutArgs::with_c(c),
        sigma_min: None,
        sigma_max: None,
        cache_bytes: Some(16 << 10),
        line_bytes: 64,
        reps,
        permute_cols: false,
        threads: ThreadArgs { threads: Some(1) },
    })
    .unwrap()
}

#[test]
fn analyze_worst_case_sorted_is_perfect() {
    let r = analyze("gen:worst-case:4,4", 4, &[1, 16]);
    let beta = r.column_f64("beta").unwrap();
    assert_eq!(beta[0], 19.0 / 64.0);
    assert_eq!(beta[1], 1.0);
    assert_eq!(r.column_f64("nnz").unwrap(), vec![76.0, 76.0]);
}

#[test]
fn analyze_reads_matrix_market_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("band.mtx");
    write_matrix_market(&gen_banded(300, 2, 1.0, 0).unwrap(), &path).unwrap();
    let r = analyze(path.to_str().unwrap(), 16, &[1, 256]);
    assert_eq!(r.column_f64("N").unwrap(), vec![300.0, 300.0]);
    assert_eq!(r.column_f64("nnz").unwrap()[0], (300 * 5 - 6) as f64);
}

#[test]
fn analyze_errors_on_missing_file() {
    let err = cmd_analyze(&AnalyzeArgs {
        matrix: "/nonexistent/x.mtx".into(),
        layout: LayoutArgs::default(),
        sigma: vec![],
    });
    assert!(err.is_err());
}

#[test]
fn convert_then_analyze_reproduces_beta() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("m.sell");
    let src = "gen:skewed:2000,4,300,7@3";
    let conv = convert(src, &out, 16, 64, true).unwrap();
    let from_cache = cmd_analyze(&AnalyzeArgs {
        matrix: out.display().to_string(),
        layout: LayoutArgs::default(),
        sigma: vec![],
    })
    .unwrap();
    assert_eq!(
        conv.column_f64("beta").unwrap(),
        from_cache.column_f64("beta").unwrap()
    );
    assert_eq!(
        analyze(src, 16, &[64]).column_f64("beta").unwrap(),
        from_cache.column_f64("beta").unwrap()
    );
    assert_eq!(from_cache.column_f64("C").unwrap(), vec![16.0]);
}

#[test]
fn convert_flags_crs_equivalent() {
    let dir = tempfile::tempdir().unwrap();
    let flag = |c, sigma| {
        let r = convert(
            "gen:random:50,50,6",
            &dir.path().join("a.sell"),
            c,
            sigma,
            false,
        )
        .unwrap();
        r.column("crs_equivalent").unwrap()[0].as_bool().unwrap()
    };
    assert!(flag(1, 1));
    assert!(!flag(4, 1));
    let padding = convert(
        "gen:worst-case:2,4",
        &dir.path().join("b.sell"),
        4,
        1,
        false,
    )
    .unwrap();
    // 2 chunks of width 8: 64 slots, 22 nonzeros, 12 bytes per padding slot
    assert_eq!(
        padding.column_f64("padding [bytes]").unwrap(),
        vec![(64.0 - 22.0) * 12.0]
    );
}

#[test]
fn convert_rejects_column_permutation_of_rectangular() {
    let dir = tempfile::tempdir().unwrap();
    let err = convert("gen:random:20,30,5", &dir.path().join("r.sell"), 4, 4, true).unwrap_err();
    assert!(err.to_string().contains("square"), "{err}");
}

#[test]
fn bench_checksums_agree_across_formats_and_threads() {
    let m = "gen:skewed:3000,6,500,5@9";
    let checksum = |r: &Report| r.column_f64("checksum").unwrap()[0];
    let crs = checksum(&bench(m, KernelKind::Crs, 1, SchedArg::Static, None));
    for kernel in [KernelKind::CrsUnrolled, KernelKind::Sell] {
        let c = checksum(&bench(m, kernel, 1, SchedArg::Auto, None));
        assert!(
            (c - crs).abs() <= 1e-10 * crs.abs(),
            "{kernel:?}: {c} vs {crs}"
        );
    }
    let one = checksum(&bench(m, KernelKind::Sell, 1, SchedArg::Static, None));
    let four = checksum(&bench(m, KernelKind::Sell, 4, SchedArg::Guided1, None));
    assert_eq!(one.to_bits(), four.to_bits());
}

#[test]
fn bench_reports_bound_for_bandwidth() {
    let r = bench(
        "gen:dense:64",
        KernelKind::Sell,
        1,
        SchedArg::Auto,
        Some(43.0),
    );
    let bound = r.column_f64("bound [GF/s]").unwrap()[0];
    assert!((bound - 7.17).abs() < 0.005, "{bound}");
    assert!(r.column_f64("roofline_fraction").unwrap()[0] > 0.0);
    let plain = bench("gen:dense:64", KernelKind::Sell, 1, SchedArg::Auto, None);
    assert!(plain.column("bound [GF/s]").unwrap()[0].is_null());
}

#[test]
fn model_prediction_between_copy_and_read_bandwidth() {
    let mut args = model_args(vec![43.0]);
    args.beta = Some(1.0);
    args.nnzr = Some(73.72);
    let r = cmd_model(&args, &mut std::io::empty()).unwrap();
    let p = r.column_f64("P [GF/s]").unwrap()[0];
    // B = 6 + 4/73.72 + 8/73.72 for a square matrix with N_nzc = N_nzr
    let expected = 43.0 / (6.0 + 12.0 / 73.72);
    assert!((p - expected).abs() < 1e-12);
    assert!(p < r.column_f64("P_bound [GF/s]").unwrap()[0]);

    let mut bracket = model_args(vec![36.0, 43.0]);
    bracket.beta = Some(1.0);
    bracket.nnzr = Some(73.72);
    let ps = cmd_model(&bracket, &mut std::io::empty())
        .unwrap()
        .column_f64("P [GF/s]")
        .unwrap();
    assert!(ps[0] < p + 1e-12 && p <= ps[1] + 1e-12);
}

#[test]
fn model_chains_from_analyze_json() {
    let json = analyze("gen:worst-case:8,4", 4, &[1, 16]).render(OutputFormat::Json);
    let mut args = model_args(vec![10.0]);
    args.beta_from = Some("-".into());
    let r = cmd_model(&args, &mut json.as_bytes()).unwrap();
    assert_eq!(r.column_f64("beta").unwrap(), vec![1.0]);
    args.row = Some(0);
    let r = cmd_model(&args, &mut json.as_bytes()).unwrap();
    let n = 32.0;
    assert_eq!(r.column_f64("beta").unwrap(), vec![(n + 3.0) / (4.0 * n)]);
    assert_eq!(r.column_f64("N_nzr").unwrap(), vec![(n + 3.0) / 4.0]);
}

#[test]
fn model_simulated_alpha_needs_matrix() {
    let mut args = model_args(vec![10.0]);
    args.alpha = "simulate".into();
    args.beta = Some(1.0);
    args.nnzr = Some(5.0);
    assert!(cmd_model(&args, &mut std::io::empty()).is_err());
    args.matrix = Some("gen:banded:2000,3".into());
    args.cache_bytes = Some(1 << 20);
    let r = cmd_model(&args, &mut std::io::empty()).unwrap();
    let alpha = r.column_f64("alpha").unwrap()[0];
    assert!((alpha - 1.0 / 7.0).abs() / (1.0 / 7.0) < 0.05, "{alpha}");
    args.alpha = "bogus".into();
    assert!(cmd_model(&args, &mut std::io::empty()).is_err());
}

#[test]
fn microbench_labels_raw_and_corrected() {
    let r = cmd_microbench(&MicrobenchArgs {
        kind: MicrobenchKind::Copy,
        size_mb: Some(8),
        reps: 2,
        threads: ThreadArgs { threads: Some(1) },
    })
    .unwrap();
    let raw = r.column_f64("raw [GB/s]").unwrap()[0];
    let corrected = r.column_f64("corrected [GB/s]").unwrap()[0];
    assert!(raw > 0.0);
    assert!((corrected - 1.5 * raw).abs() < 1e-9 * corrected);
}

#[test]
fn sweep_beta_non_decreasing_and_perfect_at_c_squared() {
    let r = sweep("gen:worst-case:16,4", 4, 0);
    let sigma = r.column_f64("sigma").unwrap();
    let beta = r.column_f64("beta").unwrap();
    assert_eq!(sigma.first(), Some(&4.0));
    assert!(beta.windows(2).all(|w| w[0] <= w[1]));
    let k = sigma.iter().position(|&s| s == 16.0).unwrap();
    assert_eq!(beta[k], 1.0);
    assert!(r.column("best [GF/s]").unwrap().iter().all(|v| v.is_null()));
}

#[test]
fn sweep_alpha_rises_for_very_large_scopes_on_banded() {
    let r = sweep("gen:banded:40000,10,0.5@1", 8, 1);
    let alpha = r.column_f64("alpha_sim").unwrap();
    let first = alpha[0];
    // small scopes keep the band's locality
    assert!(alpha[..4].iter().all(|a| (a - first).abs() < 0.05 * first));
    assert!(alpha.last().unwrap() > &(2.0 * first));
    assert!(r
        .column_f64("best [GF/s]")
        .unwrap()
        .iter()
        .all(|g| *g > 0.0));
}

#[test]
fn sweep_rejects_bad_range() {
    let mut args = SweepArgs {
        matrix: "gen:dense:10".into(),
        layout: LayoutArgs::with_c(4),
        sigma_min: Some(12),
        sigma_max: None,
        cache_bytes: Some(4096),
        line_bytes: 64,
        reps: 0,
        permute_cols: false,
        threads: ThreadArgs::default(),
    };
    assert!(cmd_sweep_sigma(&args).is_err());
    args.sigma_min = Some(8);
    args.sigma_max = Some(4);
    assert!(cmd_sweep_sigma(&args).is_err());
}

#[test]
fn argument_parsing_and_presets() {
    let cli = Cli::try_parse_from([
        "sellkit",
        "--format",
        "csv",
        "analyze",
        "gen:dense:64",
        "--preset",
        "avx",
        "--sigma",
        "1,8",
    ])
    .unwrap();
    assert_eq!(cli.format, OutputFormat::Csv);
    let r = execute(&cli.command).unwrap();
    assert_eq!(r.column_f64("C").unwrap(), vec![4.0, 4.0]);
    let cli = Cli::try_parse_from(["sellkit", "analyze", "gen:dense:64"]).unwrap();
    assert_eq!(
        execute(&cli.command).unwrap().column_f64("C").unwrap(),
        vec![32.0]
    );
    assert!(Cli::try_parse_from(["sellkit", "bench", "x.mtx", "--kernel", "hyb"]).is_err());
}

#[test]
fn json_contains_every_table_value() {
    let r = analyze("gen:skewed:500,3,100,2", 8, &[1, 8, 64]);
    let json: serde_json::Value = serde_json::from_str(&r.render(OutputFormat::Json)).unwrap();
    let rows = json["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 3);
    for (row, values) in rows.iter().zip(&r.rows) {
        for (col, v) in r.columns.iter().zip(values) {
            assert_eq!(&row[col], v);
        }
    }
    let csv = r.render(OutputFormat::Csv);
    assert_eq!(csv.lines().count(), 2 + 3);
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_sellkit");
    let ok = std::process::Command::new(bin)
        .args(["analyze", "gen:dense:16", "-C", "4"])
        .output()
        .unwrap();
    assert!(ok.status.success());
    assert!(String::from_utf8_lossy(&ok.stdout).contains("beta"));
    let bad = std::process::Command::new(bin)
        .args(["analyze", "/nonexistent.mtx"])
        .output()
        .unwrap();
    assert!(!bad.status.success());
    assert!(String::from_utf8_lossy(&bad.stderr).contains("error"));

    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let st = std::process::Command::new(bin)
        .args([
            "--format",
            "json",
            "--out",
            out.to_str().unwrap(),
            "model",
            "--beta",
            "1",
            "--nnzr",
            "10",
            "--bandwidth",
            "43",
        ])
        .status()
        .unwrap();
    assert!(st.success());
    let rep = Report::from_json(&std::fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(rep.command, "model");
}

#[test]
fn threads_from_environment() {
    let bin = env!("CARGO_BIN_EXE_sellkit");
    let out = std::process::Command::new(bin)
        .args([
            "--format",
            "json",
            "bench",
            "gen:banded:500,2",
            "--reps",
            "1",
        ])
        .env("SELLKIT_THREADS", "3")
        .output()
        .unwrap();
    let rep = Report::from_json(&String::from_utf8_lossy(&out.stdout)).unwrap();
    assert_eq!(rep.column_f64("threads").unwrap(), vec![3.0]);
}
