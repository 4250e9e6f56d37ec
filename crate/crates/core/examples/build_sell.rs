//! Builds SELL-C-σ layouts of the worst-case matrix and shows how the
//! sorting scope recovers chunk occupancy.

use sellkit::io::gen_worst_case;
use sellkit::{CrsMatrix, SellConfig, SellMatrix};

fn main() -> sellkit::Result<()> {
    let (n_chunks, c) = (4, 4);
    let crs = CrsMatrix::from_coo(gen_worst_case(n_chunks, c, 42)?)?;
    let n = crs.n_rows;
    println!(
        "{n}x{n} matrix, {} nonzeros, row lengths {:?}",
        crs.nnz(),
        crs.row_lengths()
    );

    for sigma in [1, c, c * c] {
        let sell = SellMatrix::from_crs(&crs, SellConfig::new(c, sigma))?;
        println!(
            "SELL-{c}-{sigma:<3} cl = {:?}  slots = {:>3}  beta = {:.4}",
            sell.cl(),
            sell.storage_slots(),
            sell.chunk_occupancy()
        );
    }
    let expected = (n + c - 1) as f64 / (c * n) as f64;
    println!("worst-case formula (N+C-1)/(CN) = {expected:.4}");

    let sell = SellMatrix::from_crs(&crs, SellConfig::new(c, c * c))?;
    println!("stored row -> original row: {:?}", sell.inv_perm());

    let ell = SellMatrix::ellpack(&crs)?;
    println!(
        "ELLPACK: one chunk of {} rows, width {}, beta = {:.4}",
        ell.chunk_height(),
        ell.cl()[0],
        ell.chunk_occupancy()
    );
    Ok(())
}
