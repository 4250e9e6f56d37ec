//! Persists a SELL matrix to the binary cache and reloads it.

use std::time::Instant;

use sellkit::io::{gen_random, read_sell_cache, write_sell_cache};
use sellkit::{CrsMatrix, SellConfig, SellMatrix};

fn main() -> sellkit::Result<()> {
    let crs = CrsMatrix::from_coo(gen_random(200_000, 200_000, 40, 11)?)?;
    let t = Instant::now();
    let sell = SellMatrix::from_crs(&crs, SellConfig::new(32, 4096).permute_cols(true))?;
    println!(
        "built SELL-32-4096 in {:.3} s, beta = {:.4}",
        t.elapsed().as_secs_f64(),
        sell.chunk_occupancy()
    );

    let path = std::env::temp_dir().join("sellkit-example.sell");
    write_sell_cache(&sell, &path)?;
    let t = Instant::now();
    let back = read_sell_cache(&path)?;
    println!(
        "reloaded {} bytes in {:.3} s",
        std::fs::metadata(&path)?.len(),
        t.elapsed().as_secs_f64()
    );
    let same = back
        .val()
        .iter()
        .zip(sell.val())
        .all(|(a, b)| a.to_bits() == b.to_bits())
        && back.col() == sell.col()
        && back.perm() == sell.perm()
        && back.cl() == sell.cl();
    println!("bit-exact: {same}");
    std::fs::remove_file(path)?;
    Ok(())
}
