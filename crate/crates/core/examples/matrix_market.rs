//! Reads Matrix Market text, including symmetric storage, and writes it back.

use std::io::Cursor;

use sellkit::io::mtx::write_matrix_market_to;
use sellkit::io::read_matrix_market_from;
use sellkit::CrsMatrix;

const SYMMETRIC: &str = "%%MatrixMarket matrix coordinate real symmetric
% lower triangle only
3 3 4
1 1 4.0
2 1 -1.0
3 2 -1.0
3 3 4.0
";

fn main() -> sellkit::Result<()> {
    let coo = read_matrix_market_from(Cursor::new(SYMMETRIC))?;
    println!("expanded to {} entries", coo.nnz());
    let crs = CrsMatrix::from_coo(coo)?;
    for row in crs.to_dense() {
        println!("  {row:?}");
    }

    let mut out = Vec::new();
    write_matrix_market_to(&crs.to_coo(), &mut out)?;
    print!("{}", String::from_utf8_lossy(&out));

    let path = std::env::temp_dir().join("sellkit-example.mtx");
    sellkit::io::write_matrix_market(&crs.to_coo(), &path)?;
    let back = CrsMatrix::from_coo(sellkit::io::read_matrix_market(&path)?)?;
    println!("file round trip identical: {}", back == crs);
    std::fs::remove_file(path)?;
    Ok(())
}
