//! Streaming Matrix Market reader (coordinate and array formats) and a
//! coordinate writer.
//!
//! Symmetric and skew-symmetric matrices are expanded to general form,
//! pattern matrices get unit values and indices become 0-based. Complex and
//! Hermitian matrices are rejected.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::matrix::{CooMatrix, Triplet};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MmFormat {
    Coordinate,
    Array,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MmField {
    Real,
    Integer,
    Pattern,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MmSymmetry {
    General,
    Symmetric,
    SkewSymmetric,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MatrixMarketHeader {
    pub format: MmFormat,
    pub field: MmField,
    pub symmetry: MmSymmetry,
}

impl MatrixMarketHeader {
    pub fn parse(line: &str) -> Result<Self> {
        let err = |msg: String| Error::Parse { line: 1, msg };
        let tokens: Vec<String> = line
            .split_whitespace()
            .map(str::to_ascii_lowercase)
            .collect();
        if tokens.first().map(String::as_str) != Some("%%matrixmarket") {
            return Err(err("banner must begin with %%MatrixMarket".into()));
        }
        if tokens.len() != 5 {
            return Err(err(format!(
                "banner needs 4 qualifiers, found {}",
                tokens.len() - 1
            )));
        }
        if tokens[1] != "matrix" {
            return Err(err(format!("unsupported object '{}'", tokens[1])));
        }
        let format = match tokens[2].as_str() {
            "coordinate" => MmFormat::Coordinate,
            "array" => MmFormat::Array,
            f => return Err(err(format!("unsupported format '{f}'"))),
        };
        let field = match tokens[3].as_str() {
            "real" | "double" => MmField::Real,
            "integer" => MmField::Integer,
            "pattern" => MmField::Pattern,
            f => {
                return Err(err(format!(
                    "unsupported field '{f}' (only real matrices are handled)"
                )))
            }
        };
        let symmetry = match tokens[4].as_str() {
            "general" => MmSymmetry::General,
            "symmetric" => MmSymmetry::Symmetric,
            "skew-symmetric" => MmSymmetry::SkewSymmetric,
            s => return Err(err(format!("unsupported symmetry '{s}'"))),
        };
        if format == MmFormat::Array && field == MmField::Pattern {
            return Err(err("pattern field is not valid for array format".into()));
        }
        Ok(Self {
            format,
            field,
            symmetry,
        })
    }
}

pub fn read_matrix_market(path: impl AsRef<Path>) -> Result<CooMatrix> {
    let file = File::open(path)?;
    read_matrix_market_from(BufReader::with_capacity(1 << 20, file))
}

pub fn read_matrix_market_from<R: BufRead>(mut reader: R) -> Result<CooMatrix> {
    let mut line = String::new();
    let mut lineno = 0usize;
    let mut next_line = |buf: &mut String| -> Result<bool> {
        buf.clear();
        lineno += 1;
        Ok(reader.read_line(buf)? > 0)
    };

    if !next_line(&mut line)? {
        return Err(Error::Parse {
            line: 1,
            msg: "empty input".into(),
        });
    }
    let header = MatrixMarketHeader::parse(&line)?;

    // size line, after comments and blank lines
    let mut current = 1usize;
    loop {
        if !next_line(&mut line)? {
            return Err(Error::Parse {
                line: current + 1,
                msg: "missing size line".into(),
            });
        }
        current += 1;
        let t = line.trim();
        if !t.is_empty() && !t.starts_with('%') {
            break;
        }
    }
    let size_line = current;
    let dims: Vec<usize> = line
        .split_whitespace()
        .map(|s| s.parse::<usize>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| Error::Parse {
            line: size_line,
            msg: format!("bad size line: {e}"),
        })?;
    let expected_fields = if header.format == MmFormat::Coordinate {
        3
    } else {
        2
    };
    if dims.len() != expected_fields {
        return Err(Error::Parse {
            line: size_line,
            msg: format!(
                "size line needs {expected_fields} integers, found {}",
                dims.len()
            ),
        });
    }
    let (n_rows, n_cols) = (dims[0], dims[1]);
    if header.symmetry != MmSymmetry::General && n_rows != n_cols {
        return Err(Error::Parse {
            line: size_line,
            msg: "symmetric matrix must be square".into(),
        });
    }
    if n_rows > crate::matrix::coo::MAX_DIM || n_cols > crate::matrix::coo::MAX_DIM {
        return Err(Error::Parse {
            line: size_line,
            msg: "dimensions exceed the 4-byte index range".into(),
        });
    }
    let declared = match header.format {
        MmFormat::Coordinate => dims[2],
        MmFormat::Array => match header.symmetry {
            MmSymmetry::General => n_rows * n_cols,
            MmSymmetry::Symmetric => n_rows * (n_rows + 1) / 2,
            MmSymmetry::SkewSymmetric => n_rows * n_rows.saturating_sub(1) / 2,
        },
    };
    let mirrored = header.symmetry != MmSymmetry::General;
    let mut coo = CooMatrix::new(n_rows, n_cols);
    coo.entries
        .reserve(if mirrored { 2 * declared } else { declared });

    let mut count = 0usize;
    // next (row, col) for array format, column-major
    let (mut ai, mut aj) = (0usize, 0usize);
    if header.symmetry == MmSymmetry::SkewSymmetric {
        ai = 1;
    }
    while next_line(&mut line)? {
        current += 1;
        let t = line.trim();
        if t.is_empty() || t.starts_with('%') {
            continue;
        }
        if count == declared {
            return Err(Error::Parse {
                line: current,
                msg: format!("more than the declared {declared} entries"),
            });
        }
        let perr = |msg: String| Error::Parse { line: current, msg };
        let mut fields = t.split_whitespace();
        let (row, col, val) = match header.format {
            MmFormat::Coordinate => {
                let mut index = |what: &str, dim: usize| -> Result<usize> {
                    let raw = fields
                        .next()
                        .ok_or_else(|| perr(format!("missing {what} index")))?;
                    let v: usize = raw
                        .parse()
                        .map_err(|_| perr(format!("bad {what} index '{raw}'")))?;
                    if v == 0 || v > dim {
                        return Err(perr(format!("{what} index {v} outside 1..={dim}")));
                    }
                    Ok(v - 1)
                };
                let i = index("row", n_rows)?;
                let j = index("column", n_cols)?;
                let v = match header.field {
                    MmField::Pattern => 1.0,
                    _ => parse_value(fields.next(), &perr)?,
                };
                if mirrored && j > i {
                    return Err(perr(format!(
                        "entry ({}, {}) above the diagonal in a symmetric file",
                        i + 1,
                        j + 1
                    )));
                }
                (i, j, v)
            }
            MmFormat::Array => {
                let v = parse_value(fields.next(), &perr)?;
                let at = (ai, aj);
                ai += 1;
                if ai == n_rows {
                    aj += 1;
                    ai = match header.symmetry {
                        MmSymmetry::General => 0,
                        MmSymmetry::Symmetric => aj,
                        MmSymmetry::SkewSymmetric => aj + 1,
                    };
                }
                (at.0, at.1, v)
            }
        };
        coo.entries.push(Triplet::new(row, col, val));
        if mirrored && row != col {
            let mv = if header.symmetry == MmSymmetry::SkewSymmetric {
                -val
            } else {
                val
            };
            coo.entries.push(Triplet::new(col, row, mv));
        }
        count += 1;
    }
    if count != declared {
        return Err(Error::Parse {
            line: current,
            msg: format!("expected {declared} entries, found {count}"),
        });
    }
    Ok(coo)
}

fn parse_value(raw: Option<&str>, perr: &dyn Fn(String) -> Error) -> Result<f64> {
    let raw = raw.ok_or_else(|| perr("missing value".into()))?;
    raw.parse::<f64>()
        .map_err(|_| perr(format!("bad value '{raw}'")))
}

/// Writes `m` as `coordinate real general` with round-trip exact values.
pub fn write_matrix_market(m: &CooMatrix, path: impl AsRef<Path>) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_matrix_market_to(m, &mut w)?;
    w.flush()?;
    Ok(())
}

pub fn write_matrix_market_to<W: Write>(m: &CooMatrix, w: &mut W) -> Result<()> {
    writeln!(w, "%%MatrixMarket matrix coordinate real general")?;
    writeln!(w, "{} {} {}", m.n_rows, m.n_cols, m.nnz())?;
    for t in &m.entries {
        writeln!(w, "{} {} {:?}", t.row + 1, t.col + 1, t.val)?;
    }
    Ok(())
}
