//! Matrix inputs: Matrix Market files, SELL caches and generator specs.

use std::path::Path;
use std::str::FromStr;

use crate::error::{param, Result};
use crate::io::{self, read_matrix_market, read_sell_cache};
use crate::matrix::{CooMatrix, CrsMatrix, SellMatrix};

/// Where a matrix comes from.
///
/// Generator specs have the form `gen:<kind>:<args>[@seed]`:
///
/// | kind         | args                                   |
/// |--------------|----------------------------------------|
/// | `worst-case` | `n_chunks,C`                           |
/// | `dense`      | `n`                                    |
/// | `banded`     | `n,half_bw[,fill]`                     |
/// | `skewed`     | `n,base_len,spike_len,spike_count`     |
/// | `random`     | `n_rows,n_cols,max_row_len`            |
#[derive(Debug, Clone, PartialEq)]
pub enum MatrixSource {
    MatrixMarket(String),
    SellCache(String),
    Generated {
        kind: String,
        args: Vec<f64>,
        seed: u64,
    },
}

impl FromStr for MatrixSource {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        let Some(spec) = s.strip_prefix("gen:") else {
            return Ok(if s.ends_with(".sell") {
                MatrixSource::SellCache(s.to_owned())
            } else {
                MatrixSource::MatrixMarket(s.to_owned())
            });
        };
        let (spec, seed) = match spec.split_once('@') {
            Some((spec, seed)) => (
                spec,
                seed.parse()
                    .map_err(|_| param(format!("bad seed in {s:?}")))?,
            ),
            None => (spec, 0),
        };
        let (kind, args) = spec.split_once(':').unwrap_or((spec, ""));
        let args = args
            .split(',')
            .filter(|a| !a.is_empty())
            .map(|a| {
                a.trim()
                    .parse::<f64>()
                    .map_err(|_| param(format!("bad generator argument {a:?}")))
            })
            .collect::<Result<_>>()?;
        Ok(MatrixSource::Generated {
            kind: kind.to_owned(),
            args,
            seed,
        })
    }
}

impl MatrixSource {
    fn generate(kind: &str, args: &[f64], seed: u64) -> Result<CooMatrix> {
        let n = |k: usize| -> Result<usize> {
            let v = *args
                .get(k)
                .ok_or_else(|| param(format!("generator {kind} needs more arguments")))?;
            if v < 0.0 || v.fract() != 0.0 {
                return Err(param(format!(
                    "generator argument {v} must be a non-negative integer"
                )));
            }
            Ok(v as usize)
        };
        match kind {
            "worst-case" => io::gen_worst_case(n(0)?, n(1)?, seed),
            "dense" => io::gen_dense(n(0)?, seed),
            "banded" => io::gen_banded(n(0)?, n(1)?, args.get(2).copied().unwrap_or(1.0), seed),
            "skewed" => io::gen_skewed(n(0)?, n(1)?, n(2)?, n(3)?, seed),
            "random" => io::gen_random(n(0)?, n(1)?, n(2)?, seed),
            other => Err(param(format!("unknown generator {other:?}"))),
        }
    }
}

/// A loaded matrix in CRS form, plus the SELL matrix when read from a cache.
#[derive(Debug, Clone)]
pub struct LoadedMatrix {
    pub crs: CrsMatrix,
    pub cache: Option<SellMatrix>,
}

pub fn load_matrix(source: &str) -> Result<LoadedMatrix> {
    match source.parse::<MatrixSource>()? {
        MatrixSource::MatrixMarket(path) => Ok(LoadedMatrix {
            crs: CrsMatrix::from_coo(read_matrix_market(Path::new(&path))?)?,
            cache: None,
        }),
        MatrixSource::SellCache(path) => {
            let sell = read_sell_cache(Path::new(&path))?;
            Ok(LoadedMatrix {
                crs: sell.to_crs()?,
                cache: Some(sell),
            })
        }
        MatrixSource::Generated { kind, args, seed } => Ok(LoadedMatrix {
            crs: CrsMatrix::from_coo(MatrixSource::generate(&kind, &args, seed)?)?,
            cache: None,
        }),
    }
}
