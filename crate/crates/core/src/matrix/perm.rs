//! Moving vectors between original and stored (permuted) index space.
//!
//! `perm[i]` is the stored position of original index `i`.

use crate::error::{param, Result};

/// Scatters `v` into stored order: `out[perm[i]] = v[i]`.
pub fn permute_vector(v: &[f64], perm: &[u32]) -> Result<Vec<f64>> {
    check_len(v, perm)?;
    let mut out = vec![0.0; v.len()];
    for (&x, &p) in v.iter().zip(perm) {
        out[p as usize] = x;
    }
    Ok(out)
}

/// Gathers `v` back from stored order: `out[i] = v[perm[i]]`.
pub fn unpermute_vector(v: &[f64], perm: &[u32]) -> Result<Vec<f64>> {
    check_len(v, perm)?;
    Ok(perm.iter().map(|&p| v[p as usize]).collect())
}

/// Inverse permutation: `inv[perm[i]] = i`.
pub fn invert(perm: &[u32]) -> Vec<u32> {
    let mut inv = vec![0u32; perm.len()];
    for (i, &p) in perm.iter().enumerate() {
        inv[p as usize] = i as u32;
    }
    inv
}

pub fn is_permutation(perm: &[u32]) -> bool {
    let mut seen = vec![false; perm.len()];
    perm.iter().all(|&p| {
        let p = p as usize;
        p < seen.len() && !std::mem::replace(&mut seen[p], true)
    })
}

fn check_len(v: &[f64], perm: &[u32]) -> Result<()> {
    if v.len() != perm.len() {
        return Err(param(format!(
            "vector length {} does not match permutation length {}",
            v.len(),
            perm.len()
        )));
    }
    Ok(())
}
