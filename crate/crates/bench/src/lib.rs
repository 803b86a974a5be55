//! Shared inputs for the benchmarks.

use mrd_core::gf::FieldSpec;
use mrd_core::{MatGF, Result};

/// Every `n×n` matrix over GF(q) whose index is a multiple of `step`.
pub fn sample_matrices(q: u32, n: usize, step: u64) -> Result<Vec<MatGF>> {
    let f = FieldSpec::prime(q)?;
    let total = (q as u64).pow((n * n) as u32);
    Ok((0..total).step_by(step as usize).map(|i| MatGF::from_index(f.clone(), n, n, i)).collect())
}
