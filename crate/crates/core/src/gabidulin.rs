//! Delsarte–Gabidulin codes and Singer-cycle codes.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::code::RankCode;
use crate::error::{Error, Result};
use crate::gf::{prime_factors, ExtensionBasis, FieldSpec};
use crate::matgf::{rref, MatGF};

/// Parameters of a Gabidulin code over `K = GF(q)` with symbols in `E = GF(q^m)`.
#[derive(Clone, Debug)]
pub struct GabidulinSpec {
    pub q: u32,
    pub m: usize,
    pub n: usize,
    pub k: usize,
    /// Evaluation points `a_1..a_n` in `E`.
    pub points: Vec<u32>,
    /// Basis of `E` over `K` used to expand symbols into columns.
    pub expansion: ExtensionBasis,
}

/// JSON-friendly record of a spec.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GabidulinRecord {
    pub q: u32,
    pub m: usize,
    pub n: usize,
    pub k: usize,
    pub points: Vec<u32>,
    pub basis: Vec<u32>,
}

/// Splits a prime power into `(p, f)`.
pub fn prime_power(q: u32) -> Result<(u32, u32)> {
    let f = prime_factors(q as u64);
    if f.len() != 1 {
        return Err(Error::InvalidParameters(format!("{q} is not a prime power")));
    }
    let p = f[0] as u32;
    let mut e = 0;
    let mut t = 1u32;
    while t < q {
        t *= p;
        e += 1;
    }
    Ok((p, e))
}

/// `GF(q)` and `GF(q^m)` with default moduli.
pub fn field_pair(q: u32, m: usize) -> Result<(Arc<FieldSpec>, Arc<FieldSpec>)> {
    let (p, f) = prime_power(q)?;
    let k = FieldSpec::new(p, f, None)?;
    let e = FieldSpec::new(p, f * m as u32, None)?;
    Ok((k, e))
}

impl GabidulinSpec {
    /// Spec with default points and expansion basis (both the polynomial basis).
    pub fn new(q: u32, m: usize, n: usize, k: usize) -> Result<GabidulinSpec> {
        GabidulinSpec::with(q, m, n, k, None, None)
    }

    pub fn with(
        q: u32,
        m: usize,
        n: usize,
        k: usize,
        points: Option<Vec<u32>>,
        basis: Option<Vec<u32>>,
    ) -> Result<GabidulinSpec> {
        if !(1 <= k && k <= n && n <= m) {
            return Err(Error::InvalidParameters(format!("need 1 <= k <= n <= m, got k={k} n={n} m={m}")));
        }
        let (kf, ef) = field_pair(q, m)?;
        let poly = ExtensionBasis::polynomial(&kf, &ef)?;
        let expansion = match basis {
            Some(b) => ExtensionBasis::new(&kf, &ef, b)?,
            None => poly.clone(),
        };
        let points = points.unwrap_or_else(|| poly.basis[..n].to_vec());
        if points.len() != n || points.iter().any(|&a| a >= ef.order()) {
            return Err(Error::InvalidParameters(format!("need {n} points in GF({})", ef.order())));
        }
        let mut rows: Vec<Vec<u32>> = points.iter().map(|&a| expansion.coords(a).to_vec()).collect();
        if rref(&kf, &mut rows).len() != n {
            return Err(Error::InvalidParameters("points are not linearly independent over GF(q)".into()));
        }
        Ok(GabidulinSpec { q, m, n, k, points, expansion })
    }

    pub fn base_field(&self) -> &Arc<FieldSpec> {
        &self.expansion.k
    }

    pub fn ext_field(&self) -> &Arc<FieldSpec> {
        &self.expansion.e
    }

    pub fn record(&self) -> GabidulinRecord {
        GabidulinRecord {
            q: self.q,
            m: self.m,
            n: self.n,
            k: self.k,
            points: self.points.clone(),
            basis: self.expansion.basis.clone(),
        }
    }

    /// The `k×n` matrix over `E` whose row `i` is `(a_j^(q^i))_j`.
    pub fn generator_matrix(&self) -> MatGF {
        let e = self.ext_field();
        let mut entries = Vec::with_capacity(self.k * self.n);
        for i in 0..self.k {
            for &a in &self.points {
                entries.push(e.frobenius_power(a, self.q as u64, i as u32).expect("q is a subfield order"));
            }
        }
        MatGF::from_raw(e.clone(), self.k, self.n, entries)
    }

    /// Expands a word over `E` column by column into an `m×n` matrix over `K`.
    pub fn expand(&self, word: &[u32]) -> MatGF {
        let mut entries = vec![0u32; self.m * self.n];
        for (j, &c) in word.iter().enumerate() {
            for (i, &x) in self.expansion.coords(c).iter().enumerate() {
                entries[i * self.n + j] = x;
            }
        }
        MatGF::from_raw(self.base_field().clone(), self.m, self.n, entries)
    }

    /// The K-linear matrix code of size `q^(km)`.
    pub fn code(&self) -> Result<RankCode> {
        let g = self.generator_matrix();
        let mut basis = Vec::with_capacity(self.k * self.m);
        for i in 0..self.k {
            for &beta in &self.expansion.basis {
                let mut u = vec![0u32; self.k];
                u[i] = beta;
                basis.push(self.expand(&g.vec_mul(&u)?));
            }
        }
        RankCode::from_basis(self.base_field().clone(), self.m, self.n, basis)
    }
}

pub fn generator_matrix(spec: &GabidulinSpec) -> MatGF {
    spec.generator_matrix()
}

pub fn gabidulin_code(spec: &GabidulinSpec) -> Result<RankCode> {
    spec.code()
}

/// Matrix of `x ↦ x·a` on `E` in the given basis (rows are images of basis vectors).
pub fn multiplication_matrix(basis: &ExtensionBasis, a: u32) -> MatGF {
    let e = &basis.e;
    let n = basis.degree();
    let entries = basis.basis.iter().flat_map(|&b| basis.coords(e.mul(b, a)).to_vec()).collect();
    MatGF::from_raw(basis.k.clone(), n, n, entries)
}

/// The Singer cycle: right multiplication by the primitive element of GF(q^n).
pub fn singer_cycle(q: u32, n: usize) -> Result<MatGF> {
    let (k, e) = field_pair(q, n)?;
    let basis = ExtensionBasis::polynomial(&k, &e)?;
    Ok(multiplication_matrix(&basis, e.primitive_element()))
}

/// `⟨S⟩ ∪ {0}`, the field GF(q^n) as a K-linear MRD code with d = n.
pub fn singer_code(q: u32, n: usize) -> Result<RankCode> {
    let (k, e) = field_pair(q, n)?;
    let basis = ExtensionBasis::polynomial(&k, &e)?;
    let mats = basis.basis.iter().map(|&b| multiplication_matrix(&basis, b)).collect();
    RankCode::from_basis(k, n, n, mats)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generator_rows_are_frobenius_powers() {
        let s = GabidulinSpec::new(3, 3, 3, 2).unwrap();
        let g = s.generator_matrix();
        let e = s.ext_field();
        for j in 0..3 {
            assert_eq!(g.get(0, j), s.points[j]);
            assert_eq!(g.get(1, j), e.pow(s.points[j], 3));
        }
        let s1 = GabidulinSpec::new(2, 4, 3, 1).unwrap();
        assert_eq!(s1.generator_matrix().rows(), 1);
    }

    #[test]
    fn small_codes_are_mrd() {
        for (q, m, n, k) in [(2, 2, 2, 1), (2, 3, 2, 1), (2, 3, 3, 2), (3, 2, 2, 1), (2, 4, 4, 1), (4, 2, 2, 1)] {
            let c = GabidulinSpec::new(q, m, n, k).unwrap().code().unwrap();
            let v = c.is_mrd();
            assert!(v.is_mrd, "{q} {m} {n} {k}: {v:?}");
            assert_eq!(v.k, Some(k));
            assert_eq!(v.d, Some(n - k + 1));
        }
    }

    #[test]
    fn invalid_specs() {
        assert!(GabidulinSpec::new(2, 2, 3, 1).is_err());
        assert!(GabidulinSpec::new(6, 2, 2, 1).is_err());
        assert!(GabidulinSpec::with(2, 3, 2, 1, Some(vec![1, 1]), None).is_err());
    }

    #[test]
    fn singer_is_a_cyclic_field() {
        let f = FieldSpec::prime(2).unwrap();
        let c = singer_code(2, 1).unwrap();
        assert_eq!(c.len(), 2);
        let c = singer_code(2, 4).unwrap();
        assert_eq!(c.len(), 16);
        let s = singer_cycle(2, 4).unwrap();
        assert_eq!(s.order().unwrap(), 15);
        let mut x = MatGF::identity(f, 4);
        for _ in 0..15 {
            assert!(c.contains(&x));
            x = x.mul(&s).unwrap();
        }
        assert!(c.is_mrd().is_mrd);
    }
}
