//! Rank-metric codes: sets of `m×n` matrices over GF(q) with the rank distance.

use std::collections::{BTreeMap, HashSet};
use std::sync::{Arc, OnceLock};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{same_field, Embedding, FieldSpec};
use crate::matgf::{bilinear_sum, nullspace, rref, MatGF};

/// Largest code that is materialized element by element.
pub const MAX_CODE_SIZE: u64 = 1 << 24;

#[derive(Clone, Debug)]
pub struct RankCode {
    field: Arc<FieldSpec>,
    m: usize,
    n: usize,
    elements: Vec<MatGF>,
    basis: Option<Vec<MatGF>>,
    additive: OnceLock<bool>,
    linear: OnceLock<bool>,
}

impl PartialEq for RankCode {
    fn eq(&self, other: &Self) -> bool {
        self.m == other.m && self.n == other.n && self.elements == other.elements
    }
}

impl Eq for RankCode {}

/// Outcome of the MRD test.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MrdVerdict {
    pub is_mrd: bool,
    pub k: Option<usize>,
    pub d: Option<usize>,
    pub reason: Option<String>,
}

/// Number of codewords of each rank.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankDistribution {
    pub counts: BTreeMap<usize, usize>,
}

impl RankCode {
    /// Builds a code from an explicit element list. Elements are sorted; duplicates are rejected.
    pub fn from_elements(field: Arc<FieldSpec>, m: usize, n: usize, mut elements: Vec<MatGF>) -> Result<RankCode> {
        if elements.is_empty() {
            return Err(Error::Validation("code has no elements".into()));
        }
        for a in &elements {
            if !same_field(a.field(), &field) {
                return Err(Error::FieldMismatch);
            }
            if a.shape() != (m, n) {
                return Err(Error::DimensionMismatch(format!("expected {m}x{n}, got {}x{}", a.rows(), a.cols())));
            }
        }
        elements.sort();
        if elements.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Validation("duplicate matrix in code".into()));
        }
        Ok(RankCode { field, m, n, elements, basis: None, additive: OnceLock::new(), linear: OnceLock::new() })
    }

    /// The K-span of `basis`; the basis must be linearly independent.
    pub fn from_basis(field: Arc<FieldSpec>, m: usize, n: usize, basis: Vec<MatGF>) -> Result<RankCode> {
        for a in &basis {
            if !same_field(a.field(), &field) {
                return Err(Error::FieldMismatch);
            }
            if a.shape() != (m, n) {
                return Err(Error::DimensionMismatch(format!("expected {m}x{n}, got {}x{}", a.rows(), a.cols())));
            }
        }
        let mut rows: Vec<Vec<u32>> = basis.iter().map(|b| b.entries().to_vec()).collect();
        if rref(&field, &mut rows).len() != basis.len() {
            return Err(Error::Validation("basis matrices are linearly dependent".into()));
        }
        let q = field.order() as u64;
        let size = q.checked_pow(basis.len() as u32).unwrap_or(u64::MAX);
        if size > MAX_CODE_SIZE {
            return Err(Error::TooLarge(format!("code with {size} elements")));
        }
        let elements = span(&field, m, n, &basis);
        let mut c = RankCode::from_elements(field, m, n, elements)?;
        c.basis = Some(basis);
        let _ = c.additive.set(true);
        let _ = c.linear.set(true);
        Ok(c)
    }

    pub fn field(&self) -> &Arc<FieldSpec> {
        &self.field
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Elements in canonical index order.
    pub fn elements(&self) -> &[MatGF] {
        &self.elements
    }

    pub fn basis(&self) -> Option<&[MatGF]> {
        self.basis.as_deref()
    }

    pub fn contains(&self, a: &MatGF) -> bool {
        self.elements.binary_search(a).is_ok()
    }

    pub fn contains_zero(&self) -> bool {
        self.elements[0].is_zero()
    }

    pub fn is_square(&self) -> bool {
        self.m == self.n
    }

    /// `log_q |C|` when it is an integer.
    pub fn log_size(&self) -> Option<usize> {
        let q = self.field.order() as usize;
        let mut t = 1usize;
        let mut k = 0;
        while t < self.len() {
            t *= q;
            k += 1;
        }
        (t == self.len()).then_some(k)
    }

    /// A K-basis, computed from the elements if none was supplied.
    pub fn linear_basis(&self) -> Result<Vec<MatGF>> {
        if let Some(b) = &self.basis {
            return Ok(b.clone());
        }
        if !self.is_linear() {
            return Err(Error::NotLinear);
        }
        Ok(greedy_basis(&self.field, &self.elements))
    }

    /// Minimum rank distance between distinct codewords.
    pub fn min_distance(&self) -> Result<usize> {
        if self.len() < 2 {
            return Err(Error::TooSmall);
        }
        if self.is_additively_closed() {
            return Ok(self.elements.par_iter().filter(|a| !a.is_zero()).map(|a| a.rank()).min().unwrap());
        }
        Ok(self.min_distance_pairs())
    }

    /// Minimum over all unordered pairs, without the additive shortcut.
    pub fn min_distance_pairs(&self) -> usize {
        let els = &self.elements;
        (0..els.len())
            .into_par_iter()
            .map(|i| {
                (i + 1..els.len()).map(|j| els[i].sub(&els[j]).expect("same shape").rank()).min().unwrap_or(usize::MAX)
            })
            .min()
            .unwrap_or(usize::MAX)
    }

    /// Tests the Singleton conditions |C| = q^(km) and d = n-k+1 (with m ≥ n after transposing).
    pub fn is_mrd(&self) -> MrdVerdict {
        let (m, n) = if self.m >= self.n { (self.m, self.n) } else { (self.n, self.m) };
        let fail = |k, d, reason: String| MrdVerdict { is_mrd: false, k, d, reason: Some(reason) };
        let Some(t) = self.log_size() else {
            return fail(None, None, format!("size {} is not a power of q", self.len()));
        };
        if t % m != 0 || t == 0 {
            return fail(None, None, format!("size q^{t} is not q^(k*{m}) with k >= 1"));
        }
        let k = t / m;
        if k > n {
            return fail(Some(k), None, format!("k = {k} exceeds n = {n}"));
        }
        let d = match self.min_distance() {
            Ok(d) => d,
            Err(e) => return fail(Some(k), None, e.to_string()),
        };
        if d != n - k + 1 {
            return fail(Some(k), Some(d), format!("minimum distance {d} differs from n-k+1 = {}", n - k + 1));
        }
        MrdVerdict { is_mrd: true, k: Some(k), d: Some(d), reason: None }
    }

    pub fn rank_distribution(&self) -> Result<RankDistribution> {
        if !self.contains_zero() {
            return Err(Error::ZeroNotInCode);
        }
        let ranks: Vec<usize> = self.elements.par_iter().map(|a| a.rank()).collect();
        let mut counts = BTreeMap::new();
        for r in ranks {
            *counts.entry(r).or_insert(0) += 1;
        }
        Ok(RankDistribution { counts })
    }

    pub fn translate(&self, b: &MatGF) -> Result<RankCode> {
        let els = self.elements.iter().map(|a| a.add(b)).collect::<Result<Vec<_>>>()?;
        RankCode::from_elements(self.field.clone(), self.m, self.n, els)
    }

    /// `B·C` for a square `B` acting on the left.
    pub fn left_multiply(&self, b: &MatGF) -> Result<RankCode> {
        let els = self.elements.iter().map(|a| b.mul(a)).collect::<Result<Vec<_>>>()?;
        RankCode::from_elements(self.field.clone(), self.m, self.n, els)
    }

    pub fn transpose(&self) -> RankCode {
        let els = self.elements.iter().map(|a| a.transpose()).collect();
        let mut c = RankCode::from_elements(self.field.clone(), self.n, self.m, els).expect("transpose is injective");
        c.basis = self.basis.as_ref().map(|b| b.iter().map(|a| a.transpose()).collect());
        c
    }

    /// Moves the code so it contains 0, then (square case) so it contains I.
    ///
    /// The translation uses the least element; the scaling uses the inverse of
    /// the least invertible element. Steps already satisfied are skipped.
    pub fn normalize(&self) -> Result<RankCode> {
        let c = if self.contains_zero() { self.clone() } else { self.translate(&self.elements[0].neg())? };
        if !c.is_square() {
            return Err(Error::NotSquare);
        }
        let id = MatGF::identity(self.field.clone(), self.n);
        if c.contains(&id) {
            return Ok(c);
        }
        let b = c.elements.iter().find(|a| a.rank() == self.n).ok_or(Error::NoInvertibleElement)?;
        c.left_multiply(&b.inverse()?)
    }

    /// Orthogonal complement under `(A, B) ↦ Σ A_ij B_ij`.
    pub fn dual(&self) -> Result<RankCode> {
        let basis = self.linear_basis()?;
        let rows: Vec<Vec<u32>> = basis.iter().map(|b| b.entries().to_vec()).collect();
        let len = self.m * self.n;
        let ns = if rows.is_empty() {
            (0..len).map(|i| (0..len).map(|j| u32::from(i == j)).collect()).collect()
        } else {
            nullspace(&self.field, &rows, len)
        };
        let dual_basis = ns.into_iter().map(|v| MatGF::from_raw(self.field.clone(), self.m, self.n, v)).collect();
        RankCode::from_basis(self.field.clone(), self.m, self.n, dual_basis)
    }

    pub fn is_additively_closed(&self) -> bool {
        *self.additive.get_or_init(|| {
            if !self.contains_zero() {
                return false;
            }
            let gens = prime_span_generators(&self.field, &self.elements);
            let set: HashSet<&MatGF> = self.elements.iter().collect();
            gens.iter().all(|g| self.elements.iter().all(|a| set.contains(&a.add(g).expect("same shape"))))
        })
    }

    /// Closure under addition and under scaling by the code's own field.
    pub fn is_linear(&self) -> bool {
        *self.linear.get_or_init(|| {
            self.is_additively_closed() && {
                let g = self.field.primitive_element();
                self.elements.iter().all(|a| self.contains(&a.scale(g)))
            }
        })
    }

    /// Closure under addition and under scaling by the subfield `k`.
    pub fn is_linear_over(&self, k: &FieldSpec) -> Result<bool> {
        let emb = Embedding::new(k, &self.field)?;
        if !self.is_additively_closed() {
            return Ok(false);
        }
        let g = emb.embed(k.primitive_element());
        Ok(self.elements.iter().all(|a| self.contains(&a.scale(g))))
    }

    /// Column `j` of each matrix becomes the symbol `Σ_i A_ij β_i` of `E`.
    pub fn flatten(&self, e: &Arc<FieldSpec>, basis: &[u32]) -> Result<HammingCode> {
        let emb = Embedding::new(&self.field, e)?;
        if basis.len() != self.m || basis.iter().any(|&b| b >= e.order()) {
            return Err(Error::BasisNotIndependent);
        }
        if !independent_over(&self.field, e, &emb, basis) {
            return Err(Error::BasisNotIndependent);
        }
        let words = self
            .elements
            .iter()
            .map(|a| {
                (0..self.n)
                    .map(|j| (0..self.m).fold(0u32, |acc, i| e.add(acc, e.mul(emb.embed(a.get(i, j)), basis[i]))))
                    .collect()
            })
            .collect();
        HammingCode::new(e.clone(), self.n, words)
    }
}

fn independent_over(k: &FieldSpec, e: &FieldSpec, emb: &Embedding, basis: &[u32]) -> bool {
    // Every nonzero K-combination must be nonzero; the K-span must have |K|^m elements.
    let mut seen = HashSet::new();
    let q = k.order() as u64;
    let total = q.pow(basis.len() as u32);
    for t in 0..total {
        let mut x = t;
        let mut s = 0u32;
        for &b in basis {
            s = e.add(s, e.mul(emb.embed((x % q) as u32), b));
            x /= q;
        }
        if !seen.insert(s) {
            return false;
        }
    }
    true
}

/// All K-linear combinations of `basis`.
pub(crate) fn span(field: &Arc<FieldSpec>, m: usize, n: usize, basis: &[MatGF]) -> Vec<MatGF> {
    let mut out = vec![MatGF::zero(field.clone(), m, n)];
    for b in basis {
        let mut next = Vec::with_capacity(out.len() * field.order() as usize);
        for lam in 0..field.order() {
            let sb = b.scale(lam);
            next.extend(out.iter().map(|a| a.add(&sb).expect("same shape")));
        }
        out = next;
    }
    out
}

/// Greedy K-basis of the span of `elements`, taken in the given order.
pub(crate) fn greedy_basis(field: &FieldSpec, elements: &[MatGF]) -> Vec<MatGF> {
    let mut echelon: Vec<Vec<u32>> = Vec::new();
    let mut basis = Vec::new();
    for a in elements {
        let mut rows = echelon.clone();
        rows.push(a.entries().to_vec());
        let r = rref(field, &mut rows).len();
        if r > echelon.len() {
            echelon = rows;
            basis.push(a.clone());
        }
    }
    basis
}

/// Elements whose GF(p)-span equals the GF(p)-span of the whole set.
fn prime_span_generators(field: &FieldSpec, elements: &[MatGF]) -> Vec<MatGF> {
    let prime = FieldSpec::prime(field.p()).expect("characteristic is prime");
    let expand = |a: &MatGF| -> Vec<u32> { a.entries().iter().flat_map(|&x| field.coeffs(x)).collect() };
    let mut echelon: Vec<Vec<u32>> = Vec::new();
    let mut gens = Vec::new();
    for a in elements {
        let mut rows = echelon.clone();
        rows.push(expand(a));
        if rref(&prime, &mut rows).len() > echelon.len() {
            echelon = rows;
            gens.push(a.clone());
        }
    }
    gens
}

/// `Σ A_ij B_ij` as used by [`RankCode::dual`]; re-exported for tests.
pub fn pairing(a: &MatGF, b: &MatGF) -> u32 {
    bilinear_sum(a, b)
}

/// A block code of length `n` over `E` with the Hamming metric.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HammingCode {
    pub field: Arc<FieldSpec>,
    pub n: usize,
    pub words: Vec<Vec<u32>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MdsVerdict {
    pub is_mds: bool,
    pub k: usize,
    pub d: usize,
}

impl HammingCode {
    pub fn new(field: Arc<FieldSpec>, n: usize, mut words: Vec<Vec<u32>>) -> Result<HammingCode> {
        if words.iter().any(|w| w.len() != n || w.iter().any(|&x| x >= field.order())) {
            return Err(Error::DimensionMismatch("word length or symbol out of range".into()));
        }
        words.sort();
        if words.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Validation("duplicate word".into()));
        }
        Ok(HammingCode { field, n, words })
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn contains(&self, w: &[u32]) -> bool {
        self.words.binary_search_by(|x| x.as_slice().cmp(w)).is_ok()
    }

    pub fn min_distance(&self) -> usize {
        let ws = &self.words;
        (0..ws.len())
            .into_par_iter()
            .map(|i| {
                (i + 1..ws.len())
                    .map(|j| ws[i].iter().zip(&ws[j]).filter(|(a, b)| a != b).count())
                    .min()
                    .unwrap_or(usize::MAX)
            })
            .min()
            .unwrap_or(usize::MAX)
    }

    /// Closure under addition and under scaling by `E`.
    pub fn is_linear(&self) -> bool {
        let f = &self.field;
        let zero = vec![0u32; self.n];
        if !self.contains(&zero) {
            return false;
        }
        let g = f.primitive_element();
        let scaled_ok = self.words.iter().all(|w| self.contains(&w.iter().map(|&x| f.mul(x, g)).collect::<Vec<_>>()));
        scaled_ok
            && self.words.iter().all(|a| {
                self.words.iter().all(|b| self.contains(&a.iter().zip(b).map(|(&x, &y)| f.add(x, y)).collect::<Vec<_>>()))
            })
    }

    /// MDS test: with |code| = |E|^k, is the minimum Hamming distance n - k + 1?
    pub fn is_mds(&self) -> Result<MdsVerdict> {
        let q = self.field.order() as usize;
        let mut t = 1usize;
        let mut k = 0;
        while t < self.len() {
            t *= q;
            k += 1;
        }
        if t != self.len() || k == 0 || k > self.n {
            return Err(Error::BadCardinality(self.len()));
        }
        let d = self.min_distance();
        Ok(MdsVerdict { is_mds: d == self.n - k + 1, k, d })
    }
}

pub fn is_mds_hamming(code: &HammingCode) -> Result<MdsVerdict> {
    code.is_mds()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u32, e: u32) -> Arc<FieldSpec> {
        FieldSpec::new(p, e, None).unwrap()
    }

    fn full_space(f: &Arc<FieldSpec>, m: usize, n: usize) -> RankCode {
        let total = (f.order() as u64).pow((m * n) as u32);
        let els = (0..total).map(|i| MatGF::from_index(f.clone(), m, n, i)).collect();
        RankCode::from_elements(f.clone(), m, n, els).unwrap()
    }

    #[test]
    fn full_space_is_degenerate_mrd() {
        let f = gf(2, 1);
        let c = full_space(&f, 2, 2);
        assert_eq!(c.min_distance().unwrap(), 1);
        let v = c.is_mrd();
        assert!(v.is_mrd);
        assert_eq!(v.k, Some(2));
    }

    #[test]
    fn duplicate_rejected() {
        let f = gf(2, 1);
        let i = MatGF::identity(f.clone(), 2);
        assert!(matches!(RankCode::from_elements(f, 2, 2, vec![i.clone(), i]), Err(Error::Validation(_))));
    }

    #[test]
    fn zero_code_and_its_dual() {
        let f = gf(3, 1);
        let z = RankCode::from_basis(f.clone(), 2, 2, vec![]).unwrap();
        assert_eq!(z.rank_distribution().unwrap().counts, BTreeMap::from([(0, 1)]));
        assert!(matches!(z.min_distance(), Err(Error::TooSmall)));
        let d = z.dual().unwrap();
        assert_eq!(d.len(), 81);
    }

    #[test]
    fn normalize_pair() {
        let f = gf(2, 1);
        let a = MatGF::from_rows(f.clone(), &[vec![1, 1], vec![0, 1]]).unwrap();
        let b = a.add(&MatGF::identity(f.clone(), 2)).unwrap();
        let c = RankCode::from_elements(f.clone(), 2, 2, vec![a, b]).unwrap();
        let n = c.normalize().unwrap();
        let expect =
            RankCode::from_elements(f.clone(), 2, 2, vec![MatGF::zero(f.clone(), 2, 2), MatGF::identity(f, 2)])
                .unwrap();
        assert_eq!(n, expect);
    }

    #[test]
    fn translation_invariance_of_distance() {
        let f = gf(3, 1);
        let basis = vec![
            MatGF::from_rows(f.clone(), &[vec![1, 0], vec![0, 1]]).unwrap(),
            MatGF::from_rows(f.clone(), &[vec![0, 2], vec![1, 0]]).unwrap(),
        ];
        let c = RankCode::from_basis(f.clone(), 2, 2, basis).unwrap();
        let d = c.min_distance().unwrap();
        assert_eq!(d, c.min_distance_pairs());
        let shifted = c.translate(&MatGF::from_rows(f, &[vec![2, 1], vec![1, 1]]).unwrap()).unwrap();
        assert!(!shifted.is_additively_closed());
        assert_eq!(shifted.min_distance().unwrap(), d);
    }

    #[test]
    fn dual_dimensions_and_involution() {
        let f = gf(2, 1);
        let basis = vec![MatGF::identity(f.clone(), 2), MatGF::from_rows(f.clone(), &[vec![0, 1], vec![1, 1]]).unwrap()];
        let c = RankCode::from_basis(f.clone(), 2, 2, basis).unwrap();
        let d = c.dual().unwrap();
        assert_eq!(d.len(), 4);
        for a in c.elements() {
            for b in d.elements() {
                assert_eq!(pairing(a, b), 0);
            }
        }
        assert_eq!(d.dual().unwrap(), c);
    }

    #[test]
    fn mds_examples() {
        let e = gf(3, 3);
        let rep = HammingCode::new(e.clone(), 3, (0..27).map(|a| vec![a, a, a]).collect()).unwrap();
        let v = rep.is_mds().unwrap();
        assert!(v.is_mds);
        assert_eq!((v.k, v.d), (1, 3));
        assert!(rep.is_linear());
        let bad = HammingCode::new(e.clone(), 3, vec![vec![0, 0, 0], vec![0, 0, 1]]).unwrap();
        assert!(matches!(bad.is_mds(), Err(Error::BadCardinality(2))));
        // k = 2 code with two words at distance 1.
        let mut words: Vec<Vec<u32>> = (0..27).flat_map(|a| (0..27).map(move |b| vec![a, b, 0])).collect();
        words.sort();
        let c = HammingCode::new(e, 3, words).unwrap();
        assert!(!c.is_mds().unwrap().is_mds);
    }

    #[test]
    fn flatten_rejects_dependent_basis() {
        let f = gf(2, 1);
        let e = gf(2, 2);
        let c = RankCode::from_basis(f.clone(), 2, 2, vec![MatGF::identity(f, 2)]).unwrap();
        assert!(matches!(c.flatten(&e, &[1, 1]), Err(Error::BasisNotIndependent)));
        let h = c.flatten(&e, &[1, 2]).unwrap();
        assert!(h.contains(&[0, 0]));
        assert_eq!(h.len(), 2);
    }
}
