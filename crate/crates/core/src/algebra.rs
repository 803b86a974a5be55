//! Quasifields as multiplication tables, their substructures, and the
//! correspondence with normalized MRD codes of minimum distance `n`.
//!
//! Elements of a quasifield of order `p^dim` are indices `0..p^dim`; the
//! addition is digit-wise addition of base-`p` expansions, so index 0 is zero.
//! For a structure built from a spreadset over `K = GF(q)` on `W = K^n`, the
//! vector `w` has index `Σ idx(w_i) q^i`.

use std::collections::BTreeSet;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::code::RankCode;
use crate::error::{Error, Result};
use crate::gf::{FieldDescriptor, FieldSpec};
use crate::matgf::MatGF;

/// Largest quasifield order handled by the table representation.
pub const MAX_QUASIFIELD_ORDER: usize = 1 << 10;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quasifield {
    p: u32,
    dim: usize,
    order: usize,
    identity: u32,
    table: Vec<u32>,
    add: Vec<u32>,
    neg: Vec<u32>,
}

/// First failing axiom of [`Quasifield::check`], with a witness tuple.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomFailure {
    pub axiom: String,
    pub witness: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub ok: bool,
    pub failure: Option<AxiomFailure>,
}

/// A subfield of a quasifield, realized as a field with an explicit embedding.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubField {
    pub descriptor: FieldDescriptor,
    /// `embedding[k]` is the element of the quasifield representing `k`.
    pub embedding: Vec<u32>,
}

/// Kernel, a nucleus, or the center: an element set plus its field structure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubStructure {
    pub kind: String,
    pub elements: Vec<u32>,
    pub field: Option<SubField>,
}

impl SubStructure {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, x: u32) -> bool {
        self.elements.binary_search(&x).is_ok()
    }
}

fn digits(x: usize, p: usize, dim: usize) -> Vec<usize> {
    let mut v = Vec::with_capacity(dim);
    let mut t = x;
    for _ in 0..dim {
        v.push(t % p);
        t /= p;
    }
    v
}

impl Quasifield {
    /// Wraps a multiplication table; only shapes are validated here, see [`Quasifield::check`].
    pub fn new(p: u32, dim: usize, identity: u32, table: Vec<u32>) -> Result<Quasifield> {
        if !crate::gf::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let order = (p as usize).checked_pow(dim as u32).filter(|&o| o <= MAX_QUASIFIELD_ORDER).ok_or_else(|| {
            Error::TooLarge(format!("quasifield order {p}^{dim} exceeds {MAX_QUASIFIELD_ORDER}"))
        })?;
        if dim == 0 {
            return Err(Error::InvalidParameters("dimension must be positive".into()));
        }
        if table.len() != order * order {
            return Err(Error::DimensionMismatch(format!("table has {} entries, expected {}", table.len(), order * order)));
        }
        if identity as usize >= order || table.iter().any(|&x| x as usize >= order) {
            return Err(Error::Validation("table entry out of range".into()));
        }
        let pu = p as usize;
        let dig: Vec<Vec<usize>> = (0..order).map(|x| digits(x, pu, dim)).collect();
        let undigit = |d: &[usize]| d.iter().rev().fold(0usize, |acc, &c| acc * pu + c) as u32;
        let mut add = vec![0u32; order * order];
        for a in 0..order {
            for b in 0..order {
                add[a * order + b] = if p == 2 {
                    (a ^ b) as u32
                } else {
                    let s: Vec<usize> = dig[a].iter().zip(&dig[b]).map(|(x, y)| (x + y) % pu).collect();
                    undigit(&s)
                };
            }
        }
        let neg = (0..order)
            .map(|a| undigit(&dig[a].iter().map(|&x| (pu - x) % pu).collect::<Vec<_>>()))
            .collect();
        Ok(Quasifield { p, dim, order, identity, table, add, neg })
    }

    /// [`Quasifield::new`] followed by the full axiom check.
    pub fn validated(p: u32, dim: usize, identity: u32, table: Vec<u32>) -> Result<Quasifield> {
        let q = Quasifield::new(p, dim, identity, table)?;
        let report = q.check();
        match report.failure {
            None => Ok(q),
            Some(f) => Err(Error::Validation(format!("quasifield axiom ({}) fails at {:?}", f.axiom, f.witness))),
        }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> u32 {
        self.identity
    }

    pub fn table(&self) -> &[u32] {
        &self.table
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.table[a as usize * self.order + b as usize]
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        self.add[a as usize * self.order + b as usize]
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        self.neg[a as usize]
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    /// `k·x` for an integer `k` (repeated addition).
    pub fn scalar(&self, k: u32, x: u32) -> u32 {
        (0..k % self.p).fold(0, |acc, _| self.add(acc, x))
    }

    /// Additive generators `p^t`, the unit vectors of the digit expansion.
    fn additive_basis(&self) -> Vec<u32> {
        (0..self.dim).map(|t| self.p.pow(t as u32)).collect()
    }

    fn elements(&self) -> std::ops::Range<u32> {
        0..self.order as u32
    }

    /// Right distributivity, exact: additivity of `x ↦ x∘c` is checked on
    /// all `a` against the additive generators `b`, which implies it for all `b`.
    fn right_distributivity_witness(&self) -> Option<Vec<u32>> {
        let basis = self.additive_basis();
        self.elements().into_par_iter().find_map_first(|c| {
            for a in self.elements() {
                for &b in &basis {
                    if self.mul(self.add(a, b), c) != self.add(self.mul(a, c), self.mul(b, c)) {
                        return Some(vec![a, b, c]);
                    }
                }
            }
            None
        })
    }

    /// Left distributivity `a∘(b+c) = a∘b + a∘c`, with the same reduction.
    pub fn left_distributivity_witness(&self) -> Option<Vec<u32>> {
        let basis = self.additive_basis();
        self.elements().into_par_iter().find_map_first(|a| {
            for b in self.elements() {
                for &c in &basis {
                    if self.mul(a, self.add(b, c)) != self.add(self.mul(a, b), self.mul(a, c)) {
                        return Some(vec![a, b, c]);
                    }
                }
            }
            None
        })
    }

    pub fn associativity_witness(&self) -> Option<Vec<u32>> {
        self.elements().into_par_iter().find_map_first(|a| {
            for b in self.elements() {
                let ab = self.mul(a, b);
                for c in self.elements() {
                    if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                        return Some(vec![a, b, c]);
                    }
                }
            }
            None
        })
    }

    pub fn commutativity_witness(&self) -> Option<Vec<u32>> {
        for a in self.elements() {
            for b in 0..a {
                if self.mul(a, b) != self.mul(b, a) {
                    return Some(vec![a, b]);
                }
            }
        }
        None
    }

    /// Checks axioms (i)-(v) exhaustively and reports the first failure.
    pub fn check(&self) -> AxiomReport {
        let fail = |axiom: &str, witness: Vec<u32>| AxiomReport {
            ok: false,
            failure: Some(AxiomFailure { axiom: axiom.into(), witness }),
        };
        // (i) 0∘a = 0 = a∘0; the additive group is the ambient vector space.
        if let Some(a) = self.elements().find(|&a| self.mul(0, a) != 0 || self.mul(a, 0) != 0) {
            return fail("i", vec![a]);
        }
        // (ii) two-sided identity.
        let e = self.identity;
        if let Some(a) = self.elements().find(|&a| self.mul(e, a) != a || self.mul(a, e) != a) {
            return fail("ii", vec![a]);
        }
        // (iii) a∘x = b uniquely solvable for a ≠ 0.
        for a in 1..self.order as u32 {
            let mut hit = vec![false; self.order];
            for x in self.elements() {
                hit[self.mul(a, x) as usize] = true;
            }
            if let Some(b) = hit.iter().position(|&h| !h) {
                return fail("iii", vec![a, b as u32]);
            }
        }
        let right = self.right_distributivity_witness();
        // (iv) x∘a = x∘b + c uniquely solvable for a ≠ b.
        let iv = if right.is_none() {
            // x ↦ x∘a - x∘b is additive, so bijective iff only x = 0 maps to 0.
            self.elements().into_par_iter().find_map_first(|a| {
                for b in self.elements() {
                    if a == b {
                        continue;
                    }
                    for x in 1..self.order as u32 {
                        if self.mul(x, a) == self.mul(x, b) {
                            return Some(vec![a, b, 0]);
                        }
                    }
                }
                None
            })
        } else {
            self.elements().into_par_iter().find_map_first(|a| {
                for b in self.elements() {
                    if a == b {
                        continue;
                    }
                    let mut hit = vec![false; self.order];
                    for x in self.elements() {
                        hit[self.sub(self.mul(x, a), self.mul(x, b)) as usize] = true;
                    }
                    if let Some(c) = hit.iter().position(|&h| !h) {
                        return Some(vec![a, b, c as u32]);
                    }
                }
                None
            })
        };
        if let Some(w) = iv {
            return fail("iv", w);
        }
        if let Some(w) = right {
            return fail("v", w);
        }
        AxiomReport { ok: true, failure: None }
    }

    pub fn is_semifield(&self) -> bool {
        self.left_distributivity_witness().is_none()
    }

    pub fn is_nearfield(&self) -> bool {
        self.associativity_witness().is_none()
    }

    pub fn is_field(&self) -> bool {
        self.is_semifield() && self.commutativity_witness().is_none() && self.is_nearfield()
    }

    fn is_left_distributive_at(&self, c: u32) -> bool {
        let basis = self.additive_basis();
        self.elements().all(|a| basis.iter().all(|&b| self.mul(c, self.add(a, b)) == self.add(self.mul(c, a), self.mul(c, b))))
    }

    fn in_left_nucleus(&self, x: u32) -> bool {
        self.elements().all(|a| self.elements().all(|b| self.mul(x, self.mul(a, b)) == self.mul(self.mul(x, a), b)))
    }

    fn in_middle_nucleus(&self, x: u32) -> bool {
        self.elements().all(|a| self.elements().all(|b| self.mul(a, self.mul(x, b)) == self.mul(self.mul(a, x), b)))
    }

    fn in_right_nucleus(&self, x: u32) -> bool {
        self.elements().all(|a| self.elements().all(|b| self.mul(a, self.mul(b, x)) == self.mul(self.mul(a, b), x)))
    }

    fn commutes(&self, x: u32) -> bool {
        self.elements().all(|a| self.mul(x, a) == self.mul(a, x))
    }

    fn substructure(&self, kind: &str, pred: impl Fn(u32) -> bool + Sync) -> SubStructure {
        let elements: Vec<u32> = self.elements().into_par_iter().filter(|&x| pred(x)).collect();
        let field = self.field_structure(&elements);
        SubStructure { kind: kind.into(), elements, field }
    }

    fn require_semi_or_near(&self) -> Result<()> {
        if self.is_semifield() || self.is_nearfield() {
            Ok(())
        } else {
            Err(Error::NotASemifield)
        }
    }

    pub fn kernel(&self) -> SubStructure {
        self.substructure("kernel", |c| self.is_left_distributive_at(c) && self.in_left_nucleus(c))
    }

    pub fn nucleus_left(&self) -> Result<SubStructure> {
        self.require_semi_or_near()?;
        Ok(self.substructure("left nucleus", |x| self.in_left_nucleus(x)))
    }

    pub fn nucleus_middle(&self) -> Result<SubStructure> {
        self.require_semi_or_near()?;
        Ok(self.substructure("middle nucleus", |x| self.in_middle_nucleus(x)))
    }

    pub fn nucleus_right(&self) -> Result<SubStructure> {
        self.require_semi_or_near()?;
        Ok(self.substructure("right nucleus", |x| self.in_right_nucleus(x)))
    }

    /// Commuting elements of `Ker ∩ N_m ∩ N_r` (for semifields `Ker = N_l`).
    pub fn center(&self) -> Result<SubStructure> {
        self.require_semi_or_near()?;
        Ok(self.substructure("center", |x| {
            self.commutes(x)
                && self.is_left_distributive_at(x)
                && self.in_left_nucleus(x)
                && self.in_middle_nucleus(x)
                && self.in_right_nucleus(x)
        }))
    }

    /// Identifies `elements` with GF(p^f) if they form a field under `+` and `∘`.
    pub fn field_structure(&self, elements: &[u32]) -> Option<SubField> {
        let size = elements.len();
        let mut f = 0u32;
        let mut t = 1usize;
        while t < size {
            t *= self.p as usize;
            f += 1;
        }
        if t != size || f == 0 || !elements.contains(&0) || !elements.contains(&self.identity) {
            return None;
        }
        let fs = FieldSpec::new(self.p, f, None).ok()?;
        // Powers of a candidate root, with the identity as the constant term.
        let power = |s: u32, k: usize| (0..k).fold(self.identity, |acc, _| self.mul(acc, s));
        let eval = |s: u32, coeffs: &[u32]| {
            coeffs.iter().enumerate().fold(0u32, |acc, (k, &c)| self.add(acc, self.scalar(c, power(s, k))))
        };
        for &s in elements {
            if eval(s, fs.modulus()) != 0 {
                continue;
            }
            let embedding: Vec<u32> = (0..fs.order()).map(|k| eval(s, &fs.coeffs(k))).collect();
            let distinct: BTreeSet<u32> = embedding.iter().copied().collect();
            if distinct.len() != size || distinct.iter().any(|x| elements.binary_search(x).is_err()) {
                continue;
            }
            let hom = (0..fs.order()).all(|a| {
                (0..fs.order()).all(|b| {
                    let (ea, eb) = (embedding[a as usize], embedding[b as usize]);
                    self.mul(ea, eb) == embedding[fs.mul(a, b) as usize]
                        && self.add(ea, eb) == embedding[fs.add(a, b) as usize]
                })
            });
            if hom {
                return Some(SubField { descriptor: fs.descriptor(), embedding });
            }
        }
        None
    }

    /// The smallest subset containing `e` and `s` closed under `+` and `∘`.
    pub fn closure(&self, gens: &[u32]) -> Vec<u32> {
        let mut set: BTreeSet<u32> = [0, self.identity].into_iter().chain(gens.iter().copied()).collect();
        loop {
            let cur: Vec<u32> = set.iter().copied().collect();
            let mut grew = false;
            for &a in &cur {
                for &b in &cur {
                    grew |= set.insert(self.add(a, b));
                    grew |= set.insert(self.mul(a, b));
                }
            }
            if !grew {
                return set.into_iter().collect();
            }
        }
    }

    /// All subfields, as sorted element sets.
    pub fn subfields(&self) -> Vec<Vec<u32>> {
        let mut found = BTreeSet::new();
        for s in self.elements() {
            let c = self.closure(&[s]);
            if self.field_structure(&c).is_some() {
                found.insert(c);
            }
        }
        found.into_iter().collect()
    }

    /// `(k∘x)∘a = k∘(x∘a) = x∘(k∘a)` for all `k ∈ K`, on top of being a semifield.
    pub fn is_division_algebra_over(&self, k: &[u32]) -> bool {
        self.is_semifield()
            && k.iter().all(|&kk| {
                self.elements().all(|x| {
                    self.elements().all(|a| {
                        let lhs = self.mul(self.mul(kk, x), a);
                        lhs == self.mul(kk, self.mul(x, a)) && lhs == self.mul(x, self.mul(kk, a))
                    })
                })
            })
    }

    /// The structure with multiplication `a ∘' b = b ∘ a`.
    pub fn opposite(&self) -> Quasifield {
        let n = self.order;
        let mut table = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                table[a * n + b] = self.table[b * n + a];
            }
        }
        Quasifield { table, ..self.clone() }
    }

    /// Transports the structure along a bijection: `φ(a) ∘' φ(b) = φ(a ∘ b)`.
    pub fn relabel(&self, phi: &[u32]) -> Result<Quasifield> {
        let n = self.order;
        let mut table = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                table[phi[a] as usize * n + phi[b] as usize] = phi[self.table[a * n + b] as usize];
            }
        }
        Quasifield::new(self.p, self.dim, phi[self.identity as usize], table)
    }
}

/// A spreadset `{A(w)}` over `K`: `mats[index(w)]` has first row `w`.
#[derive(Clone, Debug)]
pub struct SpreadSet {
    pub field: Arc<FieldSpec>,
    pub n: usize,
    pub mats: Vec<MatGF>,
}

/// Index of a vector over `K` (first coordinate least significant).
pub fn vector_index(q: u32, w: &[u32]) -> u32 {
    w.iter().rev().fold(0u32, |acc, &x| acc * q + x)
}

pub fn index_vector(q: u32, n: usize, mut x: u32) -> Vec<u32> {
    let mut v = Vec::with_capacity(n);
    for _ in 0..n {
        v.push(x % q);
        x /= q;
    }
    v
}

impl SpreadSet {
    /// Validates `A(0) = 0`, `A(e1) = I`, first rows, and invertible differences.
    pub fn new(field: Arc<FieldSpec>, n: usize, mats: Vec<MatGF>) -> Result<SpreadSet> {
        let q = field.order();
        let size = (q as usize).pow(n as u32);
        if mats.len() != size {
            return Err(Error::NotMrd(format!("spreadset needs {size} matrices, got {}", mats.len())));
        }
        for (i, a) in mats.iter().enumerate() {
            if a.shape() != (n, n) {
                return Err(Error::DimensionMismatch("spreadset matrices must be n x n".into()));
            }
            if vector_index(q, a.row(0)) != i as u32 {
                return Err(Error::Validation(format!("matrix {i} has the wrong first row")));
            }
        }
        if !mats[0].is_zero() || mats[1] != MatGF::identity(field.clone(), n) {
            return Err(Error::NotNormalized);
        }
        for i in 0..size {
            for j in 0..i {
                if mats[i].sub(&mats[j])?.rank() < n {
                    return Err(Error::NotMrd(format!("A({i}) - A({j}) is singular")));
                }
            }
        }
        Ok(SpreadSet { field, n, mats })
    }

    pub fn code(&self) -> RankCode {
        RankCode::from_elements(self.field.clone(), self.n, self.n, self.mats.clone()).expect("distinct first rows")
    }
}

/// Indexes a normalized `d = n` MRD code by first rows.
pub fn spreadset_from_code(c: &RankCode) -> Result<SpreadSet> {
    if !c.is_square() {
        return Err(Error::NotSquare);
    }
    let n = c.n();
    let f = c.field().clone();
    if !c.contains_zero() || !c.contains(&MatGF::identity(f.clone(), n)) {
        return Err(Error::NotNormalized);
    }
    let q = f.order();
    let size = (q as usize).pow(n as u32);
    if c.len() != size {
        return Err(Error::NotMrd(format!("{} codewords, expected q^n = {size}", c.len())));
    }
    let mut mats: Vec<Option<MatGF>> = vec![None; size];
    for a in c.elements() {
        let i = vector_index(q, a.row(0)) as usize;
        if mats[i].is_some() {
            return Err(Error::NotMrd("two codewords share a first row".into()));
        }
        mats[i] = Some(a.clone());
    }
    SpreadSet::new(f, n, mats.into_iter().map(|m| m.expect("first rows are a bijection")).collect())
}

/// `w ∘ w' = w A(w')` on `W = K^n`.
pub fn quasifield_from_spreadset(s: &SpreadSet) -> Result<Quasifield> {
    let q = s.field.order();
    let size = s.mats.len();
    let mut table = vec![0u32; size * size];
    let vecs: Vec<Vec<u32>> = (0..size as u32).map(|x| index_vector(q, s.n, x)).collect();
    for (b, m) in s.mats.iter().enumerate() {
        for (a, w) in vecs.iter().enumerate() {
            table[a * size + b] = vector_index(q, &m.vec_mul(w)?);
        }
    }
    let dim = s.n * s.field.e() as usize;
    Quasifield::new(s.field.p(), dim, 1, table)
}

/// Code → spreadset → quasifield.
pub fn quasifield_from_code(c: &RankCode) -> Result<Quasifield> {
    quasifield_from_spreadset(&spreadset_from_code(c)?)
}

/// `K`-coordinates of a quasifield: greedy basis starting at `e`.
#[derive(Clone, Debug)]
pub struct Coordinates {
    pub k: Arc<FieldSpec>,
    pub embedding: Vec<u32>,
    pub basis: Vec<u32>,
    coords: Vec<Vec<u32>>,
}

impl Coordinates {
    pub fn new(qf: &Quasifield, k: &SubField) -> Result<Coordinates> {
        let kf = FieldSpec::from_descriptor(&k.descriptor)?;
        let kq = kf.order();
        // k·x is the kernel action k̂ ∘ x.
        let combine = |basis: &[u32], c: &[u32]| {
            c.iter().zip(basis).fold(0u32, |acc, (&ci, &b)| qf.add(acc, qf.mul(k.embedding[ci as usize], b)))
        };
        let mut basis = vec![qf.identity()];
        let mut in_span = vec![false; qf.order()];
        let mark = |basis: &[u32], in_span: &mut Vec<bool>| {
            let total = (kq as u64).pow(basis.len() as u32);
            for t in 0..total {
                let c = index_vector(kq, basis.len(), t as u32);
                in_span[combine(basis, &c) as usize] = true;
            }
        };
        mark(&basis, &mut in_span);
        while let Some(x) = (0..qf.order()).find(|&x| !in_span[x]) {
            basis.push(x as u32);
            mark(&basis, &mut in_span);
        }
        let n = basis.len();
        if (kq as u64).pow(n as u32) != qf.order() as u64 {
            return Err(Error::KNotInKernel);
        }
        let mut coords = vec![Vec::new(); qf.order()];
        for t in 0..qf.order() as u32 {
            let c = index_vector(kq, n, t);
            let x = combine(&basis, &c) as usize;
            if !coords[x].is_empty() {
                return Err(Error::KNotInKernel);
            }
            coords[x] = c;
        }
        Ok(Coordinates { k: kf, embedding: k.embedding.clone(), basis, coords })
    }

    pub fn coords(&self, x: u32) -> &[u32] {
        &self.coords[x as usize]
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// Matrices `R(a)` of `x ↦ x∘a` over `K ⊆ Ker`, returned as a spreadset.
///
/// `k` defaults to the prime field. The basis starts at the identity and is
/// extended by least indices outside the current span.
pub fn right_representation(qf: &Quasifield, k: Option<&SubField>) -> Result<(SpreadSet, Coordinates)> {
    let prime;
    let k = match k {
        Some(k) => k,
        None => {
            let fp = FieldSpec::prime(qf.p())?;
            prime = SubField {
                descriptor: fp.descriptor(),
                embedding: (0..qf.p()).map(|c| qf.scalar(c, qf.identity())).collect(),
            };
            &prime
        }
    };
    let kernel = qf.kernel();
    if k.embedding.iter().any(|&x| !kernel.contains(x)) {
        return Err(Error::KNotInKernel);
    }
    let coords = Coordinates::new(qf, k)?;
    let n = coords.dim();
    let kq = coords.k.order();
    let size = qf.order();
    let mut mats: Vec<Option<MatGF>> = vec![None; size];
    for a in 0..size as u32 {
        let entries = coords.basis.iter().flat_map(|&b| coords.coords(qf.mul(b, a)).to_vec()).collect();
        let m = MatGF::new(coords.k.clone(), n, n, entries)?;
        let i = vector_index(kq, m.row(0)) as usize;
        mats[i] = Some(m);
    }
    let mats = mats.into_iter().map(|m| m.ok_or(Error::NotMrd("first rows collide".into()))).collect::<Result<_>>()?;
    Ok((SpreadSet::new(coords.k.clone(), n, mats)?, coords))
}

/// Cross-check of the additive and linear correspondences for one structure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorrespondenceReport {
    pub additively_closed: bool,
    pub semifield: bool,
    pub additive_biconditional: bool,
    pub linear: bool,
    pub k_in_center: bool,
    pub division_algebra: bool,
    pub linear_biconditional: bool,
    pub witnesses: Vec<String>,
}

impl CorrespondenceReport {
    pub fn holds(&self) -> bool {
        self.additive_biconditional && self.linear_biconditional
    }
}

/// Checks additive closure ⇔ semifield and K-linearity ⇔ division algebra over K ⊆ Z.
pub fn verify_t2_t3(c: &RankCode) -> Result<CorrespondenceReport> {
    let qf = quasifield_from_code(c)?;
    let additively_closed = c.is_additively_closed();
    let semi_witness = qf.left_distributivity_witness();
    let semifield = semi_witness.is_none();
    let linear = c.is_linear();
    // K sits in the structure as K·e1, i.e. indices 0..q.
    let k_elems: Vec<u32> = (0..c.field().order()).collect();
    let center = qf.center().ok();
    let k_in_center = semifield && center.as_ref().is_some_and(|z| k_elems.iter().all(|&x| z.contains(x)));
    let division_algebra = qf.is_division_algebra_over(&k_elems);
    let mut witnesses = Vec::new();
    if let Some(w) = semi_witness {
        witnesses.push(format!("left distributivity fails at {w:?}"));
    }
    if !additively_closed {
        witnesses.push("code is not closed under addition".into());
    }
    Ok(CorrespondenceReport {
        additively_closed,
        semifield,
        additive_biconditional: additively_closed == semifield,
        linear,
        k_in_center,
        division_algebra,
        linear_biconditional: linear == k_in_center && k_in_center == division_algebra,
        witnesses,
    })
}

/// Invariant summary used by the CLI and as a cheap isotopy pre-filter.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureSummary {
    pub order: usize,
    pub semifield: bool,
    pub nearfield: bool,
    pub field: bool,
    pub kernel: usize,
    pub nuclei: Option<[usize; 3]>,
    pub center: Option<usize>,
}

pub fn summarize(qf: &Quasifield) -> StructureSummary {
    let semifield = qf.is_semifield();
    let nearfield = qf.is_nearfield();
    let nuclei = (semifield || nearfield).then(|| {
        [
            qf.nucleus_left().expect("checked").order(),
            qf.nucleus_middle().expect("checked").order(),
            qf.nucleus_right().expect("checked").order(),
        ]
    });
    StructureSummary {
        order: qf.order(),
        semifield,
        nearfield,
        field: semifield && nearfield && qf.commutativity_witness().is_none(),
        kernel: qf.kernel().order(),
        nuclei,
        center: qf.center().ok().map(|z| z.order()),
    }
}

/// The field GF(p^n) as a multiplication table on polynomial-basis indices.
pub fn field_quasifield(p: u32, n: u32) -> Result<Quasifield> {
    let f = FieldSpec::new(p, n, None)?;
    let q = f.order() as usize;
    let mut table = vec![0u32; q * q];
    for a in 0..q {
        for b in 0..q {
            table[a * q + b] = f.mul(a as u32, b as u32);
        }
    }
    Quasifield::new(p, n as usize, 1, table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gabidulin::singer_code;

    #[test]
    fn field_is_everything() {
        let f = field_quasifield(2, 4).unwrap();
        assert!(f.check().ok);
        assert!(f.is_field());
        assert_eq!(f.kernel().order(), 16);
        assert_eq!(f.center().unwrap().order(), 16);
        assert_eq!(f.nucleus_middle().unwrap().order(), 16);
        let k = f.kernel();
        assert_eq!(k.field.unwrap().descriptor.e, 4);
    }

    #[test]
    fn gf27_flags() {
        let f = field_quasifield(3, 3).unwrap();
        assert!(f.is_field() && f.is_semifield() && f.is_nearfield());
    }

    #[test]
    fn defect_in_right_division_is_reported() {
        let f = field_quasifield(2, 2).unwrap();
        let mut table = f.table().to_vec();
        // Make 2∘x hit 3 twice and miss 1.
        let i = table.iter().enumerate().position(|(i, &v)| i / 4 == 2 && v == 1).unwrap();
        table[i] = 3;
        let bad = Quasifield::new(2, 2, 1, table).unwrap();
        let r = bad.check();
        assert!(!r.ok);
        let fail = r.failure.unwrap();
        assert_eq!(fail.axiom, "iii");
        assert_eq!(fail.witness, vec![2, 1]);
    }

    #[test]
    fn reduced_distributivity_matches_triple_loop() {
        let f = field_quasifield(3, 2).unwrap();
        let mut table = f.table().to_vec();
        table.swap(9 * 4 + 5, 9 * 4 + 7);
        let g = Quasifield::new(3, 2, 1, table).unwrap();
        for qf in [&f, &g] {
            let naive_left = (0..9).all(|a| {
                (0..9).all(|b| (0..9).all(|c| qf.mul(a, qf.add(b, c)) == qf.add(qf.mul(a, b), qf.mul(a, c))))
            });
            let naive_right = (0..9).all(|a| {
                (0..9).all(|b| (0..9).all(|c| qf.mul(qf.add(a, b), c) == qf.add(qf.mul(a, c), qf.mul(b, c))))
            });
            assert_eq!(naive_left, qf.left_distributivity_witness().is_none());
            assert_eq!(naive_right, qf.right_distributivity_witness().is_none());
        }
    }

    #[test]
    fn singer_round_trip() {
        let c = singer_code(2, 4).unwrap();
        let s = spreadset_from_code(&c).unwrap();
        let qf = quasifield_from_spreadset(&s).unwrap();
        assert!(qf.check().ok);
        assert!(qf.is_field());
        let (s2, _) = right_representation(&qf, None).unwrap();
        assert_eq!(s2.code(), c);
        let r = verify_t2_t3(&c).unwrap();
        assert!(r.holds() && r.linear && r.semifield);
    }

    #[test]
    fn right_representation_over_kernel_subfield() {
        let qf = field_quasifield(2, 4).unwrap();
        let gf4: Vec<u32> = qf.subfields().into_iter().find(|s| s.len() == 4).unwrap();
        let sub = qf.field_structure(&gf4).unwrap();
        let (s, coords) = right_representation(&qf, Some(&sub)).unwrap();
        assert_eq!(coords.dim(), 2);
        assert_eq!(s.code().len(), 16);
        assert!(s.code().is_mrd().is_mrd);
    }

    #[test]
    fn not_normalized() {
        let c = singer_code(2, 2).unwrap();
        let shifted = c.translate(&MatGF::identity(c.field().clone(), 2)).unwrap();
        let id = MatGF::identity(c.field().clone(), 2);
        let without_i: Vec<MatGF> = c.elements().iter().filter(|a| **a != id).cloned().collect();
        let missing = RankCode::from_elements(c.field().clone(), 2, 2, without_i).unwrap();
        assert!(matches!(spreadset_from_code(&missing), Err(Error::NotNormalized)));
        assert!(spreadset_from_code(&shifted).is_ok());
    }
}
