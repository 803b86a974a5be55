//! Bilinear forms on quasifields and symmetric MRD codes.
//!
//! A form on `K^n` is stored by its Gram matrix with `⟨x, y⟩ = x·G·yᵗ` for row
//! vectors. With `x∘a = x·R(a)`, invariance `⟨x∘a, y⟩ = ⟨x, y∘a⟩` reads
//! `R(a)·G = G·R(a)ᵗ`, and the form `⟨x, y⟩_a = ⟨x∘a, y⟩` has Gram matrix
//! `R(a)·G`.

use std::sync::Arc;

use crate::algebra::{right_representation, Coordinates, Quasifield, SubField};
use crate::code::RankCode;
use crate::error::{Error, Result};
use crate::gf::{trace, ExtensionBasis, FieldSpec};
use crate::matgf::{nullspace, MatGF};

/// Largest solution space scanned exhaustively by [`find_invariant_form`].
pub const MAX_FORM_SCAN: u64 = 1 << 20;

/// A bilinear form on `K^n` given by its Gram matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BilinearForm {
    pub gram: MatGF,
}

impl BilinearForm {
    pub fn new(gram: MatGF) -> Result<BilinearForm> {
        if !gram.is_square() {
            return Err(Error::NotSquare);
        }
        Ok(BilinearForm { gram })
    }

    pub fn n(&self) -> usize {
        self.gram.rows()
    }

    pub fn field(&self) -> &Arc<FieldSpec> {
        self.gram.field()
    }

    /// `x·G·yᵗ`.
    pub fn eval(&self, x: &[u32], y: &[u32]) -> Result<u32> {
        let xg = self.gram.vec_mul(x)?;
        if y.len() != xg.len() {
            return Err(Error::DimensionMismatch(format!("vector of length {} for a form on K^{}", y.len(), self.n())));
        }
        let f = self.field();
        Ok(xg.iter().zip(y).fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b))))
    }

    pub fn is_symmetric(&self) -> bool {
        self.gram.is_symmetric()
    }

    pub fn is_non_degenerate(&self) -> bool {
        self.gram.rank() == self.n()
    }
}

/// `⟨x, y⟩ = tr(xy)` in the coordinates of `basis`.
pub fn trace_form(basis: &ExtensionBasis) -> Result<BilinearForm> {
    scaled_form(basis, 1)
}

/// `⟨x, y⟩_a = tr(axy)` in the coordinates of `basis`.
pub fn scaled_form(basis: &ExtensionBasis, a: u32) -> Result<BilinearForm> {
    let (e, k) = (&basis.e, &basis.k);
    if a == 0 {
        return Err(Error::ZeroScalar);
    }
    if a >= e.order() {
        return Err(Error::InvalidParameters(format!("{a} is not an element of GF({})", e.order())));
    }
    let n = basis.degree();
    let mut entries = Vec::with_capacity(n * n);
    for &xi in &basis.basis {
        for &xj in &basis.basis {
            entries.push(trace(e, e.mul(a, e.mul(xi, xj)), k)?);
        }
    }
    BilinearForm::new(MatGF::new(k.clone(), n, n, entries)?)
}

/// The forms `⟨·,·⟩_a` for all nonzero `a`, in index order of `a`.
pub fn scaled_form_family(basis: &ExtensionBasis) -> Result<Vec<BilinearForm>> {
    (1..basis.e.order()).map(|a| scaled_form(basis, a)).collect()
}

/// The Gram matrices of [`scaled_form_family`] together with zero, as a code
/// over `GF(q)` in the polynomial basis of `GF(q^n)`.
pub fn symmetric_field_code(q: u32, n: usize) -> Result<RankCode> {
    let (k, e) = crate::gabidulin::field_pair(q, n)?;
    let basis = ExtensionBasis::polynomial(&k, &e)?;
    let mut mats = vec![MatGF::zero(k.clone(), n, n)];
    mats.extend(scaled_form_family(&basis)?.into_iter().map(|f| f.gram));
    RankCode::from_elements(k, n, n, mats)
}

/// Coordinates of `q` over `k` (default: the prime field) and the matrices
/// `R(a)` in the same coordinates, indexed by the element `a`.
fn right_matrices(q: &Quasifield, k: Option<&SubField>) -> Result<(Coordinates, Vec<MatGF>)> {
    let (s, co) = right_representation(q, k)?;
    let kq = co.k.order();
    // The basis starts at e, so R(a) has first row coords(e∘a) = coords(a).
    let by_elem = (0..q.order() as u32)
        .map(|a| s.mats[crate::algebra::vector_index(kq, co.coords(a)) as usize].clone())
        .collect();
    Ok((co, by_elem))
}

fn check_dims(form: &BilinearForm, co: &Coordinates) -> Result<()> {
    if form.n() != co.dim() || !crate::gf::same_field(form.field(), &co.k) {
        return Err(Error::DimensionMismatch(format!(
            "form on K^{} over GF({}) for a structure of dimension {} over GF({})",
            form.n(),
            form.field().order(),
            co.dim(),
            co.k.order()
        )));
    }
    Ok(())
}

/// First `(a, x, y)` in index order with `⟨x∘a, y⟩ ≠ ⟨x, y∘a⟩`.
pub fn invariance_witness(q: &Quasifield, form: &BilinearForm, k: Option<&SubField>) -> Result<Option<[u32; 3]>> {
    let (co, _) = right_matrices(q, k)?;
    check_dims(form, &co)?;
    let order = q.order() as u32;
    for a in 0..order {
        for x in 0..order {
            let xa = co.coords(q.mul(x, a)).to_vec();
            for y in 0..order {
                let lhs = form.eval(&xa, co.coords(y))?;
                let rhs = form.eval(co.coords(x), co.coords(q.mul(y, a)))?;
                if lhs != rhs {
                    return Ok(Some([a, x, y]));
                }
            }
        }
    }
    Ok(None)
}

/// Exhaustive check of `⟨x∘a, y⟩ = ⟨x, y∘a⟩` over all triples.
pub fn is_invariant_form(q: &Quasifield, form: &BilinearForm, k: Option<&SubField>) -> Result<bool> {
    Ok(invariance_witness(q, form, k)?.is_none())
}

/// The criterion `R(a)·G = G·R(a)ᵗ` for every `a`.
pub fn is_invariant_matrix(q: &Quasifield, form: &BilinearForm, k: Option<&SubField>) -> Result<bool> {
    let (co, rs) = right_matrices(q, k)?;
    check_dims(form, &co)?;
    let g = &form.gram;
    for r in &rs {
        if r.mul(g)? != g.mul(&r.transpose())? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The forms `⟨·,·⟩_a` with Gram matrices `R(a)·G`, indexed by the element `a`.
pub fn quasifield_forms(q: &Quasifield, k: Option<&SubField>, form: &BilinearForm) -> Result<Vec<BilinearForm>> {
    let (co, rs) = right_matrices(q, k)?;
    check_dims(form, &co)?;
    if !form.is_symmetric() || !form.is_non_degenerate() || !is_invariant_matrix(q, form, k)? {
        return Err(Error::NotInvariant);
    }
    rs.iter().map(|r| BilinearForm::new(r.mul(&form.gram)?)).collect()
}

/// The additive subgroup generated by `(x∘y)∘z − x∘(z∘y)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KnarrReport {
    /// Elements of the subgroup, sorted.
    pub span: Vec<u32>,
    /// Whether the subgroup is proper.
    pub proper: bool,
}

pub fn knarr_subgroup(q: &Quasifield) -> KnarrReport {
    let order = q.order();
    let mut inside = vec![false; order];
    inside[0] = true;
    let mut span = vec![0u32];
    'outer: for x in 0..order as u32 {
        for y in 0..order as u32 {
            let xy = q.mul(x, y);
            for z in 0..order as u32 {
                let g = q.sub(q.mul(xy, z), q.mul(x, q.mul(z, y)));
                if inside[g as usize] {
                    continue;
                }
                // Adjoin g: the new subgroup is the union of the cosets c·g + span.
                let old = span.clone();
                let mut cg = g;
                for _ in 1..q.p() {
                    for &s in &old {
                        let v = q.add(s, cg);
                        inside[v as usize] = true;
                        span.push(v);
                    }
                    cg = q.add(cg, g);
                }
                if span.len() == order {
                    break 'outer;
                }
            }
        }
    }
    span.sort_unstable();
    let proper = span.len() < order;
    KnarrReport { span, proper }
}

/// Outcome of the search for an invariant non-degenerate symmetric form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormSearch {
    pub form: Option<BilinearForm>,
    /// Dimension of the space of invariant symmetric forms.
    pub solution_dim: usize,
    /// Whether that space was scanned completely, so `None` proves absence.
    pub exhaustive: bool,
}

/// Solves `G = Gᵗ`, `R·G = G·Rᵗ` for all `R` in `mats` and returns the first
/// non-degenerate solution in coordinate order.
fn invariant_symmetric_form(field: &Arc<FieldSpec>, n: usize, mats: &[MatGF]) -> Result<FormSearch> {
    let nn = n * n;
    let mut rows: Vec<Vec<u32>> = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let mut row = vec![0u32; nn];
            row[i * n + j] = 1;
            row[j * n + i] = field.neg(1);
            rows.push(row);
        }
    }
    for r in mats {
        // (R·G − G·Rᵗ)_ij = Σ_k R_ik G_kj − Σ_k G_ik R_jk.
        for i in 0..n {
            for j in 0..n {
                let mut row = vec![0u32; nn];
                for k in 0..n {
                    row[k * n + j] = field.add(row[k * n + j], r.get(i, k));
                    row[i * n + k] = field.sub(row[i * n + k], r.get(j, k));
                }
                rows.push(row);
            }
        }
        crate::matgf::rref(field, &mut rows);
    }
    let ns = nullspace(field, &rows, nn);
    let s = ns.len();
    let q = field.order() as u64;
    let total = q.checked_pow(s as u32).unwrap_or(u64::MAX);
    let exhaustive = total <= MAX_FORM_SCAN;
    let step = if exhaustive { 1 } else { (total / MAX_FORM_SCAN) | 1 };
    let mut t = 1u64;
    while t < total && (exhaustive || t / step < MAX_FORM_SCAN) {
        let mut entries = vec![0u32; nn];
        let mut c = t;
        for v in &ns {
            let lam = (c % q) as u32;
            c /= q;
            if lam != 0 {
                for (e, &x) in entries.iter_mut().zip(v) {
                    *e = field.add(*e, field.mul(lam, x));
                }
            }
        }
        let form = BilinearForm::new(MatGF::new(field.clone(), n, n, entries)?)?;
        if form.is_non_degenerate() {
            return Ok(FormSearch { form: Some(form), solution_dim: s, exhaustive });
        }
        t += step;
    }
    Ok(FormSearch { form: None, solution_dim: s, exhaustive })
}

/// An invariant non-degenerate symmetric form of `q` over `k` (default: the
/// prime field), in the coordinates of [`right_representation`].
pub fn find_invariant_form(q: &Quasifield, k: Option<&SubField>) -> Result<FormSearch> {
    let (co, rs) = right_matrices(q, k)?;
    let found = invariant_symmetric_form(&co.k, co.dim(), &rs)?;
    if let Some(f) = &found.form {
        if !f.is_symmetric() || !f.is_non_degenerate() || !is_invariant_matrix(q, f, k)? {
            return Err(Error::Validation("invariant form failed re-verification".into()));
        }
    }
    Ok(found)
}

/// A symmetric code equivalent to the normalized `d = n` MRD code `c`, namely
/// `{A·G : A ∈ C}` for an invariant form `G` of the associated quasifield.
///
/// `Ok(None)` means no such code exists; a search too large to complete is
/// reported as [`Error::TooLarge`].
pub fn has_symmetric_equivalent(c: &RankCode) -> Result<Option<RankCode>> {
    let n = c.n();
    let f = c.field();
    if !c.is_square() || !c.contains_zero() || !c.contains(&MatGF::identity(f.clone(), n)) {
        return Err(Error::NotNormalized);
    }
    if c.is_mrd().d != Some(n) {
        return Err(Error::NotNormalized);
    }
    // The code's own matrices are R(a) for the quasifield on K^n.
    let found = invariant_symmetric_form(f, n, c.elements())?;
    let Some(form) = found.form else {
        if found.exhaustive {
            return Ok(None);
        }
        return Err(Error::TooLarge(format!("solution space of dimension {} not exhausted", found.solution_dim)));
    };
    let mats = c.elements().iter().map(|a| a.mul(&form.gram)).collect::<Result<Vec<_>>>()?;
    if mats.iter().any(|a| !a.is_symmetric()) {
        return Err(Error::Validation("symmetric representative has a non-symmetric member".into()));
    }
    RankCode::from_elements(f.clone(), n, n, mats).map(Some)
}
