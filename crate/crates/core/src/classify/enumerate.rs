//! Depth-first enumeration of semifield spreadsets over a prime field.
//!
//! A semifield on `W = GF(p)^n` with identity `e_1` is fixed by the matrices
//! `R(e_1) = I, R(e_2), …, R(e_n)` of right multiplication, where `R(e_i)` has
//! first row `e_i` and every nonzero GF(p)-combination is invertible. Two such
//! semifields are isomorphic exactly when they differ by a change of basis
//! `P` fixing `e_1`; orbits under that group are the isomorphism classes.

use std::collections::HashMap;

use rayon::prelude::*;

use super::engine::{accept_all, search, Ctx, Flags, Source, Target};
use super::{PartialClassification, ResumeToken, SearchControl};
use crate::algebra::{quasifield_from_code, Quasifield};
use crate::code::RankCode;
use crate::error::{Error, Result};
use crate::gf::FieldSpec;
use crate::matgf::MatGF;
use crate::small::{gl_cached, identity, Arith, IndexSet, SMat};

/// Largest number of candidates per level, `p^(n(n-1))`.
pub const MAX_LEVEL_CANDIDATES: u64 = 1 << 16;

/// Level-2 candidates processed between budget checks.
const CHUNK: usize = 64;

const STAGE: &str = "semifields";

/// One isomorphism class.
#[derive(Clone, Debug)]
pub struct SemifieldClass {
    pub quasifield: Quasifield,
    /// `R(e_1) = I, R(e_2), …, R(e_n)` over GF(p) for the orbit's least member.
    pub basis: Vec<MatGF>,
    /// Order of the automorphism group.
    pub automorphisms: usize,
    pub is_field: bool,
    /// Index of the isotopy class over GF(p).
    pub isotopy_class: usize,
}

impl SemifieldClass {
    /// The spreadset `{R(a)}` as a GF(p)-linear MRD code.
    pub fn code(&self) -> RankCode {
        let f = self.basis[0].field().clone();
        let n = self.basis.len();
        RankCode::from_basis(f, n, n, self.basis.clone()).expect("spreadset basis is independent")
    }
}

/// All semifields of order `p^n` up to isomorphism, with their isotopy classes.
#[derive(Clone, Debug)]
pub struct SemifieldCensus {
    pub p: u32,
    pub n: usize,
    /// Number of normalized spreadsets, i.e. semifield structures on `W` with identity `e_1`.
    pub spreadsets: usize,
    pub classes: Vec<SemifieldClass>,
    pub isotopy_classes: usize,
}

impl SemifieldCensus {
    pub fn proper(&self) -> impl Iterator<Item = &SemifieldClass> {
        self.classes.iter().filter(|c| !c.is_field)
    }

    /// Isotopy classes that contain a proper semifield.
    pub fn proper_isotopy_classes(&self) -> usize {
        let mut ids: Vec<usize> = self.proper().map(|c| c.isotopy_class).collect();
        ids.sort_unstable();
        ids.dedup();
        ids.len()
    }
}

pub fn enumerate_semifields(p: u32, n: usize) -> Result<SemifieldCensus> {
    enumerate_semifields_with(p, n, &SearchControl::default())
}

struct Dfs<'a> {
    ar: &'a Arith,
    n: usize,
    invertible: IndexSet,
    /// Candidates per level `i ≥ 1`: matrices with first row `e_{i+1}`.
    candidates: Vec<Vec<SMat>>,
}

impl Dfs<'_> {
    fn is_inv(&self, a: &SMat) -> bool {
        self.invertible.contains(self.ar.encode(a, self.n * self.n))
    }

    /// `M` extends `span` if `λM + s` is invertible for all `λ ≠ 0`, `s ∈ span`.
    fn extends(&self, span: &[SMat], m: &SMat) -> bool {
        let len = self.n * self.n;
        (1..self.ar.q as u8).all(|lam| {
            let lm = self.ar.scale_m(m, lam, len);
            span.iter().all(|s| self.is_inv(&self.ar.add_m(&lm, s, len)))
        })
    }

    fn grow(&self, span: &[SMat], m: &SMat) -> Vec<SMat> {
        let len = self.n * self.n;
        let mut out = Vec::with_capacity(span.len() * self.ar.q);
        for lam in 0..self.ar.q as u8 {
            let lm = self.ar.scale_m(m, lam, len);
            out.extend(span.iter().map(|s| self.ar.add_m(&lm, s, len)));
        }
        out
    }

    /// Leaves below a partial spreadset; returns the number of nodes visited.
    fn descend(&self, level: usize, span: &[SMat], path: &mut Vec<SMat>, leaves: &mut Vec<Vec<SMat>>) -> u64 {
        if level == self.n {
            leaves.push(path.clone());
            return 1;
        }
        let mut nodes = 1;
        for m in &self.candidates[level] {
            if self.extends(span, m) {
                path.push(*m);
                nodes += self.descend(level + 1, &self.grow(span, m), path, leaves);
                path.pop();
            }
        }
        nodes
    }
}

fn encode_leaf(ar: &Arith, n: usize, leaf: &[SMat]) -> Vec<u64> {
    leaf.iter().map(|a| ar.encode(a, n * n)).collect()
}

fn token(p: u32, n: usize, cursor: usize, ar: &Arith, leaves: &[Vec<SMat>]) -> ResumeToken {
    ResumeToken {
        stage: STAGE.into(),
        params: vec![p as u64, n as u64],
        cursor: vec![cursor as u64],
        data: leaves.iter().map(|l| encode_leaf(ar, n, l)).collect(),
    }
}

/// [`enumerate_semifields`] with a node budget and resumption.
///
/// The search tree is split at the second basis vector; the budget is checked
/// after each block of subtrees and the token records the next block.
pub fn enumerate_semifields_with(p: u32, n: usize, control: &SearchControl) -> Result<SemifieldCensus> {
    if n == 0 {
        return Err(Error::InvalidParameters("dimension must be positive".into()));
    }
    let field = FieldSpec::prime(p)?;
    let order = (p as u64).checked_pow(n as u32).unwrap_or(u64::MAX);
    let per_level = (p as u64).checked_pow((n * (n - 1)) as u32).unwrap_or(u64::MAX);
    if order > 128 || n * n > 16 || per_level > MAX_LEVEL_CANDIDATES {
        return Err(Error::TooLarge(format!(
            "semifield enumeration of order {p}^{n} needs {per_level} candidates per level"
        )));
    }
    let ar = Arith::new(&field)?;
    let len = n * n;
    let mut invertible = IndexSet::new((p as u64).pow(len as u32));
    for i in 0..(p as u64).pow(len as u32) {
        if ar.rank(&ar.decode(i, len), n, n) == n {
            invertible.insert(i);
        }
    }
    let candidates: Vec<Vec<SMat>> = (0..n)
        .map(|level| {
            if level == 0 {
                return Vec::new();
            }
            (0..per_level)
                .map(|idx| {
                    let rest = ar.decode(idx, len - n);
                    let mut m = SMat::default();
                    m.0[level] = 1;
                    m.0[n..len].copy_from_slice(&rest.0[..len - n]);
                    m
                })
                .collect()
        })
        .collect();
    let dfs = Dfs { ar: &ar, n, invertible, candidates };
    let root = dfs.grow(&[SMat::default()], &identity(n));

    let (mut start, mut leaves) = (0usize, Vec::new());
    if let Some(t) = &control.resume {
        if t.stage != STAGE || t.params != [p as u64, n as u64] || t.cursor.len() != 1 {
            return Err(Error::InvalidParameters("resume token belongs to a different search".into()));
        }
        start = t.cursor[0] as usize;
        leaves = t.data.iter().map(|l| l.iter().map(|&i| ar.decode(i, len)).collect()).collect();
    }
    let mut nodes = 0u64;
    if n == 1 {
        leaves = vec![Vec::new()];
    } else {
        let level2 = &dfs.candidates[1];
        while start < level2.len() {
            if let Some(max) = control.max_nodes {
                if nodes >= max {
                    return Err(Error::BudgetExceeded(Box::new(PartialClassification {
                        representatives: Vec::new(),
                        token: token(p, n, start, &ar, &leaves),
                    })));
                }
            }
            let end = (start + CHUNK).min(level2.len());
            let parts: Vec<(u64, Vec<Vec<SMat>>)> = level2[start..end]
                .par_iter()
                .map(|m| {
                    let mut out = Vec::new();
                    if !dfs.extends(&root, m) {
                        return (0, out);
                    }
                    let mut path = vec![*m];
                    let visited = dfs.descend(2, &dfs.grow(&root, m), &mut path, &mut out);
                    (visited, out)
                })
                .collect();
            for (v, mut l) in parts {
                nodes += v;
                leaves.append(&mut l);
            }
            start = end;
        }
    }
    leaves.sort();
    let classes = orbit_classes(&ar, n, &leaves)?;
    let spreadsets = leaves.len();
    let (classes, isotopy_classes) = group_isotopy(&field, n, classes)?;
    Ok(SemifieldCensus { p, n, spreadsets, classes, isotopy_classes })
}

/// `R′(e_i) = P⁻¹·(Σ_j (P⁻¹)_ij R(e_j))·P` for the full basis `R(e_1..e_n)`.
fn transform(ar: &Arith, n: usize, full: &[SMat], p: &SMat, pinv: &SMat) -> Vec<SMat> {
    let len = n * n;
    (1..n)
        .map(|i| {
            let mut s = SMat::default();
            for (j, r) in full.iter().enumerate() {
                let c = pinv.0[i * n + j];
                if c != 0 {
                    s = ar.add_m(&s, &ar.scale_m(r, c, len), len);
                }
            }
            ar.mul_m(&ar.mul_m(pinv, &s, n, n, n), p, n, n, n)
        })
        .collect()
}

/// Isomorphism classes as orbits of the stabilizer of `e_1` in GL(n, p).
fn orbit_classes(ar: &Arith, n: usize, leaves: &[Vec<SMat>]) -> Result<Vec<(Vec<SMat>, usize)>> {
    let gl = gl_cached(ar, n)?;
    let stab: Vec<(SMat, SMat)> = gl
        .mats
        .iter()
        .zip(&gl.invs)
        .filter(|(m, _)| m.0[0] == 1 && m.0[1..n].iter().all(|&x| x == 0))
        .map(|(a, b)| (*a, *b))
        .collect();
    let index: HashMap<&Vec<SMat>, usize> = leaves.iter().enumerate().map(|(i, l)| (l, i)).collect();
    let mut seen = vec![false; leaves.len()];
    let mut out = Vec::new();
    for (i, leaf) in leaves.iter().enumerate() {
        if seen[i] {
            continue;
        }
        let full: Vec<SMat> = std::iter::once(identity(n)).chain(leaf.iter().copied()).collect();
        let images: Vec<usize> = stab
            .par_iter()
            .map(|(p, pinv)| {
                let img = transform(ar, n, &full, p, pinv);
                *index.get(&img).expect("isomorphic image of a spreadset is enumerated")
            })
            .collect();
        let mut orbit = 0;
        for j in images {
            if !seen[j] {
                seen[j] = true;
                orbit += 1;
            }
        }
        out.push((leaf.clone(), stab.len() / orbit));
    }
    Ok(out)
}

/// Groups isomorphism classes into isotopy classes over GF(p): for semifields
/// an isotopism is the same as an untransposed linear equivalence of codes.
fn group_isotopy(
    field: &std::sync::Arc<FieldSpec>,
    n: usize,
    classes: Vec<(Vec<SMat>, usize)>,
) -> Result<(Vec<SemifieldClass>, usize)> {
    let ctx = Ctx::new(field, n, n)?;
    let flags = Flags { additive: true, linear: true };
    let mut reps: Vec<Target> = Vec::new();
    let mut out = Vec::with_capacity(classes.len());
    for (leaf, automorphisms) in classes {
        let full: Vec<SMat> = std::iter::once(identity(n)).chain(leaf).collect();
        let basis: Vec<MatGF> = full.iter().map(|a| ctx.ar.to_mat(a, n, n)).collect();
        let code = RankCode::from_basis(field.clone(), n, n, basis.clone())?;
        let quasifield = quasifield_from_code(&code)?;
        let is_field = quasifield.is_field();
        let span = ctx.span(&full);
        let src = Source::new(&ctx, span.clone(), flags);
        let mut class = None;
        for (j, t) in reps.iter().enumerate() {
            if !search(&ctx, &src, t, true, &accept_all)?.is_empty() {
                class = Some(j);
                break;
            }
        }
        let isotopy_class = class.unwrap_or_else(|| {
            reps.push(Target::new(&ctx, span, flags));
            reps.len() - 1
        });
        out.push(SemifieldClass { quasifield, basis, automorphisms, is_field, isotopy_class });
    }
    Ok((out, reps.len()))
}
