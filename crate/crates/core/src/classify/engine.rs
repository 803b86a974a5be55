//! Shared search kernel: finds pairs `(X, Y)` with `X·D·Y = T` for matrix sets
//! `D`, `T` of one shape, using the compact representation.

use rayon::prelude::*;

use crate::code::RankCode;
use crate::error::{Error, Result};
use crate::gf::FieldSpec;
use crate::matgf::{nullspace, rref};
use crate::small::{from_mat, gl_cached, Arith, GlList, Members, SMat};

/// Upper bound on `|GL(m)|·|GL(n)|` for the unstructured search.
const MAX_PAIRS: u128 = 1 << 28;

/// Upper bound on the number of `Y` candidates enumerated per `X`.
const MAX_NULLSPACE: u64 = 1 << 22;

#[derive(Clone)]
pub(crate) struct Ctx {
    pub ar: Arith,
    pub m: usize,
    pub n: usize,
}

impl Ctx {
    pub fn new(field: &std::sync::Arc<FieldSpec>, m: usize, n: usize) -> Result<Ctx> {
        if m * n > 16 || m * m > 16 || n * n > 16 {
            return Err(Error::TooLarge(format!("{m}x{n} matrices exceed the search kernel")));
        }
        Ok(Ctx { ar: Arith::new(field)?, m, n })
    }

    pub fn len(&self) -> usize {
        self.m * self.n
    }

    /// `X·A·Y` with `X` m×m and `Y` n×n.
    #[inline]
    pub fn apply(&self, x: &SMat, a: &SMat, y: &SMat) -> SMat {
        let xa = self.ar.mul_m(x, a, self.m, self.m, self.n);
        self.ar.mul_m(&xa, y, self.m, self.n, self.n)
    }

    /// `(A or Aᵗ)^σ`; transposition requires a square shape.
    pub fn twist(&self, a: &SMat, sigma: u32, transposed: bool) -> SMat {
        let a = if transposed { self.ar.transpose(a, self.m, self.n) } else { *a };
        self.ar.frob_m(&a, sigma, self.len())
    }

    pub fn rank(&self, a: &SMat) -> usize {
        self.ar.rank(a, self.m, self.n)
    }

    pub fn gl_m(&self) -> Result<std::sync::Arc<GlList>> {
        gl_cached(&self.ar, self.m)
    }

    pub fn gl_n(&self) -> Result<std::sync::Arc<GlList>> {
        gl_cached(&self.ar, self.n)
    }

    fn to_rows(&self, mats: &[SMat]) -> Vec<Vec<u32>> {
        mats.iter().map(|a| a.0[..self.len()].iter().map(|&x| x as u32).collect()).collect()
    }

    pub fn from_row(&self, v: &[u32]) -> SMat {
        let mut s = SMat::default();
        for (slot, &x) in s.0.iter_mut().zip(v) {
            *slot = x as u8;
        }
        s
    }

    /// Greedy K-basis of the span, in the given order.
    pub fn k_basis(&self, mats: &[SMat]) -> Vec<SMat> {
        let f = &self.ar.field;
        let mut echelon: Vec<Vec<u32>> = Vec::new();
        let mut basis = Vec::new();
        for a in mats {
            let mut rows = echelon.clone();
            rows.extend(self.to_rows(std::slice::from_ref(a)));
            if rref(f, &mut rows).len() > echelon.len() {
                echelon = rows;
                basis.push(*a);
            }
        }
        basis
    }

    /// Elements whose GF(p)-span equals that of the whole set.
    pub fn prime_gens(&self, mats: &[SMat]) -> Vec<SMat> {
        let f = &self.ar.field;
        if f.is_prime_field() {
            return self.k_basis(mats);
        }
        let prime = FieldSpec::prime(f.p()).expect("characteristic is prime");
        let expand = |a: &SMat| -> Vec<u32> { a.0[..self.len()].iter().flat_map(|&x| f.coeffs(x as u32)).collect() };
        let mut echelon: Vec<Vec<u32>> = Vec::new();
        let mut gens = Vec::new();
        for a in mats {
            let mut rows = echelon.clone();
            rows.push(expand(a));
            if rref(&prime, &mut rows).len() > echelon.len() {
                echelon = rows;
                gens.push(*a);
            }
        }
        gens
    }

    /// Basis of `{H : Σ A_ij H_ij = 0 for all A in basis}`.
    pub fn annihilator(&self, basis: &[SMat]) -> Vec<SMat> {
        if basis.is_empty() {
            return (0..self.len())
                .map(|i| {
                    let mut s = SMat::default();
                    s.0[i] = 1;
                    s
                })
                .collect();
        }
        nullspace(&self.ar.field, &self.to_rows(basis), self.len()).iter().map(|v| self.from_row(v)).collect()
    }

    /// All K-combinations of `basis`.
    pub fn span(&self, basis: &[SMat]) -> Vec<SMat> {
        let len = self.len();
        let mut out = vec![SMat::default()];
        for b in basis {
            let mut next = Vec::with_capacity(out.len() * self.ar.q);
            for lam in 0..self.ar.q as u8 {
                let sb = self.ar.scale_m(b, lam, len);
                next.extend(out.iter().map(|a| self.ar.add_m(a, &sb, len)));
            }
            out = next;
        }
        out
    }
}

/// A target set prepared for membership tests.
pub(crate) struct Target {
    pub mats: Vec<SMat>,
    pub members: Members,
    pub additive: bool,
    /// Annihilator basis when the set is a K-subspace.
    pub annihilator: Option<Vec<SMat>>,
    /// Invertible elements (square shapes only).
    pub invertible: Vec<SMat>,
}

/// A source set with the data the strategies need.
pub(crate) struct Source {
    pub mats: Vec<SMat>,
    pub additive: bool,
    /// Elements checked on each candidate map.
    pub gens: Vec<SMat>,
    pub basis: Option<Vec<SMat>>,
    /// Least invertible element and its inverse (square shapes only).
    pub a0: Option<(SMat, SMat)>,
}

/// Structure flags of a set of matrices.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Flags {
    pub additive: bool,
    pub linear: bool,
}

impl Flags {
    pub fn of(c: &RankCode) -> Flags {
        Flags { additive: c.is_additively_closed(), linear: c.is_linear() }
    }
}

pub(crate) fn to_small(c: &RankCode) -> Result<Vec<SMat>> {
    c.elements().iter().map(from_mat).collect()
}

impl Target {
    pub fn new(ctx: &Ctx, mut mats: Vec<SMat>, flags: Flags) -> Target {
        mats.sort();
        let members = Members::new(&ctx.ar, ctx.len(), &mats);
        let annihilator = flags.linear.then(|| ctx.annihilator(&ctx.k_basis(&mats)));
        let invertible = if ctx.m == ctx.n {
            mats.iter().filter(|a| ctx.rank(a) == ctx.n).copied().collect()
        } else {
            Vec::new()
        };
        Target { mats, members, additive: flags.additive, annihilator, invertible }
    }

    #[inline]
    pub fn contains(&self, ctx: &Ctx, a: &SMat) -> bool {
        self.members.contains(&ctx.ar, ctx.len(), a)
    }
}

impl Source {
    pub fn new(ctx: &Ctx, mut mats: Vec<SMat>, flags: Flags) -> Source {
        mats.sort();
        let gens = if flags.additive { ctx.prime_gens(&mats) } else { mats.clone() };
        let basis = flags.linear.then(|| ctx.k_basis(&mats));
        let a0 = if ctx.m == ctx.n {
            mats.iter().find_map(|a| ctx.ar.inverse(a, ctx.n).map(|inv| (*a, inv)))
        } else {
            None
        };
        Source { mats, additive: flags.additive, gens, basis, a0 }
    }

    /// The image of the source under `A ↦ (A or Aᵗ)^σ`.
    pub fn twisted(ctx: &Ctx, mats: &[SMat], flags: Flags, sigma: u32, transposed: bool) -> Source {
        Source::new(ctx, mats.iter().map(|a| ctx.twist(a, sigma, transposed)).collect(), flags)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Strategy {
    Conjugacy,
    Linear,
    Normalized,
    Pairs,
}

fn choose(ctx: &Ctx, src: &Source, tgt: &Target) -> Result<Strategy> {
    if src.a0.is_some() && !tgt.invertible.is_empty() && src.mats.len() > ctx.ar.q {
        let conj = tgt.invertible.len() as u128 * tgt.mats.len() as u128;
        if conj <= ctx.gl_m()?.len() as u128 * 256 {
            return Ok(Strategy::Conjugacy);
        }
    }
    if src.basis.is_some() && tgt.annihilator.is_some() {
        return Ok(Strategy::Linear);
    }
    if src.a0.is_some() && !tgt.invertible.is_empty() {
        return Ok(Strategy::Normalized);
    }
    let pairs = ctx.gl_m()?.len() as u128 * ctx.gl_n()?.len() as u128;
    if pairs > MAX_PAIRS {
        return Err(Error::TooLarge(format!("{pairs} candidate pairs (X, Y)")));
    }
    Ok(Strategy::Pairs)
}

/// Basis of the `Y` with `X·B_i·Y ∈ span(T)` for every basis matrix `B_i`.
fn linear_solutions(ctx: &Ctx, x: &SMat, basis: &[SMat], ann: &[SMat]) -> Vec<SMat> {
    let (m, n) = (ctx.m, ctx.n);
    let ar = &ctx.ar;
    let mut rows: Vec<Vec<u32>> = Vec::with_capacity(basis.len() * ann.len());
    for b in basis {
        let xb = ar.mul_m(x, b, m, m, n);
        for h in ann {
            let mut row = vec![0u32; n * n];
            for c in 0..n {
                for bcol in 0..n {
                    let mut s = 0u8;
                    for a in 0..m {
                        s = ar.add(s, ar.mul(xb.0[a * n + c], h.0[a * n + bcol]));
                    }
                    row[c * n + bcol] = s as u32;
                }
            }
            rows.push(row);
        }
    }
    if rows.is_empty() {
        (0..n * n)
            .map(|i| {
                let mut s = SMat::default();
                s.0[i] = 1;
                s
            })
            .collect()
    } else {
        nullspace(&ar.field, &rows, n * n).iter().map(|v| ctx.from_row(v)).collect()
    }
}

fn combos(ctx: &Ctx, gens: &[SMat], len: usize) -> Result<Vec<SMat>> {
    let total = (ctx.ar.q as u64).checked_pow(gens.len() as u32).unwrap_or(u64::MAX);
    if total > MAX_NULLSPACE {
        return Err(Error::TooLarge(format!("{total} solutions of the linear system")));
    }
    let mut out = vec![SMat::default()];
    for g in gens {
        let mut next = Vec::with_capacity(out.len() * ctx.ar.q);
        for lam in 0..ctx.ar.q as u8 {
            let sg = ctx.ar.scale_m(g, lam, len);
            next.extend(out.iter().map(|a| ctx.ar.add_m(a, &sg, len)));
        }
        out = next;
    }
    Ok(out)
}

/// Maps found for one `X`.
fn per_x(
    ctx: &Ctx,
    strategy: Strategy,
    x: &SMat,
    xinv: &SMat,
    src: &Source,
    tgt: &Target,
    first_only: bool,
    accept: &(dyn Fn(&SMat, &SMat) -> bool + Sync),
) -> Result<Vec<SMat>> {
    let n = ctx.n;
    let maps_into = |y: &SMat| src.gens.iter().all(|g| tgt.contains(ctx, &ctx.apply(x, g, y)));
    let mut out = Vec::new();
    match strategy {
        Strategy::Linear => {
            let basis = src.basis.as_ref().expect("linear strategy");
            let ann = tgt.annihilator.as_ref().expect("linear strategy");
            let ns = linear_solutions(ctx, x, basis, ann);
            if ns.is_empty() {
                return Ok(out);
            }
            for y in combos(ctx, &ns, n * n)? {
                if ctx.ar.rank(&y, n, n) == n && maps_into(&y) && accept(x, &y) {
                    out.push(y);
                    if first_only {
                        break;
                    }
                }
            }
        }
        Strategy::Normalized => {
            let (_, a0inv) = src.a0.expect("normalized strategy");
            let left = ctx.ar.mul_m(&a0inv, xinv, n, n, n);
            for b in &tgt.invertible {
                let y = ctx.ar.mul_m(&left, b, n, n, n);
                if maps_into(&y) && accept(x, &y) {
                    out.push(y);
                    if first_only {
                        break;
                    }
                }
            }
        }
        Strategy::Conjugacy => unreachable!("handled before the X loop"),
        Strategy::Pairs => {
            let gl_n = ctx.gl_n()?;
            for y in &gl_n.mats {
                if maps_into(y) && accept(x, y) {
                    out.push(*y);
                    if first_only {
                        break;
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Finds pairs `(X, Y)` of invertible matrices with `X·D·Y = T`.
///
/// `D` and `T` must have the same size. With `first_only` the result holds
/// the first pair found in the strategy's fixed search order; otherwise every
/// pair, in that order. `accept` is an extra filter on found pairs.
pub(crate) fn search(
    ctx: &Ctx,
    src: &Source,
    tgt: &Target,
    first_only: bool,
    accept: &(dyn Fn(&SMat, &SMat) -> bool + Sync),
) -> Result<Vec<(SMat, SMat)>> {
    if src.mats.len() != tgt.mats.len() || src.additive != tgt.additive {
        return Ok(Vec::new());
    }
    if src.basis.is_some() != tgt.annihilator.is_some() {
        return Ok(Vec::new());
    }
    let strategy = choose(ctx, src, tgt)?;
    if strategy == Strategy::Conjugacy {
        return conjugacy_search(ctx, src, tgt, first_only, accept);
    }
    let gl = ctx.gl_m()?;
    let idx = 0..gl.len();
    let run = |i: usize| per_x(ctx, strategy, &gl.mats[i], &gl.invs[i], src, tgt, first_only, accept);
    if first_only {
        let hit = idx
            .into_par_iter()
            .map(|i| run(i).map(|ys| ys.first().map(|y| (gl.mats[i], *y))))
            .find_first(|r| !matches!(r, Ok(None)));
        match hit {
            Some(Ok(Some(pair))) => Ok(vec![pair]),
            Some(Err(e)) => Err(e),
            _ => Ok(Vec::new()),
        }
    } else {
        let per: Vec<Vec<(SMat, SMat)>> = idx
            .into_par_iter()
            .map(|i| run(i).map(|ys| ys.into_iter().map(|y| (gl.mats[i], y)).collect()))
            .collect::<Result<_>>()?;
        Ok(per.into_iter().flatten().collect())
    }
}

/// Square shapes with an invertible `A0` in the source.
///
/// Writing `B = X·A0·Y`, every source element satisfies
/// `X·A·Y = X·(A·A0⁻¹)·X⁻¹·B`, so `X` conjugates each `A·A0⁻¹` into
/// `T·B⁻¹`. The characteristic polynomials of `A·A0⁻¹` must then match those
/// of `C·B⁻¹`, and fixing the image `C` of one further element `A1` leaves
/// the linear system `X·(A1·A0⁻¹) = (C·B⁻¹)·X`. Each solution is found exactly
/// once, under the pair `(B, C)` it sends `(A0, A1)` to.
fn conjugacy_search(
    ctx: &Ctx,
    src: &Source,
    tgt: &Target,
    first_only: bool,
    accept: &(dyn Fn(&SMat, &SMat) -> bool + Sync),
) -> Result<Vec<(SMat, SMat)>> {
    let (ar, n) = (&ctx.ar, ctx.n);
    let (a0, a0inv) = src.a0.expect("conjugacy strategy");
    let poly = |a: &SMat, inv: &SMat| ar.charpoly(&ar.mul_m(a, inv, n, n, n), n);
    let src_polys: Vec<u32> = src.mats.iter().map(|a| poly(a, &a0inv)).collect();
    let mut sig = src_polys.clone();
    sig.sort_unstable();
    // A1 outside the line through A0, with the fewest expected solutions.
    let scalars: Vec<SMat> = (0..ar.q as u8).map(|l| ar.scale_m(&a0, l, n * n)).collect();
    let Some((a1, m1)) = src
        .mats
        .iter()
        .zip(&src_polys)
        .filter(|(a, _)| !scalars.contains(a))
        .map(|(a, &pa)| {
            let m1 = ar.mul_m(a, &a0inv, n, n, n);
            let centralizer = commuting_solutions(ctx, &m1, &m1).len();
            let matches = src_polys.iter().filter(|&&p| p == pa).count();
            ((centralizer, matches), (*a, m1))
        })
        .min_by_key(|(score, (a, _))| ((ar.q as u64).pow(score.0 as u32) * score.1 as u64, *a))
        .map(|(_, pair)| pair)
    else {
        return Ok(Vec::new());
    };
    let p1 = poly(&a1, &a0inv);
    let per_b = |b: &SMat| -> Result<Vec<(SMat, SMat)>> {
        let mut out = Vec::new();
        let binv = ar.inverse(b, n).expect("target element is invertible");
        let polys: Vec<u32> = tgt.mats.iter().map(|c| poly(c, &binv)).collect();
        let mut tsig = polys.clone();
        tsig.sort_unstable();
        if tsig != sig {
            return Ok(out);
        }
        for (c, _) in tgt.mats.iter().zip(&polys).filter(|(_, &pc)| pc == p1) {
            let nmat = ar.mul_m(c, &binv, n, n, n);
            let ns = commuting_solutions(ctx, &m1, &nmat);
            if ns.is_empty() {
                continue;
            }
            for x in combos(ctx, &ns, n * n)? {
                let Some(xinv) = ar.inverse(&x, n) else { continue };
                let y = ar.mul_m(&ar.mul_m(&a0inv, &xinv, n, n, n), b, n, n, n);
                if src.gens.iter().all(|g| tgt.contains(ctx, &ctx.apply(&x, g, &y))) && accept(&x, &y) {
                    out.push((x, y));
                    if first_only {
                        return Ok(out);
                    }
                }
            }
        }
        Ok(out)
    };
    if first_only {
        let hit = tgt.invertible.par_iter().map(per_b).find_first(|r| !matches!(r, Ok(v) if v.is_empty()));
        match hit {
            Some(Ok(v)) => Ok(v),
            Some(Err(e)) => Err(e),
            None => Ok(Vec::new()),
        }
    } else {
        let per: Vec<Vec<(SMat, SMat)>> = tgt.invertible.par_iter().map(per_b).collect::<Result<_>>()?;
        Ok(per.into_iter().flatten().collect())
    }
}

/// Basis of the `X` with `X·M = N·X`.
fn commuting_solutions(ctx: &Ctx, m: &SMat, nm: &SMat) -> Vec<SMat> {
    let (ar, n) = (&ctx.ar, ctx.n);
    let mut rows = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            // (X·M − N·X)_ij as a form in the entries X_ab.
            let mut row = vec![0u32; n * n];
            for k in 0..n {
                row[i * n + k] = ar.add(row[i * n + k] as u8, m.0[k * n + j]) as u32;
                row[k * n + j] = ar.sub(row[k * n + j] as u8, nm.0[i * n + k]) as u32;
            }
            rows.push(row);
        }
    }
    nullspace(&ar.field, &rows, n * n).iter().map(|v| ctx.from_row(v)).collect()
}

pub(crate) fn accept_all(_: &SMat, _: &SMat) -> bool {
    true
}

/// Rank histogram of a set of matrices.
pub(crate) fn rank_histogram(ctx: &Ctx, mats: &[SMat]) -> Vec<usize> {
    let mut h = vec![0usize; ctx.m.min(ctx.n) + 1];
    for a in mats {
        h[ctx.rank(a)] += 1;
    }
    h
}

/// Sorted multiset of pairwise distances, or `None` when too expensive.
pub(crate) fn distance_histogram(ctx: &Ctx, mats: &[SMat]) -> Option<Vec<usize>> {
    if mats.len() > 2048 {
        return None;
    }
    let len = ctx.len();
    let h = mats
        .par_iter()
        .enumerate()
        .map(|(i, a)| {
            let mut h = vec![0usize; ctx.m.min(ctx.n) + 1];
            for b in &mats[i + 1..] {
                h[ctx.rank(&ctx.ar.sub_m(a, b, len))] += 1;
            }
            h
        })
        .reduce(
            || vec![0usize; ctx.m.min(ctx.n) + 1],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    Some(h)
}
