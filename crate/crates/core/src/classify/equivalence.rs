use rayon::prelude::*;

use super::engine::{accept_all, distance_histogram, rank_histogram, search, to_small, Ctx, Flags, Source, Target};
use super::{EquivalenceMode, EquivalenceWitness};
use crate::code::RankCode;
use crate::error::{Error, Result};
use crate::gf::same_field;
use crate::matgf::{nullspace, rref, MatGF};
use crate::small::SMat;

/// Upper bound on (candidate maps × code size) for [`canonical_form`].
const MAX_CANONICAL_WORK: u128 = 1 << 30;

/// Image of a code under the witness's isometry.
pub fn apply_isometry(w: &EquivalenceWitness, c: &RankCode) -> Result<RankCode> {
    let (m, n) = if w.transposed { (c.n(), c.m()) } else { (c.m(), c.n()) };
    if w.x.shape() != (m, m) || w.y.shape() != (n, n) || w.z.shape() != (m, n) {
        return Err(Error::DimensionMismatch(format!(
            "witness shapes X {:?}, Y {:?}, Z {:?} do not fit a {}x{} code",
            w.x.shape(),
            w.y.shape(),
            w.z.shape(),
            c.m(),
            c.n()
        )));
    }
    for f in [w.x.field(), w.y.field(), w.z.field()] {
        if !same_field(f, c.field()) {
            return Err(Error::FieldMismatch);
        }
    }
    let image = |a: &MatGF| -> Result<MatGF> {
        let a = if w.transposed { a.transpose() } else { a.clone() };
        w.x.mul(&a.frobenius(w.sigma))?.mul(&w.y)?.add(&w.z)
    };
    let els = c.elements().par_iter().map(image).collect::<Result<Vec<_>>>()?;
    let first = &els[0];
    for (a, b) in c.elements().iter().zip(&els).skip(1) {
        assert_eq!(
            a.sub(&c.elements()[0])?.rank(),
            b.sub(first)?.rank(),
            "isometry changed a rank distance"
        );
    }
    RankCode::from_elements(c.field().clone(), m, n, els)
}

fn check_compatible(c: &RankCode, c2: &RankCode) -> Result<()> {
    if !same_field(c.field(), c2.field()) {
        return Err(Error::ParameterMismatch("codes are over different fields".into()));
    }
    if (c.m(), c.n()) != (c2.m(), c2.n()) {
        return Err(Error::ParameterMismatch(format!(
            "shapes {}x{} and {}x{} differ",
            c.m(),
            c.n(),
            c2.m(),
            c2.n()
        )));
    }
    if c.len() != c2.len() {
        return Err(Error::ParameterMismatch(format!("sizes {} and {} differ", c.len(), c2.len())));
    }
    Ok(())
}

/// `(σ, transposed)` pairs in search order: plain branches first.
pub(crate) fn branches(ctx: &Ctx, semilinear: bool) -> Vec<(u32, bool)> {
    let sigmas: Vec<u32> = if semilinear { (0..ctx.ar.field.e()).collect() } else { vec![0] };
    let mut out: Vec<(u32, bool)> = sigmas.iter().map(|&s| (s, false)).collect();
    if ctx.m == ctx.n {
        out.extend(sigmas.iter().map(|&s| (s, true)));
    }
    out
}

fn smat_to_mat(ctx: &Ctx, a: &SMat, r: usize, c: usize) -> MatGF {
    ctx.ar.to_mat(a, r, c)
}

/// Searches for an isometry from `c` onto `c2`.
///
/// Returns `None` when the codes are inequivalent under `mode`. A returned
/// witness has been re-applied to `c` and compared with `c2`.
pub fn are_equivalent(c: &RankCode, c2: &RankCode, mode: EquivalenceMode) -> Result<Option<EquivalenceWitness>> {
    check_compatible(c, c2)?;
    let (f1, f2) = (Flags::of(c), Flags::of(c2));
    if mode == EquivalenceMode::Linear && !(f1.linear && f2.linear) {
        return Err(Error::ParameterMismatch("linear mode needs K-linear codes".into()));
    }
    let ctx = Ctx::new(c.field(), c.m(), c.n())?;
    let semilinear = mode != EquivalenceMode::Linear;
    let translations = mode == EquivalenceMode::Additive && !(f1.additive && f2.additive);
    let found = if translations {
        translated_search(&ctx, c, c2, semilinear)?
    } else {
        if f1.additive != f2.additive || f1.linear != f2.linear {
            return Ok(None);
        }
        let (a, b) = (to_small(c)?, to_small(c2)?);
        if rank_histogram(&ctx, &a) != rank_histogram(&ctx, &b) {
            return Ok(None);
        }
        let tgt = Target::new(&ctx, b, f2);
        first_map(&ctx, &a, f1, &tgt, semilinear)?.map(|(x, y, s, t)| (x, y, s, t, SMat::default()))
    };
    let Some((x, y, sigma, transposed, z)) = found else {
        return Ok(None);
    };
    let mut w = EquivalenceWitness {
        x: smat_to_mat(&ctx, &x, ctx.m, ctx.m),
        y: smat_to_mat(&ctx, &y, ctx.n, ctx.n),
        sigma,
        transposed,
        z: smat_to_mat(&ctx, &z, ctx.m, ctx.n),
        verified: false,
    };
    if apply_isometry(&w, c)? != *c2 {
        return Err(Error::Validation("equivalence witness failed re-verification".into()));
    }
    w.verified = true;
    Ok(Some(w))
}

type Found = (SMat, SMat, u32, bool);

fn first_map(ctx: &Ctx, a: &[SMat], flags: Flags, tgt: &Target, semilinear: bool) -> Result<Option<Found>> {
    for (sigma, t) in branches(ctx, semilinear) {
        let src = Source::twisted(ctx, a, flags, sigma, t);
        if let Some(&(x, y)) = search(ctx, &src, tgt, true, &accept_all)?.first() {
            return Ok(Some((x, y, sigma, t)));
        }
    }
    Ok(None)
}

/// Isometries with a translation part: `φ(A0) = B` for the least `A0 ∈ C`
/// and each `B ∈ C′`, reducing to a search between `C − A0` and `C′ − B`.
fn translated_search(
    ctx: &Ctx,
    c: &RankCode,
    c2: &RankCode,
    semilinear: bool,
) -> Result<Option<(SMat, SMat, u32, bool, SMat)>> {
    let (a, b) = (to_small(c)?, to_small(c2)?);
    if let (Some(h1), Some(h2)) = (distance_histogram(ctx, &a), distance_histogram(ctx, &b)) {
        if h1 != h2 {
            return Ok(None);
        }
    }
    let len = ctx.len();
    let a0 = a[0];
    let src_code = c.translate(&c.elements()[0].neg())?;
    let src_flags = Flags::of(&src_code);
    let src: Vec<SMat> = a.iter().map(|x| ctx.ar.sub_m(x, &a0, len)).collect();
    let first_translate = c2.translate(&c2.elements()[0].neg())?;
    // A coset of an additive group gives the same difference set for every base point.
    let bases: Vec<usize> = if first_translate.is_additively_closed() { vec![0] } else { (0..b.len()).collect() };
    for i in bases {
        let shifted = c2.translate(&c2.elements()[i].neg())?;
        let flags = Flags::of(&shifted);
        if flags.additive != src_flags.additive || flags.linear != src_flags.linear {
            continue;
        }
        let tb: Vec<SMat> = b.iter().map(|x| ctx.ar.sub_m(x, &b[i], len)).collect();
        if rank_histogram(ctx, &src) != rank_histogram(ctx, &tb) {
            continue;
        }
        let tgt = Target::new(ctx, tb, flags);
        if let Some((x, y, s, t)) = first_map(ctx, &src, src_flags, &tgt, semilinear)? {
            // φ(A) = X·twist(A − A0)·Y + B = X·twist(A)·Y + (B − X·twist(A0)·Y).
            let img = ctx.apply(&x, &ctx.twist(&a0, s, t), &y);
            return Ok(Some((x, y, s, t, ctx.ar.sub_m(&b[i], &img, len))));
        }
    }
    Ok(None)
}

/// Least `m×n` matrix (in index order) of each rank.
fn least_of_rank(ctx: &Ctx) -> Vec<Option<SMat>> {
    let len = ctx.len();
    let top = ctx.m.min(ctx.n);
    let mut out: Vec<Option<SMat>> = vec![None; top + 1];
    out[0] = Some(SMat::default());
    let mut missing = top;
    let mut i = 1u64;
    while missing > 0 {
        let a = ctx.ar.decode(i, len);
        let r = ctx.rank(&a);
        if out[r].is_none() {
            out[r] = Some(a);
            missing -= 1;
        }
        i += 1;
    }
    out
}

/// All `Y` with `M·Y = T` (`M` m×n, `Y` n×n, `T` m×n).
fn solve_right(ctx: &Ctx, mm: &SMat, t: &SMat) -> Result<Vec<SMat>> {
    let (m, n) = (ctx.m, ctx.n);
    let f = &ctx.ar.field;
    let nv = n * n;
    let mut rows: Vec<Vec<u32>> = Vec::with_capacity(m * n);
    for a in 0..m {
        for b in 0..n {
            let mut row = vec![0u32; nv + 1];
            for c in 0..n {
                row[c * n + b] = mm.0[a * n + c] as u32;
            }
            row[nv] = t.0[a * n + b] as u32;
            rows.push(row);
        }
    }
    let coeff: Vec<Vec<u32>> = rows.iter().map(|r| r[..nv].to_vec()).collect();
    let pivots = rref(f, &mut rows);
    if pivots.last() == Some(&nv) {
        return Ok(Vec::new());
    }
    let mut particular = SMat::default();
    for (row, &pc) in rows.iter().zip(&pivots) {
        particular.0[pc] = row[nv] as u8;
    }
    let ns: Vec<SMat> = nullspace(f, &coeff, nv).iter().map(|v| ctx.from_row(v)).collect();
    let mut out = vec![particular];
    for g in &ns {
        let mut next = Vec::with_capacity(out.len() * ctx.ar.q);
        for lam in 0..ctx.ar.q as u8 {
            let sg = ctx.ar.scale_m(g, lam, nv);
            next.extend(out.iter().map(|a| ctx.ar.add_m(a, &sg, nv)));
        }
        out = next;
    }
    Ok(out)
}

/// Least sorted image of a code containing 0 under linear or semilinear maps.
fn canonical_zero(ctx: &Ctx, mats: &[SMat], budget_scale: u128) -> Result<Vec<SMat>> {
    let least = least_of_rank(ctx);
    let ranks: Vec<usize> = mats.iter().map(|a| ctx.rank(a)).collect();
    let target = (1..least.len())
        .filter(|&r| ranks.contains(&r))
        .map(|r| (least[r].expect("every rank occurs"), r))
        .min();
    let Some((t, r)) = target else {
        return Ok(mats.to_vec());
    };
    let gl = ctx.gl_m()?;
    let count = ranks.iter().filter(|&&x| x == r).count() as u128;
    let per_x = (ctx.ar.q as u128).pow((ctx.n * (ctx.n - r)) as u32);
    let br = branches(ctx, true);
    let work = count * gl.len() as u128 * per_x * mats.len() as u128 * br.len() as u128 * budget_scale;
    if work > MAX_CANONICAL_WORK {
        return Err(Error::TooLarge(format!("canonical form needs about {work} matrix products")));
    }
    let (m, n) = (ctx.m, ctx.n);
    let mut best: Option<Vec<SMat>> = None;
    for (sigma, tr) in br {
        let d: Vec<SMat> = mats.iter().map(|a| ctx.twist(a, sigma, tr)).collect();
        let starts: Vec<&SMat> = d.iter().filter(|a| ctx.rank(a) == r).collect();
        let local = (0..gl.len())
            .into_par_iter()
            .map(|i| -> Result<Option<Vec<SMat>>> {
                let x = &gl.mats[i];
                let mut local: Option<Vec<SMat>> = None;
                for a in &starts {
                    let xa = ctx.ar.mul_m(x, a, m, m, n);
                    for y in solve_right(ctx, &xa, &t)? {
                        if ctx.ar.rank(&y, n, n) != n {
                            continue;
                        }
                        let mut img: Vec<SMat> = d.iter().map(|b| ctx.apply(x, b, &y)).collect();
                        img.sort_unstable();
                        if local.as_ref().is_none_or(|l| img < *l) {
                            local = Some(img);
                        }
                    }
                }
                Ok(local)
            })
            .collect::<Result<Vec<_>>>()?;
        for cand in local.into_iter().flatten() {
            if best.as_ref().is_none_or(|b| cand < *b) {
                best = Some(cand);
            }
        }
    }
    Ok(best.expect("the identity map is a candidate"))
}

/// The least code, in sorted element-index order, equivalent to `c` under
/// the full isometry group (semilinear maps, transposition, translations).
pub fn canonical_form(c: &RankCode) -> Result<RankCode> {
    let ctx = &Ctx::new(c.field(), c.m(), c.n())?;
    let a = to_small(c)?;
    let len = ctx.len();
    let shifted0 = c.translate(&c.elements()[0].neg())?;
    let bases: Vec<usize> = if shifted0.is_additively_closed() { vec![0] } else { (0..a.len()).collect() };
    let mut best: Option<Vec<SMat>> = None;
    for i in &bases {
        let shifted: Vec<SMat> = a.iter().map(|x| ctx.ar.sub_m(x, &a[*i], len)).collect();
        let cand = canonical_zero(ctx, &shifted, bases.len() as u128)?;
        if best.as_ref().is_none_or(|b| cand < *b) {
            best = Some(cand);
        }
    }
    let els = best.expect("code is nonempty").iter().map(|s| ctx.ar.to_mat(s, ctx.m, ctx.n)).collect();
    RankCode::from_elements(c.field().clone(), ctx.m, ctx.n, els)
}
