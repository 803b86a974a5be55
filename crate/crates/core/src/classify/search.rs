//! Classification of linear and additive MRD codes of square shape.
//!
//! Codes with `d = n` over a prime field come from the semifield census.
//! Other linear cases grow subspaces one basis matrix at a time from `⟨I⟩`:
//! at each level the candidate extensions of a representative are reduced
//! modulo the subspace and split into orbits of its stabilizer, and children
//! from different parents are merged by an equivalence test.

use std::collections::{BTreeMap, HashMap, HashSet};

use super::engine::{accept_all, rank_histogram, search, Ctx, Flags, Source, Target};
use super::enumerate::enumerate_semifields_with;
use super::{EquivalenceMode, PartialClassification, ResumeToken, SearchControl};
use crate::code::RankCode;
use crate::error::{Error, Result};
use crate::gabidulin::prime_power;
use crate::gf::FieldSpec;
use crate::matgf::rref;
use crate::small::{gl_cached, identity, SMat};

const STAGE: &str = "augment";

/// Representatives of the equivalence classes of MRD codes in `K^{n×n}`
/// with minimum distance `d`, `K = GF(q)`.
pub fn classify_codes(q: u32, n: usize, d: usize, mode: EquivalenceMode) -> Result<Vec<RankCode>> {
    classify_codes_with(q, n, d, mode, &SearchControl::default())
}

/// [`classify_codes`] with a node budget and resumption.
pub fn classify_codes_with(
    q: u32,
    n: usize,
    d: usize,
    mode: EquivalenceMode,
    control: &SearchControl,
) -> Result<Vec<RankCode>> {
    if n == 0 || d == 0 || d > n {
        return Err(Error::InvalidParameters(format!("need 1 <= d <= n, got n={n} d={d}")));
    }
    let (p, e) = prime_power(q)?;
    let field = FieldSpec::new(p, e, None)?;
    let ctx = Ctx::new(&field, n, n)?;
    if d == n && e == 1 {
        return from_census(&ctx, p, n, control);
    }
    if mode != EquivalenceMode::Linear {
        return Err(Error::InvalidParameters(
            "additive classification is only available for d = n over a prime field".into(),
        ));
    }
    if d == 1 {
        let all: Vec<SMat> = (0..n * n)
            .map(|i| {
                let mut s = SMat::default();
                s.0[i] = 1;
                s
            })
            .collect();
        return Ok(vec![to_code(&ctx, &all)?]);
    }
    Augment::new(ctx, d)?.run(q, control)
}

fn to_code(ctx: &Ctx, basis: &[SMat]) -> Result<RankCode> {
    let mats = basis.iter().map(|a| ctx.ar.to_mat(a, ctx.n, ctx.n)).collect();
    RankCode::from_basis(ctx.ar.field.clone(), ctx.n, ctx.n, mats)
}

const LINEAR: Flags = Flags { additive: true, linear: true };

/// `d = n` over GF(p): isotopy classes of semifields, merged under transposition.
fn from_census(ctx: &Ctx, p: u32, n: usize, control: &SearchControl) -> Result<Vec<RankCode>> {
    let census = enumerate_semifields_with(p, n, control)?;
    let mut firsts: Vec<usize> = Vec::new();
    for (i, c) in census.classes.iter().enumerate() {
        if !firsts.iter().any(|&j| census.classes[j].isotopy_class == c.isotopy_class) {
            firsts.push(i);
        }
    }
    let mut reps: Vec<(Vec<SMat>, Target)> = Vec::new();
    for i in firsts {
        let basis: Vec<SMat> =
            census.classes[i].basis.iter().map(crate::small::from_mat).collect::<Result<_>>()?;
        let span = ctx.span(&basis);
        let mut known = false;
        for (_, t) in &reps {
            let src = Source::twisted(ctx, &span, LINEAR, 0, true);
            if !search(ctx, &src, t, true, &accept_all)?.is_empty() {
                known = true;
                break;
            }
        }
        if !known {
            reps.push((basis, Target::new(ctx, span, LINEAR)));
        }
    }
    reps.iter().map(|(b, _)| to_code(ctx, b)).collect()
}

/// A map `A ↦ X·A·Y` or `A ↦ X·Aᵗ·Y`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
struct Map {
    x: SMat,
    y: SMat,
    t: bool,
}

/// A subspace in reduced echelon form together with its elements.
#[derive(Clone)]
struct Space {
    /// Reduced echelon basis (as vectors of length n²), pivot entries 1.
    rows: Vec<SMat>,
    pivots: Vec<usize>,
    elements: Vec<SMat>,
}

struct Augment {
    ctx: Ctx,
    d: usize,
    dim: usize,
}

impl Augment {
    fn new(ctx: Ctx, d: usize) -> Result<Augment> {
        let n = ctx.n;
        Ok(Augment { dim: n * (n - d + 1), ctx, d })
    }

    fn len(&self) -> usize {
        self.ctx.len()
    }

    fn space(&self, basis: &[SMat]) -> Space {
        let f = &self.ctx.ar.field;
        let mut rows: Vec<Vec<u32>> =
            basis.iter().map(|a| a.0[..self.len()].iter().map(|&x| x as u32).collect()).collect();
        let pivots = rref(f, &mut rows);
        let rows: Vec<SMat> = rows.iter().map(|r| self.ctx.from_row(r)).collect();
        let elements = self.ctx.span(&rows);
        Space { rows, pivots, elements }
    }

    fn apply(&self, g: &Map, a: &SMat) -> SMat {
        let b = if g.t { self.ctx.ar.transpose(a, self.ctx.n, self.ctx.n) } else { *a };
        self.ctx.apply(&g.x, &b, &g.y)
    }

    /// `g2 ∘ g1`.
    fn compose(&self, g1: &Map, g2: &Map) -> Map {
        let (ar, n) = (&self.ctx.ar, self.ctx.n);
        let m = |a: &SMat, b: &SMat| ar.mul_m(a, b, n, n, n);
        let tr = |a: &SMat| ar.transpose(a, n, n);
        let g = if g2.t {
            Map { x: m(&g2.x, &tr(&g1.y)), y: m(&tr(&g1.x), &g2.y), t: !g1.t }
        } else {
            Map { x: m(&g2.x, &g1.x), y: m(&g1.y, &g2.y), t: g1.t }
        };
        self.normalize_map(g)
    }

    /// Scales `(X, Y)` to `(λX, λ⁻¹Y)` with the first nonzero entry of `X` equal to 1.
    fn normalize_map(&self, g: Map) -> Map {
        let (ar, len) = (&self.ctx.ar, self.ctx.n * self.ctx.n);
        let lead = g.x.0[..len].iter().copied().find(|&v| v != 0).expect("X is invertible");
        if lead == 1 {
            return g;
        }
        let inv = ar.inv(lead);
        Map { x: ar.scale_m(&g.x, inv, len), y: ar.scale_m(&g.y, lead, len), t: g.t }
    }

    /// A small generating set of a group given by its elements.
    fn generators(&self, elems: &[Map]) -> Vec<Map> {
        let mut gens: Vec<Map> = Vec::new();
        let mut group: HashSet<Map> = HashSet::new();
        let id = Map { x: identity(self.ctx.n), y: identity(self.ctx.n), t: false };
        group.insert(id);
        for g in elems {
            let g = self.normalize_map(*g);
            if group.contains(&g) {
                continue;
            }
            gens.push(g);
            let mut frontier: Vec<Map> = group.iter().copied().collect();
            while let Some(h) = frontier.pop() {
                for s in &gens {
                    let k = self.compose(&h, s);
                    if group.insert(k) {
                        frontier.push(k);
                    }
                }
            }
        }
        gens
    }

    /// Reduces `v` modulo the space and scales its first nonzero entry to 1.
    fn reduce(&self, s: &Space, v: &SMat) -> SMat {
        let (ar, len) = (&self.ctx.ar, self.len());
        let mut w = *v;
        for (row, &pc) in s.rows.iter().zip(&s.pivots) {
            let c = w.0[pc];
            if c != 0 {
                w = ar.sub_m(&w, &ar.scale_m(row, c, len), len);
            }
        }
        match w.0[..len].iter().copied().find(|&x| x != 0) {
            Some(lead) if lead != 1 => ar.scale_m(&w, ar.inv(lead), len),
            _ => w,
        }
    }

    /// Reduced nonzero vectors `v` for which every element of `S + ⟨v⟩ ∖ S` has rank ≥ d.
    fn candidates(&self, s: &Space) -> Vec<SMat> {
        let (ar, len) = (&self.ctx.ar, self.len());
        let free: Vec<usize> = (0..len).filter(|c| !s.pivots.contains(c)).collect();
        let total = (ar.q as u64).pow(free.len() as u32);
        let mut out = Vec::new();
        for idx in 1..total {
            let mut v = SMat::default();
            let mut t = idx;
            for &c in free.iter().rev() {
                v.0[c] = (t % ar.q as u64) as u8;
                t /= ar.q as u64;
            }
            let lead = v.0[..len].iter().copied().find(|&x| x != 0).expect("nonzero");
            if lead != 1 {
                continue;
            }
            let ok = (1..ar.q as u8).all(|lam| {
                let lv = ar.scale_m(&v, lam, len);
                s.elements.iter().all(|a| self.ctx.rank(&ar.add_m(a, &lv, len)) >= self.d)
            });
            if ok {
                out.push(v);
            }
        }
        out.sort();
        out
    }

    /// All maps `g` (untransposed and transposed) with `g(S) = S`.
    fn stabilizer(&self, s: &Space) -> Result<Vec<Map>> {
        let tgt = Target::new(&self.ctx, s.elements.clone(), LINEAR);
        let mut out = Vec::new();
        for t in [false, true] {
            let src = Source::twisted(&self.ctx, &s.elements, LINEAR, 0, t);
            for (x, y) in search(&self.ctx, &src, &tgt, false, &accept_all)? {
                out.push(Map { x, y, t });
            }
        }
        Ok(out)
    }

    /// Stabilizer generators of `⟨I⟩`: conjugations and the transpose.
    fn identity_generators(&self) -> Result<Vec<Map>> {
        let gl = gl_cached(&self.ctx.ar, self.ctx.n)?;
        let mut elems: Vec<Map> =
            gl.mats.iter().zip(&gl.invs).map(|(x, y)| Map { x: *x, y: *y, t: false }).collect();
        elems.push(Map { x: identity(self.ctx.n), y: identity(self.ctx.n), t: true });
        Ok(self.generators(&elems))
    }

    /// Children of one representative, one per orbit of valid extensions.
    fn children(&self, s: &Space, gens: &[Map]) -> Vec<Space> {
        let cands = self.candidates(s);
        let pos: HashMap<SMat, usize> = cands.iter().enumerate().map(|(i, v)| (*v, i)).collect();
        let mut parent: Vec<usize> = (0..cands.len()).collect();
        fn find(parent: &mut [usize], mut i: usize) -> usize {
            while parent[i] != i {
                parent[i] = parent[parent[i]];
                i = parent[i];
            }
            i
        }
        for g in gens {
            for (i, v) in cands.iter().enumerate() {
                let w = self.reduce(s, &self.apply(g, v));
                let j = *pos.get(&w).expect("stabilizer maps valid extensions to valid extensions");
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
        let mut out = Vec::new();
        for i in 0..cands.len() {
            if find(&mut parent, i) == i {
                let mut basis = s.rows.clone();
                basis.push(cands[i]);
                out.push(self.space(&basis));
            }
        }
        out
    }

    /// Rank histograms of the space and its dual, then the sorted per-point
    /// profiles: for each projective point `A`, the sorted list over the other
    /// points `B` of `(rank B, dim row(A)∩row(B), dim col(A)∩col(B))` with the
    /// last two sorted, since transposition swaps rows and columns.
    fn invariant(&self, s: &Space) -> Vec<usize> {
        let ctx = &self.ctx;
        let mut key = rank_histogram(ctx, &s.elements);
        let dual = ctx.span(&ctx.annihilator(&s.rows));
        key.extend(rank_histogram(ctx, &dual));
        let n = ctx.n;
        let points: Vec<(SMat, usize)> = s
            .elements
            .iter()
            .filter(|a| a.0[..n * n].iter().copied().find(|&x| x != 0) == Some(1))
            .map(|a| (*a, ctx.rank(a)))
            .collect();
        let mut profiles: Vec<Vec<usize>> = points
            .iter()
            .map(|(a, ra)| {
                let mut prof: Vec<usize> = points
                    .iter()
                    .filter(|(b, _)| b != a)
                    .map(|(b, rb)| {
                        let dr = ra + rb - self.stacked_rank(a, b, false);
                        let dc = ra + rb - self.stacked_rank(a, b, true);
                        (rb * 16 + dr.min(dc)) * 16 + dr.max(dc)
                    })
                    .collect();
                prof.sort_unstable();
                prof.insert(0, *ra);
                prof
            })
            .collect();
        profiles.sort();
        key.extend(profiles.into_iter().flatten());
        key
    }

    /// Rank of `[A; B]` (rows stacked) or of `[A B]` when `side`.
    fn stacked_rank(&self, a: &SMat, b: &SMat, side: bool) -> usize {
        let (ar, n) = (&self.ctx.ar, self.ctx.n);
        let (a, b) = if side { (ar.transpose(a, n, n), ar.transpose(b, n, n)) } else { (*a, *b) };
        let mut rows: Vec<Vec<u8>> = (0..n).map(|i| a.0[i * n..i * n + n].to_vec()).collect();
        rows.extend((0..n).map(|i| b.0[i * n..i * n + n].to_vec()));
        let mut rank = 0;
        for col in 0..n {
            let Some(p) = (rank..rows.len()).find(|&i| rows[i][col] != 0) else {
                continue;
            };
            rows.swap(p, rank);
            let inv = ar.inv(rows[rank][col]);
            for i in rank + 1..rows.len() {
                let f = ar.mul(rows[i][col], inv);
                if f != 0 {
                    for j in col..n {
                        let t = ar.mul(f, rows[rank][j]);
                        rows[i][j] = ar.sub(rows[i][j], t);
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    fn encode(&self, s: &Space) -> Vec<u64> {
        s.rows.iter().map(|r| self.ctx.ar.encode(r, self.len())).collect()
    }

    fn decode(&self, v: &[u64]) -> Space {
        let basis: Vec<SMat> = v.iter().map(|&i| self.ctx.ar.decode(i, self.len())).collect();
        self.space(&basis)
    }

    fn token(&self, q: u32, level: usize, next: usize, parents: &[Space], children: &[Space]) -> ResumeToken {
        let mut data = vec![vec![parents.len() as u64]];
        data.extend(parents.iter().map(|s| self.encode(s)));
        data.extend(children.iter().map(|s| self.encode(s)));
        ResumeToken {
            stage: STAGE.into(),
            params: vec![q as u64, self.ctx.n as u64, self.d as u64],
            cursor: vec![level as u64, next as u64],
            data,
        }
    }

    fn run(&self, q: u32, control: &SearchControl) -> Result<Vec<RankCode>> {
        let n = self.ctx.n;
        let (mut level, mut next, mut parents, mut children) = (1usize, 0usize, vec![self.space(&[identity(n)])], Vec::new());
        if let Some(t) = &control.resume {
            let params = [q as u64, n as u64, self.d as u64];
            if t.stage != STAGE || t.params != params || t.cursor.len() != 2 || t.data.is_empty() {
                return Err(Error::InvalidParameters("resume token belongs to a different search".into()));
            }
            level = t.cursor[0] as usize;
            next = t.cursor[1] as usize;
            let np = t.data[0].first().copied().unwrap_or(0) as usize;
            parents = t.data[1..1 + np].iter().map(|v| self.decode(v)).collect();
            children = t.data[1 + np..].iter().map(|v| self.decode(v)).collect();
        }
        let mut nodes = 0u64;
        while level < self.dim {
            // Invariant buckets of the children accepted so far.
            let mut buckets: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
            let mut targets: Vec<Target> = Vec::new();
            for (i, c) in children.iter().enumerate() {
                buckets.entry(self.invariant(c)).or_default().push(i);
                targets.push(Target::new(&self.ctx, c.elements.clone(), LINEAR));
            }
            while next < parents.len() {
                if control.max_nodes.is_some_and(|max| nodes >= max) {
                    let reps = parents.iter().map(|s| to_code(&self.ctx, &s.rows)).collect::<Result<_>>()?;
                    return Err(Error::BudgetExceeded(Box::new(PartialClassification {
                        representatives: reps,
                        token: self.token(q, level, next, &parents, &children),
                    })));
                }
                let s = &parents[next];
                let gens = if level == 1 {
                    self.identity_generators()?
                } else {
                    self.generators(&self.stabilizer(s)?)
                };
                for child in self.children(s, &gens) {
                    let key = self.invariant(&child);
                    let bucket = buckets.entry(key).or_default();
                    let mut known = false;
                    for &j in bucket.iter() {
                        if self.equivalent(&child, &targets[j])? {
                            known = true;
                            break;
                        }
                    }
                    if !known {
                        bucket.push(children.len());
                        targets.push(Target::new(&self.ctx, child.elements.clone(), LINEAR));
                        children.push(child);
                    }
                }
                nodes += 1;
                next += 1;
            }
            parents = std::mem::take(&mut children);
            next = 0;
            level += 1;
        }
        parents.iter().map(|s| to_code(&self.ctx, &s.rows)).collect()
    }

    fn equivalent(&self, s: &Space, tgt: &Target) -> Result<bool> {
        for t in [false, true] {
            let src = Source::twisted(&self.ctx, &s.elements, LINEAR, 0, t);
            if !search(&self.ctx, &src, tgt, true, &accept_all)?.is_empty() {
                return Ok(true);
            }
        }
        Ok(false)
    }
}
