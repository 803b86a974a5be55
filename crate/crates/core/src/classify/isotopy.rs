use serde::{Deserialize, Serialize};

use super::engine::{search, to_small, Ctx, Flags, Source, Target};
use crate::algebra::{right_representation, vector_index, Coordinates, Quasifield, SubField};
use crate::error::{Error, Result};
use crate::gf::{Embedding, FieldSpec};
use crate::small::SMat;

/// Maps `F, G, H` from `Q` to `Q′` (as element tables) with `aF ∘′ bG = (a ∘ b)H`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Isotopism {
    pub f: Vec<u32>,
    pub g: Vec<u32>,
    pub h: Vec<u32>,
}

impl Isotopism {
    /// Exhaustive check of the defining identity and of bijectivity.
    pub fn verify(&self, q: &Quasifield, q2: &Quasifield) -> bool {
        let n = q.order();
        let bijective = |m: &[u32]| {
            let mut seen = vec![false; n];
            m.len() == n && m.iter().all(|&x| (x as usize) < n && !std::mem::replace(&mut seen[x as usize], true))
        };
        q2.order() == n
            && bijective(&self.f)
            && bijective(&self.g)
            && bijective(&self.h)
            && (0..n as u32).all(|a| {
                (0..n as u32).all(|b| q2.mul(self.f[a as usize], self.g[b as usize]) == self.h[q.mul(a, b) as usize])
            })
    }
}

/// The subfield of order `k_order` inside the kernel of `q`.
fn kernel_subfield(q: &Quasifield, k_order: u32) -> Result<SubField> {
    let kernel = q.kernel();
    let kf = kernel.field.ok_or(Error::NoCommonKernel)?;
    let big = FieldSpec::from_descriptor(&kf.descriptor)?;
    let (p, mut f, mut t) = (q.p(), 0u32, 1u32);
    while t < k_order {
        t = t.saturating_mul(p);
        f += 1;
    }
    if t != k_order || f == 0 || big.e() % f != 0 {
        return Err(Error::NoCommonKernel);
    }
    let small = FieldSpec::new(p, f, None)?;
    let emb = Embedding::new(&small, &big)?;
    Ok(SubField {
        descriptor: small.descriptor(),
        embedding: (0..small.order()).map(|k| kf.embedding[emb.embed(k) as usize]).collect(),
    })
}

/// Element of `Q` with the given K-coordinates.
fn reverse_coords(co: &Coordinates, order: usize) -> Vec<u32> {
    let kq = co.k.order();
    let mut rev = vec![0u32; order];
    for x in 0..order as u32 {
        rev[vector_index(kq, co.coords(x)) as usize] = x;
    }
    rev
}

/// Decides whether `q2` is isotopic to `q` over the subfield of order `k_order`
/// (default: the prime field) of both kernels.
///
/// With coordinates over `K`, an isotopism is a code equivalence
/// `X·A(w)·Y = A′(wF̃)` whose induced map `F̃` is K-linear; the isotopism is then
/// `(X⁻¹, F̃, Y)`. All equivalences are enumerated until one has a linear `F̃`,
/// which for semifields is always the first one.
pub fn are_isotopic(q: &Quasifield, q2: &Quasifield, k_order: Option<u32>) -> Result<Option<Isotopism>> {
    let k_order = k_order.unwrap_or(q.p());
    let k1 = kernel_subfield(q, k_order)?;
    let k2 = kernel_subfield(q2, k_order)?;
    if q.p() != q2.p() || q.order() != q2.order() {
        return Ok(None);
    }
    let (s1, co1) = right_representation(q, Some(&k1))?;
    let (s2, co2) = right_representation(q2, Some(&k2))?;
    let (c1, c2) = (s1.code(), s2.code());
    let n = s1.n;
    let ctx = Ctx::new(&s1.field, n, n)?;
    let kq = s1.field.order();
    let (f1, f2) = (Flags::of(&c1), Flags::of(&c2));
    let src = Source::new(&ctx, to_small(&c1)?, f1);
    let tgt = Target::new(&ctx, to_small(&c2)?, f2);
    // A(w) indexed by the vector index of w.
    let amap: Vec<SMat> = {
        let mut v = vec![SMat::default(); src.mats.len()];
        for a in &src.mats {
            v[vector_index(kq, &a.0[..n].iter().map(|&x| x as u32).collect::<Vec<_>>()) as usize] = *a;
        }
        v
    };
    let vectors: Vec<Vec<u8>> = (0..amap.len() as u32)
        .map(|i| crate::algebra::index_vector(kq, n, i).into_iter().map(|x| x as u8).collect())
        .collect();
    let induced = |x: &SMat, y: &SMat| -> Option<SMat> {
        // Rows of the candidate matrix of F̃ are the images of the unit vectors.
        let mut fm = SMat::default();
        for i in 0..n {
            let img = ctx.apply(x, &amap[kq.pow(i as u32) as usize], y);
            fm.0[i * n..i * n + n].copy_from_slice(&img.0[..n]);
        }
        let linear = vectors.iter().enumerate().all(|(i, w)| {
            let img = ctx.apply(x, &amap[i], y);
            ctx.ar.vec_mul(w, &fm, n)[..n] == img.0[..n]
        });
        linear.then_some(fm)
    };
    let found = search(&ctx, &src, &tgt, true, &|x, y| induced(x, y).is_some())?;
    let Some(&(x, y)) = found.first() else {
        return Ok(None);
    };
    let fm = induced(&x, &y).expect("accepted pair");
    let xinv = ctx.ar.inverse(&x, n).expect("X is invertible");
    let rev2 = reverse_coords(&co2, q2.order());
    let map_through = |m: &SMat| -> Vec<u32> {
        (0..q.order() as u32)
            .map(|a| {
                let w: Vec<u8> = co1.coords(a).iter().map(|&c| c as u8).collect();
                let img: Vec<u32> = ctx.ar.vec_mul(&w, m, n)[..n].iter().map(|&c| c as u32).collect();
                rev2[vector_index(kq, &img) as usize]
            })
            .collect()
    };
    let iso = Isotopism { f: map_through(&xinv), g: map_through(&fm), h: map_through(&y) };
    if !iso.verify(q, q2) {
        return Err(Error::Validation("isotopism failed re-verification".into()));
    }
    Ok(Some(iso))
}

/// A ring isomorphism `φ: Q → Q′` as an element table, if one exists.
///
/// Any isomorphism is additive, so it is a GF(p)-linear bijection fixed by the
/// images of the additive basis `1, p, p², …`. Those images are chosen one at
/// a time; after each choice `φ` is known on the span of the chosen basis
/// vectors (indices below `p^t`) and every product inside that span is checked.
pub fn are_isomorphic(q: &Quasifield, q2: &Quasifield) -> Option<Vec<u32>> {
    if q.p() != q2.p() || q.dim() != q2.dim() {
        return None;
    }
    let order = q.order();
    let mut phi = vec![0u32; order];
    let mut used = vec![false; order];
    used[0] = true;
    if extend(q, q2, 0, 1, &mut phi, &mut used) {
        Some(phi)
    } else {
        None
    }
}

fn extend(q: &Quasifield, q2: &Quasifield, t: usize, size: usize, phi: &mut [u32], used: &mut [bool]) -> bool {
    if t == q.dim() {
        return true;
    }
    let p = q.p() as usize;
    let next = size * p;
    for img in 1..q2.order() as u32 {
        if used[img as usize] {
            continue;
        }
        // φ(x + d·p^t) = φ(x) + d·img on the new layer.
        let mut ok = true;
        let mut fresh = Vec::with_capacity(next - size);
        for d in 1..p {
            let di = q2.scalar(d as u32, img);
            for x in 0..size {
                let v = q2.add(phi[x], di);
                if used[v as usize] {
                    ok = false;
                    break;
                }
                used[v as usize] = true;
                fresh.push(v);
                phi[d * size + x] = v;
            }
            if !ok {
                break;
            }
        }
        ok = ok && consistent(q, q2, size, next, phi);
        if ok && extend(q, q2, t + 1, next, phi, used) {
            return true;
        }
        for v in fresh {
            used[v as usize] = false;
        }
    }
    false
}

/// Checks `φ(e) = e′` and `φ(a∘b) = φ(a)∘′φ(b)` for products inside the first
/// `next` indices that involve the newest layer `size..next`.
fn consistent(q: &Quasifield, q2: &Quasifield, size: usize, next: usize, phi: &[u32]) -> bool {
    let e = q.identity() as usize;
    if e < next && phi[e] != q2.identity() {
        return false;
    }
    for a in 0..next {
        for b in 0..next {
            let c = q.mul(a as u32, b as u32) as usize;
            if c >= next || (a < size && b < size && c < size) {
                continue;
            }
            if q2.mul(phi[a], phi[b]) != phi[c] {
                return false;
            }
        }
    }
    true
}
