//! Compact table-driven kernel for the exhaustive searches.
//!
//! Matrices with at most 16 entries over fields of order at most 256 are
//! stored inline as `[u8; 16]`, row-major. The shape is carried by the caller.
//! Byte-wise comparison of two grids of the same shape agrees with the
//! global index order of [`MatGF`].

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::gf::FieldSpec;
use crate::matgf::{gl_order, MatGF};

pub const MAX_ENTRIES: usize = 16;

/// Largest GL(n, q) that is materialized as a list.
pub const MAX_GL_LIST: u128 = 1 << 21;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct SMat(pub [u8; MAX_ENTRIES]);

/// Arithmetic tables for a field of order at most 256.
#[derive(Clone)]
pub struct Arith {
    pub field: Arc<FieldSpec>,
    pub q: usize,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
    frob: Vec<u8>,
}

impl Arith {
    pub fn new(field: &Arc<FieldSpec>) -> Result<Arith> {
        let q = field.order() as usize;
        if q > 256 {
            return Err(Error::TooLarge(format!("compact kernel needs q <= 256, got {q}")));
        }
        let mut add = vec![0u8; q * q];
        let mut mul = vec![0u8; q * q];
        for a in 0..q {
            for b in 0..q {
                add[a * q + b] = field.add(a as u32, b as u32) as u8;
                mul[a * q + b] = field.mul(a as u32, b as u32) as u8;
            }
        }
        let neg = (0..q).map(|a| field.neg(a as u32) as u8).collect();
        let inv = (0..q).map(|a| field.inv(a as u32).unwrap_or(0) as u8).collect();
        let frob = (0..q).map(|a| field.frobenius(a as u32, 1) as u8).collect();
        Ok(Arith { field: field.clone(), q, add, mul, neg, inv, frob })
    }

    #[inline(always)]
    pub fn add(&self, a: u8, b: u8) -> u8 {
        self.add[a as usize * self.q + b as usize]
    }

    #[inline(always)]
    pub fn mul(&self, a: u8, b: u8) -> u8 {
        self.mul[a as usize * self.q + b as usize]
    }

    #[inline(always)]
    pub fn neg(&self, a: u8) -> u8 {
        self.neg[a as usize]
    }

    #[inline(always)]
    pub fn sub(&self, a: u8, b: u8) -> u8 {
        self.add(a, self.neg(b))
    }

    #[inline(always)]
    pub fn inv(&self, a: u8) -> u8 {
        self.inv[a as usize]
    }

    pub fn frob(&self, a: u8, s: u32) -> u8 {
        let mut x = a;
        for _ in 0..(s % self.field.e()) {
            x = self.frob[x as usize];
        }
        x
    }

    pub fn add_m(&self, a: &SMat, b: &SMat, len: usize) -> SMat {
        let mut out = SMat::default();
        for i in 0..len {
            out.0[i] = self.add(a.0[i], b.0[i]);
        }
        out
    }

    pub fn sub_m(&self, a: &SMat, b: &SMat, len: usize) -> SMat {
        let mut out = SMat::default();
        for i in 0..len {
            out.0[i] = self.sub(a.0[i], b.0[i]);
        }
        out
    }

    pub fn scale_m(&self, a: &SMat, k: u8, len: usize) -> SMat {
        let mut out = SMat::default();
        for i in 0..len {
            out.0[i] = self.mul(a.0[i], k);
        }
        out
    }

    /// `a (r×k) · b (k×c)`.
    pub fn mul_m(&self, a: &SMat, b: &SMat, r: usize, k: usize, c: usize) -> SMat {
        let mut out = SMat::default();
        for i in 0..r {
            for t in 0..k {
                let x = a.0[i * k + t];
                if x == 0 {
                    continue;
                }
                for j in 0..c {
                    let s = &mut out.0[i * c + j];
                    *s = self.add(*s, self.mul(x, b.0[t * c + j]));
                }
            }
        }
        out
    }

    pub fn transpose(&self, a: &SMat, r: usize, c: usize) -> SMat {
        let mut out = SMat::default();
        for i in 0..r {
            for j in 0..c {
                out.0[j * r + i] = a.0[i * c + j];
            }
        }
        out
    }

    pub fn frob_m(&self, a: &SMat, s: u32, len: usize) -> SMat {
        if s.is_multiple_of(self.field.e()) {
            return *a;
        }
        let mut out = *a;
        for x in out.0[..len].iter_mut() {
            *x = self.frob(*x, s);
        }
        out
    }

    pub fn rank(&self, a: &SMat, r: usize, c: usize) -> usize {
        let mut m = *a;
        let mut rank = 0;
        for col in 0..c {
            let Some(p) = (rank..r).find(|&i| m.0[i * c + col] != 0) else {
                continue;
            };
            if p != rank {
                for j in 0..c {
                    m.0.swap(p * c + j, rank * c + j);
                }
            }
            let inv = self.inv(m.0[rank * c + col]);
            for i in rank + 1..r {
                let f = m.0[i * c + col];
                if f == 0 {
                    continue;
                }
                let factor = self.mul(f, inv);
                for j in col..c {
                    let t = self.mul(factor, m.0[rank * c + j]);
                    m.0[i * c + j] = self.sub(m.0[i * c + j], t);
                }
            }
            rank += 1;
            if rank == r {
                break;
            }
        }
        rank
    }

    /// Determinant of the `k×k` matrix picked out by `idx` (row and column
    /// indices into an `n×n` matrix).
    fn principal_det(&self, a: &SMat, n: usize, idx: &[usize]) -> u8 {
        let k = idx.len();
        let mut m = [0u8; MAX_ENTRIES];
        for (r, &i) in idx.iter().enumerate() {
            for (c, &j) in idx.iter().enumerate() {
                m[r * k + c] = a.0[i * n + j];
            }
        }
        let mut det = 1u8;
        for col in 0..k {
            let Some(p) = (col..k).find(|&i| m[i * k + col] != 0) else {
                return 0;
            };
            if p != col {
                for j in 0..k {
                    m.swap(p * k + j, col * k + j);
                }
                det = self.neg(det);
            }
            let piv = m[col * k + col];
            det = self.mul(det, piv);
            let inv = self.inv(piv);
            for i in col + 1..k {
                let f = m[i * k + col];
                if f == 0 {
                    continue;
                }
                let factor = self.mul(f, inv);
                for j in col..k {
                    let t = self.mul(factor, m[col * k + j]);
                    m[i * k + j] = self.sub(m[i * k + j], t);
                }
            }
        }
        det
    }

    /// Characteristic polynomial of an `n×n` matrix, packed base `q`: the
    /// coefficient sums of principal minors of each size.
    pub fn charpoly(&self, a: &SMat, n: usize) -> u32 {
        let mut sums = [0u8; 5];
        let mut idx = [0usize; 4];
        for mask in 1u32..1 << n {
            let mut k = 0;
            for i in 0..n {
                if mask >> i & 1 == 1 {
                    idx[k] = i;
                    k += 1;
                }
            }
            sums[k] = self.add(sums[k], self.principal_det(a, n, &idx[..k]));
        }
        sums[1..=n].iter().fold(0u32, |acc, &c| acc * self.q as u32 + c as u32)
    }

    pub fn inverse(&self, a: &SMat, n: usize) -> Option<SMat> {
        let mut m = *a;
        let mut inv = identity(n);
        for col in 0..n {
            let p = (col..n).find(|&i| m.0[i * n + col] != 0)?;
            if p != col {
                for j in 0..n {
                    m.0.swap(p * n + j, col * n + j);
                    inv.0.swap(p * n + j, col * n + j);
                }
            }
            let pi = self.inv(m.0[col * n + col]);
            for j in 0..n {
                m.0[col * n + j] = self.mul(m.0[col * n + j], pi);
                inv.0[col * n + j] = self.mul(inv.0[col * n + j], pi);
            }
            for i in 0..n {
                let f = m.0[i * n + col];
                if i == col || f == 0 {
                    continue;
                }
                for j in 0..n {
                    let t = self.mul(f, m.0[col * n + j]);
                    m.0[i * n + j] = self.sub(m.0[i * n + j], t);
                    let t = self.mul(f, inv.0[col * n + j]);
                    inv.0[i * n + j] = self.sub(inv.0[i * n + j], t);
                }
            }
        }
        Some(inv)
    }

    pub fn encode(&self, a: &SMat, len: usize) -> u64 {
        a.0[..len].iter().fold(0u64, |acc, &x| acc * self.q as u64 + x as u64)
    }

    pub fn decode(&self, mut idx: u64, len: usize) -> SMat {
        let mut out = SMat::default();
        for i in (0..len).rev() {
            out.0[i] = (idx % self.q as u64) as u8;
            idx /= self.q as u64;
        }
        out
    }

    /// Row vector `v` (length r) times `a` (r×c).
    pub fn vec_mul(&self, v: &[u8], a: &SMat, c: usize) -> [u8; MAX_ENTRIES] {
        let mut out = [0u8; MAX_ENTRIES];
        for (i, &x) in v.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for j in 0..c {
                out[j] = self.add(out[j], self.mul(x, a.0[i * c + j]));
            }
        }
        out
    }

    pub fn to_mat(&self, a: &SMat, r: usize, c: usize) -> MatGF {
        MatGF::from_raw(self.field.clone(), r, c, a.0[..r * c].iter().map(|&x| x as u32).collect())
    }
}

pub fn identity(n: usize) -> SMat {
    let mut m = SMat::default();
    for i in 0..n {
        m.0[i * n + i] = 1;
    }
    m
}

pub fn from_mat(a: &MatGF) -> Result<SMat> {
    if a.entries().len() > MAX_ENTRIES || a.field().order() > 256 {
        return Err(Error::TooLarge(format!("{}x{} over GF({})", a.rows(), a.cols(), a.field().order())));
    }
    let mut m = SMat::default();
    for (slot, &x) in m.0.iter_mut().zip(a.entries()) {
        *slot = x as u8;
    }
    Ok(m)
}

/// GL(n, q) with inverses, in grid-index order.
pub struct GlList {
    pub n: usize,
    pub mats: Vec<SMat>,
    pub invs: Vec<SMat>,
}

impl GlList {
    pub fn new(ar: &Arith, n: usize) -> Result<GlList> {
        let order = gl_order(n, ar.q as u64);
        if n * n > MAX_ENTRIES || order > MAX_GL_LIST {
            return Err(Error::TooLarge(format!("GL({n}, {}) has {order} elements", ar.q)));
        }
        let mut mats = Vec::with_capacity(order as usize);
        let mut invs = Vec::with_capacity(order as usize);
        // Build row by row: each row must avoid the span of the previous rows.
        let q = ar.q;
        let rows: Vec<[u8; MAX_ENTRIES]> = (0..(q as u64).pow(n as u32))
            .map(|i| {
                let s = ar.decode(i, n);
                s.0
            })
            .collect();
        let mut cur = SMat::default();
        fn rec(
            ar: &Arith,
            n: usize,
            depth: usize,
            rows: &[[u8; MAX_ENTRIES]],
            cur: &mut SMat,
            mats: &mut Vec<SMat>,
            invs: &mut Vec<SMat>,
        ) {
            if depth == n {
                mats.push(*cur);
                invs.push(ar.inverse(cur, n).expect("rows are independent"));
                return;
            }
            for r in rows {
                cur.0[depth * n..depth * n + n].copy_from_slice(&r[..n]);
                if ar.rank(cur, depth + 1, n) == depth + 1 {
                    rec(ar, n, depth + 1, rows, cur, mats, invs);
                }
            }
            for j in 0..n {
                cur.0[depth * n + j] = 0;
            }
        }
        rec(ar, n, 0, &rows, &mut cur, &mut mats, &mut invs);
        debug_assert_eq!(mats.len() as u128, order);
        Ok(GlList { n, mats, invs })
    }

    pub fn len(&self) -> usize {
        self.mats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mats.is_empty()
    }
}

/// Process-wide cache of GL lists keyed by field and size.
pub fn gl_cached(ar: &Arith, n: usize) -> Result<Arc<GlList>> {
    use std::collections::HashMap;
    use std::sync::{Mutex, OnceLock};
    type Key = (u32, u32, Vec<u32>, usize);
    static CACHE: OnceLock<Mutex<HashMap<Key, Arc<GlList>>>> = OnceLock::new();
    let key = (ar.field.p(), ar.field.e(), ar.field.modulus().to_vec(), n);
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(g) = cache.lock().expect("cache lock").get(&key) {
        return Ok(g.clone());
    }
    let g = Arc::new(GlList::new(ar, n)?);
    cache.lock().expect("cache lock").insert(key, g.clone());
    Ok(g)
}

/// Bitset over grid indices.
#[derive(Clone)]
pub struct IndexSet {
    bits: Vec<u64>,
}

impl IndexSet {
    pub fn new(universe: u64) -> IndexSet {
        IndexSet { bits: vec![0; universe.div_ceil(64) as usize] }
    }

    #[inline]
    pub fn insert(&mut self, i: u64) {
        self.bits[(i >> 6) as usize] |= 1 << (i & 63);
    }

    #[inline]
    pub fn contains(&self, i: u64) -> bool {
        self.bits[(i >> 6) as usize] >> (i & 63) & 1 == 1
    }
}

/// Membership structure for a set of matrices of one shape.
pub enum Members {
    Bits(IndexSet),
    Hash(std::collections::HashSet<SMat>),
}

impl Members {
    pub fn new(ar: &Arith, len: usize, elems: &[SMat]) -> Members {
        let universe = (ar.q as u128).pow(len as u32);
        if universe <= 1 << 26 {
            let mut s = IndexSet::new(universe as u64);
            for e in elems {
                s.insert(ar.encode(e, len));
            }
            Members::Bits(s)
        } else {
            Members::Hash(elems.iter().copied().collect())
        }
    }

    #[inline]
    pub fn contains(&self, ar: &Arith, len: usize, a: &SMat) -> bool {
        match self {
            Members::Bits(s) => s.contains(ar.encode(a, len)),
            Members::Hash(h) => h.contains(a),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn charpoly_is_a_conjugacy_invariant() {
        for (p, n) in [(2, 3), (3, 2), (2, 4)] {
            let f = FieldSpec::prime(p).unwrap();
            let ar = Arith::new(&f).unwrap();
            let gl = GlList::new(&ar, n).unwrap();
            let mut seen = std::collections::BTreeSet::new();
            for (i, a) in gl.mats.iter().enumerate() {
                let c = ar.charpoly(a, n);
                seen.insert(c);
                let (x, xi) = (&gl.mats[(7 * i + 3) % gl.len()], &gl.invs[(7 * i + 3) % gl.len()]);
                let conj = ar.mul_m(&ar.mul_m(x, a, n, n, n), xi, n, n, n);
                assert_eq!(ar.charpoly(&conj, n), c);
            }
            // Every monic polynomial with nonzero constant term occurs once a companion exists.
            assert_eq!(seen.len(), (p as usize).pow(n as u32 - 1) * (p as usize - 1), "GL({n}, {p})");
        }
        // The identity has elementary symmetric sums C(n, k).
        let f = FieldSpec::prime(2).unwrap();
        let ar = Arith::new(&f).unwrap();
        assert_eq!(ar.charpoly(&identity(3), 3), 0b111);
    }

    #[test]
    fn gl_list_sizes_and_inverses() {
        for (p, e, n) in [(2, 1, 2), (2, 1, 3), (3, 1, 2), (2, 2, 2)] {
            let f = FieldSpec::new(p, e, None).unwrap();
            let ar = Arith::new(&f).unwrap();
            let gl = GlList::new(&ar, n).unwrap();
            assert_eq!(gl.len() as u128, gl_order(n, f.order() as u64));
            for (a, b) in gl.mats.iter().zip(&gl.invs) {
                assert_eq!(ar.mul_m(a, b, n, n, n), identity(n));
            }
            assert!(gl.mats.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn rank_matches_generic() {
        let f = FieldSpec::new(3, 1, None).unwrap();
        let ar = Arith::new(&f).unwrap();
        for i in (0..19683u64).step_by(7) {
            let s = ar.decode(i, 9);
            assert_eq!(ar.rank(&s, 3, 3), ar.to_mat(&s, 3, 3).rank());
            assert_eq!(ar.encode(&s, 9), i);
        }
    }
}
