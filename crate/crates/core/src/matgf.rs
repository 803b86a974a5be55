//! Dense matrices over a [`FieldSpec`].
//!
//! Row vectors are the convention: a matrix acts on the right, `x ↦ xA`.
//! Entries are element indices in row-major order. Two matrices of the same
//! shape compare by their entry grids with entry (0,0) most significant,
//! which is the canonical index order used for sorting and tie-breaking.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::gf::{same_field, FieldSpec, FqElem, MAX_ENUMERATION};

#[derive(Clone)]
pub struct MatGF {
    field: Arc<FieldSpec>,
    rows: usize,
    cols: usize,
    entries: Vec<u32>,
}

impl fmt::Debug for MatGF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
        }
        write!(f, "]")
    }
}

impl PartialEq for MatGF {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self.entries == other.entries
            && same_field(&self.field, &other.field)
    }
}

impl Eq for MatGF {}

impl Hash for MatGF {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.rows.hash(state);
        self.cols.hash(state);
        self.entries.hash(state);
    }
}

impl PartialOrd for MatGF {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for MatGF {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.rows, self.cols, &self.entries).cmp(&(other.rows, other.cols, &other.entries))
    }
}

impl MatGF {
    pub fn new(field: Arc<FieldSpec>, rows: usize, cols: usize, entries: Vec<u32>) -> Result<MatGF> {
        if rows == 0 || cols == 0 {
            return Err(Error::DimensionMismatch("matrices need at least one row and column".into()));
        }
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        if let Some(&bad) = entries.iter().find(|&&x| x >= field.order()) {
            return Err(Error::Validation(format!("entry {bad} is not an element of GF({})", field.order())));
        }
        Ok(MatGF { field, rows, cols, entries })
    }

    pub fn from_rows(field: Arc<FieldSpec>, rows: &[Vec<u32>]) -> Result<MatGF> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|x| x.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        MatGF::new(field, r, c, rows.concat())
    }

    pub(crate) fn from_raw(field: Arc<FieldSpec>, rows: usize, cols: usize, entries: Vec<u32>) -> MatGF {
        debug_assert_eq!(entries.len(), rows * cols);
        MatGF { field, rows, cols, entries }
    }

    pub fn zero(field: Arc<FieldSpec>, rows: usize, cols: usize) -> MatGF {
        MatGF { field, rows, cols, entries: vec![0; rows * cols] }
    }

    pub fn identity(field: Arc<FieldSpec>, n: usize) -> MatGF {
        let mut m = MatGF::zero(field, n, n);
        for i in 0..n {
            m.entries[i * n + i] = 1;
        }
        m
    }

    /// Matrix of the grid with the given index (entry (0,0) most significant).
    pub fn from_index(field: Arc<FieldSpec>, rows: usize, cols: usize, mut index: u64) -> MatGF {
        let q = field.order() as u64;
        let mut entries = vec![0u32; rows * cols];
        for slot in entries.iter_mut().rev() {
            *slot = (index % q) as u32;
            index /= q;
        }
        MatGF { field, rows, cols, entries }
    }

    /// Grid index, if it fits in 64 bits.
    pub fn index(&self) -> Option<u64> {
        let q = self.field.order() as u64;
        self.entries
            .iter()
            .try_fold(0u64, |acc, &x| acc.checked_mul(q).and_then(|v| v.checked_add(x as u64)))
    }

    pub fn field(&self) -> &Arc<FieldSpec> {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.entries[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&x| x == 0)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    fn check_same(&self, other: &MatGF) -> Result<()> {
        if !same_field(&self.field, &other.field) {
            return Err(Error::FieldMismatch);
        }
        if self.shape() != other.shape() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &MatGF) -> Result<MatGF> {
        self.check_same(other)?;
        let f = &self.field;
        let entries = self.entries.iter().zip(&other.entries).map(|(&a, &b)| f.add(a, b)).collect();
        Ok(MatGF::from_raw(self.field.clone(), self.rows, self.cols, entries))
    }

    pub fn sub(&self, other: &MatGF) -> Result<MatGF> {
        self.check_same(other)?;
        let f = &self.field;
        let entries = self.entries.iter().zip(&other.entries).map(|(&a, &b)| f.sub(a, b)).collect();
        Ok(MatGF::from_raw(self.field.clone(), self.rows, self.cols, entries))
    }

    pub fn neg(&self) -> MatGF {
        let entries = self.entries.iter().map(|&a| self.field.neg(a)).collect();
        MatGF::from_raw(self.field.clone(), self.rows, self.cols, entries)
    }

    pub fn mul(&self, other: &MatGF) -> Result<MatGF> {
        if !same_field(&self.field, &other.field) {
            return Err(Error::FieldMismatch);
        }
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &self.field;
        let mut out = vec![0u32; self.rows * other.cols];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let slot = &mut out[i * other.cols + j];
                    *slot = f.add(*slot, f.mul(a, other.get(k, j)));
                }
            }
        }
        Ok(MatGF::from_raw(self.field.clone(), self.rows, other.cols, out))
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, v: &[u32]) -> Result<Vec<u32>> {
        if v.len() != self.rows {
            return Err(Error::DimensionMismatch(format!("vector of length {} against {} rows", v.len(), self.rows)));
        }
        let f = &self.field;
        let mut out = vec![0u32; self.cols];
        for (i, &a) in v.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, slot) in out.iter_mut().enumerate() {
                *slot = f.add(*slot, f.mul(a, self.get(i, j)));
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> MatGF {
        let mut out = vec![0u32; self.entries.len()];
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[j * self.rows + i] = self.get(i, j);
            }
        }
        MatGF::from_raw(self.field.clone(), self.cols, self.rows, out)
    }

    pub fn scale(&self, k: u32) -> MatGF {
        let entries = self.entries.iter().map(|&a| self.field.mul(a, k)).collect();
        MatGF::from_raw(self.field.clone(), self.rows, self.cols, entries)
    }

    pub fn scale_elem(&self, k: &FqElem) -> Result<MatGF> {
        if !same_field(&self.field, k.field()) {
            return Err(Error::FieldMismatch);
        }
        Ok(self.scale(k.index()))
    }

    /// Entrywise `x ↦ x^(p^s)`.
    pub fn frobenius(&self, s: u32) -> MatGF {
        if s.is_multiple_of(self.field.e()) {
            return self.clone();
        }
        let entries = self.entries.iter().map(|&a| self.field.frobenius(a, s)).collect();
        MatGF::from_raw(self.field.clone(), self.rows, self.cols, entries)
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn rank(&self) -> usize {
        if self.field.p() == 2 && self.field.e() == 1 && self.cols <= 64 {
            return BitMat::from_mat(self).rank();
        }
        self.rank_generic()
    }

    /// Rank by plain Gaussian elimination, without the packed GF(2) path.
    pub fn rank_generic(&self) -> usize {
        let mut rows = self.to_rows();
        rref(&self.field, &mut rows).len()
    }

    pub fn det(&self) -> Result<FqElem> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("determinant of a non-square matrix".into()));
        }
        let f = &self.field;
        let n = self.rows;
        let mut a = self.to_rows();
        let mut det = 1u32;
        for col in 0..n {
            let Some(piv) = (col..n).find(|&r| a[r][col] != 0) else {
                return FqElem::new(self.field.clone(), 0);
            };
            if piv != col {
                a.swap(piv, col);
                det = f.neg(det);
            }
            let pv = a[col][col];
            det = f.mul(det, pv);
            let inv = f.inv(pv).expect("pivot is nonzero");
            for r in col + 1..n {
                let factor = f.mul(a[r][col], inv);
                if factor == 0 {
                    continue;
                }
                for c in col..n {
                    let t = f.mul(factor, a[col][c]);
                    a[r][c] = f.sub(a[r][c], t);
                }
            }
        }
        FqElem::new(self.field.clone(), det)
    }

    pub fn inverse(&self) -> Result<MatGF> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("inverse of a non-square matrix".into()));
        }
        let f = &self.field;
        let n = self.rows;
        let mut a: Vec<Vec<u32>> = (0..n)
            .map(|i| {
                let mut r = self.row(i).to_vec();
                r.extend((0..n).map(|j| u32::from(i == j)));
                r
            })
            .collect();
        for col in 0..n {
            let piv = (col..n).find(|&r| a[r][col] != 0).ok_or(Error::Singular)?;
            a.swap(piv, col);
            let inv = f.inv(a[col][col]).expect("pivot is nonzero");
            for c in 0..2 * n {
                a[col][c] = f.mul(a[col][c], inv);
            }
            for r in 0..n {
                if r == col || a[r][col] == 0 {
                    continue;
                }
                let factor = a[r][col];
                for c in 0..2 * n {
                    let t = f.mul(factor, a[col][c]);
                    a[r][c] = f.sub(a[r][c], t);
                }
            }
        }
        let entries = a.iter().flat_map(|r| r[n..].iter().copied()).collect();
        Ok(MatGF::from_raw(self.field.clone(), n, n, entries))
    }

    pub fn pow(&self, mut k: u64) -> Result<MatGF> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("power of a non-square matrix".into()));
        }
        let mut result = MatGF::identity(self.field.clone(), self.rows);
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul(&base)?;
            }
            base = base.mul(&base)?;
            k >>= 1;
        }
        Ok(result)
    }

    /// Multiplicative order in GL(n, q).
    pub fn order(&self) -> Result<u64> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("order of a non-square matrix".into()));
        }
        if self.rank() < self.rows {
            return Err(Error::Singular);
        }
        let id = MatGF::identity(self.field.clone(), self.rows);
        let mut x = self.clone();
        let mut t = 1u64;
        while x != id {
            x = x.mul(self)?;
            t += 1;
        }
        Ok(t)
    }
}

/// `Tr_{F/GF(p)}(Σ A_ij B_ij)`, the trace of `ABᵗ` pushed down to the prime field.
pub fn trace_pairing(a: &MatGF, b: &MatGF) -> Result<FqElem> {
    a.check_same(b)?;
    let s = bilinear_sum(a, b);
    let prime = FieldSpec::prime(a.field.p())?;
    let t = crate::gf::trace(&a.field, s, &prime)?;
    FqElem::new(prime, t)
}

/// `Σ A_ij B_ij` in the matrices' own field.
pub fn bilinear_sum(a: &MatGF, b: &MatGF) -> u32 {
    let f = &a.field;
    a.entries.iter().zip(&b.entries).fold(0u32, |acc, (&x, &y)| f.add(acc, f.mul(x, y)))
}

/// Order of GL(n, q).
pub fn gl_order(n: usize, q: u64) -> u128 {
    let qn = (q as u128).pow(n as u32);
    (0..n).map(|i| qn - (q as u128).pow(i as u32)).product()
}

/// Stream over GL(n, q) in grid-index order, restartable from any grid offset.
pub struct GlIter {
    field: Arc<FieldSpec>,
    n: usize,
    next: u64,
    end: u64,
}

impl Iterator for GlIter {
    type Item = MatGF;

    fn next(&mut self) -> Option<MatGF> {
        while self.next < self.end {
            let m = MatGF::from_index(self.field.clone(), self.n, self.n, self.next);
            self.next += 1;
            if m.rank() == self.n {
                return Some(m);
            }
        }
        None
    }
}

impl GlIter {
    /// Grid index of the next candidate; pass it back as `offset` to resume.
    pub fn position(&self) -> u64 {
        self.next
    }
}

/// Enumerates GL(n, q) starting at grid index `offset`.
pub fn gl_enumerate(n: usize, field: &Arc<FieldSpec>, offset: u64) -> Result<GlIter> {
    gl_enumerate_range(n, field, offset, u64::MAX)
}

/// Enumerates the invertible matrices with grid index in `[start, end)`.
pub fn gl_enumerate_range(n: usize, field: &Arc<FieldSpec>, start: u64, end: u64) -> Result<GlIter> {
    if n == 0 {
        return Err(Error::DimensionMismatch("n must be positive".into()));
    }
    let total = (field.order() as u128).pow((n * n) as u32);
    if total > MAX_ENUMERATION as u128 {
        return Err(Error::TooLarge(format!("{} grids of size {n}x{n}", total)));
    }
    Ok(GlIter { field: field.clone(), n, next: start, end: end.min(total as u64) })
}

/// Reduced row echelon form in place; zero rows are dropped. Returns pivot columns.
pub fn rref(f: &FieldSpec, rows: &mut Vec<Vec<u32>>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        let Some(piv) = (r..rows.len()).find(|&i| rows[i][col] != 0) else {
            continue;
        };
        rows.swap(piv, r);
        let inv = f.inv(rows[r][col]).expect("pivot is nonzero");
        if inv != 1 {
            for x in rows[r].iter_mut() {
                *x = f.mul(*x, inv);
            }
        }
        for i in 0..rows.len() {
            if i == r || rows[i][col] == 0 {
                continue;
            }
            let factor = rows[i][col];
            for c in col..ncols {
                let t = f.mul(factor, rows[r][c]);
                rows[i][c] = f.sub(rows[i][c], t);
            }
        }
        pivots.push(col);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

/// Basis of `{x : M xᵗ = 0}` for `M` given by rows of length `ncols`.
pub fn nullspace(f: &FieldSpec, rows: &[Vec<u32>], ncols: usize) -> Vec<Vec<u32>> {
    let mut m = rows.to_vec();
    let pivots = rref(f, &mut m);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![0u32; ncols];
            v[fc] = 1;
            for (row, &pc) in m.iter().zip(&pivots) {
                v[pc] = f.neg(row[fc]);
            }
            v
        })
        .collect()
}

/// GF(2) matrix with rows packed into `u64` words (bit `j` is column `j`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitMat {
    pub rows: Vec<u64>,
    pub cols: usize,
}

impl BitMat {
    pub fn from_mat(a: &MatGF) -> BitMat {
        assert!(a.field.p() == 2 && a.field.e() == 1 && a.cols <= 64);
        let rows = (0..a.rows)
            .map(|i| a.row(i).iter().enumerate().fold(0u64, |acc, (j, &x)| acc | ((x as u64) << j)))
            .collect();
        BitMat { rows, cols: a.cols }
    }

    pub fn to_mat(&self, field: Arc<FieldSpec>) -> MatGF {
        let entries = self
            .rows
            .iter()
            .flat_map(|&r| (0..self.cols).map(move |j| ((r >> j) & 1) as u32))
            .collect();
        MatGF::from_raw(field, self.rows.len(), self.cols, entries)
    }

    pub fn rank(&self) -> usize {
        let mut rows = self.rows.clone();
        let mut rank = 0;
        for col in 0..self.cols {
            let bit = 1u64 << col;
            let Some(p) = (rank..rows.len()).find(|&i| rows[i] & bit != 0) else {
                continue;
            };
            rows.swap(p, rank);
            let pr = rows[rank];
            for r in rows.iter_mut().skip(rank + 1) {
                if *r & bit != 0 {
                    *r ^= pr;
                }
            }
            rank += 1;
        }
        rank
    }

    pub fn mul(&self, other: &BitMat) -> BitMat {
        let rows = self
            .rows
            .iter()
            .map(|&r| {
                let mut acc = 0u64;
                let mut bits = r;
                while bits != 0 {
                    let k = bits.trailing_zeros() as usize;
                    acc ^= other.rows[k];
                    bits &= bits - 1;
                }
                acc
            })
            .collect();
        BitMat { rows, cols: other.cols }
    }

    pub fn add(&self, other: &BitMat) -> BitMat {
        BitMat { rows: self.rows.iter().zip(&other.rows).map(|(a, b)| a ^ b).collect(), cols: self.cols }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u32, e: u32) -> Arc<FieldSpec> {
        FieldSpec::new(p, e, None).unwrap()
    }

    #[test]
    fn gl_counts() {
        for (n, p, e) in [(1, 2, 1), (2, 2, 1), (3, 2, 1), (4, 2, 1), (1, 3, 1), (2, 3, 1), (3, 3, 1), (1, 11, 1), (2, 11, 1), (2, 2, 2)] {
            let f = gf(p, e);
            let count = gl_enumerate(n, &f, 0).unwrap().count() as u128;
            assert_eq!(count, gl_order(n, f.order() as u64), "n={n} q={}", f.order());
        }
        assert_eq!(gl_order(4, 2), 20160);
        assert_eq!(gl_order(2, 2), 6);
        // Oracle: filter all 16 grids on nonzero determinant.
        let f = gf(2, 1);
        let det_count = (0..16u64)
            .filter(|&i| MatGF::from_index(f.clone(), 2, 2, i).det().unwrap().index() != 0)
            .count();
        assert_eq!(det_count, 6);
    }

    #[test]
    fn gl_is_restartable() {
        let f = gf(3, 1);
        let all: Vec<MatGF> = gl_enumerate(2, &f, 0).unwrap().collect();
        let mut it = gl_enumerate(2, &f, 0).unwrap();
        let first: Vec<MatGF> = it.by_ref().take(10).collect();
        let rest: Vec<MatGF> = gl_enumerate(2, &f, it.position()).unwrap().collect();
        assert_eq!([first, rest].concat(), all);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert!(matches!(gl_enumerate(5, &gf(11, 1), 0), Err(Error::TooLarge(_))));
    }

    #[test]
    fn gf11_examples() {
        let f = gf(11, 1);
        let a = MatGF::from_rows(f.clone(), &[vec![0, 10], vec![1, 0]]).unwrap();
        let b = MatGF::from_rows(f.clone(), &[vec![2, 4], vec![1, 8]]).unwrap();
        let ab = a.mul(&b).unwrap();
        // Schoolbook oracle.
        let mut expect = [0u32; 4];
        for i in 0..2 {
            for j in 0..2 {
                expect[i * 2 + j] = (0..2).map(|k| a.get(i, k) * b.get(k, j)).sum::<u32>() % 11;
            }
        }
        assert_eq!(ab.entries(), &expect[..]);
        assert_eq!(a.det().unwrap().index(), 1);
        assert_eq!(a.order().unwrap(), 4);
        let ipa = a.add(&MatGF::identity(f.clone(), 2)).unwrap();
        assert_eq!(ipa.order().unwrap(), 40);
    }

    #[test]
    fn basic_identities() {
        let f = gf(3, 1);
        let a = MatGF::from_rows(f.clone(), &[vec![1, 2, 0], vec![0, 1, 1], vec![2, 0, 1]]).unwrap();
        assert!(a.sub(&a).unwrap().is_zero());
        assert_eq!(MatGF::identity(f.clone(), 3).mul(&a).unwrap(), a);
        assert_eq!(MatGF::identity(f.clone(), 3).det().unwrap().index(), 1);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv).unwrap(), MatGF::identity(f.clone(), 3));
        let i3 = MatGF::identity(f.clone(), 3);
        assert_eq!(trace_pairing(&i3, &i3).unwrap().index(), 0);
        assert_eq!(trace_pairing(&a, &MatGF::zero(f, 3, 3)).unwrap().index(), 0);
        let g2 = gf(2, 1);
        assert!(matches!(MatGF::zero(g2.clone(), 2, 2).inverse(), Err(Error::Singular)));
        assert!(matches!(
            MatGF::zero(g2.clone(), 2, 3).add(&MatGF::zero(g2, 3, 2)),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn nullspace_is_annihilated() {
        let f = gf(3, 1);
        let m = vec![vec![1, 2, 0, 1], vec![2, 1, 1, 0]];
        let ns = nullspace(&f, &m, 4);
        assert_eq!(ns.len(), 2);
        for v in ns {
            for r in &m {
                let s = r.iter().zip(&v).fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b)));
                assert_eq!(s, 0);
            }
        }
    }

    #[test]
    fn packed_rank_matches_generic_exhaustively_3x3() {
        let f = gf(2, 1);
        for idx in 0..512u64 {
            let a = MatGF::from_index(f.clone(), 3, 3, idx);
            assert_eq!(BitMat::from_mat(&a).rank(), a.rank_generic());
        }
    }

    #[test]
    fn packed_multiply_matches_generic() {
        let f = gf(2, 1);
        for i in (0..65536u64).step_by(97) {
            for j in (0..65536u64).step_by(4099) {
                let a = MatGF::from_index(f.clone(), 4, 4, i);
                let b = MatGF::from_index(f.clone(), 4, 4, j);
                let packed = BitMat::from_mat(&a).mul(&BitMat::from_mat(&b)).to_mat(f.clone());
                assert_eq!(packed, a.mul(&b).unwrap());
                let sum = BitMat::from_mat(&a).add(&BitMat::from_mat(&b)).to_mat(f.clone());
                assert_eq!(sum, a.add(&b).unwrap());
            }
        }
    }

    #[test]
    fn rank_invariant_under_gl2_2_cubed() {
        let f = gf(2, 1);
        let gl: Vec<MatGF> = gl_enumerate(2, &f, 0).unwrap().collect();
        for idx in 0..16u64 {
            let a = MatGF::from_index(f.clone(), 2, 2, idx);
            for x in &gl {
                for y in &gl {
                    assert_eq!(x.mul(&a).unwrap().mul(y).unwrap().rank(), a.rank());
                }
            }
            assert_eq!(a.transpose().rank(), a.rank());
        }
    }

    #[test]
    fn frobenius_preserves_rank() {
        let f = gf(2, 2);
        for idx in (0..(1u64 << 8)).map(|i| i * 257 % 65536) {
            let a = MatGF::from_index(f.clone(), 2, 2, idx % 256);
            assert_eq!(a.frobenius(1).rank(), a.rank());
        }
    }

    #[test]
    fn index_roundtrip() {
        let f = gf(3, 1);
        for i in [0u64, 1, 500, 19682] {
            assert_eq!(MatGF::from_index(f.clone(), 3, 3, i).index(), Some(i));
        }
        let m = MatGF::from_index(f, 3, 3, 1);
        assert_eq!(m.get(2, 2), 1);
    }
}
