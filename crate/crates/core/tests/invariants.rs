use std::sync::Arc;

use mrd_core::classify::{apply_isometry, are_equivalent, canonical_form, EquivalenceMode};
use mrd_core::io::{export_code, import_code, matrices_from_text, matrix_to_text};
use mrd_core::{EquivalenceWitness, FieldSpec, MatGF, RankCode};
use proptest::prelude::*;

const FIELDS: [(u32, u32); 6] = [(2, 1), (2, 4), (3, 1), (3, 3), (5, 2), (11, 1)];

fn field(i: usize) -> Arc<FieldSpec> {
    let (p, e) = FIELDS[i];
    FieldSpec::new(p, e, None).unwrap()
}

fn mat(f: &Arc<FieldSpec>, r: usize, c: usize, seed: &[u32]) -> MatGF {
    let q = f.order();
    MatGF::new(f.clone(), r, c, (0..r * c).map(|i| seed[i % seed.len()].wrapping_mul(i as u32 + 7) % q).collect())
        .unwrap()
}

/// `L·U` with `L` unit lower triangular and `U` upper triangular with a
/// nonzero diagonal, so always invertible.
fn invertible(f: &Arc<FieldSpec>, n: usize, seed: &[u32]) -> MatGF {
    let q = f.order();
    let at = |i: usize| seed[i % seed.len()].wrapping_mul(i as u32 + 3);
    let mut l = MatGF::identity(f.clone(), n);
    let mut u = MatGF::identity(f.clone(), n);
    for i in 0..n {
        for j in 0..n {
            if j < i {
                l.set(i, j, at(i * n + j) % q);
            } else if j > i {
                u.set(i, j, at(n * n + i * n + j) % q);
            } else {
                u.set(i, i, 1 + at(2 * n * n + i) % (q - 1));
            }
        }
    }
    l.mul(&u).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms(i in 0..FIELDS.len(), a in any::<u32>(), b in any::<u32>(), c in any::<u32>()) {
        let f = field(i);
        let (a, b, c) = (a % f.order(), b % f.order(), c % f.order());
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.mul(a, b), f.mul(b, a));
        prop_assert_eq!(f.add(a, f.neg(a)), 0);
        if a != 0 {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
            prop_assert_eq!(f.pow(a, f.order() as u64 - 1), 1);
        }
        let fr = |x| f.frobenius_power(x, f.p() as u64, 1).unwrap();
        prop_assert_eq!(fr(f.mul(a, b)), f.mul(fr(a), fr(b)));
        prop_assert_eq!(fr(f.add(a, b)), f.add(fr(a), fr(b)));
    }

    #[test]
    fn rank_is_a_metric(i in 0..FIELDS.len(), r in 1usize..5, c in 1usize..5,
                        s1 in prop::collection::vec(any::<u32>(), 1..8),
                        s2 in prop::collection::vec(any::<u32>(), 1..8),
                        s3 in prop::collection::vec(any::<u32>(), 1..8)) {
        let f = field(i);
        let (a, b, d) = (mat(&f, r, c, &s1), mat(&f, r, c, &s2), mat(&f, r, c, &s3));
        let dist = |x: &MatGF, y: &MatGF| x.sub(y).unwrap().rank();
        prop_assert!(a.rank() <= r.min(c));
        prop_assert_eq!(dist(&a, &b), dist(&b, &a));
        prop_assert!(dist(&a, &d) <= dist(&a, &b) + dist(&b, &d));
        prop_assert_eq!(dist(&a, &b) == 0, a == b);
        prop_assert_eq!(a.rank(), a.transpose().rank());
        prop_assert_eq!(a.rank(), a.rank_generic());
    }

    #[test]
    fn isometries_preserve_rank(i in 0..FIELDS.len(), n in 1usize..4,
                                s1 in prop::collection::vec(any::<u32>(), 1..8),
                                s2 in prop::collection::vec(any::<u32>(), 1..8),
                                s3 in prop::collection::vec(any::<u32>(), 1..8),
                                sigma in 0u32..4) {
        let f = field(i);
        let a = mat(&f, n, n + 1, &s1);
        let x = invertible(&f, n, &s2);
        let y = invertible(&f, n + 1, &s3);
        let image = x.mul(&a.frobenius(sigma % f.e())).unwrap().mul(&y).unwrap();
        prop_assert_eq!(image.rank(), a.rank());
        prop_assert_eq!(x.mul(&x.inverse().unwrap()).unwrap(), MatGF::identity(f.clone(), n));
    }

    #[test]
    fn text_roundtrip(i in 0..FIELDS.len(), r in 1usize..4, c in 1usize..4,
                      s in prop::collection::vec(any::<u32>(), 1..8)) {
        let f = field(i);
        let a = mat(&f, r, c, &s);
        prop_assert_eq!(matrices_from_text(&f, &matrix_to_text(&a)).unwrap(), vec![a]);
    }
}

/// Random small linear codes over GF(2) and GF(3).
fn small_linear(q: u32, m: usize, n: usize, dim: usize, seed: u64) -> Option<RankCode> {
    let f = FieldSpec::prime(q).unwrap();
    let mut state = seed | 1;
    let mut next = || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        (state % q as u64) as u32
    };
    let basis: Vec<MatGF> = (0..dim).map(|_| MatGF::new(f.clone(), m, n, (0..m * n).map(|_| next()).collect()).unwrap()).collect();
    RankCode::from_basis(f, m, n, basis).ok()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn dual_is_an_involution(seed in any::<u64>(), dim in 1usize..5, q in prop::sample::select(vec![2u32, 3])) {
        let (m, n) = (2, 3);
        if let Some(c) = small_linear(q, m, n, dim, seed) {
            let d = c.dual().unwrap();
            prop_assert_eq!(c.len() * d.len(), (q as usize).pow((m * n) as u32));
            let dd = d.dual().unwrap();
            prop_assert_eq!(dd.elements(), c.elements());
        }
    }

    #[test]
    fn canonical_form_is_an_invariant(seed in any::<u64>(), dim in 1usize..4,
                                      s1 in prop::collection::vec(any::<u32>(), 1..8),
                                      s2 in prop::collection::vec(any::<u32>(), 1..8),
                                      transposed in any::<bool>()) {
        let n = 3;
        if let Some(c) = small_linear(2, n, n, dim, seed) {
            let f = c.field().clone();
            let w = EquivalenceWitness {
                x: invertible(&f, n, &s1),
                y: invertible(&f, n, &s2),
                sigma: 0,
                transposed,
                z: MatGF::zero(f.clone(), n, n),
                verified: false,
            };
            let image = apply_isometry(&w, &c).unwrap();
            prop_assert_eq!(image.rank_distribution().unwrap().counts, c.rank_distribution().unwrap().counts);
            prop_assert_eq!(canonical_form(&image).unwrap(), canonical_form(&c).unwrap());
            let found = are_equivalent(&c, &image, EquivalenceMode::Linear).unwrap().expect("equivalent");
            prop_assert_eq!(apply_isometry(&found, &c).unwrap(), image);
        }
    }

    #[test]
    fn code_json_roundtrip(seed in any::<u64>(), dim in 1usize..4, q in prop::sample::select(vec![2u32, 3])) {
        if let Some(c) = small_linear(q, 2, 2, dim, seed) {
            let text = export_code(&c);
            let back = import_code(&text).unwrap();
            prop_assert_eq!(back.elements(), c.elements());
            prop_assert_eq!(export_code(&back), text);
        }
    }
}
