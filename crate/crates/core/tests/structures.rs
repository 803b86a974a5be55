use mrd_core::algebra::{field_quasifield, quasifield_from_code, right_representation, spreadset_from_code, verify_t2_t3};
use mrd_core::classify::{
    apply_isometry, are_equivalent, are_isomorphic, are_isotopic, canonical_form, classify_codes, enumerate_semifields,
    EquivalenceMode,
};
use mrd_core::constructions::{
    automorphisms, code2, code3, dickson_nearfield, exceptional_nearfield_gl2_11, fixture, group_closure,
    permutation_order, sec6_c, sec6_g, semifields_order_27, sl25_generators, Fixture,
};
use mrd_core::gabidulin::singer_code;
use mrd_core::{EquivalenceWitness, Error, FieldSpec, GabidulinSpec, MatGF, RankCode};

#[test]
fn small_orders_have_only_fields() {
    for n in 1..=3 {
        let c = enumerate_semifields(2, n).unwrap();
        assert_eq!(c.classes.len(), 1, "order 2^{n}");
        assert!(c.classes[0].is_field);
    }
    let c = enumerate_semifields(3, 2).unwrap();
    assert!(c.classes.iter().all(|s| s.is_field));
}

#[test]
fn order_16_census() {
    let c = enumerate_semifields(2, 4).unwrap();
    assert_eq!(c.classes.len(), 24);
    assert_eq!(c.classes.iter().filter(|s| s.is_field).count(), 1);
    assert_eq!(c.proper_isotopy_classes(), 2);
    for s in c.proper() {
        assert!(s.quasifield.is_semifield() && !s.quasifield.is_nearfield());
        assert!(s.code().is_mrd().is_mrd);
    }
    // Representatives of distinct isomorphism classes are not isomorphic.
    let proper: Vec<_> = c.proper().collect();
    for i in 0..proper.len() {
        for j in i + 1..proper.len().min(i + 4) {
            assert!(are_isomorphic(&proper[i].quasifield, &proper[j].quasifield).is_none());
        }
    }
    // Representatives of the two proper isotopy classes, and the field.
    let a = proper.iter().find(|s| s.isotopy_class == proper[0].isotopy_class).unwrap();
    let b = proper.iter().find(|s| s.isotopy_class != proper[0].isotopy_class).unwrap();
    assert!(are_isotopic(&a.quasifield, &b.quasifield, None).unwrap().is_none());
    let gf16 = field_quasifield(2, 4).unwrap();
    assert!(are_isotopic(&gf16, &a.quasifield, None).unwrap().is_none());
    let iso = are_isotopic(&a.quasifield, &a.quasifield, None).unwrap().unwrap();
    assert!(iso.verify(&a.quasifield, &a.quasifield));
}

#[test]
fn isomorphism_under_relabelling() {
    let q = code3().and_then(|c| quasifield_from_code(&c)).unwrap();
    // A GF(2)-linear bijection: x ↦ x·M for an invertible M on the bit vectors.
    let f = FieldSpec::prime(2).unwrap();
    let m = MatGF::from_rows(f, &[vec![1, 1, 0, 0], vec![0, 1, 0, 0], vec![1, 0, 1, 1], vec![0, 0, 0, 1]]).unwrap();
    let phi: Vec<u32> = (0..16u32)
        .map(|x| {
            let v: Vec<u32> = (0..4).map(|i| (x >> i) & 1).collect();
            m.vec_mul(&v).unwrap().iter().enumerate().map(|(i, &b)| b << i).sum()
        })
        .collect();
    let r = q.relabel(&phi).unwrap();
    let found = are_isomorphic(&q, &r).expect("isomorphic");
    for a in 0..16u32 {
        for b in 0..16u32 {
            assert_eq!(found[q.mul(a, b) as usize], r.mul(found[a as usize], found[b as usize]));
        }
    }
    assert_eq!(are_isomorphic(&q, &q).unwrap(), (0..16).collect::<Vec<u32>>());
}

#[test]
fn order_16_code_classes() {
    let (c2, c3) = (code2().unwrap(), code3().unwrap());
    let singer = singer_code(2, 4).unwrap();
    let gab = GabidulinSpec::new(2, 4, 4, 1).unwrap().code().unwrap();
    assert!(are_equivalent(&c2, &c3, EquivalenceMode::Additive).unwrap().is_none());
    assert_ne!(canonical_form(&c2).unwrap(), canonical_form(&c3).unwrap());
    assert_eq!(canonical_form(&singer).unwrap(), canonical_form(&gab).unwrap());
    for c in [&c2, &c3] {
        assert!(c.is_additively_closed());
        let q = quasifield_from_code(c).unwrap();
        assert!(q.is_semifield() && !q.is_field());
    }
    assert!(quasifield_from_code(&singer).unwrap().is_field());
}

#[test]
fn witnesses_map_codes_onto_conjugates() {
    let c = code2().unwrap();
    let f = c.field().clone();
    let x = MatGF::from_rows(f.clone(), &[vec![1, 1, 0, 0], vec![0, 1, 1, 0], vec![0, 0, 1, 1], vec![0, 0, 0, 1]]).unwrap();
    let y = MatGF::from_rows(f.clone(), &[vec![0, 1, 0, 0], vec![1, 0, 0, 0], vec![1, 0, 1, 0], vec![0, 1, 1, 1]]).unwrap();
    let w = EquivalenceWitness { x, y, sigma: 0, transposed: false, z: MatGF::zero(f.clone(), 4, 4), verified: false };
    let image = apply_isometry(&w, &c).unwrap();
    assert_eq!(image.rank_distribution().unwrap().counts, c.rank_distribution().unwrap().counts);
    let found = are_equivalent(&c, &image, EquivalenceMode::Linear).unwrap().expect("equivalent");
    assert_eq!(apply_isometry(&found, &c).unwrap(), image);
    let identity = EquivalenceWitness {
        x: MatGF::identity(f.clone(), 4),
        y: MatGF::identity(f.clone(), 4),
        sigma: 0,
        transposed: false,
        z: MatGF::zero(f.clone(), 4, 4),
        verified: false,
    };
    assert_eq!(apply_isometry(&identity, &c).unwrap(), c);
}

#[test]
fn tiny_classification() {
    assert_eq!(classify_codes(2, 2, 2, EquivalenceMode::Linear).unwrap().len(), 1);
    assert_eq!(classify_codes(2, 3, 3, EquivalenceMode::Linear).unwrap().len(), 1);
}

/// Duality maps `d = 2` classes to `d = 3` classes at `3×3` over GF(3), so
/// the duals of the two fixture codes sit in the two `d = 3` classes.
#[test]
fn ternary_duality() {
    let reps = classify_codes(3, 3, 3, EquivalenceMode::Linear).unwrap();
    assert_eq!(reps.len(), 2);
    let (g, c) = (sec6_g().unwrap(), sec6_c().unwrap());
    let class_of = |x: &RankCode| -> Vec<usize> {
        let d = x.dual().unwrap();
        (0..reps.len()).filter(|&i| are_equivalent(&d, &reps[i], EquivalenceMode::Linear).unwrap().is_some()).collect()
    };
    let (cg, cc) = (class_of(&g), class_of(&c));
    assert_eq!(cg.len(), 1);
    assert_eq!(cc.len(), 1);
    assert_ne!(cg, cc);
    for r in &reps {
        let d = r.dual().unwrap();
        let v = d.is_mrd();
        assert!(v.is_mrd && v.d == Some(2));
    }
}

#[test]
fn order_27_semifields() {
    let s = semifields_order_27().unwrap();
    assert_eq!(s.len(), 2);
    assert!(s[0].is_field());
    let proper = &s[1];
    assert!(proper.is_semifield() && !proper.is_field());
    assert!(proper.associativity_witness().is_some());
    let left = proper.nucleus_left().unwrap();
    assert!(left.order() < 27);
    let auts = automorphisms(proper).unwrap();
    assert_eq!(auts.len(), 3);
    assert!(auts.iter().any(|a| permutation_order(a) == 3));
    let census = enumerate_semifields(3, 3).unwrap();
    assert_eq!(census.proper_isotopy_classes(), 1);
}

#[test]
fn correspondence_on_fixtures() {
    let r = verify_t2_t3(&code3().unwrap()).unwrap();
    assert!(r.additively_closed && r.semifield && r.linear && r.k_in_center);
    let x = exceptional_nearfield_gl2_11().unwrap();
    let r = verify_t2_t3(&x.code).unwrap();
    assert!(!r.additively_closed && !r.semifield && r.additive_biconditional);
    // code → spreadset → quasifield → code is the identity on element sets.
    for c in [code2().unwrap(), code3().unwrap(), singer_code(2, 4).unwrap(), x.code.clone()] {
        let q = quasifield_from_code(&c).unwrap();
        let (s, _) = right_representation(&q, None).unwrap();
        assert_eq!(s.code(), c);
        assert_eq!(spreadset_from_code(&c).unwrap().mats.len(), c.len());
    }
}

#[test]
fn dickson_nearfields() {
    let n23 = dickson_nearfield(3, 2).unwrap();
    assert!(n23.is_nearfield() && !n23.is_semifield());
    assert!(n23.left_distributivity_witness().is_some());
    assert!(n23.commutativity_witness().is_some());
    assert_eq!(n23.center().unwrap().order(), 3);
    for (q, n) in [(5, 2), (7, 2), (7, 3), (4, 3)] {
        let nf = dickson_nearfield(q, n).unwrap();
        assert!(nf.check().ok && nf.is_nearfield() && !nf.is_field(), "N({n},{q})");
        assert_eq!(nf.center().unwrap().order(), q as usize);
    }
    assert!(matches!(dickson_nearfield(3, 4), Err(Error::ConditionsViolated(_))));
    assert!(matches!(dickson_nearfield(2, 2), Err(Error::ConditionsViolated(_))));
}

#[test]
fn exceptional_nearfield_group() {
    let gens = sl25_generators().unwrap();
    assert_eq!(gens[0].to_rows(), vec![vec![0, 10], vec![1, 0]]);
    assert_eq!(gens[1].to_rows(), vec![vec![2, 4], vec![1, 8]]);
    let g = group_closure(&gens).unwrap();
    assert_eq!(g.len(), 120);
    let x = exceptional_nearfield_gl2_11().unwrap();
    assert!(x.quasifield.associativity_witness().is_none());
    assert!(x.quasifield.left_distributivity_witness().is_some());
}

#[test]
fn fixtures() {
    match fixture("code2").unwrap() {
        Fixture::Code(c) => {
            assert_eq!(c.len(), 16);
            assert!(c.is_additively_closed());
        }
        Fixture::Matrices(_) => panic!("code2 is a code"),
    }
    match fixture("sec6_C_basis").unwrap() {
        Fixture::Matrices(m) => {
            assert_eq!(m.len(), 6);
            let c = RankCode::from_basis(m[0].field().clone(), 3, 3, m).unwrap();
            assert_eq!(c.len(), 729);
            assert_eq!(c.min_distance().unwrap(), 2);
        }
        Fixture::Code(_) => panic!("a basis is a matrix list"),
    }
    assert!(matches!(fixture("code4"), Err(Error::UnknownFixture(_))));
}
