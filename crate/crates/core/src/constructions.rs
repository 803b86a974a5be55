//! Concrete structures: Dickson nearfields, the exceptional nearfield over
//! GF(11), the semifields of order 27, and embedded fixture codes.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::sync::Arc;

use crate::algebra::{field_quasifield, quasifield_from_code, Quasifield};
use crate::classify::enumerate_semifields;
use crate::code::RankCode;
use crate::error::{Error, Result};
use crate::gf::{prime_factors, FieldSpec};
use crate::matgf::MatGF;

/// The regular nearfield `N(n, q)` on the elements of `GF(q^n)`.
///
/// With `w` the primitive element and `[j] = 1 + q + … + q^(j−1)`, a nonzero
/// `y = w^i` gets the twist `j(y) ∈ 0..n` with `[j(y)] ≡ i (mod n)`, and
/// `x∘y = x^(q^j(y))·y`. Since `[a]·q^b + [b] = [a+b]`, the twist of `y∘z` is
/// `j(y) + j(z)`, which gives associativity.
pub fn dickson_nearfield(q: u32, n: usize) -> Result<Quasifield> {
    let (p, f) = crate::gabidulin::prime_power(q)?;
    if n == 0 {
        return Err(Error::InvalidParameters("n must be positive".into()));
    }
    for r in prime_factors(n as u64) {
        if !(q as u64 - 1).is_multiple_of(r) {
            return Err(Error::ConditionsViolated(format!("prime {r} divides n = {n} but not q - 1 = {}", q - 1)));
        }
    }
    if q % 4 == 3 && n.is_multiple_of(4) {
        return Err(Error::ConditionsViolated(format!("q = {q} is 3 mod 4 and 4 divides n = {n}")));
    }
    let e = FieldSpec::new(p, f * n as u32, None)?;
    let order = e.order() as usize;
    if order > crate::algebra::MAX_QUASIFIELD_ORDER {
        return Err(Error::TooLarge(format!("nearfield order {order}")));
    }
    // twist[i mod n] = j with [j] ≡ i.
    let mut twist = vec![usize::MAX; n];
    let mut bracket = 0usize;
    let mut qpow = 1usize;
    for j in 0..n {
        if twist[bracket % n] != usize::MAX {
            return Err(Error::ConditionsViolated(format!("[{j}] repeats a residue mod {n}")));
        }
        twist[bracket % n] = j;
        bracket = (bracket + qpow) % n;
        qpow = qpow * q as usize % n.max(1);
    }
    let mut table = vec![0u32; order * order];
    for y in 1..order as u32 {
        let i = e.log(y).expect("y is nonzero") as usize;
        let j = twist[i % n] as u32;
        for x in 0..order as u32 {
            table[x as usize * order + y as usize] = e.mul(e.frobenius(x, j * f), y);
        }
    }
    let qf = Quasifield::validated(p, (f as usize) * n, 1, table)?;
    if !qf.is_nearfield() {
        return Err(Error::Validation("Dickson construction is not associative".into()));
    }
    Ok(qf)
}

/// The subgroup of `GL(2, 11)` generated by the two embedded matrices, with
/// the code `Q ∪ {0}` and its quasifield.
#[derive(Clone, Debug)]
pub struct ExceptionalNearfield {
    pub generators: Vec<MatGF>,
    /// Group elements, sorted.
    pub group: Vec<MatGF>,
    pub code: RankCode,
    pub quasifield: Quasifield,
    /// Number of group elements of each multiplicative order.
    pub order_counts: BTreeMap<u64, usize>,
}

/// Closure of `gens` under right multiplication, in breadth-first order.
pub fn group_closure(gens: &[MatGF]) -> Result<Vec<MatGF>> {
    let Some(g0) = gens.first() else {
        return Err(Error::InvalidParameters("no generators".into()));
    };
    let id = MatGF::identity(g0.field().clone(), g0.rows());
    let mut seen: HashMap<MatGF, ()> = HashMap::from([(id.clone(), ())]);
    let mut out = vec![id.clone()];
    let mut queue = VecDeque::from([id]);
    while let Some(g) = queue.pop_front() {
        for s in gens {
            let h = g.mul(s)?;
            if seen.insert(h.clone(), ()).is_none() {
                out.push(h.clone());
                queue.push_back(h);
            }
        }
    }
    Ok(out)
}

/// Whether the groups generated by `gens` and by `gens2` are isomorphic via
/// `gens[i] ↦ gens2[i]` for some choice of images with matching orders in the
/// group generated by `gens2`. Returns the images when they exist.
pub fn generator_isomorphism(gens: &[MatGF], group2: &[MatGF]) -> Result<Option<Vec<MatGF>>> {
    let group = group_closure(gens)?;
    if group.len() != group2.len() {
        return Ok(None);
    }
    let orders: Vec<u64> = gens.iter().map(|g| g.order()).collect::<Result<_>>()?;
    let by_order: Vec<Vec<&MatGF>> = orders
        .iter()
        .map(|&o| group2.iter().filter(|h| h.order().is_ok_and(|x| x == o)).collect())
        .collect::<Vec<_>>();
    let index: HashMap<&MatGF, usize> = group.iter().enumerate().map(|(i, g)| (g, i)).collect();
    let mut choice = vec![0usize; gens.len()];
    loop {
        if by_order.iter().any(|v| v.is_empty()) {
            return Ok(None);
        }
        let images: Vec<MatGF> = choice.iter().zip(&by_order).map(|(&c, v)| v[c].clone()).collect();
        if extends(&group, &index, gens, &images)? {
            return Ok(Some(images));
        }
        // Next choice in mixed radix.
        let mut t = 0;
        loop {
            if t == choice.len() {
                return Ok(None);
            }
            choice[t] += 1;
            if choice[t] < by_order[t].len() {
                break;
            }
            choice[t] = 0;
            t += 1;
        }
    }
}

/// Walks the Cayley graph of `group` and checks that `g·s ↦ φ(g)·φ(s)` is a
/// well-defined injective map.
fn extends(group: &[MatGF], index: &HashMap<&MatGF, usize>, gens: &[MatGF], images: &[MatGF]) -> Result<bool> {
    let id = &group[0];
    let mut phi: Vec<Option<MatGF>> = vec![None; group.len()];
    phi[index[id]] = Some(MatGF::identity(images[0].field().clone(), images[0].rows()));
    let mut queue = VecDeque::from([index[id]]);
    let mut used = std::collections::HashSet::new();
    used.insert(phi[index[id]].clone().expect("set above"));
    while let Some(i) = queue.pop_front() {
        let pi = phi[i].clone().expect("visited");
        for (s, t) in gens.iter().zip(images) {
            let j = index[&group[i].mul(s)?];
            let img = pi.mul(t)?;
            match &phi[j] {
                Some(existing) if *existing != img => return Ok(false),
                Some(_) => {}
                None => {
                    if !used.insert(img.clone()) {
                        return Ok(false);
                    }
                    phi[j] = Some(img);
                    queue.push_back(j);
                }
            }
        }
    }
    Ok(true)
}

/// `SL(2, 5)` as a list of matrices over GF(5).
pub fn sl2_5() -> Result<Vec<MatGF>> {
    let f = FieldSpec::prime(5)?;
    let mut out = Vec::new();
    for idx in 0..625u64 {
        let m = MatGF::from_index(f.clone(), 2, 2, idx);
        if m.det()?.index() == 1 {
            out.push(m);
        }
    }
    Ok(out)
}

pub fn exceptional_nearfield_gl2_11() -> Result<ExceptionalNearfield> {
    let generators = sl25_generators()?;
    let f = generators[0].field().clone();
    let mut group = group_closure(&generators)?;
    group.sort();
    if group.len() != 120 {
        return Err(Error::Validation(format!("group has order {}, expected 120", group.len())));
    }
    let mut order_counts = BTreeMap::new();
    for g in &group {
        *order_counts.entry(g.order()?).or_insert(0) += 1;
    }
    if order_counts.keys().copied().collect::<Vec<_>>() != [1, 2, 3, 4, 5, 6, 10] {
        return Err(Error::Validation(format!("element orders {:?}", order_counts.keys())));
    }
    if generator_isomorphism(&generators, &sl2_5()?)?.is_none() {
        return Err(Error::Validation("group is not isomorphic to SL(2,5)".into()));
    }
    // Regular on nonzero vectors: the orbit of e1 has 120 distinct images.
    let e1 = vec![1u32, 0];
    let mut images: Vec<Vec<u32>> = group.iter().map(|g| g.vec_mul(&e1)).collect::<Result<_>>()?;
    images.sort();
    images.dedup();
    if images.len() != 120 {
        return Err(Error::Validation("action on nonzero vectors is not regular".into()));
    }
    let mut mats = group.clone();
    mats.push(MatGF::zero(f.clone(), 2, 2));
    let code = RankCode::from_elements(f, 2, 2, mats)?;
    let verdict = code.is_mrd();
    if !verdict.is_mrd || verdict.d != Some(2) {
        return Err(Error::NotMrd(verdict.reason.unwrap_or_default()));
    }
    let quasifield = quasifield_from_code(&code)?;
    if !quasifield.check().ok || !quasifield.is_nearfield() {
        return Err(Error::Validation("quasifield of the group code is not a nearfield".into()));
    }
    Ok(ExceptionalNearfield { generators, group, code, quasifield, order_counts })
}

/// Largest `(|Q| - 1)^dim` scanned by [`automorphisms`].
const MAX_AUTOMORPHISM_SCAN: u64 = 1 << 22;

/// Every automorphism of `q` as a permutation of its elements.
///
/// Automorphisms are additive, hence `GF(p)`-linear, so each is fixed by
/// the images of the unit vectors `p^i`; all choices are tried.
pub fn automorphisms(q: &Quasifield) -> Result<Vec<Vec<u32>>> {
    let (p, dim, order) = (q.p(), q.dim(), q.order() as u32);
    if ((order - 1) as u64).saturating_pow(dim as u32) > MAX_AUTOMORPHISM_SCAN {
        return Err(Error::TooLarge(format!("automorphism scan over {order}^{dim} images")));
    }
    let mut out = Vec::new();
    let mut images = vec![1u32; dim];
    loop {
        // phi(x) = sum of c_i * images[i], built up from phi(x - p^i).
        let mut phi = vec![0u32; order as usize];
        let mut stride = 1u32;
        for &b in &images {
            for x in stride..order {
                if !(x / stride).is_multiple_of(p) {
                    phi[x as usize] = q.add(phi[(x - stride) as usize], b);
                }
            }
            stride *= p;
        }
        let mut seen = vec![false; order as usize];
        let bijective = phi.iter().all(|&y| !std::mem::replace(&mut seen[y as usize], true));
        if bijective
            && (1..order).all(|a| (1..order).all(|b| phi[q.mul(a, b) as usize] == q.mul(phi[a as usize], phi[b as usize])))
        {
            out.push(phi);
        }
        let Some(i) = images.iter().position(|&b| b + 1 < order) else { break };
        images[i] += 1;
        images[..i].iter_mut().for_each(|b| *b = 1);
    }
    Ok(out)
}

/// Order of a permutation under composition.
pub fn permutation_order(perm: &[u32]) -> u64 {
    let mut seen = vec![false; perm.len()];
    let mut order = 1u64;
    for start in 0..perm.len() {
        let mut len = 0u64;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            x = perm[x] as usize;
            len += 1;
        }
        if len > 0 {
            order = order / gcd(order, len) * len;
        }
    }
    order
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 { a } else { gcd(b, a % b) }
}

/// `GF(27)` and the proper semifield of order 27 with an automorphism of
/// order 3, the counterpart of the Frobenius of `GF(27)`.
pub fn semifields_order_27() -> Result<Vec<Quasifield>> {
    let census = enumerate_semifields(3, 3)?;
    if census.proper_isotopy_classes() != 1 {
        return Err(Error::Validation(format!(
            "{} proper isotopy classes of order 27, expected 1",
            census.proper_isotopy_classes()
        )));
    }
    let mut proper = None;
    for c in census.proper() {
        if automorphisms(&c.quasifield)?.iter().any(|a| permutation_order(a) == 3) {
            proper = Some(c.quasifield.clone());
            break;
        }
    }
    let proper = proper
        .ok_or_else(|| Error::Validation("no proper semifield of order 27 has an automorphism of order 3".into()))?;
    Ok(vec![field_quasifield(3, 3)?, proper])
}

/// Names accepted by [`fixture`].
pub const FIXTURES: [&str; 5] = ["code2", "code3", "sec6_G_basis", "sec6_C_basis", "sl25_generators"];

/// Embedded data: a code or a list of matrices.
#[derive(Clone, Debug)]
pub enum Fixture {
    Code(RankCode),
    Matrices(Vec<MatGF>),
}

pub fn fixture(name: &str) -> Result<Fixture> {
    match name {
        "code2" => Ok(Fixture::Code(code2()?)),
        "code3" => Ok(Fixture::Code(code3()?)),
        "sec6_G_basis" => Ok(Fixture::Matrices(ternary(&G_BASIS)?)),
        "sec6_C_basis" => Ok(Fixture::Matrices(ternary(&C_BASIS)?)),
        "sl25_generators" => Ok(Fixture::Matrices(sl25_generators()?)),
        _ => Err(Error::UnknownFixture(name.to_string())),
    }
}

/// Nonzero elements of the second order-16 code, as printed.
pub const CODE2: [[u8; 16]; 15] = [
    [1, 1, 1, 0, 0, 1, 0, 1, 1, 1, 0, 1, 0, 1, 0, 0],
    [1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1],
    [1, 0, 1, 0, 1, 0, 0, 1, 1, 1, 0, 0, 0, 1, 1, 1],
    [0, 1, 1, 0, 0, 0, 0, 1, 1, 1, 1, 1, 0, 1, 0, 1],
    [1, 1, 0, 1, 1, 1, 1, 1, 0, 1, 1, 0, 1, 0, 0, 0],
    [1, 0, 0, 1, 0, 0, 1, 1, 0, 1, 1, 1, 1, 0, 1, 1],
    [0, 0, 1, 1, 1, 0, 1, 0, 1, 0, 1, 1, 1, 1, 0, 0],
    [0, 0, 1, 0, 1, 1, 0, 1, 1, 1, 1, 0, 0, 1, 1, 0],
    [0, 1, 0, 1, 1, 0, 1, 1, 0, 1, 0, 0, 1, 0, 0, 1],
    [1, 1, 1, 1, 0, 0, 1, 0, 1, 0, 0, 0, 1, 1, 1, 0],
    [1, 1, 0, 0, 1, 0, 0, 0, 0, 0, 1, 1, 0, 0, 1, 0],
    [0, 1, 0, 0, 1, 1, 0, 0, 0, 0, 0, 1, 0, 0, 1, 1],
    [1, 0, 1, 1, 1, 1, 1, 0, 1, 0, 0, 1, 1, 1, 0, 1],
    [0, 0, 0, 1, 0, 1, 1, 1, 0, 1, 0, 1, 1, 0, 1, 0],
    [0, 1, 1, 1, 0, 1, 1, 0, 1, 0, 1, 0, 1, 1, 1, 1],
];

/// Nonzero elements of the third order-16 code, as printed.
pub const CODE3_PRINTED: [[u8; 16]; 15] = [
    [0, 1, 1, 1, 1, 1, 0, 0, 0, 1, 1, 0, 0, 1, 0, 0],
    [1, 1, 1, 0, 1, 1, 0, 1, 1, 1, 0, 0, 1, 0, 1, 0],
    [1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1],
    [1, 0, 0, 1, 0, 0, 0, 1, 1, 0, 1, 0, 1, 1, 1, 0],
    [0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 1, 1, 0, 0],
    [1, 1, 0, 1, 0, 0, 1, 1, 1, 0, 1, 1, 0, 0, 1, 0],
    [0, 1, 1, 0, 1, 0, 0, 1, 1, 1, 1, 0, 1, 0, 1, 1],
    [0, 0, 1, 0, 1, 0, 1, 1, 1, 1, 1, 1, 0, 1, 1, 1],
    [1, 0, 1, 0, 1, 1, 1, 1, 1, 1, 0, 1, 0, 1, 1, 0],
    [1, 1, 0, 0, 0, 1, 1, 0, 0, 0, 1, 1, 1, 1, 0, 1],
    [1, 0, 1, 1, 1, 0, 1, 0, 0, 1, 0, 1, 1, 0, 0, 1],
    [0, 0, 0, 1, 0, 1, 0, 1, 1, 0, 0, 0, 1, 1, 1, 1],
    [0, 1, 0, 1, 0, 1, 1, 1, 1, 0, 0, 1, 0, 0, 1, 1],
    [1, 1, 1, 1, 1, 0, 0, 0, 0, 1, 0, 0, 0, 1, 0, 1],
    [0, 0, 1, 0, 1, 1, 1, 0, 0, 1, 1, 1, 1, 0, 0, 0],
];

/// The printed last matrix of the third code repeats the first row `0010` of
/// its eighth matrix; the set is closed under addition only with first row
/// `0011`, which is the one entry changed here.
pub const CODE3_CORRECTION: (usize, usize, u8) = (14, 3, 1);

/// Basis of the Gabidulin-type code in `(GF(3))_{3,3}` with `d = 2`.
pub const G_BASIS: [[u8; 9]; 6] = [
    [1, 0, 0, 0, 0, 0, 0, 1, 0],
    [0, 1, 0, 0, 0, 0, 1, 2, 1],
    [0, 0, 1, 0, 0, 0, 0, 1, 2],
    [0, 0, 0, 1, 0, 0, 0, 0, 2],
    [0, 0, 0, 0, 1, 0, 0, 2, 1],
    [0, 0, 0, 0, 0, 1, 2, 1, 0],
];

/// Basis of the second class of linear MRD codes in `(GF(3))_{3,3}` with `d = 2`.
pub const C_BASIS: [[u8; 9]; 6] = [
    [1, 0, 0, 0, 0, 0, 1, 1, 0],
    [0, 1, 0, 0, 0, 0, 0, 0, 2],
    [0, 0, 1, 0, 0, 0, 2, 0, 2],
    [0, 0, 0, 1, 0, 0, 1, 2, 1],
    [0, 0, 0, 0, 1, 0, 2, 2, 1],
    [0, 0, 0, 0, 0, 1, 1, 2, 2],
];

/// `A = [[0, −1], [1, 0]]` and `B = [[2, 4], [1, −3]]` over GF(11), reduced.
pub const SL25_GENERATORS: [[u8; 4]; 2] = [[0, 10, 1, 0], [2, 4, 1, 8]];

fn mats(field: &Arc<FieldSpec>, n: usize, data: &[impl AsRef<[u8]>]) -> Result<Vec<MatGF>> {
    data.iter()
        .map(|d| MatGF::new(field.clone(), n, n, d.as_ref().iter().map(|&x| x as u32).collect()))
        .collect()
}

fn ternary(data: &[[u8; 9]]) -> Result<Vec<MatGF>> {
    mats(&FieldSpec::prime(3)?, 3, data)
}

pub fn sl25_generators() -> Result<Vec<MatGF>> {
    mats(&FieldSpec::prime(11)?, 2, &SL25_GENERATORS)
}

/// Nonzero matrices plus zero, re-verified as an additively closed MRD code with `d = 4`.
fn binary_code(data: &[[u8; 16]]) -> Result<RankCode> {
    let f = FieldSpec::prime(2)?;
    let mut all = mats(&f, 4, data)?;
    all.push(MatGF::zero(f.clone(), 4, 4));
    let code = RankCode::from_elements(f, 4, 4, all)?;
    if !code.is_additively_closed() {
        return Err(Error::Validation("fixture is not additively closed".into()));
    }
    let verdict = code.is_mrd();
    if !verdict.is_mrd || verdict.d != Some(4) {
        return Err(Error::NotMrd(verdict.reason.unwrap_or_default()));
    }
    Ok(code)
}

pub fn code2() -> Result<RankCode> {
    binary_code(&CODE2)
}

pub fn code3() -> Result<RankCode> {
    let mut data = CODE3_PRINTED;
    let (m, i, v) = CODE3_CORRECTION;
    data[m][i] = v;
    binary_code(&data)
}

/// The linear code spanned by [`G_BASIS`].
pub fn sec6_g() -> Result<RankCode> {
    let f = FieldSpec::prime(3)?;
    RankCode::from_basis(f, 3, 3, ternary(&G_BASIS)?)
}

/// The linear code spanned by [`C_BASIS`].
pub fn sec6_c() -> Result<RankCode> {
    let f = FieldSpec::prime(3)?;
    RankCode::from_basis(f, 3, 3, ternary(&C_BASIS)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_automorphisms_are_frobenius_powers() {
        for (p, e) in [(2, 4), (3, 3), (5, 2)] {
            let auts = automorphisms(&field_quasifield(p, e).unwrap()).unwrap();
            let mut orders: Vec<u64> = auts.iter().map(|a| permutation_order(a)).collect();
            orders.sort();
            let mut expected: Vec<u64> = (0..e as u64).map(|i| e as u64 / gcd(e as u64, i)).collect();
            expected.sort();
            assert_eq!(orders, expected, "GF({p}^{e})");
        }
    }

    #[test]
    fn dickson_small_cases() {
        for q in [2, 3, 4, 5] {
            assert!(dickson_nearfield(q, 1).unwrap().is_field());
        }
        let n23 = dickson_nearfield(3, 2).unwrap();
        assert_eq!(n23.order(), 9);
        assert!(!n23.is_field());
        assert!(n23.left_distributivity_witness().is_some());
        assert!(matches!(dickson_nearfield(3, 4), Err(Error::ConditionsViolated(_))));
        assert!(matches!(dickson_nearfield(2, 2), Err(Error::ConditionsViolated(_))));
    }

    #[test]
    fn printed_third_code_is_not_closed() {
        let f = FieldSpec::prime(2).unwrap();
        let mut all = mats(&f, 4, &CODE3_PRINTED).unwrap();
        all.push(MatGF::zero(f.clone(), 4, 4));
        let c = RankCode::from_elements(f, 4, 4, all).unwrap();
        assert!(!c.is_additively_closed());
        assert!(code3().is_ok());
    }

    #[test]
    fn unknown_fixture() {
        assert!(matches!(fixture("nope"), Err(Error::UnknownFixture(_))));
        for name in FIXTURES {
            assert!(fixture(name).is_ok(), "{name}");
        }
    }
}
