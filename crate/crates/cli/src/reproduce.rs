//! Named end-to-end computations with their expected results.

use std::collections::BTreeMap;

use mrd_core::algebra::right_representation;
use mrd_core::classify::{are_equivalent, classify_codes, enumerate_semifields, EquivalenceMode};
use mrd_core::constructions::{code2, code3, exceptional_nearfield_gl2_11, sec6_c, sec6_g, semifields_order_27};
use mrd_core::gabidulin::singer_code;
use mrd_core::symmetric::{find_invariant_form, knarr_subgroup};
use mrd_core::{GabidulinSpec, MatGF, RankCode, Result};

/// Frozen claim identifiers.
pub const CLAIMS: [&str; 6] = ["ex16-classes", "sec6-classes", "sec6-rankdist", "sl25", "knarr-16", "dual-27"];

/// Runs `claim`; `Ok((pass, detail))`, or `None` for an unknown name.
pub fn run(claim: &str) -> Option<Result<(bool, String)>> {
    Some(match claim {
        "ex16-classes" => ex16_classes(),
        "sec6-classes" => sec6_classes(),
        "sec6-rankdist" => sec6_rankdist(),
        "sl25" => sl25(),
        "knarr-16" => knarr_16(),
        "dual-27" => dual_27(),
        _ => return None,
    })
}

fn equivalent(a: &RankCode, b: &RankCode, mode: EquivalenceMode) -> Result<bool> {
    Ok(are_equivalent(a, b, mode)?.is_some())
}

fn ex16_classes() -> Result<(bool, String)> {
    let census = enumerate_semifields(2, 4)?;
    let (proper, iso) = (census.proper().count(), census.proper_isotopy_classes());
    let reps = classify_codes(2, 4, 4, EquivalenceMode::Additive)?;
    let (c2, c3, singer) = (code2()?, code3()?, singer_code(2, 4)?);
    let add = EquivalenceMode::Additive;
    let distinct = !equivalent(&c2, &c3, add)? && !equivalent(&c2, &singer, add)? && !equivalent(&c3, &singer, add)?;
    let pass = proper == 23 && iso == 2 && reps.len() == 3 && distinct;
    Ok((
        pass,
        format!(
            "{proper} proper semifields in {iso} isotopy classes; {} code classes; code2, code3, Singer pairwise inequivalent: {distinct}",
            reps.len()
        ),
    ))
}

fn sec6_classes() -> Result<(bool, String)> {
    let (g, c) = (sec6_g()?, sec6_c()?);
    let apart = !equivalent(&g, &c, EquivalenceMode::Linear)?;
    let reps = classify_codes(3, 3, 2, EquivalenceMode::Linear)?;
    Ok((apart && reps.len() == 2, format!("G and C inequivalent: {apart}; {} classes", reps.len())))
}

fn sec6_rankdist() -> Result<(bool, String)> {
    let expected: BTreeMap<usize, usize> = [(0, 1), (2, 338), (3, 390)].into();
    let dc = sec6_c()?.rank_distribution()?.counts;
    let dg = GabidulinSpec::new(3, 3, 3, 2)?.code()?.rank_distribution()?.counts;
    let show = |d: &BTreeMap<usize, usize>| {
        d.iter().filter(|(&r, _)| r > 0).map(|(r, n)| format!("{r}:{n}")).collect::<Vec<_>>().join(", ")
    };
    Ok((dc == expected && dg == expected, format!("C {{{}}}, Gabidulin {{{}}}", show(&dc), show(&dg))))
}

fn sl25() -> Result<(bool, String)> {
    let x = exceptional_nearfield_gl2_11()?;
    let orders: Vec<u64> = x.order_counts.keys().copied().collect();
    let f = x.generators[0].field().clone();
    let ia = MatGF::identity(f, 2).add(&x.generators[0])?;
    let ord = ia.order()?;
    let v = x.code.is_mrd();
    let pass = x.group.len() == 120
        && orders == [1, 2, 3, 4, 5, 6, 10]
        && v.is_mrd
        && v.d == Some(2)
        && ord == 40
        && !x.code.is_additively_closed();
    Ok((pass, format!("|Q| = {}, orders {orders:?}, ord(I+A) = {ord}, MRD: {}", x.group.len(), v.is_mrd)))
}

fn knarr_16() -> Result<(bool, String)> {
    let census = enumerate_semifields(2, 4)?;
    let mut agree = 0;
    let mut with_form = 0;
    for c in &census.classes {
        let q = &c.quasifield;
        let found = find_invariant_form(q, q.kernel().field.as_ref())?;
        if found.exhaustive && found.form.is_some() == knarr_subgroup(q).proper {
            agree += 1;
        }
        with_form += found.form.is_some() as usize;
    }
    let total = census.classes.len();
    Ok((agree == total, format!("Knarr criterion agrees with the form search on {agree}/{total}; {with_form} admit a form")))
}

fn dual_27() -> Result<(bool, String)> {
    let codes: Vec<RankCode> =
        semifields_order_27()?.iter().map(|q| right_representation(q, None).map(|r| r.0.code())).collect::<Result<_>>()?;
    let mut hits = Vec::new();
    for c in [sec6_g()?, sec6_c()?] {
        let d = c.dual()?;
        let v = d.is_mrd();
        if !(v.is_mrd && v.d == Some(3)) {
            return Ok((false, "a dual is not MRD with d = 3".into()));
        }
        let matching: Vec<usize> =
            (0..codes.len()).filter(|&i| equivalent(&d, &codes[i], EquivalenceMode::Linear).unwrap_or(false)).collect();
        hits.push(matching);
    }
    let pass = hits.iter().all(|h| h.len() == 1) && hits[0] != hits[1];
    Ok((pass, format!("dual of G matches {:?}, dual of C matches {:?} (0 = GF(27), 1 = proper)", hits[0], hits[1])))
}
