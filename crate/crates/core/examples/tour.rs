use mrd_core::algebra::right_representation;
use mrd_core::classify::{are_equivalent, EquivalenceMode};
use mrd_core::constructions::dickson_nearfield;
use mrd_core::gabidulin::singer_code;
use mrd_core::{GabidulinSpec, Result};

fn main() -> Result<()> {
    // Gabidulin code in GF(3)^{3×3} with minimum distance 2.
    let g = GabidulinSpec::new(3, 3, 3, 2)?.code()?;
    let v = g.is_mrd();
    println!("|C| = {}, MRD: {}, d = {:?}", g.len(), v.is_mrd, v.d);
    println!("{:?}", g.rank_distribution()?.counts);

    // A Dickson nearfield of order 9 and its spread-set code.
    let n9 = dickson_nearfield(3, 2)?;
    assert!(n9.check().ok);
    let (spread, _basis) = right_representation(&n9, None)?;
    let code = spread.code();
    println!("nearfield code is MRD: {}", code.is_mrd().is_mrd);

    // The Singer code of GF(16) against itself.
    let s = singer_code(2, 4)?;
    let w = are_equivalent(&s, &s, EquivalenceMode::Additive)?;
    println!("witness verified: {}", w.is_some_and(|w| w.verified));
    Ok(())
}
