//! Zeta functions of full groups from congruence subgroups by Clifford theory.

use repzeta::clifford::{assemble, inertia_profile, quotient_zeta, target_formula, total_measure, FullGroup, LocalData};
use repzeta::dirichlet::identical;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for group in [FullGroup::Sl2, FullGroup::Sl1] {
        let strata = inertia_profile(group, LocalData { p: Some(7), e: Some(1) });
        let z = assemble(&strata, &quotient_zeta(group))?;
        let m = total_measure(&strata);
        println!("{group:?}: {} strata, total measure ({}) / ({})", strata.len(), m.num, m.den);
        for s in &strata {
            println!("  {} [{}]", s.label, s.tag());
        }
        println!("  identical to the full formula: {}", identical(&z, &target_formula(group)?));
        println!("  at q = 7: {}", z.specialize(7).to_series(60)?);
    }
    Ok(())
}
