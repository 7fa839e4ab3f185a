//! The integral apparatus for SL3 at p = 3 and SL2 at p = 2.

use repzeta::dirichlet::{identical, theorem_formula, FormulaParams};
use repzeta::padicint::{aux_integral_closed, aux_integral_sum, lifting_closed, mass, sl2_p2_formula, sl3_assembly, AuxId, LiftKind, MassKind, Mode};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for id in [AuxId::Z0, AuxId::Z1, AuxId::Z2, AuxId::Z3] {
        let c = aux_integral_closed(id);
        println!("{id:?} = {c}  (matches stratified sum: {})", c.equals(&aux_integral_sum(id)));
    }
    let a = sl3_assembly(1)?;
    let t = theorem_formula("thm_sl3_p3", FormulaParams { m: 1, ..Default::default() })?;
    println!("SL3 assembly equals the closed form: {}", identical(&a, &t));
    for l in 1..=2 {
        println!("m^[3]_{l} at q = 3: {}", mass(MassKind::M3, 3, l, Mode::Closed)?);
    }
    println!("a^[1]_2 at q = 3: {}", lifting_closed(LiftKind::A1, 3, 2));
    println!("SL2 over Z_2[sqrt 2], m = 3, at q = 2: {}", sl2_p2_formula(2, 3)?.specialize(2).to_series(16)?);
    Ok(())
}
