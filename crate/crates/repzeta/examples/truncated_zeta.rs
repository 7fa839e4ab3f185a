//! Brute-force zeta functions of congruence subgroups by the orbit method.

use repzeta::dirichlet::{compare, theorem_formula, FormulaParams};
use repzeta::kirillov::{truncated_zeta, EnumOptions};
use repzeta::lie::{BuiltinId, LieLattice};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let opts = EnumOptions { cache: None, ..Default::default() };
    let l = LieLattice::builtin(BuiltinId::Sl2, 3, 1, 1)?.scaled(1)?;
    let s = truncated_zeta(&l, 4, &opts)?;
    println!("SL2^1(Z_3) through level 4:\n{s}");
    let bound = s.complete_through.clone().map(|b| u64::try_from(b).unwrap_or(1)).unwrap_or(1);
    let f = theorem_formula("thm_sl2_podd", FormulaParams { m: 1, ..Default::default() })?;
    println!("against the closed form: {}", compare(&s, &f.specialize(3).to_series(bound)?)?);
    Ok(())
}
