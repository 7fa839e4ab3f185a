//! Registered closed forms: expansion, abscissae and bounds.

use repzeta::dirichlet::{abscissa_of, bounds, sln_semisimple_data, theorem_formula, FormulaParams, FORMULA_IDS};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!("registered: {}", FORMULA_IDS.join(", "));
    let params = FormulaParams { m: 1, ..Default::default() };
    for id in ["thm_sl2_podd", "thm_sl3_p3", "thm_quat_full", "sl2_full"] {
        let e = theorem_formula(id, params)?;
        let a = abscissa_of(&e)?.map(|a| a.to_string()).unwrap_or_else(|| "none".into());
        let s = e.specialize(5).to_series(50)?;
        println!("{id}: abscissa {a}; at q = 5 up to degree 50: {s}");
    }
    for n in 2..=5 {
        let b = bounds(&sln_semisimple_data(n))?;
        println!("SL_{n}: {} <= alpha <= {}", b.lower, b.upper);
    }
    Ok(())
}
