//! Adjoint orbit classification over finite fields, checked against the tables.

use repzeta::forbits::{classify_space, to_csv, verify_table, OrbitSpace, TableId, ORBIT_BUDGET};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    print!("{}", to_csv(&classify_space(OrbitSpace::Sl3, 3, ORBIT_BUDGET)?));
    for (t, q) in [(TableId::T1, 5), (TableId::T2, 7), (TableId::T3, 3), (TableId::T4, 3), (TableId::AppB, 5)] {
        println!("{t:?} at q = {q}: {}", if verify_table(t, q, ORBIT_BUDGET)?.passed() { "ok" } else { "MISMATCH" });
    }
    Ok(())
}
