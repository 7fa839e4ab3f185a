//! Arithmetic in o/p^n for o the ring of integers of an unramified or ramified extension.

use repzeta::qring::QuotientRing;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // Z_9 / 3^3: the unramified quadratic extension of Z_3 truncated at depth 3
    let r = QuotientRing::new(3, 2, 1, 3)?;
    let g = r.unramified_generator();
    let x = r.add(&r.pi(), &g);
    println!("|o/p^3| = {}", r.cardinality());
    println!("x = pi + g: valuation {}, unit {}", r.valuation(&x), r.is_unit(&x));
    let y = r.inv(&x)?;
    println!("x * x^-1 = 1: {}", r.mul(&x, &y) == r.one());
    println!("digit representatives of o/p^2 in o/p^3: {}", r.teichmuller_set(2)?.len());

    // Z_2[pi]/(pi^2 - 2) truncated at pi^5
    let t = QuotientRing::new(2, 1, 2, 5)?;
    let p2 = t.pi_pow(2);
    println!("ramified: v(pi^2) = {}, v(2) = {}", t.valuation(&p2), t.valuation(&t.from_int(2)));
    Ok(())
}
