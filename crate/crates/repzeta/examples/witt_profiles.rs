//! Elementary divisors of commutator matrices and the ranks sigma, rho.

use repzeta::lie::{BuiltinId, LieLattice};
use repzeta::matalg::{generic_rank_rho, min_rank_sigma, witt_profile};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let l = LieLattice::builtin(BuiltinId::Sl3, 5, 1, 1)?;
    let cm = l.commutator_matrix();
    let ring = l.family.ring(3)?;
    // a regular semisimple functional and a nilpotent one
    for y in [[1, 2, 0, 0, 0, 0, 0, 0], [0, 0, 0, 0, 1, 0, 0, 0]] {
        let ys: Vec<_> = y.iter().map(|&v| ring.from_int(v)).collect();
        let prof = witt_profile(&ring, &cm.at(&ring, &ys)?)?;
        println!("y = {y:?}: divisor profile {:?}, half-rank {}", prof.a, prof.half_rank());
    }
    let rho = generic_rank_rho(&cm)?;
    let sigma = min_rank_sigma(&cm, "sl3", 1)?;
    println!("sl3: rho = {}, sigma = {} ({:?})", rho.rho, sigma.sigma, sigma.status);
    Ok(())
}
