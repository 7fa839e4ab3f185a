//! Built-in Lie lattices: structure constants, Killing forms and congruence sublattices.

use repzeta::lie::{BuiltinId, LieLattice};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (id, p) in [(BuiltinId::Sl2, 3), (BuiltinId::Sl3, 3), (BuiltinId::Sl1Quat(1), 5)] {
        let l = LieLattice::builtin(id, p, 1, 1)?;
        l.check_identities()?;
        println!("{} over Z_{p}: d = {}, basis {:?}", id.name(), l.d, l.labels);
        let k = l.killing_form()?;
        let diag: Vec<String> = (0..l.d).map(|i| k[i][i].to_string()).collect();
        println!("  Killing form diagonal: {}", diag.join(", "));
    }
    let l2 = LieLattice::builtin(BuiltinId::Sl2, 3, 1, 1)?.scaled(2)?;
    println!("p^2 sl2: content {:?}", l2.content());
    println!("R(Y) entry (0,1): {}", l2.commutator_matrix().entry_string(0, 1));
    Ok(())
}
