//! Character degrees of finite quotients by Dixon-Schneider.

use repzeta::fingroup::{build_group, character_degrees, degree_zeta, GroupId, GROUP_BUDGET};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for id in [
        GroupId::Sl2 { p: 3, f: 1, e: 1, k: 2 },
        GroupId::Sl2 { p: 2, f: 1, e: 1, k: 4 },
        GroupId::Sl1 { p: 5, f: 1, k: 3 },
    ] {
        let g = build_group(id, GROUP_BUDGET)?;
        let data = character_degrees(&g, 1)?;
        println!("{}: order {}, {} classes, sum of squares {}", id.name(), data.order, data.classes, data.sum_of_squares());
        println!("  {}", degree_zeta(&data));
    }
    Ok(())
}
