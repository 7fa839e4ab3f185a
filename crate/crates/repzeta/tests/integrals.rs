use repzeta::dirichlet::compare;
use repzeta::kirillov::{truncated_zeta, EnumOptions};
use repzeta::lie::{BuiltinId, LieLattice};
use repzeta::padicint::{sl3_assembly, zeta_via_integral, IntegralOptions};
use repzeta::verify::duality_checks;

fn opts() -> EnumOptions {
    EnumOptions { cache: None, ..Default::default() }
}

#[test]
fn masses_are_differences_of_lifting_counts() {
    for q in [3u64, 5, 7] {
        for c in duality_checks(q, 3) {
            assert!(c.passed, "{}: {}", c.name, c.detail);
        }
    }
}

#[test]
fn integral_route_matches_enumeration() {
    let cases = [
        (BuiltinId::Sl2, 3u64, 1u32, 4u32),
        (BuiltinId::Sl2, 3, 2, 4),
        (BuiltinId::Sl2, 5, 1, 3),
        (BuiltinId::Sl2, 2, 2, 4),
        (BuiltinId::Sl3, 3, 1, 2),
    ];
    for (id, q, m, n) in cases {
        let base = LieLattice::builtin(id, q, 1, 1).unwrap();
        let via = zeta_via_integral(&base, m, n, &IntegralOptions::default()).unwrap();
        let brute = truncated_zeta(&base.scaled(m).unwrap(), n, &opts()).unwrap();
        assert_eq!(via.series.counts, brute.counts, "{} q = {q} m = {m} N = {n}", id.name());
    }
}

#[test]
fn sl3_assembly_expands_to_the_enumeration() {
    let l = LieLattice::builtin(BuiltinId::Sl3, 3, 1, 1).unwrap().scaled(1).unwrap();
    let brute = truncated_zeta(&l, 2, &opts()).unwrap();
    let bound = u64::try_from(brute.complete_through.clone().unwrap()).unwrap();
    let formula = sl3_assembly(1).unwrap().specialize(3).to_series(bound).unwrap();
    assert!(matches!(compare(&brute, &formula).unwrap(), repzeta::dirichlet::Comparison::Equal { .. }));
}
