use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::One;
use proptest::prelude::*;
use repzeta::clifford::{
    assemble, congruence_formula, eval_at, inertia_profile, quotient_zeta, restrict_to_congruence, total_measure, FullGroup,
    LocalData,
};
use repzeta::dirichlet::compare;
use repzeta::fingroup::{build_group, character_degrees, degree_zeta, GroupId, GROUP_BUDGET};

fn groups() -> [FullGroup; 2] {
    [FullGroup::Sl2, FullGroup::Sl1]
}

proptest! {
    #[test]
    fn stratum_measures_fill_the_punctured_cone(q in 2u64..200) {
        for g in groups() {
            let m = eval_at(&total_measure(&inertia_profile(g, LocalData::default())), q).unwrap();
            let qr = BigRational::from_integer(q.into());
            prop_assert_eq!(m, BigRational::one() - BigRational::one() / (qr.clone() * &qr * &qr));
        }
    }
}

#[test]
fn assembled_coefficients_are_counts() {
    for g in groups() {
        let z = assemble(&inertia_profile(g, LocalData::default()), &quotient_zeta(g)).unwrap();
        for q in [3u64, 5, 7, 9, 11, 13, 25] {
            assert!(z.specialize(q).to_series(q.pow(3)).is_ok(), "{g:?} q = {q}");
        }
    }
}

#[test]
fn linear_characters_match_the_abelianisation() {
    // degree-1 counts of G/G^k once stable in k
    let cases = [
        (FullGroup::Sl2, 3u64, [GroupId::Sl2 { p: 3, f: 1, e: 1, k: 1 }, GroupId::Sl2 { p: 3, f: 1, e: 1, k: 2 }]),
        (FullGroup::Sl2, 5, [GroupId::Sl2 { p: 5, f: 1, e: 1, k: 1 }, GroupId::Sl2 { p: 5, f: 1, e: 1, k: 2 }]),
        (FullGroup::Sl1, 5, [GroupId::Sl1 { p: 5, f: 1, k: 2 }, GroupId::Sl1 { p: 5, f: 1, k: 3 }]),
    ];
    for (g, q, ids) in cases {
        let r1: Vec<BigUint> = ids
            .iter()
            .map(|id| degree_zeta(&character_degrees(&build_group(*id, GROUP_BUDGET).unwrap(), 1).unwrap()).count(1))
            .collect();
        assert_eq!(r1[0], r1[1], "{g:?} q = {q} not stable");
        let z = assemble(&inertia_profile(g, LocalData::default()), &quotient_zeta(g)).unwrap();
        assert_eq!(z.specialize(q).to_series(1).unwrap().count(1), r1[0], "{g:?} q = {q}");
    }
}

#[test]
fn stripping_inertia_recovers_the_congruence_subgroup() {
    for g in groups() {
        let strata = inertia_profile(g, LocalData::default());
        let stripped = restrict_to_congruence(&strata);
        let target = congruence_formula(g).unwrap();
        for q in [5u64, 7, 11] {
            let bound = q.pow(4);
            let a = stripped.specialize(q).to_series(bound).unwrap();
            let b = target.specialize(q).to_series(bound).unwrap();
            assert!(matches!(compare(&a, &b).unwrap(), repzeta::dirichlet::Comparison::Equal { .. }), "{g:?} q = {q}");
        }
    }
}
