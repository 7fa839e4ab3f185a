use num_bigint::BigUint;
use num_traits::{One, Zero};
use proptest::prelude::*;
use repzeta::kirillov::{truncated_zeta, truncated_zeta_shifted, EnumOptions, TruncatedSeries};
use repzeta::lie::{BuiltinId, LieLattice, Scalar};

fn opts() -> EnumOptions {
    EnumOptions { cache: None, ..Default::default() }
}

/// Sum of `count * degree^2`: the order of the finite quotient seen by the enumeration.
fn weighted(s: &TruncatedSeries) -> BigUint {
    s.counts.iter().map(|(d, c)| c * d * d).sum()
}

/// Product of elementary integer matrices.
fn unimodular(d: usize, ops: &[(usize, usize, i64)]) -> Vec<Vec<Scalar>> {
    let mut m: Vec<Vec<i64>> = (0..d).map(|i| (0..d).map(|j| (i == j) as i64).collect()).collect();
    for &(i, j, x) in ops {
        let (i, j) = (i % d, j % d);
        if i != j {
            for k in 0..d {
                m[i][k] += x * m[j][k];
            }
        }
    }
    m.iter().map(|r| r.iter().map(|&v| Scalar::int(v)).collect()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn series_is_basis_independent(sl3 in any::<bool>(), ops in prop::collection::vec((0usize..8, 0usize..8, -2i64..3), 1..6)) {
        let (id, n) = if sl3 { (BuiltinId::Sl3, 2) } else { (BuiltinId::Sl2, 3) };
        let base = LieLattice::builtin(id, 3, 1, 1).unwrap();
        let moved = base.sublattice(&unimodular(base.d, &ops)).unwrap();
        let a = truncated_zeta(&base.scaled(1).unwrap(), n, &opts()).unwrap();
        let b = truncated_zeta(&moved.scaled(1).unwrap(), n, &opts()).unwrap();
        prop_assert_eq!(a.counts, b.counts);
    }
}

#[test]
fn own_matrix_and_shifted_profiles_agree() {
    for q in [3u64, 5] {
        let base = LieLattice::builtin(BuiltinId::Sl2, q, 1, 1).unwrap();
        for m in 1..=2 {
            for n in 1..=4 {
                let own = truncated_zeta(&base.scaled(m).unwrap(), n, &opts()).unwrap();
                let shifted = truncated_zeta_shifted(&base, m, n, &opts()).unwrap();
                assert_eq!(own.counts, shifted.counts, "q = {q}, m = {m}, N = {n}");
            }
        }
    }
}

#[test]
fn levels_up_to_m_are_linear() {
    for (id, q) in [(BuiltinId::Sl2, 3u64), (BuiltinId::Sl2, 5), (BuiltinId::Sl3, 3), (BuiltinId::Sl1Quat(1), 5)] {
        let base = LieLattice::builtin(id, q, 1, 1).unwrap();
        let d = base.d as u32;
        for m in 1..=2u32 {
            let s = truncated_zeta_shifted(&base, m, m, &opts()).unwrap();
            let qb = BigUint::from(q);
            assert_eq!(s.total(), qb.pow(d * m));
            assert_eq!(s.count(1), qb.pow(d * m));
        }
    }
}

#[test]
fn squared_degrees_sum_to_the_quotient_order() {
    for (id, q, m, n) in [(BuiltinId::Sl2, 3u64, 1, 4), (BuiltinId::Sl2, 5, 2, 4), (BuiltinId::Sl3, 3, 1, 2)] {
        let l = LieLattice::builtin(id, q, 1, 1).unwrap().scaled(m).unwrap();
        let s = truncated_zeta(&l, n, &opts()).unwrap();
        assert_eq!(weighted(&s), BigUint::from(q).pow(l.d as u32 * n), "{} q = {q}", id.name());
    }
    // the quaternion lattice is its own congruence subgroup
    let l = LieLattice::builtin(BuiltinId::Sl1Quat(1), 5, 1, 1).unwrap();
    let s = truncated_zeta(&l, 4, &opts()).unwrap();
    assert_eq!(weighted(&s), BigUint::from(5u32).pow(12));
}

#[test]
fn completeness_bound_is_honest() {
    // counts below the bound do not change when more levels are enumerated
    let l = LieLattice::builtin(BuiltinId::Sl2, 3, 1, 1).unwrap().scaled(1).unwrap();
    let short = truncated_zeta(&l, 3, &opts()).unwrap();
    let long = truncated_zeta(&l, 6, &opts()).unwrap();
    let bound = short.complete_through.clone().unwrap();
    assert!(!bound.is_zero());
    for (d, c) in &long.counts {
        if *d <= bound {
            assert_eq!(short.counts.get(d), Some(c));
        }
    }
    assert!(short.count(1) >= BigUint::one());
}
