use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;
use repzeta::dirichlet::{abscissa_of, convolve, theorem_formula, Expr, FormulaParams, RatSeries};

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn leaf() -> impl Strategy<Value = Expr> {
    prop_oneof![
        (-3i64..4).prop_map(Expr::int),
        (0i32..3).prop_map(Expr::q_pow),
        (1i32..3).prop_map(Expr::x),
        (-1i32..2, 1i32..3).prop_map(|(a, b)| Expr::geom_inv(Expr::q_pow(a).mul(Expr::x(b)))),
    ]
}

fn expr() -> impl Strategy<Value = Expr> {
    leaf().prop_recursive(2, 8, 2, |inner| {
        prop_oneof![(inner.clone(), inner.clone()).prop_map(|(a, b)| a.add(b)), (inner.clone(), inner).prop_map(|(a, b)| a.mul(b))]
    })
}

fn add(a: &RatSeries, b: &RatSeries) -> RatSeries {
    let mut out = a.clone();
    for (d, c) in b {
        *out.entry(d.clone()).or_insert_with(BigRational::zero) += c;
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn clean(mut s: RatSeries) -> RatSeries {
    s.retain(|_, c| !c.is_zero());
    s
}

proptest! {
    #[test]
    fn expansion_is_linear(a in expr(), b in expr(), q in prop::sample::select(vec![2u64, 3, 5])) {
        let bound = rat(200);
        let (a, b) = (a.specialize(q), b.specialize(q));
        let sum = clean(a.clone().add(b.clone()).expand(&bound).unwrap());
        prop_assert_eq!(sum, add(&clean(a.expand(&bound).unwrap()), &clean(b.expand(&bound).unwrap())));
    }

    #[test]
    fn expansion_is_multiplicative(a in expr(), b in expr(), q in prop::sample::select(vec![2u64, 3, 5])) {
        let bound = rat(200);
        let (a, b) = (a.specialize(q), b.specialize(q));
        let prod = clean(a.clone().mul(b.clone()).expand(&bound).unwrap());
        let conv = clean(convolve(&a.expand(&bound).unwrap(), &b.expand(&bound).unwrap(), &bound));
        prop_assert_eq!(prod, conv);
    }

    #[test]
    fn longer_expansions_restrict(a in expr(), n in 1i64..60, extra in 0i64..200, q in prop::sample::select(vec![2u64, 3, 5])) {
        let a = a.specialize(q);
        let short = clean(a.expand(&rat(n)).unwrap());
        let long: BTreeMap<_, _> = clean(a.expand(&rat(n + extra)).unwrap()).into_iter().filter(|(d, _)| *d <= rat(n)).collect();
        prop_assert_eq!(short, long);
    }
}

#[test]
fn registered_formulas_have_nonnegative_integer_coefficients() {
    let dyadic = ["thm_sl2_p2e1", "sl2z2", "conj_sl21z2"];
    let generic = ["thm_sl2_podd", "thm_quat_full", "thm_quat_pcs", "quat_proof_variant", "thm_sl3_p3", "sl2_full"];
    for m in 1..=2 {
        let p = FormulaParams { m, ..Default::default() };
        for id in generic {
            for q in [3u64, 5, 7, 9] {
                for bound in [12, q.pow(3)] {
                    let s = theorem_formula(id, p).unwrap().specialize(q).to_series(bound);
                    assert!(s.is_ok(), "{id} m = {m} q = {q}: {s:?}");
                }
            }
        }
        for id in dyadic {
            for bound in [12, 96] {
                assert!(theorem_formula(id, p).unwrap().specialize(2).to_series(bound).is_ok(), "{id}");
            }
        }
    }
}

#[test]
fn envelope_abscissae() {
    for (d, r) in [(3u32, 1u32), (8, 3), (8, 2), (15, 6), (24, 10)] {
        let e = theorem_formula("psi_low", FormulaParams { d, rho: r, ..Default::default() }).unwrap();
        let want = BigRational::new(BigInt::from(d as i64 - 2 * r as i64), BigInt::from(r));
        assert_eq!(abscissa_of(&e).unwrap(), Some(want));
    }
}
