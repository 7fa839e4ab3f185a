use std::collections::BTreeSet;

use proptest::prelude::*;
use repzeta::qring::{arith, make_ring, ArithOp, QuotientRing, Val};

/// Small rings `(p, f, e, n)` with at most 10^4 elements.
const RINGS: &[(u64, u32, u32, u32)] = &[
    (2, 1, 1, 4),
    (2, 1, 2, 5),
    (2, 2, 1, 3),
    (3, 1, 1, 4),
    (3, 2, 1, 2),
    (3, 1, 2, 3),
    (5, 1, 1, 3),
    (5, 1, 2, 4),
    (7, 1, 1, 2),
];

fn val_sum(n: u32, a: Val, b: Val) -> u32 {
    (a.capped() + b.capped()).min(n)
}

fn ring_and_elems() -> impl Strategy<Value = (QuotientRing, u64, u64)> {
    prop::sample::select(RINGS).prop_flat_map(|(p, f, e, n)| {
        let r = make_ring(p, f, e, n).unwrap();
        let size = r.cardinality();
        (Just(r), 0..size, 0..size)
    })
}

proptest! {
    #[test]
    fn inverse_is_an_involution_on_units((r, a, _) in ring_and_elems()) {
        let x = r.from_index(a);
        prop_assume!(r.is_unit(&x));
        let y = r.inv(&x).unwrap();
        prop_assert_eq!(r.inv(&y).unwrap(), x.clone());
        prop_assert_eq!(r.mul(&x, &y), r.one());
    }

    #[test]
    fn valuation_is_additive((r, a, b) in ring_and_elems()) {
        let (x, y) = (r.from_index(a), r.from_index(b));
        let n = r.len();
        let v = r.valuation(&r.mul(&x, &y)).capped();
        prop_assert_eq!(v, val_sum(n, r.valuation(&x), r.valuation(&y)));
    }

    #[test]
    fn reduction_is_a_ring_homomorphism((r, a, b) in ring_and_elems(), m in 1u32..4) {
        let spec = r.spec();
        prop_assume!(m < spec.n);
        let t = make_ring(spec.p, spec.f, spec.e, m).unwrap();
        let (x, y) = (r.from_index(a), r.from_index(b));
        let red = |z| r.reduce(&z, &t).unwrap();
        for op in [ArithOp::Add, ArithOp::Mul] {
            let lhs = red(arith(&r, op, &[x.clone(), y.clone()]).unwrap());
            let rhs = arith(&t, op, &[red(x.clone()), red(y.clone())]).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
        prop_assert_eq!(red(r.neg(&x)), t.neg(&red(x.clone())));
        if r.is_unit(&x) {
            prop_assert_eq!(red(r.inv(&x).unwrap()), t.inv(&red(x)).unwrap());
        }
    }
}

#[test]
fn reduction_commutes_with_arithmetic_exhaustively() {
    // every pair in o/p^3 for Z_3[sqrt 3]
    let r = make_ring(3, 1, 2, 3).unwrap();
    let t = make_ring(3, 1, 2, 2).unwrap();
    let all: Vec<_> = (0..r.cardinality()).map(|i| r.from_index(i)).collect();
    for x in &all {
        for y in &all {
            let s = r.reduce(&r.add(x, y), &t).unwrap();
            assert_eq!(s, t.add(&r.reduce(x, &t).unwrap(), &r.reduce(y, &t).unwrap()));
            let p = r.reduce(&r.mul(x, y), &t).unwrap();
            assert_eq!(p, t.mul(&r.reduce(x, &t).unwrap(), &r.reduce(y, &t).unwrap()));
        }
    }
}

#[test]
fn digit_sets_biject_onto_quotients() {
    for &(p, f, e, n) in RINGS {
        let r = make_ring(p, f, e, n).unwrap();
        for l in 1..=n {
            let t = make_ring(p, f, e, l).unwrap();
            let set = r.teichmuller_set(l).unwrap();
            assert_eq!(set.len() as u64, r.q().pow(l));
            let images: BTreeSet<u64> = set.iter().map(|x| t.index_of(&r.reduce(x, &t).unwrap())).collect();
            assert_eq!(images.len() as u64, t.cardinality(), "ring {p},{f},{e},{n} at l = {l}");
        }
    }
}
