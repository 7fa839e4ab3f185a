use repzeta::fingroup::{build_group, character_degrees, conjugacy_classes, degree_zeta, monotone, GroupId, GROUP_BUDGET};
use repzeta::forbits::{classify_space, gl_order, lifting_lemma_check, sl_order, OrbitSpace, ORBIT_BUDGET};

#[test]
fn orbit_types_partition_the_space() {
    let cases = [
        (OrbitSpace::Sl2, 2u32, vec![3u64, 5, 7, 9, 11, 13]),
        (OrbitSpace::Sl3, 3, vec![3, 5]),
        (OrbitSpace::Gl3TraceMinusOne, 3, vec![3]),
    ];
    for (space, n, qs) in cases {
        let dim = if n == 2 { 3 } else { 8 };
        for q in qs {
            let reports = classify_space(space, q, ORBIT_BUDGET).unwrap();
            let total: u64 = reports.iter().map(|r| r.total).sum();
            assert_eq!(total, q.pow(dim), "{space:?} q = {q}");
            for r in &reports {
                assert_eq!(r.orbits * r.orbit_size, r.total);
                assert_eq!(r.orbit_size * r.centraliser_gl, gl_order(n, q), "{space:?} q = {q} type {}", r.label);
                assert_eq!(r.centraliser_sl, r.centraliser_sl_from_orbit);
                assert!(r.centraliser_sl <= sl_order(n, q));
            }
        }
    }
}

#[test]
fn centralisers_lift_through_the_congruence_kernel() {
    for p in [3u64, 5] {
        let c = lifting_lemma_check(p, 50, 11).unwrap();
        assert_eq!(c.failures, 0, "p = {p}");
    }
}

#[test]
fn squared_degrees_sum_to_the_order() {
    let groups = [
        GroupId::Cyclic { n: 12 },
        GroupId::Sl2 { p: 2, f: 1, e: 1, k: 3 },
        GroupId::Sl2 { p: 2, f: 2, e: 1, k: 1 },
        GroupId::Sl2 { p: 3, f: 1, e: 1, k: 2 },
        GroupId::Sl2 { p: 2, f: 1, e: 2, k: 3 },
        GroupId::Sl2Congruence { p: 3, f: 1, e: 1, k: 3 },
        GroupId::Sl2Congruence { p: 2, f: 1, e: 1, k: 4 },
        GroupId::Sl1 { p: 3, f: 1, k: 3 },
        GroupId::Sl1 { p: 5, f: 1, k: 2 },
    ];
    for id in groups {
        let g = build_group(id, GROUP_BUDGET).unwrap();
        let data = character_degrees(&g, 3).unwrap();
        assert_eq!(data.sum_of_squares(), g.order(), "{}", id.name());
        assert_eq!(data.degrees.len(), conjugacy_classes(&g).count(), "{}", id.name());
    }
}

#[test]
fn degree_counts_grow_along_quotients() {
    for k in 1..4 {
        let a = degree_zeta(&character_degrees(&build_group(GroupId::Sl2 { p: 2, f: 1, e: 1, k }, GROUP_BUDGET).unwrap(), 1).unwrap());
        let b = degree_zeta(&character_degrees(&build_group(GroupId::Sl2 { p: 2, f: 1, e: 1, k: k + 1 }, GROUP_BUDGET).unwrap(), 1).unwrap());
        assert!(monotone(&a, &b), "k = {k}");
    }
}

#[test]
fn quaternion_filtration_quotients() {
    for p in [3u64, 5] {
        let q = p;
        let orders: Vec<u64> = (1..=4).map(|k| build_group(GroupId::Sl1 { p, f: 1, k }, GROUP_BUDGET).unwrap().order()).collect();
        assert_eq!(orders[0], q + 1);
        for m in 1..4 {
            let want = if m % 2 == 1 { q * q } else { q };
            assert_eq!(orders[m] / orders[m - 1], want, "p = {p}, layer {m}");
        }
    }
}
