use proptest::prelude::*;
use repzeta::lie::{BuiltinId, LieLattice};
use repzeta::matalg::{eval_matrix, generic_rank_rho, table_coeffs, kernel_exponent_brute, witt_profile, witt_profile_unchecked};
use repzeta::qring::{make_ring, RingTable};

/// `(p, c, d)` with at most 2^18 vectors in `(Z/p^c)^d`.
fn shapes() -> Vec<(u64, u32, usize)> {
    let mut v = Vec::new();
    for p in [2u64, 3, 5] {
        for c in 1..=3u32 {
            for d in 1..=6usize {
                if p.pow(c).pow(d as u32) <= 1 << 18 {
                    v.push((p, c, d));
                }
            }
        }
    }
    v
}

fn alternating(t: &RingTable, d: usize, raw: &[u16]) -> Vec<Vec<u16>> {
    let size = t.size as u16;
    let mut m = vec![vec![0u16; d]; d];
    let mut k = 0;
    for i in 0..d {
        for j in i + 1..d {
            let x = raw[k] % size;
            k += 1;
            m[i][j] = x;
            m[j][i] = t.neg(x);
        }
    }
    m
}

fn matrix_case() -> impl Strategy<Value = (u64, u32, usize, Vec<u16>)> {
    prop::sample::select(shapes()).prop_flat_map(|(p, c, d)| (Just(p), Just(c), Just(d), prop::collection::vec(any::<u16>(), 15)))
}

fn mat_mul(t: &RingTable, a: &[Vec<u16>], b: &[Vec<u16>]) -> Vec<Vec<u16>> {
    let n = a.len();
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).fold(0u16, |acc, k| t.add(acc, t.mul(a[i][k], b[k][j])))).collect())
        .collect()
}

fn transpose(a: &[Vec<u16>]) -> Vec<Vec<u16>> {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| a[j][i]).collect()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn kernel_count_matches_profile((p, c, d, raw) in matrix_case()) {
        let ring = make_ring(p, 1, 1, c).unwrap();
        let t = RingTable::new(&ring).unwrap();
        let m = alternating(&t, d, &raw);
        let prof = witt_profile(&t, &m).unwrap();
        prop_assert_eq!(kernel_exponent_brute(&t, &m), prof.kernel_exponent());
    }

    #[test]
    fn profile_is_congruence_invariant((p, c, d, raw) in matrix_case(), ops in prop::collection::vec((0usize..6, 0usize..6, any::<u16>()), 1..8)) {
        let ring = make_ring(p, 1, 1, c).unwrap();
        let t = RingTable::new(&ring).unwrap();
        let m = alternating(&t, d, &raw);
        // product of elementary matrices: unimodular
        let mut u: Vec<Vec<u16>> = (0..d).map(|i| (0..d).map(|j| if i == j { t.one() } else { 0 }).collect()).collect();
        for (i, j, x) in ops {
            let (i, j) = (i % d, j % d);
            if i == j {
                continue;
            }
            let mut e: Vec<Vec<u16>> = (0..d).map(|a| (0..d).map(|b| if a == b { t.one() } else { 0 }).collect()).collect();
            e[i][j] = x % t.size as u16;
            u = mat_mul(&t, &u, &e);
        }
        let n = mat_mul(&t, &mat_mul(&t, &transpose(&u), &m), &u);
        prop_assert_eq!(witt_profile(&t, &m).unwrap(), witt_profile(&t, &n).unwrap());
    }

    #[test]
    fn profile_is_invariant_under_unit_scaling(which in 0usize..3, ys in prop::collection::vec(0u64..1 << 20, 8), u in 1u64..1 << 20) {
        let (id, p) = [(BuiltinId::Sl2, 3), (BuiltinId::Sl3, 5), (BuiltinId::Sl1Quat(1), 5)][which];
        let l = LieLattice::builtin(id, p, 1, 1).unwrap();
        let ring = l.family.ring(3).unwrap();
        let unit = ring.from_index(u % ring.cardinality());
        prop_assume!(ring.is_unit(&unit));
        let y: Vec<_> = ys.iter().take(l.d).map(|&v| ring.from_index(v % ring.cardinality())).collect();
        let uy: Vec<_> = y.iter().map(|v| ring.mul(&unit, v)).collect();
        let cm = l.commutator_matrix();
        let a = witt_profile(&ring, &cm.at(&ring, &y).unwrap()).unwrap();
        let b = witt_profile(&ring, &cm.at(&ring, &uy).unwrap()).unwrap();
        prop_assert_eq!(a, b);
    }
}

#[test]
fn generic_rank_is_the_maximum_over_residues() {
    for (id, p) in [(BuiltinId::Sl2, 5), (BuiltinId::Sl3, 5), (BuiltinId::Sl1Quat(1), 5)] {
        let l = LieLattice::builtin(id, p, 1, 1).unwrap();
        let cm = l.commutator_matrix();
        let ring = l.family.ring(1).unwrap();
        let t = RingTable::new(&ring).unwrap();
        let coeffs = table_coeffs(&ring, &cm).unwrap();
        let size = t.size as u64;
        let mut best = 0;
        for idx in 0..size.pow(l.d as u32) {
            let y: Vec<u16> = (0..l.d).map(|h| ((idx / size.pow(h as u32)) % size) as u16).collect();
            best = best.max(witt_profile_unchecked(&t, eval_matrix(&t, &coeffs, &y)).half_rank());
        }
        assert_eq!(generic_rank_rho(&cm).unwrap().rho, best, "{}", id.name());
    }
}
