//! Linear algebra over `o/p^c`: elementary-divisor profiles of alternating
//! matrices, kernel counts, generic and minimal ranks of commutator matrices
//! and minor norms.

use rayon::prelude::*;
use thiserror::Error;

use crate::lie::{CommutatorMatrix, Scalar, Sym};
use crate::poly::Poly;
use crate::qring::{QuotientRing, RingElem, RingTable, Val, TABLE_LIMIT};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatError {
    #[error("shape violation: {0}")]
    Shape(String),
    #[error(transparent)]
    Lie(#[from] crate::lie::LieError),
    #[error(transparent)]
    Ring(#[from] crate::qring::RingError),
}

/// Arithmetic needed by the elimination kernels.
pub trait LocalRing: Sync {
    type E: Clone + PartialEq + Send + Sync;
    /// Length `c` of the ring `o/p^c`.
    fn depth(&self) -> u32;
    fn zero(&self) -> Self::E;
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    /// Valuation with zero reported as the depth.
    fn val(&self, a: &Self::E) -> u32;
    /// `a / b` for `v(a) >= v(b)` and `b` nonzero, determined modulo `p^(c - v(b))`.
    fn div_exact(&self, a: &Self::E, b: &Self::E) -> Self::E;
}

impl LocalRing for RingTable {
    type E = u16;
    fn depth(&self) -> u32 {
        self.n
    }
    fn zero(&self) -> u16 {
        0
    }
    fn add(&self, a: &u16, b: &u16) -> u16 {
        RingTable::add(self, *a, *b)
    }
    fn sub(&self, a: &u16, b: &u16) -> u16 {
        RingTable::sub(self, *a, *b)
    }
    fn mul(&self, a: &u16, b: &u16) -> u16 {
        RingTable::mul(self, *a, *b)
    }
    fn val(&self, a: &u16) -> u32 {
        RingTable::val(self, *a)
    }
    fn div_exact(&self, a: &u16, b: &u16) -> u16 {
        RingTable::div_exact(self, *a, *b)
    }
}

impl LocalRing for QuotientRing {
    type E = RingElem;
    fn depth(&self) -> u32 {
        self.len()
    }
    fn zero(&self) -> RingElem {
        QuotientRing::zero(self)
    }
    fn add(&self, a: &RingElem, b: &RingElem) -> RingElem {
        QuotientRing::add(self, a, b)
    }
    fn sub(&self, a: &RingElem, b: &RingElem) -> RingElem {
        QuotientRing::sub(self, a, b)
    }
    fn mul(&self, a: &RingElem, b: &RingElem) -> RingElem {
        QuotientRing::mul(self, a, b)
    }
    fn val(&self, a: &RingElem) -> u32 {
        self.valuation(a).capped()
    }
    fn div_exact(&self, a: &RingElem, b: &RingElem) -> RingElem {
        if self.is_zero(a) {
            return QuotientRing::zero(self);
        }
        let (va, vb) = (self.val(a), self.val(b));
        let u = QuotientRing::mul(self, &self.unit_part(a), &self.inv(&self.unit_part(b)).expect("unit part"));
        QuotientRing::mul(self, &u, &self.pi_pow(va - vb))
    }
}

/// Elementary divisors of an alternating matrix: each `p^(a_i)` occurs twice,
/// plus one divisor `p^inf` when `d` is odd.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DivisorProfile {
    /// Nondecreasing; finite entries are `< cap`.
    pub a: Vec<Val>,
    pub cap: u32,
    pub odd: bool,
}

impl DivisorProfile {
    /// Number of finite entries: the half-rank modulo `p^cap`.
    pub fn half_rank(&self) -> usize {
        self.a.iter().filter(|v| v.is_finite()).count()
    }

    /// `log_q` of the kernel size of `z -> z A` on `(o/p^c)^d`.
    pub fn kernel_exponent(&self) -> u64 {
        let c = self.cap as u64;
        self.a.iter().map(|v| 2 * (v.capped() as u64).min(c)).sum::<u64>() + if self.odd { c } else { 0 }
    }

    /// Finite entries as integers, `None` for `AT_LEAST`.
    pub fn finite_values(&self) -> Vec<Option<u32>> {
        self.a
            .iter()
            .map(|v| match v {
                Val::Finite(x) => Some(*x),
                Val::AtLeast(_) => None,
            })
            .collect()
    }
}

/// Checks `A^T = -A` with zero diagonal.
pub fn check_alternating<R: LocalRing>(ring: &R, a: &[Vec<R::E>]) -> Result<(), MatError> {
    let d = a.len();
    let zero = ring.zero();
    for (i, row) in a.iter().enumerate() {
        if row.len() != d {
            return Err(MatError::Shape("matrix is not square".into()));
        }
        if row[i] != zero {
            return Err(MatError::Shape("nonzero diagonal".into()));
        }
        for j in i + 1..d {
            if ring.add(&row[j], &a[j][i]) != zero {
                return Err(MatError::Shape("matrix is not antisymmetric".into()));
            }
        }
    }
    Ok(())
}

/// Profile of an alternating matrix by symplectic elimination.
///
/// The pivot is a minimal-valuation entry of the upper triangle, first in
/// row-major order, so profiles are deterministic.
pub fn witt_profile<R: LocalRing>(ring: &R, a: &[Vec<R::E>]) -> Result<DivisorProfile, MatError> {
    check_alternating(ring, a)?;
    Ok(witt_profile_unchecked(ring, a.to_vec()))
}

/// As [`witt_profile`] without the shape check; consumes the matrix.
pub fn witt_profile_unchecked<R: LocalRing>(ring: &R, mut a: Vec<Vec<R::E>>) -> DivisorProfile {
    let c = ring.depth();
    let d = a.len();
    let mut active: Vec<usize> = (0..d).collect();
    let mut out = Vec::with_capacity(d / 2);
    while active.len() >= 2 {
        let mut best: Option<(u32, usize, usize)> = None;
        'scan: for (x, &i) in active.iter().enumerate() {
            for &j in &active[x + 1..] {
                let v = ring.val(&a[i][j]);
                if v < c && best.is_none_or(|(bv, _, _)| v < bv) {
                    best = Some((v, i, j));
                    if v == 0 {
                        break 'scan;
                    }
                }
            }
        }
        let Some((v, i, j)) = best else { break };
        out.push(Val::Finite(v));
        let piv = a[i][j].clone();
        active.retain(|&k| k != i && k != j);
        // e'_k = e_k - x_k e_j + y_k e_i with x_k = a_ik / a_ij, y_k = a_jk / a_ij
        let xs: Vec<R::E> = active.iter().map(|&k| ring.div_exact(&a[i][k], &piv)).collect();
        let ys: Vec<R::E> = active.iter().map(|&k| ring.div_exact(&a[j][k], &piv)).collect();
        for (s, &k) in active.iter().enumerate() {
            for (t, &l) in active.iter().enumerate().skip(s + 1) {
                let mut v = a[k][l].clone();
                v = ring.sub(&v, &ring.mul(&xs[t], &a[k][j]));
                v = ring.add(&v, &ring.mul(&ys[t], &a[k][i]));
                v = ring.sub(&v, &ring.mul(&xs[s], &a[j][l]));
                v = ring.add(&v, &ring.mul(&ring.mul(&xs[s], &ys[t]), &piv));
                v = ring.add(&v, &ring.mul(&ys[s], &a[i][l]));
                v = ring.sub(&v, &ring.mul(&ring.mul(&ys[s], &xs[t]), &piv));
                a[l][k] = ring.sub(&ring.zero(), &v);
                a[k][l] = v;
            }
        }
    }
    while out.len() < d / 2 {
        out.push(Val::AtLeast(c));
    }
    DivisorProfile { a: out, cap: c, odd: d % 2 == 1 }
}

/// Brute-force `log_q` kernel size of `z -> z A`, for tests and small cases.
pub fn kernel_exponent_brute(ring: &RingTable, a: &[Vec<u16>]) -> u64 {
    let d = a.len();
    let size = ring.size as u64;
    let total = size.pow(d as u32);
    let mut count = 0u64;
    let mut z = vec![0u16; d];
    for idx in 0..total {
        let mut t = idx;
        for zi in z.iter_mut() {
            *zi = (t % size) as u16;
            t /= size;
        }
        let in_kernel = (0..d).all(|j| (0..d).fold(0u16, |acc, i| ring.add(acc, ring.mul(z[i], a[i][j]))) == 0);
        if in_kernel {
            count += 1;
        }
    }
    let q = ring.q as u64;
    let mut e = 0;
    let mut c = count;
    while c > 1 {
        assert_eq!(c % q, 0, "kernel size is a power of q");
        c /= q;
        e += 1;
    }
    e
}

/// Variables of the symbolic commutator matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GVar {
    Pi,
    A,
    Y(u16),
}

impl std::fmt::Display for GVar {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GVar::Pi => write!(f, "pi"),
            GVar::A => write!(f, "a"),
            GVar::Y(h) => write!(f, "Y{}", h + 1),
        }
    }
}

fn lift_scalar(s: &Scalar) -> Poly<GVar> {
    s.substitute(&|v| match v {
        Sym::Pi => Poly::var(GVar::Pi),
        Sym::A => Poly::var(GVar::A),
    })
}

/// `R(Y)` with polynomial entries in `Y_1..Y_d`, `pi` and `a`.
pub fn symbolic_matrix(r: &CommutatorMatrix) -> Vec<Vec<Poly<GVar>>> {
    (0..r.d)
        .map(|i| {
            (0..r.d)
                .map(|j| {
                    (0..r.d).fold(Poly::zero(), |acc, h| {
                        let c = crate::lie::normalize_scalar(&r.coeffs[i][j][h], &r.family);
                        if c.is_zero() {
                            acc
                        } else {
                            acc.add(&lift_scalar(&c).mul(&Poly::var(GVar::Y(h as u16))))
                        }
                    })
                })
                .collect()
        })
        .collect()
}

/// Rank of a polynomial matrix over its fraction field by Bareiss elimination.
pub fn bareiss_rank(m: &[Vec<Poly<GVar>>]) -> usize {
    let mut a: Vec<Vec<Poly<GVar>>> = m.to_vec();
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut prev = Poly::one();
    let mut rank = 0;
    for col in 0..cols {
        let Some(piv) = (rank..rows)
            .filter(|&r| !a[r][col].is_zero())
            .min_by_key(|&r| a[r][col].num_terms())
        else {
            continue;
        };
        a.swap(rank, piv);
        for r in rank + 1..rows {
            for c in col + 1..cols {
                let t = a[rank][col].mul(&a[r][c]).sub(&a[r][col].mul(&a[rank][c]));
                a[r][c] = t.div_exact(&prev).expect("Bareiss quotients are exact");
            }
            a[r][col] = Poly::zero();
        }
        prev = a[rank][col].clone();
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// Result of the generic-rank computation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RhoCertificate {
    pub rho: usize,
    /// Half the symbolic rank: an upper bound.
    pub symbolic_half_rank: usize,
    /// A point whose matrix has `rho` finite Witt entries: a lower bound.
    pub witness: Vec<u64>,
    pub witness_depth: u32,
}

/// Generic half-rank of `R(Y)`, certified from both sides.
pub fn generic_rank_rho(r: &CommutatorMatrix) -> Result<RhoCertificate, MatError> {
    let upper = bareiss_rank(&symbolic_matrix(r)) / 2;
    let depth = 4 * r.family.e;
    let ring = r.family.ring(depth)?;
    let coeffs = r.evaluate_coeffs(&ring)?;
    let d = r.d;
    // small pseudo-random integer points, deterministic
    let mut state: u64 = 0x9E37_79B9_7F4A_7C15;
    for _ in 0..512 {
        let y: Vec<u64> = (0..d)
            .map(|_| {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                (state >> 33) % ring.q().pow(2)
            })
            .collect();
        let ye: Vec<RingElem> = y.iter().map(|&i| ring.from_index(i * ring.q().pow(depth - 2))).collect();
        let m = eval_matrix(&ring, &coeffs, &ye);
        let prof = witt_profile_unchecked(&ring, m);
        if prof.half_rank() == upper {
            return Ok(RhoCertificate { rho: upper, symbolic_half_rank: upper, witness: y, witness_depth: depth });
        }
    }
    Err(MatError::Shape("no witness point attains the symbolic rank".into()))
}

/// `R(y)` from evaluated coefficients.
pub fn eval_matrix<R: LocalRing>(ring: &R, coeffs: &[Vec<Vec<R::E>>], y: &[R::E]) -> Vec<Vec<R::E>> {
    let d = y.len();
    (0..d)
        .map(|i| {
            (0..d)
                .map(|j| {
                    let mut acc = ring.zero();
                    for h in 0..d {
                        acc = ring.add(&acc, &ring.mul(&coeffs[i][j][h], &y[h]));
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

/// Coefficients of `R` as indices of a [`RingTable`].
pub fn table_coeffs(ring: &QuotientRing, r: &CommutatorMatrix) -> Result<Vec<Vec<Vec<u16>>>, MatError> {
    let c = r.evaluate_coeffs(ring)?;
    Ok(c.iter()
        .map(|row| row.iter().map(|v| v.iter().map(|x| ring.index_of(x) as u16).collect()).collect())
        .collect())
}

/// Certification status of a minimal-rank search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SigmaStatus {
    Certified,
    UpperBound,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SigmaResult {
    pub sigma: usize,
    pub status: SigmaStatus,
    /// Residue-digit indices of a minimising point modulo `p^K`.
    pub witness: Vec<u64>,
}

/// Known values of `sigma` from centraliser dimensions.
pub fn builtin_sigma(id: &str) -> Option<usize> {
    match id {
        "sl2" => Some(1),
        "sl3" => Some(2),
        _ if id.starts_with("sl1_quat") => Some(1),
        _ if id.starts_with("sl") => id[2..].parse::<usize>().ok().map(|n| n - 1),
        _ => None,
    }
}

/// Exhaustive minimal half-rank over primitive `y` modulo `p^K`.
///
/// Each `y` is lifted by its digits and profiled at depth `2K`; the minimum
/// of the observed half-ranks is the candidate.
pub fn min_rank_sigma(r: &CommutatorMatrix, id: &str, k: u32) -> Result<SigmaResult, MatError> {
    assert!(k >= 1, "search depth must be positive");
    let depth = 2 * k * r.family.e;
    let ring = r.family.ring(depth)?;
    let q = ring.q();
    let d = r.d;
    let per = q.pow(k * r.family.e);
    let total = per.checked_pow(d as u32).ok_or_else(|| MatError::Shape("search space too large".into()))?;
    let shift = q.pow(depth - k * r.family.e);
    let best = if ring.cardinality() <= TABLE_LIMIT {
        let table = RingTable::new(&ring)?;
        let coeffs = table_coeffs(&ring, r)?;
        search_min(&table, &coeffs, d, per, total, q, &|i| (i * shift) as u16)
    } else {
        let coeffs = r.evaluate_coeffs(&ring)?;
        search_min(&ring, &coeffs, d, per, total, q, &|i| ring.from_index(i * shift))
    };
    let (sigma, idx) = best.ok_or_else(|| MatError::Shape("empty search space".into()))?;
    let witness = (0..d).map(|h| (idx / per.pow(h as u32)) % per).collect();
    let status = if builtin_sigma(id) == Some(sigma) { SigmaStatus::Certified } else { SigmaStatus::UpperBound };
    Ok(SigmaResult { sigma, status, witness })
}

fn search_min<R: LocalRing>(
    ring: &R,
    coeffs: &[Vec<Vec<R::E>>],
    d: usize,
    per: u64,
    total: u64,
    q: u64,
    lift: &(dyn Fn(u64) -> R::E + Sync),
) -> Option<(usize, u64)> {
    // partition by the leading coordinate block, merge minima by (rank, index)
    let chunk = total / per;
    (0..per)
        .into_par_iter()
        .filter_map(|lead| {
            let mut best: Option<(usize, u64)> = None;
            for rest in 0..chunk {
                let idx = rest + lead * chunk;
                let digits: Vec<u64> = (0..d).map(|h| (idx / per.pow(h as u32)) % per).collect();
                // primitive: some coordinate has a nonzero residue (top digit)
                if digits.iter().all(|&x| x < per / q) {
                    continue;
                }
                let y: Vec<R::E> = digits.iter().map(|&x| lift(x)).collect();
                let hr = witt_profile_unchecked(ring, eval_matrix(ring, coeffs, &y)).half_rank();
                if best.is_none_or(|b| (hr, idx) < b) {
                    best = Some((hr, idx));
                }
            }
            best
        })
        .min()
}

/// Valuation of the determinant of a square matrix, capped at the depth.
pub fn det_valuation<R: LocalRing>(ring: &R, mut a: Vec<Vec<R::E>>) -> u32 {
    let c = ring.depth();
    let n = a.len();
    let mut total = 0u32;
    let mut active_rows: Vec<usize> = (0..n).collect();
    let mut active_cols: Vec<usize> = (0..n).collect();
    while !active_rows.is_empty() {
        let mut best: Option<(u32, usize, usize)> = None;
        for (x, &i) in active_rows.iter().enumerate() {
            for (y, &j) in active_cols.iter().enumerate() {
                let v = ring.val(&a[i][j]);
                if v < c && best.is_none_or(|(bv, _, _)| v < bv) {
                    best = Some((v, x, y));
                }
            }
        }
        let Some((v, x, y)) = best else { return c };
        total += v;
        if total >= c {
            return c;
        }
        let (i, j) = (active_rows.remove(x), active_cols.remove(y));
        let piv = a[i][j].clone();
        for &r in &active_rows {
            let f = ring.div_exact(&a[r][j], &piv);
            for &s in &active_cols {
                let t = ring.mul(&f, &a[i][s]);
                a[r][s] = ring.sub(&a[r][s], &t);
            }
        }
    }
    total
}

/// Elementary-divisor valuations of a rectangular matrix, capped at the depth.
pub fn smith_valuations<R: LocalRing>(ring: &R, mut a: Vec<Vec<R::E>>) -> Vec<Val> {
    let c = ring.depth();
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut rs: Vec<usize> = (0..rows).collect();
    let mut cs: Vec<usize> = (0..cols).collect();
    let mut out = Vec::new();
    while !rs.is_empty() && !cs.is_empty() {
        let mut best: Option<(u32, usize, usize)> = None;
        for (x, &i) in rs.iter().enumerate() {
            for (y, &j) in cs.iter().enumerate() {
                let v = ring.val(&a[i][j]);
                if v < c && best.is_none_or(|(bv, _, _)| v < bv) {
                    best = Some((v, x, y));
                }
            }
        }
        let Some((v, x, y)) = best else { break };
        out.push(Val::Finite(v));
        let (i, j) = (rs.remove(x), cs.remove(y));
        let piv = a[i][j].clone();
        for &r in &rs {
            let f = ring.div_exact(&a[r][j], &piv);
            for &s in &cs {
                let t = ring.mul(&f, &a[i][s]);
                a[r][s] = ring.sub(&a[r][s], &t);
            }
        }
    }
    while out.len() < rows.min(cols) {
        out.push(Val::AtLeast(c));
    }
    out
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Valuation of `||F_j(y)||`: the minimum over `2j x 2j` minors of `R(y)`,
/// or over principal minors only when `principal` is set.
pub fn minor_norm<R: LocalRing>(ring: &R, m: &[Vec<R::E>], j: usize, principal: bool) -> Val {
    let c = ring.depth();
    if j == 0 {
        return Val::Finite(0);
    }
    let subsets = combinations(m.len(), 2 * j);
    let mut best = c;
    for rows in &subsets {
        let col_sets: Vec<&Vec<usize>> = if principal { vec![rows] } else { subsets.iter().collect() };
        for cols in col_sets {
            let sub: Vec<Vec<R::E>> = rows.iter().map(|&r| cols.iter().map(|&s| m[r][s].clone()).collect()).collect();
            best = best.min(det_valuation(ring, sub));
            if best == 0 {
                return Val::Finite(0);
            }
        }
    }
    if best >= c {
        Val::AtLeast(c)
    } else {
        Val::Finite(best)
    }
}

/// `||F_j||` from a profile: the `2j`-th determinantal divisor.
pub fn minor_norm_from_profile(p: &DivisorProfile, j: usize) -> Val {
    let s: u32 = p.a.iter().take(j).map(|v| 2 * v.capped()).sum();
    if j > p.a.len() || s >= p.cap {
        Val::AtLeast(p.cap)
    } else {
        Val::Finite(s)
    }
}

/// All `2j x 2j` minors of `R(Y)` as polynomials (`F_j`).
pub fn minor_family(r: &CommutatorMatrix, j: usize, principal: bool) -> Vec<Poly<GVar>> {
    let m = symbolic_matrix(r);
    let subsets = combinations(r.d, 2 * j);
    let mut out = Vec::new();
    for rows in &subsets {
        let col_sets: Vec<&Vec<usize>> = if principal { vec![rows] } else { subsets.iter().collect() };
        for cols in col_sets {
            let sub: Vec<Vec<Poly<GVar>>> =
                rows.iter().map(|&a| cols.iter().map(|&b| m[a][b].clone()).collect()).collect();
            let det = bareiss_det(sub);
            if !det.is_zero() && !out.contains(&det) {
                out.push(det);
            }
        }
    }
    out
}

/// Determinant by Bareiss elimination with row swaps.
pub fn bareiss_det(mut a: Vec<Vec<Poly<GVar>>>) -> Poly<GVar> {
    let n = a.len();
    if n == 0 {
        return Poly::one();
    }
    let mut sign = false;
    let mut prev = Poly::one();
    for k in 0..n - 1 {
        let Some(piv) = (k..n).find(|&r| !a[r][k].is_zero()) else { return Poly::zero() };
        if piv != k {
            a.swap(k, piv);
            sign = !sign;
        }
        for r in k + 1..n {
            for c in k + 1..n {
                let t = a[k][k].mul(&a[r][c]).sub(&a[r][k].mul(&a[k][c]));
                a[r][c] = t.div_exact(&prev).expect("Bareiss quotients are exact");
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign {
        d.neg()
    } else {
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::{BuiltinId, LieLattice};
    use crate::qring::make_ring;

    fn table(p: u64, c: u32) -> RingTable {
        RingTable::new(&make_ring(p, 1, 1, c).unwrap()).unwrap()
    }

    #[test]
    fn sl2_profile_at_unit_point() {
        let ring = make_ring(3, 1, 1, 2).unwrap();
        let l = LieLattice::builtin(BuiltinId::Sl2, 3, 1, 1).unwrap();
        let m = l.commutator_matrix().at(&ring, &[ring.one(), ring.zero(), ring.zero()]).unwrap();
        let p = witt_profile(&ring, &m).unwrap();
        assert_eq!(p.a, vec![Val::Finite(0)]);
        assert!(p.odd);
    }

    #[test]
    fn zero_matrix_profile() {
        let t = table(3, 2);
        let p = witt_profile(&t, &vec![vec![0u16; 4]; 4]).unwrap();
        assert_eq!(p.a, vec![Val::AtLeast(2), Val::AtLeast(2)]);
        assert_eq!(p.kernel_exponent(), 8);
    }

    #[test]
    fn normal_form_profile() {
        // blocks 1, 1, p^a, 0 in an 8x8 matrix over Z/27
        let ring = make_ring(3, 1, 1, 3).unwrap();
        let t = RingTable::new(&ring).unwrap();
        let ix = |v: i64| ring.index_of(&ring.from_int(v)) as u16;
        let mut m = vec![vec![0u16; 8]; 8];
        let put = |m: &mut Vec<Vec<u16>>, i: usize, j: usize, v: u16| {
            m[i][j] = v;
            m[j][i] = t.neg(v);
        };
        put(&mut m, 0, 1, ix(1));
        put(&mut m, 2, 3, ix(1));
        put(&mut m, 4, 5, ix(3));
        let p = witt_profile(&t, &m).unwrap();
        assert_eq!(p.a, vec![Val::Finite(0), Val::Finite(0), Val::Finite(1), Val::AtLeast(3)]);
    }

    #[test]
    fn rejects_non_alternating() {
        let t = table(3, 1);
        let m = vec![vec![0u16, 1], vec![1, 0]];
        assert!(matches!(witt_profile(&t, &m), Err(MatError::Shape(_))));
    }

    #[test]
    fn rho_of_builtins() {
        let sl2 = LieLattice::builtin(BuiltinId::Sl2, 3, 1, 1).unwrap();
        assert_eq!(generic_rank_rho(&sl2.commutator_matrix()).unwrap().rho, 1);
        let sl3 = LieLattice::builtin(BuiltinId::Sl3, 5, 1, 1).unwrap();
        assert_eq!(generic_rank_rho(&sl3.commutator_matrix()).unwrap().rho, 3);
        let quat = LieLattice::builtin(BuiltinId::Sl1Quat(1), 3, 1, 1).unwrap();
        assert_eq!(generic_rank_rho(&quat.commutator_matrix()).unwrap().rho, 1);
        let ab = LieLattice::abelian(3, 3, 1, 1);
        assert_eq!(generic_rank_rho(&ab.commutator_matrix()).unwrap().rho, 0);
    }

    #[test]
    fn sigma_of_small_builtins() {
        let sl2 = LieLattice::builtin(BuiltinId::Sl2, 3, 1, 1).unwrap();
        let s = min_rank_sigma(&sl2.commutator_matrix(), "sl2", 1).unwrap();
        assert_eq!((s.sigma, s.status), (1, SigmaStatus::Certified));
        let quat = LieLattice::builtin(BuiltinId::Sl1Quat(0), 3, 1, 1).unwrap();
        let s = min_rank_sigma(&quat.commutator_matrix(), "sl1_quat_0", 1).unwrap();
        assert_eq!((s.sigma, s.status), (1, SigmaStatus::Certified));
    }

    #[test]
    fn sigma_of_sl3_mod_3() {
        let sl3 = LieLattice::builtin(BuiltinId::Sl3, 3, 1, 1).unwrap();
        let s = min_rank_sigma(&sl3.commutator_matrix(), "sl3", 1).unwrap();
        assert_eq!((s.sigma, s.status), (2, SigmaStatus::Certified));
    }

    #[test]
    fn minor_norms() {
        let ring = make_ring(3, 1, 1, 3).unwrap();
        let l = LieLattice::builtin(BuiltinId::Sl2, 3, 1, 1).unwrap();
        let m = l.commutator_matrix().at(&ring, &[ring.one(), ring.zero(), ring.zero()]).unwrap();
        assert_eq!(minor_norm(&ring, &m, 1, false), Val::Finite(0));
        assert_eq!(minor_norm(&ring, &m, 0, false), Val::Finite(0));
        let f1 = minor_family(&l.commutator_matrix(), 1, true);
        // principal 2x2 minors of R(Y) are squares of the entries
        assert_eq!(f1.len(), 3);
    }

    #[test]
    fn principal_minors_suffice_for_alternating() {
        let ring = make_ring(3, 1, 1, 4).unwrap();
        let r = LieLattice::builtin(BuiltinId::Sl3, 3, 1, 1).unwrap().commutator_matrix();
        for t in 0..24i64 {
            let y: Vec<_> = (0..8i64).map(|i| ring.from_int((t * 7 + i * i * 5 + t * i) % 81 * 3i64.pow((t + i) as u32 % 3))).collect();
            let m = r.at(&ring, &y).unwrap();
            for j in 1..=4 {
                assert_eq!(minor_norm(&ring, &m, j, true), minor_norm(&ring, &m, j, false), "y #{t}, j = {j}");
            }
        }
    }
}
