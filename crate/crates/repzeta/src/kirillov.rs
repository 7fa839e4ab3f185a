//! Orbit-method enumeration of irreducible characters of congruence
//! subgroups.
//!
//! A primitive functional `w` of level `n` on the lattice contributes a
//! co-adjoint orbit of size `q^E` with `E = 2 sum_i max(n - a_i, 0)`, where
//! `a_i` is the divisor profile of the lattice's own commutator matrix at `w`.
//! Writing the matrix as `pi^mu M'`, only the profile of `M'` at depth
//! `n - mu` matters, and the profile of a class is fixed once its first `rho`
//! entries are finite; the enumeration refines only unresolved classes.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde_json::json;
use thiserror::Error;

use crate::cache::{cache_key, CacheRecord, ProfileCache};
use crate::lie::LieLattice;
use crate::matalg::{
    eval_matrix, generic_rank_rho, smith_valuations, table_coeffs, witt_profile_unchecked, DivisorProfile, LocalRing,
    MatError,
};
use crate::qring::{QuotientRing, RingTable, Val, TABLE_LIMIT};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KirillovError {
    #[error("budget exceeded: {required} profile computations needed, budget {budget}")]
    BudgetExceeded { required: u64, budget: u64 },
    #[error("profile too shallow for level {0}")]
    TooShallow(u32),
    #[error("level {m} is not permissible: {reason}")]
    NotPermissible { m: u32, reason: String },
    #[error(transparent)]
    Mat(#[from] MatError),
    #[error("cache: {0}")]
    Cache(String),
}

/// Default cap on profile computations per enumeration.
pub const DEFAULT_BUDGET: u64 = 200_000_000;

/// A finite part of a representation zeta function: degree to count.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TruncatedSeries {
    pub counts: BTreeMap<BigUint, BigUint>,
    /// Counts of every degree up to this bound are final.
    pub complete_through: Option<BigUint>,
    /// Level bound of the enumeration, when the series came from one.
    pub level_bound: Option<u32>,
}

impl TruncatedSeries {
    pub fn new(counts: BTreeMap<BigUint, BigUint>, complete_through: Option<BigUint>) -> Self {
        let mut s = TruncatedSeries { counts, complete_through, level_bound: None };
        s.counts.retain(|_, v| !v.is_zero());
        s
    }

    pub fn count(&self, degree: u64) -> BigUint {
        self.counts.get(&BigUint::from(degree)).cloned().unwrap_or_default()
    }

    /// Sum of all counts.
    pub fn total(&self) -> BigUint {
        self.counts.values().sum()
    }

    /// Sum of `count * degree^2`.
    pub fn sum_of_squares(&self) -> BigUint {
        self.counts.iter().map(|(d, c)| c * d * d).sum()
    }

    /// Only the degrees at most `bound`.
    pub fn restrict(&self, bound: &BigUint) -> Self {
        TruncatedSeries {
            counts: self.counts.iter().filter(|(d, _)| *d <= bound).map(|(d, c)| (d.clone(), c.clone())).collect(),
            complete_through: self.complete_through.clone().map(|c| c.min(bound.clone())),
            level_bound: self.level_bound,
        }
    }

    pub fn add_count(&mut self, degree: BigUint, count: BigUint) {
        if count.is_zero() {
            return;
        }
        *self.counts.entry(degree).or_default() += count;
    }

    /// Sorted `(degree, count)` pairs as decimal strings.
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "counts": self.counts.iter().map(|(d, c)| [d.to_string(), c.to_string()]).collect::<Vec<_>>(),
            "complete_through": self.complete_through.as_ref().map(|c| c.to_string()),
            "level_bound": self.level_bound.map(|n| n.to_string()),
        })
    }
}

impl std::fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.counts.iter().map(|(d, c)| format!("r_{d} = {c}")).collect();
        write!(f, "{}", parts.join(", "))?;
        if let Some(c) = &self.complete_through {
            write!(f, " (complete through degree {c})")?;
        }
        Ok(())
    }
}

/// Lattice families for the permissibility rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LatticeFamily {
    Chevalley,
    Quaternion,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Permissibility {
    pub ok: bool,
    pub advisory: Option<String>,
}

/// Whether level `m` is permissible: `m > e/(p-1)` for Chevalley lattices;
/// for the quaternion lattice `m >= 1` and `2e < p - 1`.
pub fn permissible(family: LatticeFamily, p: u64, e: u32, m: u32) -> Permissibility {
    let (ok, why) = match family {
        LatticeFamily::Chevalley => (m as u64 * (p - 1) > e as u64, format!("need m > e/(p-1) = {e}/{}", p - 1)),
        LatticeFamily::Quaternion => (m >= 1 && 2 * (e as u64) < p - 1, format!("need m >= 1 and 2e < p-1 (e = {e}, p = {p})")),
    };
    Permissibility { ok, advisory: (!ok).then_some(why) }
}

/// `E = 2 sum_i max(n - a_i, 0)` for the radical of a level-`n` functional.
pub fn radical_index_exponent(profile: &DivisorProfile, n: u32) -> Result<u32, KirillovError> {
    let mut s = 0;
    for v in &profile.a {
        match *v {
            Val::Finite(a) => s += n.saturating_sub(a),
            Val::AtLeast(c) if c >= n => {}
            Val::AtLeast(_) => return Err(KirillovError::TooShallow(n)),
        }
    }
    Ok(2 * s)
}

/// Options shared by the enumeration entry points.
#[derive(Debug, Clone)]
pub struct EnumOptions {
    pub budget: u64,
    pub cache: Option<ProfileCache>,
    /// Factor the content `pi^mu` out of the commutator matrix.
    pub divide_content: bool,
}

impl Default for EnumOptions {
    fn default() -> Self {
        EnumOptions { budget: DEFAULT_BUDGET, cache: ProfileCache::from_env(), divide_content: true }
    }
}

/// Exact histogram of own-matrix profiles over primitive classes mod `p^c`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProfileMeasure {
    pub fingerprint: String,
    pub q: u64,
    pub e: u32,
    pub c: u32,
    pub histogram: BTreeMap<DivisorProfile, BigUint>,
}

impl ProfileMeasure {
    pub fn total(&self) -> BigUint {
        self.histogram.values().sum()
    }
}

fn profile_to_string(p: &DivisorProfile) -> String {
    let mut parts: Vec<String> = p.a.iter().map(|v| v.to_string()).collect();
    if p.odd {
        parts.push("odd".into());
    }
    parts.join(",")
}

fn profile_from_string(s: &str, cap: u32) -> Option<DivisorProfile> {
    let mut a = Vec::new();
    let mut odd = false;
    for t in s.split(',').filter(|t| !t.is_empty()) {
        if t == "odd" {
            odd = true;
        } else if let Some(x) = t.strip_prefix(">=") {
            a.push(Val::AtLeast(x.parse().ok()?));
        } else {
            a.push(Val::Finite(t.parse().ok()?));
        }
    }
    Some(DivisorProfile { a, cap, odd })
}

/// Visited-class histograms by depth for the adaptive refinement.
#[derive(Debug, Clone)]
pub struct ProfileTree {
    pub d: usize,
    pub q: u64,
    pub rho: usize,
    /// `visited[k - 1]`: depth-`k` profiles of the classes refined to depth `k`.
    pub visited: Vec<BTreeMap<DivisorProfile, u64>>,
    /// Number of profile computations performed.
    pub work: u64,
}

fn resolved(p: &DivisorProfile, rho: usize) -> bool {
    p.a.iter().take(rho).all(|v| v.is_finite())
}

fn recap(p: &DivisorProfile, c: u32) -> DivisorProfile {
    DivisorProfile {
        a: p.a.iter().map(|v| if v.is_finite() { *v } else { Val::AtLeast(c) }).collect(),
        cap: c,
        odd: p.odd,
    }
}

impl ProfileTree {
    /// Exact histogram at depth `c`.
    pub fn histogram(&self, c: u32) -> BTreeMap<DivisorProfile, BigUint> {
        let mut out: BTreeMap<DivisorProfile, BigUint> = BTreeMap::new();
        let qd = BigUint::from(self.q).pow(self.d as u32);
        for k in 1..=c {
            let Some(level) = self.visited.get(k as usize - 1) else { break };
            for (p, &n) in level {
                if k == c {
                    *out.entry(p.clone()).or_default() += BigUint::from(n);
                } else if resolved(p, self.rho) {
                    *out.entry(recap(p, c)).or_default() += BigUint::from(n) * qd.pow(c - k);
                }
            }
        }
        out
    }
}

type Chunk = (BTreeMap<DivisorProfile, u64>, Vec<Vec<u64>>);

#[allow(clippy::too_many_arguments)]
fn visit_depth<R: LocalRing>(
    ring: &R,
    coeffs: &[Vec<Vec<R::E>>],
    parents: &[Vec<u64>],
    q: u64,
    d: usize,
    rho: usize,
    keep: bool,
    lift: &(dyn Fn(u64) -> R::E + Sync),
) -> Chunk {
    let per = q.pow(d as u32);
    let total = parents.len() as u64 * per;
    const CHUNK: u64 = 2048;
    let nchunks = total.div_ceil(CHUNK);
    let parts: Vec<Chunk> = (0..nchunks)
        .into_par_iter()
        .map(|ch| {
            let mut hist = BTreeMap::new();
            let mut open = Vec::new();
            let mut y = vec![0u64; d];
            for idx in ch * CHUNK..((ch + 1) * CHUNK).min(total) {
                let (pi, mut t) = ((idx / per) as usize, idx % per);
                for h in 0..d {
                    y[h] = parents[pi][h] * q + t % q;
                    t /= q;
                }
                if y.iter().all(|&v| v == 0) {
                    continue;
                }
                let ye: Vec<R::E> = y.iter().map(|&v| lift(v)).collect();
                let prof = witt_profile_unchecked(ring, eval_matrix(ring, coeffs, &ye));
                if keep && !resolved(&prof, rho) {
                    open.push(y.clone());
                }
                *hist.entry(prof).or_insert(0) += 1;
            }
            (hist, open)
        })
        .collect();
    let mut hist = BTreeMap::new();
    let mut open = Vec::new();
    for (h, o) in parts {
        for (p, n) in h {
            *hist.entry(p).or_insert(0) += n;
        }
        open.extend(o);
    }
    (hist, open)
}

/// Refines primitive classes of `(o/p^k)^d` for `k = 1..=cmax`.
pub fn build_tree(l: &LieLattice, cmax: u32, budget: u64) -> Result<ProfileTree, KirillovError> {
    let d = l.d;
    let q = l.family.q();
    let rho = generic_rank_rho(&l.commutator_matrix())?.rho;
    let r = l.commutator_matrix();
    let mut parents = vec![vec![0u64; d]];
    let mut visited = Vec::new();
    let mut work = 0u64;
    for k in 1..=cmax {
        if parents.is_empty() {
            visited.push(BTreeMap::new());
            continue;
        }
        let need = (parents.len() as u64).saturating_mul(q.saturating_pow(d as u32));
        if work.saturating_add(need) > budget {
            return Err(KirillovError::BudgetExceeded { required: work.saturating_add(need), budget });
        }
        work += need;
        let ring = l.family.ring(k).map_err(MatError::from)?;
        let keep = k < cmax;
        let (hist, open) = if ring.cardinality() <= TABLE_LIMIT {
            let table = RingTable::new(&ring).map_err(MatError::from)?;
            let coeffs = table_coeffs(&ring, &r)?;
            visit_depth(&table, &coeffs, &parents, q, d, rho, keep, &|v| v as u16)
        } else {
            let coeffs = r.evaluate_coeffs(&ring).map_err(MatError::from)?;
            let rr: &QuotientRing = &ring;
            visit_depth(rr, &coeffs, &parents, q, d, rho, keep, &|v| rr.from_index(v))
        };
        visited.push(hist);
        parents = open;
    }
    Ok(ProfileTree { d, q, rho, visited, work })
}

/// Histogram of own-matrix profiles of `l` over primitive classes mod `p^c`.
pub fn profile_measure(l: &LieLattice, c: u32, opts: &EnumOptions) -> Result<ProfileMeasure, KirillovError> {
    assert!(c >= 1, "depth must be positive");
    Ok(profile_measures(l, c, opts)?.pop().expect("depth c is present"))
}

/// Histograms at every depth `1..=c`, consulting and filling the cache.
pub fn profile_measures(l: &LieLattice, c: u32, opts: &EnumOptions) -> Result<Vec<ProfileMeasure>, KirillovError> {
    let fp = l.fingerprint();
    let (q, e) = (l.family.q(), l.family.e);
    if let Some(cache) = &opts.cache {
        let all = cache.load().map_err(|e| KirillovError::Cache(e.to_string()))?;
        let hits: Vec<ProfileMeasure> = (1..=c)
            .filter_map(|k| {
                let rec = all.get(&cache_key(&fp, q, e, k))?;
                let mut histogram = BTreeMap::new();
                for (p, n) in &rec.histogram {
                    histogram.insert(profile_from_string(p, k)?, n.parse::<BigUint>().ok()?);
                }
                Some(ProfileMeasure { fingerprint: fp.clone(), q, e, c: k, histogram })
            })
            .collect();
        if hits.len() == c as usize {
            return Ok(hits);
        }
    }
    let tree = build_tree(l, c, opts.budget)?;
    let out: Vec<ProfileMeasure> = (1..=c)
        .map(|k| ProfileMeasure { fingerprint: fp.clone(), q, e, c: k, histogram: tree.histogram(k) })
        .collect();
    if let Some(cache) = &opts.cache {
        for m in &out {
            let rec = CacheRecord {
                key: cache_key(&fp, q, e, m.c),
                fingerprint: fp.clone(),
                q,
                e,
                c: m.c,
                histogram: m.histogram.iter().map(|(p, n)| (profile_to_string(p), n.to_string())).collect(),
            };
            cache.put(rec).map_err(|e| KirillovError::Cache(e.to_string()))?;
        }
    }
    Ok(out)
}

/// One aggregated row of the level decomposition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelDatum {
    pub level: u32,
    pub profile: DivisorProfile,
    /// Number of primitive functionals of this level with this profile.
    pub functionals: BigUint,
    /// Radical index exponent; the index is `q^E` and the degree `q^(E/2)`.
    pub exponent: u32,
}

/// Largest elementary divisor exponent of `y -> M'(y)`, or `None` when the map
/// has a kernel (some primitive functional is central at every level).
pub fn divisor_bound(l: &LieLattice) -> Result<Option<u32>, KirillovError> {
    let d = l.d;
    if d < 2 {
        return Ok(None);
    }
    let depth = (12 * l.family.e).min(l.family.max_depth());
    let ring = l.family.ring(depth).map_err(MatError::from)?;
    let coeffs = l.commutator_matrix().evaluate_coeffs(&ring).map_err(MatError::from)?;
    let rows: Vec<Vec<_>> = (0..d)
        .map(|h| {
            let mut row = Vec::new();
            for i in 0..d {
                for j in i + 1..d {
                    row.push(coeffs[i][j][h].clone());
                }
            }
            row
        })
        .collect();
    let vals = smith_valuations(&ring, rows);
    if vals.len() < d || vals.iter().any(|v| !v.is_finite()) {
        return Ok(None);
    }
    Ok(vals.iter().map(|v| v.capped()).max())
}

/// Content-divided lattice and its content, or `None` for an abelian lattice.
fn split_content(l: &LieLattice, divide: bool) -> (Option<u32>, LieLattice) {
    match l.content() {
        None => (None, l.clone()),
        Some(mu) if divide && mu > 0 => (Some(mu), l.divide_constants(mu)),
        Some(_) => (Some(0), l.clone()),
    }
}

/// Level decomposition for levels `1..=n_max`.
pub fn level_data(l: &LieLattice, n_max: u32, opts: &EnumOptions) -> Result<Vec<LevelDatum>, KirillovError> {
    let (mu, _, measures) = measures_for(l, n_max, opts)?;
    level_data_from(l, mu, &measures, n_max)
}

type Measured = (Option<u32>, LieLattice, Vec<ProfileMeasure>);

fn measures_for(l: &LieLattice, n_max: u32, opts: &EnumOptions) -> Result<Measured, KirillovError> {
    let (mu, base) = split_content(l, opts.divide_content);
    let deep = mu.map_or(0, |mu| n_max.saturating_sub(mu));
    let measures = if deep >= 1 { profile_measures(&base, deep, opts)? } else { Vec::new() };
    Ok((mu, base, measures))
}

fn level_data_from(
    l: &LieLattice,
    mu: Option<u32>,
    measures: &[ProfileMeasure],
    n_max: u32,
) -> Result<Vec<LevelDatum>, KirillovError> {
    let d = l.d as u32;
    let q = BigUint::from(l.family.q());
    let mut out = Vec::new();
    for n in 1..=n_max {
        let c = mu.map_or(0, |mu| n.saturating_sub(mu));
        if c == 0 {
            let count = q.pow(d * n) - q.pow(d * (n - 1));
            let profile = DivisorProfile { a: vec![Val::AtLeast(0); l.d / 2], cap: 0, odd: l.d % 2 == 1 };
            out.push(LevelDatum { level: n, profile, functionals: count, exponent: 0 });
            continue;
        }
        let scale = q.pow(d * (n - c));
        for (p, cnt) in &measures[c as usize - 1].histogram {
            let exponent = radical_index_exponent(p, c)?;
            out.push(LevelDatum { level: n, profile: p.clone(), functionals: cnt * &scale, exponent });
        }
    }
    Ok(out)
}

/// Bounds `beta_t` on the `t`-th profile entry over all primitive classes,
/// read from histograms in which that entry is always finite; `beta_1` also
/// comes from the elementary divisors of `y -> M'(y)`.
fn entry_bounds(base: &LieLattice, measures: &[ProfileMeasure]) -> Result<Vec<Option<u32>>, KirillovError> {
    let half = base.d / 2;
    let mut out = vec![None; half];
    if half == 0 {
        return Ok(out);
    }
    out[0] = divisor_bound(base)?;
    for t in 0..half {
        for m in measures {
            if m.histogram.keys().all(|p| p.a[t].is_finite()) {
                let b = m.histogram.keys().map(|p| p.a[t].capped()).max().unwrap_or(0);
                out[t] = Some(out[t].map_or(b, |x: u32| x.min(b)));
                break;
            }
        }
    }
    Ok(out)
}

/// Truncated zeta function of the group attached to `l`, summing levels up to `n_max`.
///
/// A character of level `n > n_max` has degree at least `q^(t (n - mu - beta_t))`
/// for every `t`, so all degrees below the smallest such bound are complete.
pub fn truncated_zeta(l: &LieLattice, n_max: u32, opts: &EnumOptions) -> Result<TruncatedSeries, KirillovError> {
    let (mu, base, measures) = measures_for(l, n_max, opts)?;
    let q = BigUint::from(l.family.q());
    let mut s = TruncatedSeries::default();
    s.add_count(BigUint::one(), BigUint::one());
    for datum in level_data_from(l, mu, &measures, n_max)? {
        let index = q.pow(datum.exponent);
        assert!((&datum.functionals % &index).is_zero(), "orbit sizes divide class counts");
        s.add_count(q.pow(datum.exponent / 2), &datum.functionals / &index);
    }
    s.level_bound = Some(n_max);
    if let Some(mu) = mu {
        let next = n_max as i64 + 1 - mu as i64;
        let k = entry_bounds(&base, &measures)?
            .iter()
            .enumerate()
            .filter_map(|(t, b)| b.map(|b| (t as i64 + 1) * (next - b as i64)))
            .max()
            .unwrap_or(0);
        if k >= 1 {
            s.complete_through = Some(q.pow(k as u32 - 1));
        }
    }
    Ok(s)
}

/// The series of `pi^m L` computed from the profiles of `L` itself with
/// exponent `2 sum max(n - m - a_i, 0)`.
pub fn truncated_zeta_shifted(
    base: &LieLattice,
    m: u32,
    n_max: u32,
    opts: &EnumOptions,
) -> Result<TruncatedSeries, KirillovError> {
    let d = base.d as u32;
    let q = BigUint::from(base.family.q());
    let mut s = TruncatedSeries::default();
    s.add_count(BigUint::one(), BigUint::one());
    let deep = n_max.saturating_sub(m);
    let measures = if deep >= 1 { profile_measures(base, deep, opts)? } else { Vec::new() };
    for n in 1..=n_max {
        if n <= m {
            s.add_count(BigUint::one(), q.pow(d * n) - q.pow(d * (n - 1)));
            continue;
        }
        let c = n - m;
        for (p, cnt) in &measures[c as usize - 1].histogram {
            let mut e = 0;
            for v in &p.a {
                e += match *v {
                    Val::Finite(a) => (n - m).saturating_sub(a),
                    _ => 0,
                };
            }
            let w = cnt * q.pow(d * m);
            s.add_count(q.pow(e), w / q.pow(2 * e));
        }
    }
    s.level_bound = Some(n_max);
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::BuiltinId;

    fn opts() -> EnumOptions {
        EnumOptions { budget: DEFAULT_BUDGET, cache: None, divide_content: true }
    }

    #[test]
    fn permissibility_rule() {
        assert!(permissible(LatticeFamily::Chevalley, 3, 1, 1).ok);
        assert!(!permissible(LatticeFamily::Chevalley, 2, 1, 1).ok);
        assert!(permissible(LatticeFamily::Chevalley, 2, 1, 2).ok);
        assert!(permissible(LatticeFamily::Quaternion, 5, 1, 1).ok);
        assert!(!permissible(LatticeFamily::Quaternion, 3, 1, 1).ok);
    }

    #[test]
    fn radical_exponents() {
        let p = DivisorProfile { a: vec![Val::Finite(1)], cap: 2, odd: true };
        assert_eq!(radical_index_exponent(&p, 2), Ok(2));
        assert_eq!(radical_index_exponent(&p, 0), Ok(0));
        let p = DivisorProfile {
            a: vec![Val::Finite(0), Val::Finite(0), Val::Finite(1), Val::AtLeast(3)],
            cap: 3,
            odd: false,
        };
        assert_eq!(radical_index_exponent(&p, 3), Ok(16));
        assert_eq!(radical_index_exponent(&p, 4), Err(KirillovError::TooShallow(4)));
    }

    #[test]
    fn sl2_measure_mod_3() {
        let l = LieLattice::builtin(BuiltinId::Sl2, 3, 1, 1).unwrap();
        let m = profile_measure(&l, 1, &opts()).unwrap();
        let key = DivisorProfile { a: vec![Val::Finite(0)], cap: 1, odd: true };
        assert_eq!(m.histogram.len(), 1);
        assert_eq!(m.histogram[&key], BigUint::from(26u32));
    }

    #[test]
    fn quaternion_measure_mod_3() {
        let l = LieLattice::builtin(BuiltinId::Sl1Quat(1), 3, 1, 1).unwrap();
        let m = profile_measure(&l, 1, &opts()).unwrap();
        let unit = DivisorProfile { a: vec![Val::Finite(0)], cap: 1, odd: true };
        let deep = DivisorProfile { a: vec![Val::AtLeast(1)], cap: 1, odd: true };
        assert_eq!(m.histogram[&unit], BigUint::from(18u32));
        assert_eq!(m.histogram[&deep], BigUint::from(8u32));
    }

    #[test]
    fn sl2_first_congruence_subgroup_mod_3() {
        let l = LieLattice::builtin(BuiltinId::Sl2, 3, 1, 1).unwrap().scaled(1).unwrap();
        let s = truncated_zeta(&l, 3, &opts()).unwrap();
        assert_eq!(s.count(1), BigUint::from(27u32));
        assert_eq!(s.count(3), BigUint::from(78u32));
        assert_eq!(s.count(9), BigUint::from(234u32));
        assert_eq!(s.complete_through, Some(BigUint::from(9u32)));
    }

    #[test]
    fn abelian_lattice_is_all_linear() {
        let l = LieLattice::abelian(2, 3, 1, 1);
        let s = truncated_zeta(&l, 1, &opts()).unwrap();
        assert_eq!(s.counts.len(), 1);
        assert_eq!(s.count(1), BigUint::from(9u32));
        assert_eq!(s.complete_through, None);
    }
}
