//! Clifford-theory assembly of full-group zeta functions from the strata of
//! the congruence subgroup `N = G^1` and their inertia data, for `SL_2(o)`
//! (odd `p`) and the norm-one quaternion group `SL_1(R)`, plus the encoded
//! degree counts of `SL_2(Z_2)`.
//!
//! A character `theta` of `N` in a stratum with inertia group `I` contributes
//! `theta(1)^(-s) |G:I|^(-1-s) |I:N|` to `zeta_G`; the `N`-part of a stratum is
//! `weight * measure / (1 - q^(1-s))`.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::dirichlet::{self, qpoly, theorem_formula, Base, DVar, DirichletError, Expr, Factor, FormulaParams, QFactor, QFn};
use crate::fingroup::{self, build_group, character_degrees, degree_zeta, GroupError, GroupId};
use crate::kirillov::TruncatedSeries;
use crate::poly::{int, rat, Poly, RatFn};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CliffordError {
    #[error("stratum {0} has no extension of theta to its inertia group")]
    NotExtendable(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error(transparent)]
    Dirichlet(#[from] DirichletError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// The full groups handled here.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FullGroup {
    /// `SL_2(o)`, odd residue characteristic.
    Sl2,
    /// `SL_1(R)`, `R` the maximal order of the quaternion division algebra.
    Sl1,
}

impl std::str::FromStr for FullGroup {
    type Err = CliffordError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "sl2" => Ok(FullGroup::Sl2),
            "sl1" | "quaternion" | "quat" => Ok(FullGroup::Sl1),
            other => Err(CliffordError::InvalidParams(format!("unknown group {other}"))),
        }
    }
}

/// Local data the hypotheses are checked against; `None` leaves them assumed.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct LocalData {
    pub p: Option<u64>,
    pub e: Option<u32>,
}

/// One hypothesis an extendability argument rests on.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Hypothesis {
    pub statement: &'static str,
    /// `None` when no local data was supplied.
    pub holds: Option<bool>,
}

/// A stratum of nontrivial characters of `N`.
#[derive(Debug, Clone, Serialize)]
pub struct Stratum {
    pub label: &'static str,
    /// Measure of the stratum in the affine cone, a rational function of `q`.
    #[serde(serialize_with = "ser_qfn")]
    pub measure: QFn,
    /// `q^3`, or `q^(1-s)` when the stratum starts one degree up.
    #[serde(skip)]
    pub weight: Expr,
    /// `|G : I_G(theta)|` as a product of linear factors in `q`.
    #[serde(serialize_with = "ser_base")]
    pub index: Base,
    /// `|I_G(theta) : N|`; the inertia quotient is abelian so `zeta_(I/N) = |I:N|`.
    #[serde(serialize_with = "ser_qfn")]
    pub inertia: QFn,
    pub extendable: bool,
    pub extension_note: &'static str,
    pub hypotheses: Vec<Hypothesis>,
    /// Characters from the `j`-th pole term are trivial on `G^(level_step * j + level_offset)`.
    pub level_step: u32,
    pub level_offset: u32,
}

impl Stratum {
    /// `false` if a supplied local datum violates a hypothesis.
    pub fn verified(&self) -> Option<bool> {
        let known: Vec<bool> = self.hypotheses.iter().filter_map(|h| h.holds).collect();
        if known.len() < self.hypotheses.len() {
            return if known.contains(&false) { Some(false) } else { None };
        }
        Some(known.iter().all(|&b| b))
    }

    pub fn tag(&self) -> &'static str {
        match self.verified() {
            Some(true) => "verified hypotheses",
            Some(false) => "unverified hypotheses",
            None => "assumed hypotheses",
        }
    }
}

fn ser_qfn<S: serde::Serializer>(r: &QFn, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format!("({}) / ({})", r.num, r.den))
}

fn ser_base<S: serde::Serializer>(b: &Base, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&base_poly_string(b))
}

fn base_poly_string(b: &Base) -> String {
    let parts: Vec<String> = b
        .0
        .iter()
        .map(|(f, k)| {
            let name = match f {
                Factor::Prime(p) => p.to_string(),
                Factor::Q(QFactor::Q) => "q".into(),
                Factor::Q(QFactor::QPlus1) => "(q+1)".into(),
                Factor::Q(QFactor::QMinus1) => "(q-1)".into(),
            };
            if *k == 1 {
                name
            } else {
                format!("{name}^{k}")
            }
        })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

fn q() -> Poly<DVar> {
    qpoly()
}

fn qf(p: Poly<DVar>) -> QFn {
    RatFn::from_poly(p)
}

/// `q^k` as a coefficient.
fn qpow(k: i32) -> QFn {
    qf(Poly::monomial(DVar::Q, k))
}

fn qconst(c: i64) -> QFn {
    RatFn::constant(int(c))
}

/// The value of a base as a rational function of `q`.
pub fn base_value(b: &Base) -> QFn {
    b.0.iter().fold(qconst(1), |acc, (f, k)| {
        let v = match f {
            Factor::Prime(p) => qf(Poly::int(*p as i64)),
            Factor::Q(QFactor::Q) => qf(q()),
            Factor::Q(QFactor::QPlus1) => qf(q().add(&Poly::one())),
            Factor::Q(QFactor::QMinus1) => qf(q().sub(&Poly::one())),
        };
        let vk = if *k >= 0 { (0..*k).fold(qconst(1), |a, _| a.mul(&v)) } else { (0..-*k).fold(qconst(1), |a, _| a.div(&v)) };
        acc.mul(&vk)
    })
}

fn f(x: QFactor) -> Base {
    Base::factor(Factor::Q(x), 1)
}

fn half() -> Base {
    Base::factor(Factor::Prime(2), -1)
}

fn sl2_hypotheses(local: LocalData, type_one: bool) -> Vec<Hypothesis> {
    let mut out = vec![
        Hypothesis { statement: "p odd", holds: local.p.map(|p| p % 2 == 1) },
        Hypothesis {
            statement: "p - 2 >= e (applicability of the orbit method at N)",
            holds: local.p.zip(local.e).map(|(p, e)| p >= e as u64 + 2),
        },
    ];
    if type_one {
        // the saturable Sylow route is an alternative, recorded but not required
        out.push(Hypothesis {
            statement: "algebra group: degrees of I are powers of q and |I:N| = q",
            holds: local.p.map(|_| true),
        });
    }
    out
}

/// Strata of `N = G^1` with their inertia data.
pub fn inertia_profile(group: FullGroup, local: LocalData) -> Vec<Stratum> {
    let one = qconst(1);
    let qi = |k: i32| qpow(-k);
    match group {
        FullGroup::Sl2 => {
            let one_minus_q2 = one.sub(&qi(2));
            let one_minus_q1 = one.sub(&qi(1));
            vec![
                Stratum {
                    label: "1",
                    measure: qi(1).mul(&one_minus_q2),
                    weight: Expr::q_pow(3),
                    index: f(QFactor::QPlus1).mul(&f(QFactor::QMinus1)).mul(&half()),
                    inertia: qf(q().scale(&int(2))),
                    extendable: true,
                    extension_note: "inertia is a Sylow pro-p subgroup; algebra-group degree argument",
                    hypotheses: sl2_hypotheses(local, true),
                    level_step: 1,
                    level_offset: 2,
                },
                Stratum {
                    label: "2a",
                    measure: one_minus_q2.mul(&RatFn::constant(rat(1, 2))),
                    weight: Expr::q_pow(3),
                    index: f(QFactor::Q).mul(&f(QFactor::QPlus1)),
                    inertia: qf(q().sub(&Poly::one())),
                    extendable: true,
                    extension_note: "inertia quotient of order coprime to p",
                    hypotheses: sl2_hypotheses(local, false),
                    level_step: 1,
                    level_offset: 2,
                },
                Stratum {
                    label: "2b",
                    measure: one_minus_q1.mul(&one_minus_q1).mul(&RatFn::constant(rat(1, 2))),
                    weight: Expr::q_pow(3),
                    index: f(QFactor::Q).mul(&f(QFactor::QMinus1)),
                    inertia: qf(q().add(&Poly::one())),
                    extendable: true,
                    extension_note: "inertia quotient of order coprime to p",
                    hypotheses: sl2_hypotheses(local, false),
                    level_step: 1,
                    level_offset: 2,
                },
            ]
        }
        FullGroup::Sl1 => {
            let hyp = || {
                vec![
                    Hypothesis { statement: "p odd", holds: local.p.map(|p| p % 2 == 1) },
                    Hypothesis {
                        statement: "2e < p - 1 (N potent and saturable)",
                        holds: local.p.map(|p| 2 * local.e.unwrap_or(1) as u64 + 1 < p),
                    },
                ]
            };
            vec![
                Stratum {
                    label: "[1]",
                    measure: one.sub(&qi(1)),
                    weight: Expr::q_pow(1).mul(Expr::x(1)),
                    index: Base::one(),
                    inertia: qf(q().add(&Poly::one())),
                    extendable: true,
                    extension_note: "G/N cyclic",
                    hypotheses: hyp(),
                    level_step: 2,
                    level_offset: 3,
                },
                Stratum {
                    label: "[2]",
                    measure: qi(1).mul(&one.sub(&qi(2))),
                    weight: Expr::q_pow(3),
                    index: f(QFactor::QPlus1).mul(&half()),
                    inertia: qconst(2),
                    extendable: true,
                    extension_note: "G/N cyclic",
                    hypotheses: hyp(),
                    level_step: 2,
                    level_offset: 2,
                },
            ]
        }
    }
}

/// `zeta_(G/N)`: `SL_2(F_q)` for `SL_2(o)`, the cyclic group of order `q + 1` for `SL_1(R)`.
pub fn quotient_zeta(group: FullGroup) -> Expr {
    match group {
        FullGroup::Sl2 => {
            let half_q = |c: i64| Expr::poly(q().add(&Poly::int(c)).scale(&rat(1, 2)));
            let at = |b: Base| Expr::Atom(b);
            Expr::Sum(vec![
                Expr::int(1),
                Expr::x(1),
                half_q(-3).mul(at(f(QFactor::QPlus1))),
                Expr::int(2).mul(at(f(QFactor::QPlus1).mul(&half()))),
                half_q(-1).mul(at(f(QFactor::QMinus1))),
                Expr::int(2).mul(at(f(QFactor::QMinus1).mul(&half()))),
            ])
        }
        FullGroup::Sl1 => Expr::poly(q().add(&Poly::one())),
    }
}

/// `q^3 / (1 - q^(1-s))` style pole factor.
fn pole() -> Expr {
    Expr::geom_inv(Expr::q_pow(1).mul(Expr::x(1)))
}

/// `weight * measure * |G:I|^(-1-s) * |I:N|`.
fn stratum_term(s: &Stratum) -> Expr {
    let coeff = s.measure.mul(&s.inertia).div(&base_value(&s.index));
    Expr::Prod(vec![s.weight.clone(), Expr::Const(coeff), Expr::Atom(s.index.clone())])
}

fn check_extendable(strata: &[Stratum]) -> Result<(), CliffordError> {
    match strata.iter().find(|s| !s.extendable) {
        Some(s) => Err(CliffordError::NotExtendable(s.label.into())),
        None => Ok(()),
    }
}

/// `zeta_G = zeta_(G/N) + sum_strata weight * measure * |G:I|^(-1-s) |I:N| / (1 - q^(1-s))`.
pub fn assemble(strata: &[Stratum], quotient: &Expr) -> Result<Expr, CliffordError> {
    check_extendable(strata)?;
    let tail = Expr::Sum(strata.iter().map(stratum_term).collect());
    Ok(quotient.clone().add(tail.mul(pole())))
}

/// The assembly restricted to characters trivial on `G^k`: each pole is cut
/// to the terms whose level is at most `k`.
pub fn assemble_to_level(strata: &[Stratum], quotient: &Expr, k: u32) -> Result<Expr, CliffordError> {
    check_extendable(strata)?;
    let mut parts = vec![quotient.clone()];
    for s in strata {
        let mut j = 0;
        while s.level_step * j + s.level_offset <= k {
            parts.push(stratum_term(s).mul(Expr::q_pow(j as i32)).mul(Expr::x(j as i32)));
            j += 1;
        }
    }
    Ok(Expr::Sum(parts))
}

/// `zeta_N` recovered by dropping the inertia data (`|G:I| = |I:N| = 1`).
pub fn restrict_to_congruence(strata: &[Stratum]) -> Expr {
    let tail = Expr::Sum(strata.iter().map(|s| s.weight.clone().mul(Expr::Const(s.measure.clone()))).collect());
    Expr::int(1).add(tail.mul(pole()))
}

/// Sum of the stratum measures.
pub fn total_measure(strata: &[Stratum]) -> QFn {
    strata.iter().fold(RatFn::constant(BigRational::zero()), |acc, s| acc.add(&s.measure))
}

/// `|G:I| * |I:N|` per stratum, which must equal `|G:N|`.
pub fn index_products(strata: &[Stratum]) -> Vec<QFn> {
    strata.iter().map(|s| base_value(&s.index).mul(&s.inertia)).collect()
}

/// `|G:N|` as a rational function of `q`.
pub fn quotient_order(group: FullGroup) -> QFn {
    match group {
        FullGroup::Sl2 => qf(q().mul(&q().mul(&q()).sub(&Poly::one()))),
        FullGroup::Sl1 => qf(q().add(&Poly::one())),
    }
}

/// The registered formula the assembly must reproduce.
pub fn target_formula(group: FullGroup) -> Result<Expr, CliffordError> {
    let id = match group {
        FullGroup::Sl2 => "sl2_full",
        FullGroup::Sl1 => "thm_quat_full",
    };
    Ok(theorem_formula(id, FormulaParams::default())?)
}

/// The congruence-subgroup formula that restriction must reproduce.
pub fn congruence_formula(group: FullGroup) -> Result<Expr, CliffordError> {
    let params = FormulaParams { m: 1, ..Default::default() };
    let id = match group {
        FullGroup::Sl2 => "thm_sl2_podd",
        FullGroup::Sl1 => "quat_proof_variant",
    };
    Ok(theorem_formula(id, params)?)
}

/// Degree counts of `SL_2(Z_2)`.
#[derive(Debug, Clone, Serialize)]
pub struct ReferenceCounts {
    /// Degree to count, for every degree up to `bound`.
    pub counts: BTreeMap<u64, u64>,
    pub bound: u64,
}

impl ReferenceCounts {
    /// `r_n` by the closed rules; zero off `{2^i, 3 * 2^i}`.
    pub fn rule(n: u64) -> u64 {
        if n == 0 {
            return 0;
        }
        let i = n.trailing_zeros();
        match n >> i {
            1 => match i {
                0 => 4,
                1 => 6,
                2 => 2,
                _ => 3 << (i - 2),
            },
            3 => match i {
                0 => 28,
                1 => 58,
                2 => 106,
                _ => 107 << (i - 2),
            },
            _ => 0,
        }
    }

    pub fn up_to(bound: u64) -> Self {
        let counts = (1..=bound).map(|n| (n, Self::rule(n))).filter(|(_, c)| *c > 0).collect();
        ReferenceCounts { counts, bound }
    }

    /// Contributions of levels `i+1 .. i+4` to `r_(3 * 2^i)`, `i >= 3`.
    pub fn level_contributions(i: u32) -> [u64; 4] {
        assert!(i >= 3);
        [1 << (i - 2), 1 << (i - 1), 5 << (i + 1), 1 << (i + 4)]
    }

    pub fn to_series(&self) -> TruncatedSeries {
        let counts = self.counts.iter().map(|(d, c)| (BigUint::from(*d), BigUint::from(*c))).collect();
        TruncatedSeries::new(counts, Some(BigUint::from(self.bound)))
    }
}

/// The encoded counts through degree 96 and the closed form.
pub fn reference_counts_sl2z2() -> Result<(ReferenceCounts, Expr), CliffordError> {
    Ok((ReferenceCounts::up_to(96), theorem_formula("sl2z2", FormulaParams::default())?))
}

/// One comparison of a closed form with Dixon degree counts.
#[derive(Debug, Clone, Serialize)]
pub struct DixonComparison {
    pub group: String,
    pub order: u64,
    /// Degrees compared and their counts on each side.
    pub compared: BTreeMap<u64, (u64, u64)>,
    pub mismatches: Vec<u64>,
}

impl DixonComparison {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty() && !self.compared.is_empty()
    }
}

fn small(x: &BigUint) -> u64 {
    dirichlet::to_u64(x).unwrap_or(u64::MAX)
}

fn compare_on(group: String, order: u64, expected: &TruncatedSeries, actual: &TruncatedSeries, degrees: &[u64]) -> DixonComparison {
    let mut compared = BTreeMap::new();
    let mut mismatches = Vec::new();
    for &d in degrees {
        let (e, a) = (small(&expected.count(d)), small(&actual.count(d)));
        compared.insert(d, (e, a));
        if e != a {
            mismatches.push(d);
        }
    }
    DixonComparison { group, order, compared, mismatches }
}

fn dixon_series(id: GroupId, budget: u64) -> Result<(u64, TruncatedSeries), CliffordError> {
    let g = build_group(id, budget)?;
    let data = character_degrees(&g, 1)?;
    Ok((data.order, degree_zeta(&data)))
}

fn degrees_of(s: &TruncatedSeries) -> Vec<u64> {
    s.counts.keys().map(small).collect()
}

fn finite_group_id(group: FullGroup, q: u64, k: u32) -> Result<GroupId, CliffordError> {
    let (p, fdeg) = match dirichlet::factorize(q).as_slice() {
        [(p, fdeg)] => (*p, *fdeg),
        _ => return Err(CliffordError::InvalidParams(format!("{q} is not a prime power"))),
    };
    Ok(match group {
        FullGroup::Sl2 => GroupId::Sl2 { p, f: fdeg, e: 1, k },
        FullGroup::Sl1 => GroupId::Sl1 { p, f: fdeg, k },
    })
}

/// Exact comparison of `G / G^k` with the level-`k` truncation of the assembly, at every degree.
pub fn compare_level(group: FullGroup, q: u64, k: u32, budget: u64) -> Result<DixonComparison, CliffordError> {
    let strata = inertia_profile(group, LocalData::default());
    let id = finite_group_id(group, q, k)?;
    let (order, actual) = dixon_series(id, budget)?;
    let expected = assemble_to_level(&strata, &quotient_zeta(group), k)?.specialize(q).to_series(order)?;
    let mut degrees = degrees_of(&actual);
    degrees.extend(degrees_of(&expected));
    degrees.sort_unstable();
    degrees.dedup();
    Ok(compare_on(id.name(), order, &expected, &actual, &degrees))
}

/// Comparison of a profinite closed form with the degrees whose Dixon counts agree on `G/G^k` and `G/G^(k+1)`.
pub fn compare_stabilized(full: &Expr, coarse: GroupId, fine: GroupId, budget: u64) -> Result<DixonComparison, CliffordError> {
    let (_, a) = dixon_series(coarse, budget)?;
    let (order, b) = dixon_series(fine, budget)?;
    let stable: Vec<u64> = fingroup::stable_counts(&a, &b).keys().map(small).collect();
    let bound = stable.iter().copied().max().unwrap_or(1);
    let expected = full.to_series(bound)?;
    Ok(compare_on(format!("{} / {}", coarse.name(), fine.name()), order, &expected, &b, &stable))
}

/// Whether `zeta_(G/N)` for `SL_2(o)` at `q` equals the Dixon degrees of `SL_2(F_q)` at every degree.
pub fn compare_quotient(group: FullGroup, q: u64, budget: u64) -> Result<DixonComparison, CliffordError> {
    compare_level(group, q, 1, budget)
}

/// Stabiliser orders of `G/N` on the layers of an `SL_1` quotient, against the
/// asserted inertia quotients: odd layers `2`, even layers `q + 1`.
#[derive(Debug, Clone, Serialize)]
pub struct InertiaCheck {
    pub q: u64,
    pub k: u32,
    pub layers: Vec<fingroup::LayerAction>,
    pub passed: bool,
}

pub fn check_sl1_inertia(p: u64, fdeg: u32, k: u32, budget: u64) -> Result<InertiaCheck, CliffordError> {
    let q = p.pow(fdeg);
    let layers = fingroup::sl1_layer_actions(p, fdeg, k, budget)?;
    let passed = !layers.is_empty()
        && layers.iter().all(|l| {
            let want = if l.level % 2 == 1 { 2 } else { q + 1 };
            l.stabilisers == [want]
        });
    Ok(InertiaCheck { q, k, layers, passed })
}

/// `|Cen_(SL_2(F_q))(x)|` per stratum, as asserted by the inertia profile.
pub fn sl2_inertia_orders(q: u64) -> Vec<(&'static str, BigRational)> {
    inertia_profile(FullGroup::Sl2, LocalData::default())
        .iter()
        .map(|s| (s.label, dirichlet::eval_q(&s.inertia, q).expect("polynomial in q")))
        .collect()
}

/// Value of a `q`-rational function at `q`, as a rational.
pub fn eval_at(r: &QFn, q: u64) -> Option<BigRational> {
    dirichlet::eval_q(r, q)
}

/// `1 - q^(-3)`.
pub fn full_measure() -> QFn {
    RatFn::constant(BigRational::one()).sub(&qpow(-3))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dirichlet::identical;
    use crate::fingroup::GROUP_BUDGET;

    #[test]
    fn sl2_assembly_matches_full_formula() {
        let strata = inertia_profile(FullGroup::Sl2, LocalData::default());
        let z = assemble(&strata, &quotient_zeta(FullGroup::Sl2)).unwrap();
        assert!(identical(&z, &target_formula(FullGroup::Sl2).unwrap()));
    }

    #[test]
    fn sl1_assembly_matches_full_formula() {
        let strata = inertia_profile(FullGroup::Sl1, LocalData::default());
        let z = assemble(&strata, &quotient_zeta(FullGroup::Sl1)).unwrap();
        assert!(identical(&z, &target_formula(FullGroup::Sl1).unwrap()));
    }

    #[test]
    fn measures_and_indices() {
        for g in [FullGroup::Sl2, FullGroup::Sl1] {
            let strata = inertia_profile(g, LocalData::default());
            assert!(total_measure(&strata).equals(&full_measure()));
            for prod in index_products(&strata) {
                assert!(prod.equals(&quotient_order(g)));
            }
        }
        let strata = inertia_profile(FullGroup::Sl2, LocalData::default());
        assert_eq!(eval_at(&strata[2].measure, 5).unwrap(), rat(8, 25));
        assert_eq!(sl2_inertia_orders(3).iter().map(|(_, v)| v.clone()).collect::<Vec<_>>(), vec![int(6), int(2), int(4)]);
    }

    #[test]
    fn restriction_recovers_congruence_subgroup() {
        for g in [FullGroup::Sl2, FullGroup::Sl1] {
            let strata = inertia_profile(g, LocalData::default());
            assert!(identical(&restrict_to_congruence(&strata), &congruence_formula(g).unwrap()));
        }
    }

    #[test]
    fn non_extendable_stratum_aborts() {
        let mut strata = inertia_profile(FullGroup::Sl2, LocalData::default());
        strata[1].extendable = false;
        assert_eq!(assemble(&strata, &quotient_zeta(FullGroup::Sl2)).unwrap_err(), CliffordError::NotExtendable("2a".into()));
    }

    #[test]
    fn hypotheses_tagging() {
        let ok = inertia_profile(FullGroup::Sl2, LocalData { p: Some(5), e: Some(1) });
        assert!(ok.iter().all(|s| s.tag() == "verified hypotheses"));
        let bad = inertia_profile(FullGroup::Sl2, LocalData { p: Some(3), e: Some(2) });
        assert!(bad.iter().all(|s| s.tag() == "unverified hypotheses"));
        let sym = inertia_profile(FullGroup::Sl1, LocalData::default());
        assert!(sym.iter().all(|s| s.tag() == "assumed hypotheses"));
        let three = inertia_profile(FullGroup::Sl1, LocalData { p: Some(3), e: Some(1) });
        assert_eq!(three[0].verified(), Some(false));
    }

    #[test]
    fn reference_counts() {
        let (rc, form) = reference_counts_sl2z2().unwrap();
        assert_eq!(rc.counts[&3], 28);
        assert_eq!(rc.counts[&8], 6);
        for i in 3..10 {
            assert_eq!(ReferenceCounts::level_contributions(i).iter().sum::<u64>(), 107 << (i - 2));
        }
        let s = form.to_series(96).unwrap();
        assert_eq!(s.counts, rc.to_series().counts);
    }

    #[test]
    fn level_truncations_match_dixon() {
        for (g, q, k) in [(FullGroup::Sl2, 3, 1), (FullGroup::Sl2, 3, 2), (FullGroup::Sl2, 5, 1), (FullGroup::Sl1, 5, 2), (FullGroup::Sl1, 5, 3)] {
            let c = compare_level(g, q, k, GROUP_BUDGET).unwrap();
            assert!(c.passed(), "{g:?} q={q} k={k}: {:?}", c.mismatches);
        }
    }

    #[test]
    fn sl1_inertia_at_five() {
        assert!(check_sl1_inertia(5, 1, 3, GROUP_BUDGET).unwrap().passed);
    }
}
