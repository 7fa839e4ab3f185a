//! p-adic integrals behind the zeta functions: the integral formula for
//! principal congruence subgroups, its stratified evaluation, the `p = 2`
//! strata for `sl_2`, and the lattice-`Lambda` apparatus for `sl_3` at `p = 3`.
//!
//! Integrals are rational functions in `u = q^(-r)` and `v = q^(-t)` whose
//! denominators are products of factors `1 - c q^a u^b v^c`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::dirichlet::{self, factorize, Base, DirichletError, Expr};
use crate::kirillov::TruncatedSeries;
use crate::lie::{determinant, BuiltinId, LieError, LieLattice};
use crate::matalg::{minor_norm, smith_valuations, table_coeffs, LocalRing, MatError};
use crate::poly::{int, rat, Mono, Poly, RatFn};
use crate::qring::{make_ring, QuotientRing, RingError, RingTable, TABLE_LIMIT};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PadicError {
    #[error("enumeration needs {required} evaluations, budget is {budget}")]
    BudgetExceeded { required: u64, budget: u64 },
    #[error("unknown identifier {0}")]
    UnknownId(String),
    #[error("divergent geometric series")]
    Divergent,
    #[error("non-dyadic input: residue characteristic must be 2")]
    NonDyadic,
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("integral cannot be written as a Dirichlet expression: {0}")]
    NonNormalizable(String),
    #[error(transparent)]
    Mat(#[from] MatError),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Dirichlet(#[from] DirichletError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum IVar {
    Q,
    /// `q^(-r)`.
    U,
    /// `q^(-t)`.
    V,
}

impl fmt::Display for IVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IVar::Q => "q",
            IVar::U => "u",
            IVar::V => "v",
        })
    }
}

type IPoly = Poly<IVar>;

fn qm(k: i32) -> IPoly {
    Poly::monomial(IVar::Q, k)
}

fn var(v: IVar, k: i32) -> IPoly {
    Poly::monomial(v, k)
}

/// `1 - q^k`.
fn one_minus_q(k: i32) -> IPoly {
    Poly::one().sub(&qm(k))
}

/// `num / prod (1 - g)` with every `g` a single term.
#[derive(Debug, Clone)]
pub struct IntegralExpr {
    pub num: IPoly,
    pub den: Vec<IPoly>,
}

impl IntegralExpr {
    pub fn poly(num: IPoly) -> Self {
        IntegralExpr { num, den: Vec::new() }
    }

    pub fn zero() -> Self {
        IntegralExpr::poly(Poly::zero())
    }

    /// `1 / (1 - g)`.
    pub fn geometric(g: IPoly) -> Self {
        assert_eq!(g.num_terms(), 1, "denominator factors are single terms");
        IntegralExpr { num: Poly::one(), den: vec![g] }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut union: Vec<IPoly> = Vec::new();
        let mult = |v: &[IPoly], g: &IPoly| v.iter().filter(|h| *h == g).count();
        for g in self.den.iter().chain(&o.den) {
            let need = mult(&self.den, g).max(mult(&o.den, g));
            while mult(&union, g) < need {
                union.push(g.clone());
            }
        }
        let lift = |e: &Self| {
            let mut rest = union.clone();
            for g in &e.den {
                let pos = rest.iter().position(|h| h == g).expect("factor in union");
                rest.remove(pos);
            }
            rest.iter().fold(e.num.clone(), |acc, g| acc.mul(&Poly::one().sub(g)))
        };
        let mut den = union.clone();
        den.sort_by_key(|g| g.to_string());
        IntegralExpr { num: lift(self).add(&lift(o)), den }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut den = self.den.clone();
        den.extend(o.den.iter().cloned());
        den.sort_by_key(|g| g.to_string());
        IntegralExpr { num: self.num.mul(&o.num), den }
    }

    pub fn scale(&self, c: &IPoly) -> Self {
        IntegralExpr { num: self.num.mul(c), den: self.den.clone() }
    }

    pub fn to_ratfn(&self) -> RatFn<IVar> {
        let den = self.den.iter().fold(Poly::one(), |acc, g| acc.mul(&Poly::one().sub(g)));
        RatFn::new(self.num.clone(), den)
    }

    /// Equality as rational functions in `q, u, v`.
    pub fn equals(&self, o: &Self) -> bool {
        self.to_ratfn().equals(&o.to_ratfn())
    }

    pub fn specialize(&self, q: u64) -> Self {
        let qv = BigRational::from_integer(BigInt::from(q));
        let f = |v: &IVar| match v {
            IVar::Q => Poly::constant(qv.clone()),
            other => Poly::var(*other),
        };
        IntegralExpr { num: self.num.substitute(&f), den: self.den.iter().map(|g| g.substitute(&f)).collect() }
    }

    /// Numeric value; `None` on a vanishing denominator.
    pub fn eval(&self, q: &BigRational, u: &BigRational, v: &BigRational) -> Option<BigRational> {
        let f = |x: &IVar| match x {
            IVar::Q => q.clone(),
            IVar::U => u.clone(),
            IVar::V => v.clone(),
        };
        let mut den = BigRational::one();
        for g in &self.den {
            den *= BigRational::one() - g.eval(&f);
        }
        (!den.is_zero()).then(|| self.num.eval(&f) / den)
    }

    /// `q^(dm) (1 + (1 - q^-1)^-1 Z(-s/2 - 1, rho(s + 2) - d - 1))` as a Dirichlet expression.
    pub fn to_zeta(&self, d: u32, rho: u32, m: u32) -> Result<Expr, PadicError> {
        let (d, rho) = (d as i32, rho as i32);
        let term = |mono: &Mono<IVar>, c: &BigRational| -> Result<Expr, PadicError> {
            let (a, b, cv) = (mono.exp(&IVar::Q), mono.exp(&IVar::U), mono.exp(&IVar::V));
            if b % 2 != 0 {
                return Err(PadicError::NonNormalizable("odd power of u".into()));
            }
            let x = rho * cv - b / 2;
            if x < 0 {
                return Err(PadicError::NonNormalizable("negative degree".into()));
            }
            let qe = a + b + cv * (d + 1 - 2 * rho);
            Ok(Expr::poly(dirichlet::qpoly().pow(0).scale(c).mul(&Poly::monomial(dirichlet::DVar::Q, qe)))
                .mul(Expr::atom(Base::q(x))))
        };
        let num: Vec<Expr> = self.num.terms().map(|(mo, c)| term(mo, c)).collect::<Result<_, _>>()?;
        let mut parts = vec![Expr::Sum(num)];
        for g in &self.den {
            let (mo, c) = g.leading().expect("single term");
            parts.push(Expr::geom_inv(term(mo, c)?));
        }
        let q = dirichlet::qpoly();
        let inv = Expr::Const(RatFn::new(q.clone(), q.sub(&Poly::one())));
        let z = Expr::Prod(parts);
        Ok(Expr::q_pow(d * m as i32).mul(Expr::int(1).add(inv.mul(z))))
    }
}

impl fmt::Display for IntegralExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.num)?;
        for g in &self.den {
            write!(f, " / (1 - {g})")?;
        }
        Ok(())
    }
}

/// An affine form `a s + b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Affine {
    pub s: BigRational,
    pub c: BigRational,
}

impl fmt::Display for Affine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let coef = if self.s.is_one() {
            String::new()
        } else if self.s == -BigRational::one() {
            "-".into()
        } else {
            self.s.to_string()
        };
        write!(f, "{coef}s")?;
        if self.c.is_positive() {
            write!(f, "+{}", self.c)?;
        } else if self.c.is_negative() {
            write!(f, "{}", self.c)?;
        }
        Ok(())
    }
}

/// The arguments `(r, t) = (-s/2 - 1, rho (s + 2) - d - 1)` of the integral.
pub fn substitution(d: u32, rho: u32) -> (Affine, Affine) {
    let r = Affine { s: rat(-1, 2), c: int(-1) };
    let t = Affine { s: int(rho as i64), c: int(2 * rho as i64 - d as i64 - 1) };
    (r, t)
}

/// `sum_{(l, n) in N^2} X1^l X2^n X3^min(l, n)` in closed form.
pub fn geometric_sum3(x1: &IPoly, x2: &IPoly, x3: &IPoly) -> IntegralExpr {
    let p12 = x1.mul(x2);
    let p123 = p12.mul(x3);
    IntegralExpr { num: p123.mul(&Poly::one().sub(&p12)), den: vec![p123, x1.clone(), x2.clone()] }
}

/// Numeric [`geometric_sum3`]; requires `|X1|, |X2|, |X1 X2 X3| < 1`.
pub fn geometric_sum3_value(x1: &BigRational, x2: &BigRational, x3: &BigRational) -> Result<BigRational, PadicError> {
    let p12 = x1 * x2;
    let p123 = &p12 * x3;
    if x1.abs() >= BigRational::one() || x2.abs() >= BigRational::one() || p123.abs() >= BigRational::one() {
        return Err(PadicError::Divergent);
    }
    let one = BigRational::one();
    Ok(&p123 * (&one - &p12) / ((&one - &p123) * (&one - x1) * (&one - x2)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AuxId {
    Z0,
    Z1,
    Z2,
    Z3,
}

impl std::str::FromStr for AuxId {
    type Err = PadicError;
    fn from_str(s: &str) -> Result<Self, PadicError> {
        match s.to_ascii_uppercase().as_str() {
            "Z0" => Ok(AuxId::Z0),
            "Z1" => Ok(AuxId::Z1),
            "Z2" => Ok(AuxId::Z2),
            "Z3" => Ok(AuxId::Z3),
            _ => Err(PadicError::UnknownId(s.into())),
        }
    }
}

/// Closed forms of the auxiliary integrals over `p x p^(8)`.
pub fn aux_integral_closed(id: AuxId) -> IntegralExpr {
    let v = var(IVar::V, 1);
    let u2 = var(IVar::U, 2);
    let base = qm(-9).mul(&v).mul(&one_minus_q(-1));
    let x2 = qm(-1).mul(&v);
    let g4 = qm(-4).mul(&u2).mul(&v);
    match id {
        AuxId::Z0 => IntegralExpr { num: base, den: vec![x2] },
        AuxId::Z1 => IntegralExpr {
            num: base.mul(&u2).mul(&Poly::one().sub(&qm(-4).mul(&v))),
            den: vec![g4, x2],
        },
        AuxId::Z2 => IntegralExpr { num: base.mul(&u2), den: vec![x2] },
        AuxId::Z3 => {
            let f = Poly::one().sub(&qm(-2).mul(&v)).add(&qm(-2).mul(&v).mul(&u2)).sub(&qm(-4).mul(&v).mul(&u2));
            IntegralExpr { num: base.mul(&u2).mul(&f), den: vec![x2, g4] }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MassKind {
    M1,
    M2,
    M3,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LiftKind {
    A1,
    A2,
    A3,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Closed,
    Enumerate,
}

/// `m_l` given by finitely many exceptional values and, from `l = start`
/// on, `coef * ratio^l`.
#[derive(Debug, Clone)]
pub struct MassSequence {
    pub kind: MassKind,
    pub exceptions: Vec<(u32, IPoly)>,
    pub tail: Option<(u32, IPoly, IPoly)>,
}

impl MassSequence {
    pub fn of(kind: MassKind) -> Self {
        let c3 = one_minus_q(-3);
        match kind {
            MassKind::M1 => MassSequence { kind, exceptions: vec![], tail: Some((1, c3.mul(&qm(-5)), qm(-3))) },
            MassKind::M2 => MassSequence { kind, exceptions: vec![(1, qm(-8))], tail: None },
            MassKind::M3 => MassSequence {
                kind,
                exceptions: vec![(1, one_minus_q(-1).mul(&qm(-8)))],
                tail: Some((2, c3.mul(&qm(-3)), qm(-3))),
            },
        }
    }

    /// Symbolic value at `l >= 1`.
    pub fn value(&self, l: u32) -> IPoly {
        if let Some((_, v)) = self.exceptions.iter().find(|(k, _)| *k == l) {
            return v.clone();
        }
        match &self.tail {
            Some((start, c, r)) if l >= *start => c.mul(&r.pow(l)),
            _ => Poly::zero(),
        }
    }

    /// `sum_{(l, n)} (1 - q^-1) q^-n m_l v^n u^(2 min(l, n))`, closing the tail with [`geometric_sum3`].
    pub fn stratified_sum(&self) -> IntegralExpr {
        let x2 = qm(-1).mul(&var(IVar::V, 1));
        let x3 = var(IVar::U, 2);
        // sum_n X2^n X3^min(l, n) for a fixed l
        let inner = |l: u32| -> IntegralExpr {
            let mut head = Poly::zero();
            for n in 1..l {
                head = head.add(&x2.mul(&x3).pow(n));
            }
            let tail = IntegralExpr { num: x2.mul(&x3).pow(l), den: vec![x2.clone()] };
            IntegralExpr::poly(head).add(&tail)
        };
        let mut total = IntegralExpr::zero();
        for (l, m) in &self.exceptions {
            total = total.add(&inner(*l).scale(m));
        }
        if let Some((start, c, r)) = &self.tail {
            let mut t = geometric_sum3(r, &x2, &x3);
            for l in 1..*start {
                t = t.add(&inner(l).scale(&r.pow(l).neg()));
            }
            total = total.add(&t.scale(c));
        }
        total.scale(&one_minus_q(-1))
    }
}

/// The defining stratified sum of an auxiliary integral.
pub fn aux_integral_sum(id: AuxId) -> IntegralExpr {
    match id {
        AuxId::Z0 => {
            let x2 = qm(-1).mul(&var(IVar::V, 1));
            IntegralExpr { num: one_minus_q(-1).mul(&qm(-8)).mul(&x2), den: vec![x2] }
        }
        AuxId::Z1 => MassSequence::of(MassKind::M1).stratified_sum(),
        AuxId::Z2 => MassSequence::of(MassKind::M2).stratified_sum(),
        AuxId::Z3 => MassSequence::of(MassKind::M3).stratified_sum(),
    }
}

fn prime_power(q: u64) -> Result<(u64, u32), PadicError> {
    match factorize(q).as_slice() {
        [(p, f)] => Ok((*p, *f)),
        _ => Err(PadicError::InvalidParams(format!("{q} is not a prime power"))),
    }
}

fn eval_q(p: &IPoly, q: u64) -> BigRational {
    let qv = BigRational::from_integer(BigInt::from(q));
    p.eval(&|v: &IVar| if *v == IVar::Q { qv.clone() } else { BigRational::zero() })
}

/// Mass `m_l` of the stratum of `p^(8)` cut out by the kind's valuation condition.
///
/// Enumeration counts classes of the three governing coordinates modulo
/// `p^(l+1)`; the other five coordinates range freely over `p / p^(l+1)`.
pub fn mass(kind: MassKind, q: u64, l: u32, mode: Mode) -> Result<BigRational, PadicError> {
    if l == 0 {
        return Err(PadicError::InvalidParams("l >= 1".into()));
    }
    if mode == Mode::Closed {
        return Ok(eval_q(&MassSequence::of(kind).value(l), q));
    }
    let (p, f) = prime_power(q)?;
    let ring = make_ring(p, f, 1, l + 1)?;
    let classes = q.checked_pow(l).ok_or(PadicError::BudgetExceeded { required: u64::MAX, budget: 1 << 24 })?;
    if classes.saturating_pow(3) > 1 << 24 {
        return Err(PadicError::BudgetExceeded { required: classes.saturating_pow(3), budget: 1 << 24 });
    }
    let vals: Vec<u32> = (0..classes).map(|i| ring.valuation(&ring.from_index(i)).capped()).collect();
    let count: u64 = match kind {
        MassKind::M2 => {
            if ring.valuation(&ring.from_int(p as i64)).capped() == l {
                classes.pow(3)
            } else {
                0
            }
        }
        MassKind::M1 | MassKind::M3 => {
            let shift = if kind == MassKind::M3 { 1 } else { 0 };
            let mut c = 0;
            for &a in &vals {
                for &b in &vals {
                    for &z in &vals {
                        if (a + shift).min(b + shift).min(z) == l {
                            c += 1;
                        }
                    }
                }
            }
            c
        }
    };
    let num = BigInt::from(count) * BigInt::from(classes).pow(5);
    Ok(BigRational::new(num, BigInt::from(q).pow(8 * (l + 1))))
}

/// Closed lifting counts: `a1 = q^(5n)`, `a2 = [n = 0]`, `a3 = 1` at `n = 0` and `q^(5n + 2)` after.
pub fn lifting_closed(kind: LiftKind, q: u64, n: u32) -> BigUint {
    let q = BigUint::from(q);
    match kind {
        LiftKind::A1 => q.pow(5 * n),
        LiftKind::A2 => BigUint::from((n == 0) as u32),
        LiftKind::A3 if n == 0 => BigUint::one(),
        LiftKind::A3 => q.pow(5 * n + 2),
    }
}

type RMat = [[BigRational; 3]; 3];

fn rmat(entries: [[i64; 3]; 3], den: i64) -> RMat {
    entries.map(|row| row.map(|x| rat(x, den)))
}

fn rmul(a: &RMat, b: &RMat) -> RMat {
    std::array::from_fn(|i| std::array::from_fn(|j| (0..3).map(|k| &a[i][k] * &b[k][j]).sum()))
}

fn rbracket(a: &RMat, b: &RMat) -> RMat {
    let (x, y) = (rmul(a, b), rmul(b, a));
    std::array::from_fn(|i| std::array::from_fn(|j| &x[i][j] - &y[i][j]))
}

const OFF_DIAG: [(usize, usize); 6] = [(0, 1), (1, 2), (0, 2), (1, 0), (2, 1), (2, 0)];

fn unit(i: usize, j: usize) -> RMat {
    let mut m = rmat([[0; 3]; 3], 1);
    m[i][j] = int(1);
    m
}

/// `o`-basis of `sl_3(o)`: `h12, h23, e12, e23, e13, f21, f32, f31`.
fn sl3_basis() -> Vec<RMat> {
    let mut b = vec![rmat([[1, 0, 0], [0, -1, 0], [0, 0, 0]], 1), rmat([[0, 0, 0], [0, 1, 0], [0, 0, -1]], 1)];
    b.extend(OFF_DIAG.iter().map(|&(i, j)| unit(i, j)));
    b
}

/// `o`-basis of `Lambda`: `w = 2/3 h12 + 1/3 h23` replaces `h12`.
fn lambda_basis() -> Vec<RMat> {
    let mut b = sl3_basis();
    b[0] = rmat([[2, 0, 0], [0, -1, 0], [0, 0, -1]], 3);
    b
}

/// Coordinates of a trace-zero matrix in the `Lambda` basis.
fn lambda_coords(m: &RMat) -> Vec<BigRational> {
    let cw = &m[0][0] * rat(3, 2);
    let ch = &m[1][1] + &m[0][0] * rat(1, 2);
    let mut out = vec![cw, ch];
    out.extend(OFF_DIAG.iter().map(|&(i, j)| m[i][j].clone()));
    out
}

/// Exponents of `|sl_3(o) : p Lambda|` and `|Lambda : sl_3(o)|` over `q`.
pub fn lambda_indices() -> (u32, u32) {
    let rows: Vec<Vec<BigRational>> = sl3_basis().iter().map(lambda_coords).collect();
    let det = rows_det(rows);
    let v = p_valuation(&det, 3);
    assert!(v >= 0, "sl3(o) lies in Lambda");
    (8 - v as u32, v as u32)
}

/// `q`-exponent of the Jacobian `|det kappa_0|_p` for `sl_3` at `p = 3`.
pub fn sl3_jacobian_exponent() -> Result<u32, PadicError> {
    let l = LieLattice::builtin(BuiltinId::Sl3, 3, 1, 1)?;
    let det = determinant(&l.killing_form()?);
    let num = det.num.as_constant().ok_or(PadicError::InvalidParams("symbolic Killing form".into()))?;
    let den = det.den.as_constant().ok_or(PadicError::InvalidParams("symbolic Killing form".into()))?;
    Ok(p_valuation(&(num / den), 3).unsigned_abs() as u32)
}

fn rows_det(mut a: Vec<Vec<BigRational>>) -> BigRational {
    let n = a.len();
    let mut det = BigRational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else { return BigRational::zero() };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= a[c][c].clone();
        for r in c + 1..n {
            let f = &a[r][c] / &a[c][c];
            for k in c..n {
                let t = &f * &a[c][k];
                a[r][k] -= t;
            }
        }
    }
    det
}

fn p_valuation(x: &BigRational, p: u64) -> i64 {
    assert!(!x.is_zero());
    let pb = BigInt::from(p);
    let (mut n, mut d) = (x.numer().abs(), x.denom().clone());
    let mut v = 0;
    while (&n % &pb).is_zero() {
        n /= &pb;
        v += 1;
    }
    while (&d % &pb).is_zero() {
        d /= &pb;
        v -= 1;
    }
    v
}

/// Class representative modulo `p Lambda` for each lifting kind.
fn lift_representative(kind: LiftKind) -> RMat {
    match kind {
        LiftKind::A1 => rmat([[1, 0, 0], [0, 1, 0], [0, 0, -2]], 3),
        LiftKind::A2 => rmat([[0, 1, 0], [0, 0, 1], [0, 0, 0]], 1),
        LiftKind::A3 => rmat([[0, 1, 0], [0, 0, 0], [0, 0, 0]], 1),
    }
}

fn to_table(ring: &QuotientRing, x: &BigRational) -> Result<u16, PadicError> {
    let n = ring.from_int(x.numer().to_i64().ok_or(PadicError::InvalidParams("large numerator".into()))?);
    let d = ring.from_int(x.denom().to_i64().ok_or(PadicError::InvalidParams("large denominator".into()))?);
    Ok(ring.index_of(&ring.mul(&n, &ring.inv(&d)?)) as u16)
}

/// Counts cosets `a + p^(n+1) Lambda` in the kind's class modulo `p Lambda`
/// whose centraliser in `sl_3(o)` has index `q^(4(n+1))`.
///
/// The index is `q^(sum max(0, n + 1 - v_k))` over the elementary divisors
/// `p^(v_k)` of `ad a: sl_3(o) -> Lambda`. The class forces four unit divisors,
/// so a coset qualifies iff the other four are at least `n + 1`; hence
/// qualifying cosets reduce to qualifying cosets, and only their lifts are
/// examined.
pub fn lifting_enumerate(kind: LiftKind, q: u64, n: u32, budget: u64) -> Result<BigUint, PadicError> {
    let (p, f) = prime_power(q)?;
    if p != 3 {
        return Err(PadicError::InvalidParams("the lattice Lambda needs residue characteristic 3".into()));
    }
    let ring = make_ring(p, f, 1, n + 1)?;
    if ring.cardinality() > TABLE_LIMIT {
        return Err(PadicError::BudgetExceeded { required: ring.cardinality(), budget: TABLE_LIMIT });
    }
    let table = RingTable::new(&ring)?;
    let table = &table;
    let lam = lambda_basis();
    let sl = sl3_basis();
    // coeff[i][j][k]: k-th Lambda coordinate of [lambda_i, s_j]
    let mut coeff = vec![vec![vec![0u16; 8]; 8]; 8];
    for i in 0..8 {
        for j in 0..8 {
            for (k, c) in lambda_coords(&rbracket(&lam[i], &sl[j])).iter().enumerate() {
                coeff[i][j][k] = to_table(&ring, c)?;
            }
        }
    }
    let a0: Vec<u16> =
        lambda_coords(&lift_representative(kind)).iter().map(|c| to_table(&ring, c)).collect::<Result<_, _>>()?;
    let exponent = |a: &[u16], level: u32| -> u32 {
        let m: Vec<Vec<u16>> = (0..8)
            .map(|k| {
                (0..8)
                    .map(|j| (0..8).fold(0u16, |acc, i| table.add(acc, table.mul(a[i], coeff[i][j][k]))))
                    .collect()
            })
            .collect();
        smith_valuations(table, m).iter().map(|v| (level + 1).saturating_sub(v.capped())).sum()
    };
    let mut alive: Vec<Vec<u16>> = if exponent(&a0, 0) == 4 { vec![a0] } else { vec![] };
    let residues: Vec<u16> = (0..q).map(|t| ring.index_of(&ring.teich_elem(t)) as u16).collect();
    let mut spent = 0u64;
    for level in 1..=n {
        let step = ring.index_of(&ring.pi_pow(level)) as u16;
        let digits: Vec<u16> = residues.iter().map(|&t| table.mul(t, step)).collect();
        let per = q.pow(8);
        spent = spent.saturating_add(alive.len() as u64 * per);
        if spent > budget {
            return Err(PadicError::BudgetExceeded { required: spent, budget });
        }
        alive = alive
            .par_iter()
            .flat_map_iter(|a| {
                let digits = &digits;
                let exponent = &exponent;
                let table = table;
                (0..per).filter_map(move |idx| {
                    let mut b = a.clone();
                    let mut r = idx;
                    for c in b.iter_mut() {
                        *c = table.add(*c, digits[(r % q) as usize]);
                        r /= q;
                    }
                    (exponent(&b, level) == 4 * (level + 1)).then_some(b)
                })
            })
            .collect();
    }
    Ok(BigUint::from(alive.len()))
}

/// Lifting count in either mode.
pub fn lifting_count(kind: LiftKind, q: u64, n: u32, mode: Mode, budget: u64) -> Result<BigUint, PadicError> {
    match mode {
        Mode::Closed => Ok(lifting_closed(kind, q, n)),
        Mode::Enumerate => lifting_enumerate(kind, q, n, budget),
    }
}

/// `q^(-8l) a_(l-1) - q^(-8(l+1)) a_l`.
pub fn mass_from_lifting(q: u64, l: u32, prev: &BigUint, cur: &BigUint) -> BigRational {
    let qq = BigInt::from(q);
    BigRational::new(BigInt::from(prev.clone()), qq.pow(8 * l)) - BigRational::new(BigInt::from(cur.clone()), qq.pow(8 * (l + 1)))
}

/// Orbit-type totals modulo scalars entering the `Lambda` decomposition.
pub fn coset_totals() -> BTreeMap<&'static str, IPoly> {
    let q = || qm(1);
    let c = |x: i64| Poly::int(x);
    let mut t = BTreeMap::new();
    t.insert("A", Poly::one());
    t.insert("B", qm(3).sub(&c(1)).mul(&qm(2).sub(&c(1))).mul(&q()));
    t.insert("C", qm(3).sub(&c(1)).mul(&q().add(&c(1))));
    t.insert("G", qm(2).add(&q()).add(&c(1)).mul(&qm(2)));
    t
}

/// `(S_1, S_2)`: contributions of `sl_3(o) \ p Lambda` and `Lambda \ sl_3(o)`.
pub fn sl3_summands() -> (IntegralExpr, IntegralExpr) {
    let t = coset_totals();
    let z = aux_integral_closed;
    let regular1 = qm(7).sub(&t["A"]).sub(&t["B"]).sub(&t["C"]);
    let s1 = z(AuxId::Z3).scale(&t["C"]).add(&z(AuxId::Z2).scale(&t["B"])).add(&z(AuxId::Z0).scale(&regular1));
    let regular2 = qm(7).sub(&t["G"]);
    let s2 = z(AuxId::Z1).scale(&t["G"]).add(&z(AuxId::Z0).scale(&regular2)).scale(&qm(1).sub(&Poly::one()));
    (s1, s2)
}

/// Zeta function of the `m`-th principal congruence subgroup of `SL_3(o)`,
/// `o` unramified with residue characteristic 3.
pub fn sl3_assembly(m: u32) -> Result<Expr, PadicError> {
    let (s1, s2) = sl3_summands();
    s1.add(&s2).to_zeta(8, 3, m)
}

/// The integral for `sl_2(o)` at `p = 2` with ramification index `e`, stratified by `v(y_3)`.
pub fn sl2_p2_integral(e: u32) -> Result<IntegralExpr, PadicError> {
    if e == 0 {
        return Err(PadicError::InvalidParams("e >= 1".into()));
    }
    let e = e as i32;
    let v = |k: i32| var(IVar::V, k);
    let u2 = |k: i32| var(IVar::U, 2 * k);
    let c1 = one_minus_q(-1);
    let c2 = one_minus_q(-2);
    let x = qm(-1).mul(&v(1));
    let shell = |i: i32| c1.mul(&qm(-i)).mul(&v(i));
    let ball = |j: i32| IntegralExpr { num: c1.mul(&qm(-j)).mul(&v(j)), den: vec![x.clone()] };
    let mut z = ball(1).scale(&c1);
    for j in 1..=e {
        let mu = if j < e { c1.mul(&c2).mul(&qm(-j)) } else { c2.mul(&qm(-e)) };
        let mut inner = ball(j).scale(&u2(j));
        for i in 1..j {
            inner = inner.add(&IntegralExpr::poly(shell(i).mul(&u2(i))));
        }
        z = z.add(&inner.scale(&mu));
    }
    Ok(z)
}

/// Zeta function of `SL_2^m(o)` for dyadic `o` with ramification index `e`.
pub fn sl2_p2_formula(e: u32, m: u32) -> Result<Expr, PadicError> {
    sl2_p2_integral(e)?.to_zeta(3, 1, m)
}

/// Options for [`zeta_via_integral`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IntegralOptions {
    /// Maximal number of evaluated points `y`.
    pub budget: u64,
    /// Use principal minors only; over a DVR they give the same norms.
    pub principal: bool,
}

impl Default for IntegralOptions {
    fn default() -> Self {
        IntegralOptions { budget: 5_000_000, principal: true }
    }
}

/// Output of [`zeta_via_integral`].
#[derive(Debug, Clone)]
pub struct IntegralZeta {
    pub rho: u32,
    /// Integral truncated to `v(x) <= n_max - m`.
    pub truncated: IntegralExpr,
    /// Geometric closure, when the last three shells scale by one monomial.
    pub closed: Option<IntegralExpr>,
    pub series: TruncatedSeries,
}

/// `(min(b_1, k), ..., min(b_rho, k))` for the divisors `p^(b_j)` of `R(y)`,
/// read off minor norms of a lift computed modulo `p^(2 rho k)`.
fn divisor_truncation<R: LocalRing>(ring: &R, m: &[Vec<R::E>], rho: usize, k: u32, principal: bool) -> Vec<u32> {
    let mut out = Vec::with_capacity(rho);
    let mut prev = 0u32;
    for j in 1..=rho {
        let bound = 2 * (j as u32 - 1) * k;
        if prev >= bound && j > 1 {
            out.resize(rho, k);
            break;
        }
        let cur = minor_norm(ring, m, j, principal).capped();
        out.push(((cur - prev) / 2).min(k));
        prev = cur;
    }
    out
}

fn shell_counts<R: LocalRing>(
    ring: &R,
    coeffs: &[Vec<Vec<R::E>>],
    elem: &(dyn Fn(u64) -> R::E + Sync),
    q: u64,
    d: usize,
    rho: usize,
    k: u32,
    principal: bool,
) -> BTreeMap<Vec<u32>, u64> {
    let per = q.pow(k);
    let total = per.pow(d as u32);
    let unit = q.pow(k - 1);
    let scale = q.pow(ring.depth() - k);
    let merged: HashMap<Vec<u32>, u64> = (0..total)
        .into_par_iter()
        .fold(HashMap::new, |mut acc: HashMap<Vec<u32>, u64>, idx| {
            let mut r = idx;
            let mut ys = Vec::with_capacity(d);
            let mut primitive = false;
            for _ in 0..d {
                let c = r % per;
                r /= per;
                primitive |= c >= unit;
                ys.push(c);
            }
            if primitive {
                let y: Vec<R::E> = ys.iter().map(|&c| elem(c * scale)).collect();
                let m = crate::matalg::eval_matrix(ring, coeffs, &y);
                *acc.entry(divisor_truncation(ring, &m, rho, k, principal)).or_default() += 1;
            }
            acc
        })
        .reduce(HashMap::new, |mut a, b| {
            for (key, v) in b {
                *a.entry(key).or_default() += v;
            }
            a
        });
    merged.into_iter().collect()
}

/// Zeta function of `exp(p^m L)` from the integral formula, stratifying
/// `(x, y)` by `v(x) = k <= n_max - m` and by the truncated divisors of `R(y)`
/// computed from minor norms.
pub fn zeta_via_integral(l: &LieLattice, m: u32, n_max: u32, opts: &IntegralOptions) -> Result<IntegralZeta, PadicError> {
    let cm = l.commutator_matrix();
    let rho = crate::matalg::generic_rank_rho(&cm)?.rho;
    let d = l.d;
    let q = l.family.q();
    let kmax = n_max.saturating_sub(m);
    let required = (1..=kmax).map(|k| q.saturating_pow(d as u32 * k)).fold(0u64, u64::saturating_add);
    if required > opts.budget {
        return Err(PadicError::BudgetExceeded { required, budget: opts.budget });
    }
    let qr = BigRational::from_integer(BigInt::from(q));
    let mut shells: Vec<IPoly> = Vec::new();
    let mut last: BTreeMap<Vec<u32>, u64> = BTreeMap::new();
    for k in 1..=kmax {
        let prec = (2 * rho as u32 * k).max(k).min(l.family.max_depth());
        let ring = l.family.ring(prec)?;
        let counts = if ring.cardinality() <= TABLE_LIMIT {
            let table = RingTable::new(&ring)?;
            let coeffs = table_coeffs(&ring, &cm)?;
            shell_counts(&table, &coeffs, &|i| i as u16, q, d, rho, k, opts.principal)
        } else {
            let coeffs = cm.evaluate_coeffs(&ring)?;
            shell_counts(&ring, &coeffs, &|i| ring.from_index(i), q, d, rho, k, opts.principal)
        };
        // (1 - q^-1) q^-k v^k q^(-dk) u^(2 sum w)
        let mut shell = Poly::zero();
        for (w, c) in &counts {
            let coef = BigRational::from_integer(BigInt::from(*c)) * (BigRational::one() - qr.recip())
                / qr.pow((d as u32 * k + k) as i32);
            let mono = Mono::var(IVar::V, k as i32).mul(&Mono::var(IVar::U, 2 * w.iter().sum::<u32>() as i32));
            shell = shell.add(&Poly::term(coef, mono));
        }
        shells.push(shell);
        last = counts;
    }
    let truncated = IntegralExpr::poly(shells.iter().fold(Poly::zero(), |a, s| a.add(s)));
    let closed = close_tail(&shells);
    let expr = truncated.to_zeta(d as u32, rho as u32, m)?;
    let bound = q.checked_pow(rho as u32 * kmax).ok_or(PadicError::InvalidParams("degree bound overflows".into()))?;
    let mut series = expr.specialize(q).to_series(bound.max(1))?;
    series.level_bound = Some(n_max);
    series.complete_through = None;
    // beta_t: t-th divisor bound when no class at depth kmax reaches the cap
    let mut kk: i64 = 0;
    if kmax >= 1 {
        for t in 0..rho {
            if last.keys().all(|w| w[t] < kmax) {
                let beta = last.keys().map(|w| w[t]).max().unwrap_or(0) as i64;
                kk = kk.max((t as i64 + 1) * (kmax as i64 + 1 - beta));
            }
        }
    }
    if kk >= 1 {
        series.complete_through = Some(BigUint::from(q).pow(kk as u32 - 1));
    }
    Ok(IntegralZeta { rho: rho as u32, truncated, closed, series })
}

/// Closes `sum_k S_k` geometrically when `S_K = g S_(K-1)` and `S_(K-1) = g S_(K-2)`
/// for a single term `g`.
fn close_tail(shells: &[IPoly]) -> Option<IntegralExpr> {
    let n = shells.len();
    if n < 3 || shells[n - 1].is_zero() || shells[n - 2].is_zero() {
        return None;
    }
    let (lm, lc) = shells[n - 1].leading()?;
    let (pm, pc) = shells[n - 2].leading()?;
    let g = Poly::term(lc / pc, lm.mul(&pm.inv()));
    if shells[n - 2].mul(&g) != shells[n - 1] || shells[n - 3].mul(&g) != shells[n - 2] {
        return None;
    }
    let head = shells[..n - 1].iter().fold(Poly::zero(), |a, s| a.add(s));
    Some(IntegralExpr::poly(head).add(&IntegralExpr { num: shells[n - 1].clone(), den: vec![g] }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dirichlet::{identical, theorem_formula, FormulaParams};
    use crate::kirillov::{truncated_zeta_shifted, EnumOptions};

    fn kopts() -> EnumOptions {
        EnumOptions { budget: crate::kirillov::DEFAULT_BUDGET, cache: None, divide_content: true }
    }

    #[test]
    fn aux_closed_forms_match_stratified_sums() {
        for id in [AuxId::Z0, AuxId::Z1, AuxId::Z2, AuxId::Z3] {
            assert!(aux_integral_closed(id).equals(&aux_integral_sum(id)), "{id:?}");
        }
        let z0 = aux_integral_closed(AuxId::Z0);
        assert!(aux_integral_closed(AuxId::Z2).equals(&z0.scale(&var(IVar::U, 2))));
    }

    #[test]
    fn z3_numerator_factor_at_origin() {
        // 1 - q^-2 + q^-2 - q^-4 at u = v = 1
        let f = Poly::one().sub(&qm(-2)).add(&qm(-2)).sub(&qm(-4));
        assert_eq!(f, one_minus_q(-4));
    }

    #[test]
    fn geometric_sum3_cases() {
        let h = rat(1, 2);
        assert_eq!(geometric_sum3_value(&h, &h, &h).unwrap(), rat(3, 7));
        assert_eq!(geometric_sum3_value(&int(1), &h, &h), Err(PadicError::Divergent));
        let (x1, x2) = (var(IVar::U, 1), var(IVar::V, 1));
        let collapsed = geometric_sum3(&x1, &x2, &Poly::one());
        let direct = IntegralExpr { num: x1.mul(&x2), den: vec![x1.clone(), x2.clone()] };
        assert!(collapsed.equals(&direct));
        assert_eq!(collapsed.num.to_string(), x1.mul(&x2).mul(&Poly::one().sub(&x1.mul(&x2))).to_string());
    }

    #[test]
    fn geometric_sum3_against_partial_sums() {
        let h = rat(1, 2);
        let mut s = BigRational::zero();
        for l in 1..=60u32 {
            for n in 1..=60u32 {
                s += h.pow((l + n + l.min(n)) as i32);
            }
        }
        let err = (geometric_sum3_value(&h, &h, &h).unwrap() - s).abs();
        assert!(err < BigRational::new(1.into(), BigInt::from(2).pow(50)));
    }

    #[test]
    fn masses_closed_and_enumerated() {
        assert_eq!(mass(MassKind::M1, 3, 1, Mode::Closed).unwrap(), BigRational::new(26.into(), BigInt::from(3).pow(11)));
        assert_eq!(mass(MassKind::M2, 3, 2, Mode::Closed).unwrap(), BigRational::zero());
        assert_eq!(
            mass(MassKind::M3, 3, 2, Mode::Closed).unwrap(),
            (int(1) - BigRational::new(1.into(), 27.into())) / BigRational::from_integer(BigInt::from(3).pow(9))
        );
        for kind in [MassKind::M1, MassKind::M2, MassKind::M3] {
            for l in 1..=2 {
                assert_eq!(mass(kind, 3, l, Mode::Enumerate).unwrap(), mass(kind, 3, l, Mode::Closed).unwrap());
            }
        }
    }

    #[test]
    fn lifting_counts_low_level() {
        for kind in [LiftKind::A1, LiftKind::A2, LiftKind::A3] {
            for n in 0..=1 {
                assert_eq!(lifting_enumerate(kind, 3, n, u64::MAX).unwrap(), lifting_closed(kind, 3, n), "{kind:?} {n}");
            }
        }
        assert_eq!(lifting_closed(LiftKind::A3, 3, 1), BigUint::from(2187u32));
        assert_eq!(lifting_closed(LiftKind::A1, 3, 2), BigUint::from(59049u32));
    }

    #[test]
    fn lambda_apparatus() {
        assert_eq!(lambda_indices(), (7, 1));
        assert_eq!(sl3_jacobian_exponent().unwrap(), 1);
        let (_, s2) = sl3_summands();
        let _ = s2;
        let g = coset_totals()["G"].mul(&qm(1).sub(&Poly::one()));
        let expect = qm(1).sub(&Poly::one()).mul(&qm(2).add(&qm(1)).add(&Poly::one())).mul(&qm(2));
        assert_eq!(g, expect);
    }

    #[test]
    fn sl3_assembly_is_theorem() {
        for m in 1..=2 {
            let a = sl3_assembly(m).unwrap();
            let t = theorem_formula("thm_sl3_p3", FormulaParams { m, ..Default::default() }).unwrap();
            assert!(identical(&a, &t));
        }
    }

    #[test]
    fn substitution_strings() {
        let (r, t) = substitution(8, 3);
        assert_eq!(t.to_string(), "3s-3");
        assert_eq!(r.to_string(), "-1/2s-1");
        assert_eq!(substitution(3, 1).1.to_string(), "s-2");
    }

    #[test]
    fn sl2_dyadic_unramified_is_theorem() {
        let z = sl2_p2_integral(1).unwrap();
        let c1 = one_minus_q(-1);
        let expect = IntegralExpr {
            num: c1.add(&one_minus_q(-2).mul(&qm(-1)).mul(&var(IVar::U, 2))).mul(&c1).mul(&qm(-1)).mul(&var(IVar::V, 1)),
            den: vec![qm(-1).mul(&var(IVar::V, 1))],
        };
        assert!(z.equals(&expect));
        for m in 1..=3 {
            let f = sl2_p2_formula(1, m).unwrap();
            let t = theorem_formula("thm_sl2_p2e1", FormulaParams { m, ..Default::default() }).unwrap();
            assert!(identical(&f, &t));
        }
    }

    #[test]
    fn integral_route_matches_orbit_route_sl2() {
        let l = LieLattice::builtin(BuiltinId::Sl2, 3, 1, 1).unwrap();
        let z = zeta_via_integral(&l, 1, 3, &IntegralOptions::default()).unwrap();
        let k = truncated_zeta_shifted(&l, 1, 3, &kopts()).unwrap();
        assert_eq!(z.series.counts, k.counts);
        assert_eq!(z.series.count(1), BigUint::from(27u32));
        assert_eq!(z.series.count(3), BigUint::from(78u32));
        assert_eq!(z.series.count(9), BigUint::from(234u32));
        assert!(z.closed.is_none());
        let z4 = zeta_via_integral(&l, 1, 4, &IntegralOptions::default()).unwrap();
        let closed = z4.closed.expect("sl2 shells are geometric");
        let exact = IntegralExpr {
            num: one_minus_q(-1).mul(&one_minus_q(-3)).mul(&qm(-1)).mul(&var(IVar::V, 1)),
            den: vec![qm(-1).mul(&var(IVar::V, 1))],
        };
        assert!(closed.equals(&exact.specialize(3)));
    }

    #[test]
    fn all_minors_agree_with_principal() {
        let l = LieLattice::builtin(BuiltinId::Sl2, 2, 1, 1).unwrap();
        let a = zeta_via_integral(&l, 2, 4, &IntegralOptions { principal: true, ..Default::default() }).unwrap();
        let b = zeta_via_integral(&l, 2, 4, &IntegralOptions { principal: false, ..Default::default() }).unwrap();
        assert_eq!(a.series, b.series);
    }

    #[test]
    fn budget_is_enforced() {
        let l = LieLattice::builtin(BuiltinId::Sl3, 3, 1, 1).unwrap();
        let r = zeta_via_integral(&l, 1, 4, &IntegralOptions { budget: 1000, principal: true });
        assert!(matches!(r, Err(PadicError::BudgetExceeded { .. })));
    }
}
