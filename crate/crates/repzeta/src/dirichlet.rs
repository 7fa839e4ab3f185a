//! Dirichlet expressions for representation zeta functions: exact series
//! expansion, symbolic identities in `q`, abscissae of convergence and the
//! registry of explicit formulas.
//!
//! An atom `beta^(-s)` has a base `beta` that is a product of prime powers and
//! powers of the linear polynomials `q`, `q + 1`, `q - 1`. For symbolic
//! identities every such factor `f` gets its own variable `T_f = f^(-s)`;
//! after specialising `q` the bases are factored into primes, so the
//! variables become Dirichlet-independent.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::kirillov::TruncatedSeries;
use crate::poly::{int, rat, Mono, Poly, RatFn};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DirichletError {
    #[error("divergent atom: geometric inverse of a series with a term of degree <= 1")]
    DivergentAtom,
    #[error("expression still depends on q")]
    Symbolic,
    #[error("coefficient {coeff} of degree {degree} is not a nonnegative integer")]
    NonIntegral { degree: String, coeff: String },
    #[error("non-normalizable expression: {0}")]
    NonNormalizable(String),
    #[error("unknown formula id {0}")]
    UnknownId(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("no common complete range")]
    Incomparable,
    #[error("non-FAb input: sigma and rho must be positive")]
    NonFab,
}

/// Linear polynomials in `q` that occur as factors of atom bases.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum QFactor {
    Q,
    QPlus1,
    QMinus1,
}

impl QFactor {
    fn eval(self, q: u64) -> u64 {
        match self {
            QFactor::Q => q,
            QFactor::QPlus1 => q + 1,
            QFactor::QMinus1 => q - 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Factor {
    Prime(u64),
    Q(QFactor),
}

/// Variables of the rational-function view: `q` and one `T_f = f^(-s)` per factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DVar {
    Q,
    T(Factor),
}

impl fmt::Display for DVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DVar::Q => write!(f, "q"),
            DVar::T(Factor::Prime(p)) => write!(f, "T{p}"),
            DVar::T(Factor::Q(QFactor::Q)) => write!(f, "Tq"),
            DVar::T(Factor::Q(QFactor::QPlus1)) => write!(f, "T(q+1)"),
            DVar::T(Factor::Q(QFactor::QMinus1)) => write!(f, "T(q-1)"),
        }
    }
}

/// A positive rational `beta = prod f^k`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Base(pub BTreeMap<Factor, i32>);

impl Base {
    pub fn one() -> Self {
        Base::default()
    }

    pub fn factor(f: Factor, k: i32) -> Self {
        let mut m = BTreeMap::new();
        if k != 0 {
            m.insert(f, k);
        }
        Base(m)
    }

    pub fn q(k: i32) -> Self {
        Base::factor(Factor::Q(QFactor::Q), k)
    }

    pub fn mul(&self, o: &Base) -> Base {
        let mut m = self.0.clone();
        for (f, k) in &o.0 {
            let e = m.entry(*f).or_insert(0);
            *e += k;
            if *e == 0 {
                m.remove(f);
            }
        }
        Base(m)
    }

    pub fn is_numeric(&self) -> bool {
        self.0.keys().all(|f| matches!(f, Factor::Prime(_)))
    }

    /// The rational value of a numeric base.
    pub fn value(&self) -> Option<BigRational> {
        let mut v = BigRational::one();
        for (f, k) in &self.0 {
            let Factor::Prime(p) = f else { return None };
            let pk = BigRational::from_integer(BigInt::from(*p)).pow(*k);
            v *= pk;
        }
        Some(v)
    }

    fn monomial(&self) -> Mono<DVar> {
        let mut m = Mono::one();
        for (f, k) in &self.0 {
            m = m.mul(&Mono::var(DVar::T(*f), *k));
        }
        m
    }

    fn specialize(&self, q: u64) -> Base {
        let mut out = Base::one();
        for (f, k) in &self.0 {
            match f {
                Factor::Prime(p) => out = out.mul(&Base::factor(Factor::Prime(*p), *k)),
                Factor::Q(qf) => {
                    for (p, e) in factorize(qf.eval(q)) {
                        out = out.mul(&Base::factor(Factor::Prime(p), e as i32 * k));
                    }
                }
            }
        }
        out
    }
}

/// Prime factorisation by trial division.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    assert!(n >= 1, "factorize needs a positive integer");
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Coefficient field element: a rational function of `q` alone.
pub type QFn = RatFn<DVar>;

/// A Dirichlet expression tree.
#[derive(Debug, Clone)]
pub enum Expr {
    Const(QFn),
    /// `beta^(-s)`.
    Atom(Base),
    Sum(Vec<Expr>),
    Prod(Vec<Expr>),
    /// `(1 - A)^(-1)`.
    GeomInv(Box<Expr>),
}

/// `q` as a polynomial.
pub fn qpoly() -> Poly<DVar> {
    Poly::var(DVar::Q)
}

impl Expr {
    pub fn int(n: i64) -> Expr {
        Expr::Const(RatFn::constant(int(n)))
    }

    pub fn rational(n: i64, d: i64) -> Expr {
        Expr::Const(RatFn::constant(rat(n, d)))
    }

    pub fn poly(p: Poly<DVar>) -> Expr {
        Expr::Const(RatFn::from_poly(p))
    }

    /// `q^k`.
    pub fn q_pow(k: i32) -> Expr {
        Expr::poly(Poly::monomial(DVar::Q, k))
    }

    /// `(q^k)^(-s)`.
    pub fn x(k: i32) -> Expr {
        Expr::Atom(Base::q(k))
    }

    pub fn atom(b: Base) -> Expr {
        Expr::Atom(b)
    }

    pub fn add(self, o: Expr) -> Expr {
        Expr::Sum(vec![self, o])
    }

    pub fn sub(self, o: Expr) -> Expr {
        Expr::Sum(vec![self, Expr::Prod(vec![Expr::int(-1), o])])
    }

    pub fn mul(self, o: Expr) -> Expr {
        Expr::Prod(vec![self, o])
    }

    pub fn geom_inv(a: Expr) -> Expr {
        Expr::GeomInv(Box::new(a))
    }

    /// Replaces `q` by an integer and factors every base into primes.
    pub fn specialize(&self, q: u64) -> Expr {
        let qv = BigRational::from_integer(BigInt::from(q));
        let sub = |r: &QFn| -> QFn {
            let f = |v: &DVar| match v {
                DVar::Q => Poly::constant(qv.clone()),
                other => Poly::var(*other),
            };
            RatFn::new(r.num.substitute(&f), r.den.substitute(&f))
        };
        match self {
            Expr::Const(r) => Expr::Const(sub(r)),
            Expr::Atom(b) => Expr::Atom(b.specialize(q)),
            Expr::Sum(v) => Expr::Sum(v.iter().map(|e| e.specialize(q)).collect()),
            Expr::Prod(v) => Expr::Prod(v.iter().map(|e| e.specialize(q)).collect()),
            Expr::GeomInv(a) => Expr::GeomInv(Box::new(a.specialize(q))),
        }
    }

    /// The rational-function view in `q` and the `T_f`.
    pub fn to_ratfn(&self) -> RatFn<DVar> {
        match self {
            Expr::Const(r) => r.clone(),
            Expr::Atom(b) => RatFn::from_poly(Poly::term(BigRational::one(), b.monomial())),
            Expr::Sum(v) => v.iter().fold(RatFn::constant(int(0)), |acc, e| reduce(&acc.add(&e.to_ratfn()))),
            Expr::Prod(v) => v.iter().fold(RatFn::constant(int(1)), |acc, e| reduce(&acc.mul(&e.to_ratfn()))),
            Expr::GeomInv(a) => RatFn::constant(int(1)).div(&RatFn::constant(int(1)).sub(&a.to_ratfn())),
        }
    }

    /// Rebuilds an expression from a rational function whose denominator has
    /// an invertible part free of the `T_f`: `1/D = c^(-1) (1 - (1 - D/c))^(-1)`.
    pub fn from_ratfn(r: &RatFn<DVar>) -> Result<Expr, DirichletError> {
        let terms = |p: &Poly<DVar>| -> Vec<Expr> {
            p.terms()
                .map(|(m, c)| {
                    let qk = m.exp(&DVar::Q);
                    let mut base = Base::one();
                    for (v, k) in &m.0 {
                        if let DVar::T(f) = v {
                            base = base.mul(&Base::factor(*f, *k));
                        }
                    }
                    Expr::Prod(vec![
                        Expr::poly(Poly::term(c.clone(), Mono::var(DVar::Q, qk))),
                        Expr::Atom(base),
                    ])
                })
                .collect()
        };
        let free: Poly<DVar> = r
            .den
            .terms()
            .filter(|(m, _)| m.0.iter().all(|(v, _)| *v == DVar::Q))
            .fold(Poly::zero(), |acc, (m, c)| acc.add(&Poly::term(c.clone(), m.clone())));
        if free.is_zero() {
            return Err(DirichletError::NonNormalizable("denominator has no s-free part".into()));
        }
        let rest = r.den.sub(&free);
        let num = Expr::Sum(terms(&r.num));
        if rest.is_zero() {
            return Ok(Expr::Prod(vec![num, Expr::Const(RatFn::new(Poly::one(), free))]));
        }
        // 1 - D/c = -rest/c
        let inner = Expr::Prod(vec![Expr::Sum(terms(&rest.neg())), Expr::Const(RatFn::new(Poly::one(), free.clone()))]);
        Ok(Expr::Prod(vec![num, Expr::Const(RatFn::new(Poly::one(), free)), Expr::geom_inv(inner)]))
    }

    /// Exact coefficients of all degrees at most `bound`.
    pub fn expand(&self, bound: &BigRational) -> Result<RatSeries, DirichletError> {
        match self {
            Expr::Const(r) => {
                let c = const_value(r)?;
                let mut s = RatSeries::new();
                if !c.is_zero() && BigRational::one() <= *bound {
                    s.insert(BigRational::one(), c);
                }
                Ok(s)
            }
            Expr::Atom(b) => {
                let v = b.value().ok_or(DirichletError::Symbolic)?;
                let mut s = RatSeries::new();
                if v <= *bound {
                    s.insert(v, BigRational::one());
                }
                Ok(s)
            }
            Expr::Sum(v) => {
                let mut s = RatSeries::new();
                for e in v {
                    add_into(&mut s, &e.expand(bound)?);
                }
                Ok(s)
            }
            Expr::Prod(v) => {
                let mut s = RatSeries::new();
                s.insert(BigRational::one(), BigRational::one());
                for e in v {
                    let t = e.expand(bound)?;
                    s = convolve(&s, &t, bound);
                    if s.is_empty() {
                        break;
                    }
                }
                Ok(s)
            }
            Expr::GeomInv(a) => {
                let t = a.expand(bound)?;
                if t.keys().any(|d| *d <= BigRational::one()) {
                    return Err(DirichletError::DivergentAtom);
                }
                let mut out = RatSeries::new();
                out.insert(BigRational::one(), BigRational::one());
                let mut power = out.clone();
                loop {
                    power = convolve(&power, &t, bound);
                    if power.is_empty() {
                        break;
                    }
                    add_into(&mut out, &power);
                }
                Ok(out)
            }
        }
    }

    /// Expansion through degree `n` as a series of integer counts.
    pub fn to_series(&self, n: u64) -> Result<TruncatedSeries, DirichletError> {
        let bound = BigRational::from_integer(BigInt::from(n));
        let mut counts = BTreeMap::new();
        for (d, c) in self.expand(&bound)? {
            if !d.is_integer() || !c.is_integer() || c.is_negative() {
                return Err(DirichletError::NonIntegral { degree: d.to_string(), coeff: c.to_string() });
            }
            let deg = d.to_integer().to_biguint().expect("positive degree");
            let cnt = c.to_integer().to_biguint().expect("nonnegative count");
            counts.insert(deg, cnt);
        }
        let mut s = TruncatedSeries::new(counts, Some(BigUint::from(n)));
        s.level_bound = None;
        Ok(s)
    }

    /// Canonical JSON tree.
    pub fn to_json(&self) -> serde_json::Value {
        use serde_json::json;
        match self {
            Expr::Const(r) => json!({"const": {"num": r.num.to_string(), "den": r.den.to_string()}}),
            Expr::Atom(b) => json!({"atom": b.0.iter().map(|(f, k)| json!([DVar::T(*f).to_string(), k])).collect::<Vec<_>>()}),
            Expr::Sum(v) => json!({"sum": v.iter().map(|e| e.to_json()).collect::<Vec<_>>()}),
            Expr::Prod(v) => json!({"prod": v.iter().map(|e| e.to_json()).collect::<Vec<_>>()}),
            Expr::GeomInv(a) => json!({"geom_inv": a.to_json()}),
        }
    }
}

fn reduce(r: &RatFn<DVar>) -> RatFn<DVar> {
    if r.num.is_zero() {
        return RatFn::constant(int(0));
    }
    match r.num.div_exact(&r.den) {
        Some(p) => RatFn::from_poly(p),
        None => r.clone(),
    }
}

fn const_value(r: &QFn) -> Result<BigRational, DirichletError> {
    match (r.num.as_constant(), r.den.as_constant()) {
        (Some(n), Some(d)) => Ok(n / d),
        _ => Err(DirichletError::Symbolic),
    }
}

/// Degree to coefficient, both exact rationals.
pub type RatSeries = BTreeMap<BigRational, BigRational>;

fn add_into(s: &mut RatSeries, t: &RatSeries) {
    for (d, c) in t {
        let e = s.entry(d.clone()).or_insert_with(BigRational::zero);
        *e += c;
        if e.is_zero() {
            s.remove(d);
        }
    }
}

/// Dirichlet convolution truncated at `bound`.
pub fn convolve(a: &RatSeries, b: &RatSeries, bound: &BigRational) -> RatSeries {
    let mut out = RatSeries::new();
    for (da, ca) in a {
        for (db, cb) in b {
            let d = da * db;
            if d > *bound {
                continue;
            }
            let e = out.entry(d.clone()).or_insert_with(BigRational::zero);
            *e += ca * cb;
            if e.is_zero() {
                out.remove(&d);
            }
        }
    }
    out
}

/// Whether two expressions are equal as rational functions in `q` and the `T_f`.
pub fn identical(a: &Expr, b: &Expr) -> bool {
    a.to_ratfn().equals(&b.to_ratfn())
}

/// Parameters of registered formulas.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct FormulaParams {
    pub m: u32,
    pub d: u32,
    pub rho: u32,
    pub sigma: u32,
}

/// Identifiers of every registered formula.
pub const FORMULA_IDS: &[&str] = &[
    "thm_sl2_podd",
    "thm_sl2_p2e1",
    "thm_quat_full",
    "thm_quat_pcs",
    "quat_proof_variant",
    "thm_sl3_p3",
    "sl2_full",
    "sl2z2",
    "conj_sl21z2",
    "psi_low",
    "psi_high",
];

fn qp(k: i32) -> Poly<DVar> {
    Poly::monomial(DVar::Q, k)
}

/// `1 - q^a X^b`, inverted.
fn pole(a: i32, b: i32) -> Expr {
    Expr::geom_inv(Expr::q_pow(a).mul(Expr::x(b)))
}

/// `((f) / 2)^(-s)` for `f` in `q + 1`, `q - 1`.
fn half_atom(f: QFactor) -> Expr {
    Expr::Atom(Base::factor(Factor::Q(f), 1).mul(&Base::factor(Factor::Prime(2), -1)))
}

/// The formula `id` with symbolic `q`.
pub fn theorem_formula(id: &str, p: FormulaParams) -> Result<Expr, DirichletError> {
    let id = id.replace('-', "_");
    let m = p.m as i32;
    let e = match id.as_str() {
        "thm_sl2_podd" => Expr::q_pow(3 * m).mul(Expr::int(1).sub(Expr::q_pow(-2).mul(Expr::x(1)))).mul(pole(1, 1)),
        "thm_sl2_p2e1" => Expr::q_pow(3 * m).mul(Expr::q_pow(2).sub(Expr::x(1))).mul(pole(1, 1)),
        "thm_quat_full" => {
            let q = qpoly();
            let a = Expr::poly(q.add(&Poly::one())).mul(Expr::int(1).sub(Expr::x(1)));
            let b = Expr::poly(q.sub(&Poly::one()).scale(&int(4))).mul(half_atom(QFactor::QPlus1));
            a.add(b).mul(pole(1, 1))
        }
        "thm_quat_pcs" => Expr::q_pow(3 * m).mul(Expr::q_pow(1).sub(Expr::q_pow(-1).mul(Expr::x(1)))).mul(pole(1, 1)),
        "quat_proof_variant" => {
            if m < 1 {
                return Err(DirichletError::InvalidParams("m >= 1".into()));
            }
            Expr::q_pow(3 * (m - 1)).mul(Expr::q_pow(2).sub(Expr::x(1))).mul(pole(1, 1))
        }
        "thm_sl3_p3" => {
            let q = qpoly();
            let first = Expr::q_pow(2).sub(Expr::x(1));
            let second = Expr::Sum(vec![
                Expr::q_pow(2),
                Expr::x(1),
                Expr::poly(qp(4).sub(&Poly::one())).mul(Expr::x(2)),
                Expr::int(-1).mul(Expr::q_pow(1)).mul(Expr::x(3)),
                Expr::poly(qp(4).sub(&qp(2)).sub(&q)).mul(Expr::x(4)),
            ]);
            Expr::Prod(vec![Expr::q_pow(8 * m - 4), first, second, pole(1, 2), pole(2, 3)])
        }
        "sl2_full" => {
            let q = qpoly();
            let one = Poly::one();
            let x1 = Expr::x(1);
            let x2 = Expr::Atom(Base::factor(Factor::Q(QFactor::QPlus1), 1));
            let x3 = half_atom(QFactor::QPlus1);
            let x4 = Expr::Atom(Base::factor(Factor::Q(QFactor::QMinus1), 1));
            let x5 = half_atom(QFactor::QMinus1);
            let half = rat(1, 2);
            let finite = Expr::Sum(vec![
                Expr::int(1),
                x1.clone(),
                Expr::poly(q.sub(&Poly::int(3)).scale(&half)).mul(x2.clone()),
                Expr::int(2).mul(x3),
                Expr::poly(q.sub(&one).scale(&half)).mul(x4.clone()),
                Expr::int(2).mul(x5.clone()),
            ]);
            let tail = Expr::Sum(vec![
                Expr::poly(q.scale(&int(4))).mul(x2.clone()).mul(x5),
                Expr::poly(q.mul(&q).sub(&one).scale(&half)).mul(x1.clone()).mul(x4),
                Expr::poly(q.sub(&one).pow(2).scale(&half)).mul(x1).mul(x2),
            ]);
            finite.add(pole(1, 1).mul(tail))
        }
        "sl2z2" => {
            let t2 = |k: i32| Expr::Atom(Base::factor(Factor::Prime(2), k));
            let t3 = Expr::Atom(Base::factor(Factor::Prime(3), 1));
            let part = |c: i64, s: i64| {
                Expr::Sum(vec![Expr::int(c), Expr::int(2 * s).mul(t2(1)), Expr::int(-10).mul(t2(2)), Expr::int(2).mul(t2(3))])
            };
            let den = Expr::geom_inv(Expr::int(2).mul(t2(1)));
            part(4, -1).add(t3.mul(part(28, 1))).mul(den)
        }
        "conj_sl21z2" => {
            let t2 = |k: i32| Expr::Atom(Base::factor(Factor::Prime(2), k));
            Expr::Prod(vec![
                Expr::int(32),
                Expr::int(4).sub(t2(1)),
                Expr::geom_inv(Expr::int(2).mul(t2(1))),
            ])
        }
        "psi_low" | "psi_high" => {
            let r = if id == "psi_low" { p.rho } else { p.sigma } as i32;
            if r == 0 {
                return Err(DirichletError::NonFab);
            }
            let d = p.d as i32;
            Expr::int(1)
                .sub(Expr::q_pow(-2 * r).mul(Expr::x(r)))
                .mul(Expr::geom_inv(Expr::q_pow(d - 2 * r).mul(Expr::x(r))))
        }
        _ => return Err(DirichletError::UnknownId(id)),
    };
    Ok(e)
}

/// Numerator, `s`-free denominator and pole factors with their real parts.
#[derive(Debug, Clone)]
struct Factored {
    num: Poly<DVar>,
    scal: Poly<DVar>,
    factors: Vec<(Poly<DVar>, BigRational)>,
}

fn factored(e: &Expr) -> Result<Factored, DirichletError> {
    match e {
        Expr::Const(r) => Ok(Factored { num: r.num.clone(), scal: r.den.clone(), factors: vec![] }),
        Expr::Atom(b) => Ok(Factored {
            num: Poly::term(BigRational::one(), b.monomial()),
            scal: Poly::one(),
            factors: vec![],
        }),
        Expr::Prod(v) => {
            let mut acc = Factored { num: Poly::one(), scal: Poly::one(), factors: vec![] };
            for x in v {
                let f = factored(x)?;
                acc.num = acc.num.mul(&f.num);
                acc.scal = acc.scal.mul(&f.scal);
                acc.factors.extend(f.factors);
            }
            Ok(acc)
        }
        Expr::Sum(v) => {
            let parts: Vec<Factored> = v.iter().map(factored).collect::<Result<_, _>>()?;
            // union of factor multisets
            let mut union: Vec<(Poly<DVar>, BigRational, usize)> = Vec::new();
            for p in &parts {
                let mut local: Vec<(Poly<DVar>, BigRational, usize)> = Vec::new();
                for (f, s) in &p.factors {
                    match local.iter_mut().find(|(g, _, _)| g == f) {
                        Some(x) => x.2 += 1,
                        None => local.push((f.clone(), s.clone(), 1)),
                    }
                }
                for (f, s, k) in local {
                    match union.iter_mut().find(|(g, _, _)| *g == f) {
                        Some(x) => x.2 = x.2.max(k),
                        None => union.push((f, s, k)),
                    }
                }
            }
            let scal_all = parts.iter().fold(Poly::one(), |acc, p| acc.mul(&p.scal));
            let mut num = Poly::zero();
            for (i, p) in parts.iter().enumerate() {
                let mut t = p.num.clone();
                for (j, o) in parts.iter().enumerate() {
                    if i != j {
                        t = t.mul(&o.scal);
                    }
                }
                for (f, _, k) in &union {
                    let own = p.factors.iter().filter(|(g, _)| g == f).count();
                    for _ in own..*k {
                        t = t.mul(f);
                    }
                }
                num = num.add(&t);
            }
            let mut factors = Vec::new();
            for (f, s, k) in union {
                for _ in 0..k {
                    factors.push((f.clone(), s.clone()));
                }
            }
            Ok(Factored { num, scal: scal_all, factors })
        }
        Expr::GeomInv(a) => {
            let f = factored(a)?;
            if !f.factors.is_empty() || f.num.num_terms() != 1 {
                return Err(DirichletError::NonNormalizable("geometric inverse of a non-monomial".into()));
            }
            let (m, c) = f.num.leading().expect("one term");
            let tvars: Vec<(DVar, i32)> = m.0.iter().filter(|(v, _)| *v != DVar::Q).cloned().collect();
            if tvars.len() != 1 || tvars[0].1 <= 0 {
                return Err(DirichletError::NonNormalizable("pole factor must involve a single base".into()));
            }
            let (tv, b) = tvars[0];
            // coefficient c q^k / scal must equal base^a
            let qk = m.exp(&DVar::Q);
            let scal_mono = f.scal.leading().filter(|_| f.scal.num_terms() == 1);
            let Some((sm, sc)) = scal_mono else {
                return Err(DirichletError::NonNormalizable("pole coefficient is not a monomial".into()));
            };
            let coef = c / sc;
            let qexp = qk - sm.exp(&DVar::Q);
            let a = match tv {
                DVar::T(Factor::Q(QFactor::Q)) if coef.is_one() => BigRational::from_integer(qexp.into()),
                DVar::T(Factor::Prime(p)) if qexp == 0 => prime_log(&coef, p)
                    .ok_or_else(|| DirichletError::NonNormalizable("pole coefficient is not a power of the base".into()))?,
                _ => return Err(DirichletError::NonNormalizable("unsupported pole base".into())),
            };
            let pole = a / BigRational::from_integer(b.into());
            let factor = f.scal.sub(&f.num);
            Ok(Factored { num: f.scal, scal: Poly::one(), factors: vec![(factor, pole)] })
        }
    }
}

fn prime_log(c: &BigRational, p: u64) -> Option<BigRational> {
    if !c.is_positive() {
        return None;
    }
    let pb = BigInt::from(p);
    let (mut n, mut d) = (c.numer().clone(), c.denom().clone());
    let mut k: i64 = 0;
    while (&n % &pb).is_zero() {
        n /= &pb;
        k += 1;
    }
    while (&d % &pb).is_zero() {
        d /= &pb;
        k -= 1;
    }
    (n.is_one() && d.is_one()).then(|| BigRational::from_integer(k.into()))
}

/// Real part of the rightmost pole that survives cancellation; `None` for an
/// entire expression.
pub fn abscissa_of(e: &Expr) -> Result<Option<BigRational>, DirichletError> {
    let f = factored(e)?;
    let mut num = f.num.clone();
    let mut distinct: Vec<(Poly<DVar>, BigRational, usize)> = Vec::new();
    for (g, s) in &f.factors {
        match distinct.iter_mut().find(|(h, _, _)| h == g) {
            Some(x) => x.2 += 1,
            None => distinct.push((g.clone(), s.clone(), 1)),
        }
    }
    let mut best: Option<BigRational> = None;
    for (g, s, k) in distinct {
        let mut left = k;
        while left > 0 {
            match num.div_exact(&g) {
                Some(qt) if !num.is_zero() => {
                    num = qt;
                    left -= 1;
                }
                _ => break,
            }
        }
        if left > 0 && best.as_ref().is_none_or(|b| s > *b) {
            best = Some(s);
        }
    }
    Ok(best)
}

/// Abscissa bounds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundsReport {
    pub lower: BigRational,
    pub upper: BigRational,
    pub provenance: String,
}

/// Input data for [`bounds`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BoundsKind {
    /// `(d - 2 rho)/rho <= alpha <= (d - 2 sigma)/sigma`.
    Thm11 { d: u32, sigma: u32, rho: u32 },
    /// Absolute rank, number of roots, and `(dim, dual Coxeter number)` per simple factor.
    Semisimple { r_abs: u32, roots: u32, factors: Vec<(u32, u32)> },
    /// Norm-one group of a division algebra of prime index `l`.
    Skew { l: u32 },
}

pub fn bounds(kind: &BoundsKind) -> Result<BoundsReport, DirichletError> {
    let r = |n: i64, d: i64| BigRational::new(n.into(), d.into());
    match kind {
        BoundsKind::Thm11 { d, sigma, rho } => {
            if *sigma == 0 || *rho == 0 {
                return Err(DirichletError::NonFab);
            }
            let (d, s, p) = (*d as i64, *sigma as i64, *rho as i64);
            Ok(BoundsReport { lower: r(d - 2 * p, p), upper: r(d - 2 * s, s), provenance: "thm11".into() })
        }
        BoundsKind::Semisimple { r_abs, roots, factors } => {
            if *roots == 0 || factors.is_empty() || factors.iter().any(|&(_, h)| h < 2) {
                return Err(DirichletError::InvalidParams("semisimple data".into()));
            }
            let upper = factors
                .iter()
                .map(|&(dim, h)| r(dim as i64, h as i64 - 1) - r(2, 1))
                .min()
                .expect("nonempty");
            Ok(BoundsReport { lower: r(2 * *r_abs as i64, *roots as i64), upper, provenance: "semisimple".into() })
        }
        BoundsKind::Skew { l } => {
            if *l < 2 {
                return Err(DirichletError::InvalidParams("index must be a prime".into()));
            }
            let v = r(2, *l as i64);
            Ok(BoundsReport { lower: v.clone(), upper: v, provenance: "skew".into() })
        }
    }
}

/// Root data of `sl_n`: `(r_abs, |Phi|, [(dim, h)])`.
pub fn sln_semisimple_data(n: u32) -> BoundsKind {
    BoundsKind::Semisimple { r_abs: n - 1, roots: n * (n - 1), factors: vec![(n * n - 1, n)] }
}

/// Verdict of a series comparison.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Comparison {
    /// Equal on all degrees up to the bound.
    Equal { through: BigUint },
    FirstMismatch { degree: BigUint, left: BigUint, right: BigUint },
}

impl fmt::Display for Comparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Comparison::Equal { through } => write!(f, "Equal through degree {through}"),
            Comparison::FirstMismatch { degree, left, right } => {
                write!(f, "FirstMismatch(degree {degree}: {left} vs {right})")
            }
        }
    }
}

/// Compares on the degrees both series declare complete.
pub fn compare(a: &TruncatedSeries, b: &TruncatedSeries) -> Result<Comparison, DirichletError> {
    let bound = match (&a.complete_through, &b.complete_through) {
        (Some(x), Some(y)) => x.min(y).clone(),
        _ => return Err(DirichletError::Incomparable),
    };
    let mut degrees: Vec<&BigUint> = a.counts.keys().chain(b.counts.keys()).filter(|d| **d <= bound).collect();
    degrees.sort();
    degrees.dedup();
    for d in degrees {
        let (x, y) = (a.counts.get(d).cloned().unwrap_or_default(), b.counts.get(d).cloned().unwrap_or_default());
        if x != y {
            return Ok(Comparison::FirstMismatch { degree: d.clone(), left: x, right: y });
        }
    }
    Ok(Comparison::Equal { through: bound })
}

/// Value of a rational function of `q` at an integer.
pub fn eval_q(r: &QFn, q: u64) -> Option<BigRational> {
    let qv = BigRational::from_integer(BigInt::from(q));
    let f = |v: &DVar| match v {
        DVar::Q => qv.clone(),
        _ => BigRational::zero(),
    };
    let d = r.den.eval(&f);
    (!d.is_zero()).then(|| r.num.eval(&f) / d)
}

/// Degree-`q^k` coefficients of an expansion, as integers.
pub fn q_power_coefficients(s: &TruncatedSeries, q: u64, kmax: u32) -> Vec<BigUint> {
    (0..=kmax).map(|k| s.counts.get(&BigUint::from(q).pow(k)).cloned().unwrap_or_default()).collect()
}

/// Largest `k` with `q^k <= n`.
pub fn ilog(q: u64, n: u64) -> u32 {
    let mut k = 0;
    let mut v = 1u64;
    while let Some(w) = v.checked_mul(q) {
        if w > n {
            break;
        }
        v = w;
        k += 1;
    }
    k
}

/// `gcd` of nonzero integers, used by callers normalising coefficients.
pub fn gcd_all(xs: &[BigInt]) -> BigInt {
    xs.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x))
}

/// Conversion helper for small exact integers.
pub fn to_u64(x: &BigUint) -> Option<u64> {
    x.to_u64()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series(id: &str, m: u32, q: u64, n: u64) -> TruncatedSeries {
        theorem_formula(id, FormulaParams { m, ..Default::default() }).unwrap().specialize(q).to_series(n).unwrap()
    }

    #[test]
    fn sl2_first_congruence_expansion() {
        let s = series("thm_sl2_podd", 1, 3, 9);
        assert_eq!(s.count(1), BigUint::from(27u32));
        assert_eq!(s.count(3), BigUint::from(78u32));
        assert_eq!(s.count(9), BigUint::from(234u32));
        assert_eq!(s.counts.len(), 3);
    }

    #[test]
    fn constant_one() {
        let s = Expr::int(1).to_series(50).unwrap();
        assert_eq!(s.counts.len(), 1);
        assert_eq!(s.count(1), BigUint::one());
    }

    #[test]
    fn quaternion_full_group_linear_characters() {
        let s = series("thm_quat_full", 0, 5, 5);
        assert_eq!(s.count(1), BigUint::from(6u32));
    }

    #[test]
    fn sl3_constant_term() {
        let s = series("thm_sl3_p3", 1, 3, 1);
        assert_eq!(s.count(1), BigUint::from(6561u32));
    }

    #[test]
    fn sl2_full_linear_characters_at_3() {
        let s = series("sl2_full", 0, 3, 1);
        assert_eq!(s.count(1), BigUint::from(3u32));
    }

    #[test]
    fn psi_low_envelope() {
        let p = FormulaParams { d: 3, rho: 1, ..Default::default() };
        let e = theorem_formula("psi_low", p).unwrap().specialize(3);
        let s = e.expand(&rat(81, 1)).unwrap();
        assert_eq!(s[&rat(1, 1)], rat(1, 1));
        for n in 1..=4u32 {
            // q^n (1 - q^-3)
            assert_eq!(s[&rat(3i64.pow(n), 1)], rat(3i64.pow(n), 1) * rat(26, 27));
        }
    }

    #[test]
    fn abscissae() {
        let p = FormulaParams { m: 1, ..Default::default() };
        let a = |id: &str| abscissa_of(&theorem_formula(id, p).unwrap()).unwrap().unwrap();
        assert_eq!(a("thm_sl2_podd"), rat(1, 1));
        assert_eq!(a("thm_sl3_p3"), rat(2, 3));
        assert_eq!(a("thm_quat_pcs"), rat(1, 1));
        for (d, r) in [(3, 1), (8, 3), (15, 6)] {
            let e = theorem_formula("psi_low", FormulaParams { d, rho: r, ..Default::default() }).unwrap();
            assert_eq!(abscissa_of(&e).unwrap().unwrap(), rat(d as i64 - 2 * r as i64, r as i64));
        }
    }

    #[test]
    fn cancelled_pole_is_ignored() {
        // (1 - q X) / (1 - q X) has no pole
        let e = Expr::int(1).sub(Expr::q_pow(1).mul(Expr::x(1))).mul(pole(1, 1));
        assert_eq!(abscissa_of(&e).unwrap(), None);
    }

    #[test]
    fn bounds_examples() {
        let b = bounds(&BoundsKind::Thm11 { d: 3, sigma: 1, rho: 1 }).unwrap();
        assert_eq!((b.lower, b.upper), (rat(1, 1), rat(1, 1)));
        for n in 2..=5 {
            let b = bounds(&sln_semisimple_data(n)).unwrap();
            assert_eq!((b.lower, b.upper), (rat(2, n as i64), rat(n as i64 - 1, 1)));
        }
        let b = bounds(&BoundsKind::Skew { l: 2 }).unwrap();
        assert_eq!((b.lower, b.upper), (rat(1, 1), rat(1, 1)));
        assert_eq!(bounds(&BoundsKind::Thm11 { d: 3, sigma: 0, rho: 1 }), Err(DirichletError::NonFab));
    }

    #[test]
    fn compare_reports_first_mismatch() {
        let a = series("thm_quat_pcs", 1, 5, 125);
        let b = series("quat_proof_variant", 1, 5, 125);
        match compare(&a, &b).unwrap() {
            Comparison::FirstMismatch { degree, left, right } => {
                assert_eq!(degree, BigUint::one());
                assert_eq!(left, BigUint::from(625u32));
                assert_eq!(right, BigUint::from(25u32));
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(compare(&a, &a).unwrap(), Comparison::Equal { .. }));
    }

    #[test]
    fn divergent_geometric_inverse() {
        let e = Expr::geom_inv(Expr::int(2));
        assert_eq!(e.expand(&rat(10, 1)), Err(DirichletError::DivergentAtom));
    }

    #[test]
    fn ratfn_round_trip_commutes_with_specialization() {
        for id in ["thm_sl2_podd", "thm_sl3_p3", "sl2_full", "thm_quat_full"] {
            let e = theorem_formula(id, FormulaParams { m: 1, ..Default::default() }).unwrap();
            for q in [3u64, 5] {
                let direct = e.specialize(q).to_series(2000).unwrap();
                let via = Expr::from_ratfn(&e.specialize(q).to_ratfn()).unwrap().to_series(2000).unwrap();
                assert_eq!(direct, via, "{id} at q = {q}");
            }
        }
    }

    #[test]
    fn sl2_z2_reference_counts() {
        let s = theorem_formula("sl2z2", FormulaParams::default()).unwrap().to_series(96).unwrap();
        let expect = [(1, 4), (2, 6), (4, 2), (8, 6), (16, 12), (32, 24), (64, 48), (3, 28), (6, 58), (12, 106), (24, 214), (48, 428), (96, 856)];
        for (d, c) in expect {
            assert_eq!(s.count(d), BigUint::from(c as u32), "degree {d}");
        }
        assert_eq!(s.counts.len(), expect.len());
    }
}
