//! Exact arithmetic in finite quotients `o/p^n` of compact discrete valuation
//! rings of characteristic zero.
//!
//! The ring `o` is the unramified Galois ring `W(F_q)` extended by a root
//! `pi` of `X^e - p`. Elements are stored as `e` Galois-ring coefficients of
//! the powers `1, pi, ..., pi^(e-1)`; the coefficient of `pi^i` is reduced
//! modulo `p^(k_i)` with `k_i = ceil((n - i)/e)`, which makes the
//! representation canonical.
//!
//! Digits are Teichmüller digits: every element is uniquely `sum t_j pi^j`
//! with `t_j` a Teichmüller lift (`t^q = t`). The index of an element is the
//! base-`q` number whose most significant digit is `t_0`, so reducing modulo
//! `pi^m` is integer division by `q^(n-m)` and lifting appends a digit.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Failures of ring construction and arithmetic.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("non-prime p = {0}")]
    NonPrime(u64),
    #[error("parameters overflow the digit width: {0}")]
    Overflow(String),
    #[error("invalid parameter: {0}")]
    Invalid(String),
    #[error("non-unit")]
    NonUnit,
    #[error("ring mismatch")]
    RingMismatch,
    #[error("depth exceeds ring length")]
    DepthExceedsLength,
}

/// Deterministic primality test for the small moduli used here.
pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Valuation of an element of `o/p^n`; zero only has a lower bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Val {
    Finite(u32),
    AtLeast(u32),
}

impl Val {
    /// The value with `AtLeast(c)` read as `c`.
    pub fn capped(self) -> u32 {
        match self {
            Val::Finite(v) | Val::AtLeast(v) => v,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Val::Finite(_))
    }
}

impl fmt::Display for Val {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Val::Finite(v) => write!(f, "{v}"),
            Val::AtLeast(v) => write!(f, ">={v}"),
        }
    }
}

/// Parameters of `o/p^n`: residue characteristic `p`, inertia degree `f`,
/// ramification index `e` and length `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RingSpec {
    pub p: u64,
    pub f: u32,
    pub e: u32,
    pub n: u32,
}

impl RingSpec {
    pub fn q(&self) -> u64 {
        self.p.pow(self.f)
    }
}

/// An element of a [`QuotientRing`]; meaningful only together with its ring.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RingElem {
    c: Vec<u64>,
}

/// The ring `o/p^n`.
#[derive(Debug, Clone)]
pub struct QuotientRing {
    spec: RingSpec,
    q: u64,
    /// Monic lift of an irreducible polynomial of degree `f` over `F_p`,
    /// lowest coefficient first, leading 1 omitted.
    modpoly: Vec<u64>,
    /// `p^K` with `K = ceil(n/e)`: working modulus of the Galois ring.
    pk: u64,
    /// `p^(k_i)` for the coefficient of `pi^i`.
    moduli: Vec<u64>,
    /// Teichmüller lifts of the residues, by residue index.
    teich: Vec<Vec<u64>>,
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// Smallest monic irreducible polynomial of degree `f` over `F_p`
/// in the order of its coefficient index; lowest coefficient first,
/// leading 1 omitted.
fn irreducible_poly(p: u64, f: u32) -> Vec<u64> {
    if f == 1 {
        return vec![0];
    }
    let total = p.pow(f);
    'outer: for idx in 0..total {
        let g: Vec<u64> = (0..f).map(|j| (idx / p.pow(j)) % p).collect();
        if g[0] == 0 {
            continue;
        }
        // trial division by every monic polynomial of degree 1..=f/2
        for deg in 1..=f / 2 {
            for hidx in 0..p.pow(deg) {
                let h: Vec<u64> = (0..deg).map(|j| (hidx / p.pow(j)) % p).collect();
                if poly_divides_fp(&h, &g, p) {
                    continue 'outer;
                }
            }
        }
        return g;
    }
    unreachable!("irreducible polynomials exist in every degree")
}

/// Whether the monic `h` (leading 1 omitted) divides the monic `g` over `F_p`.
fn poly_divides_fp(h: &[u64], g: &[u64], p: u64) -> bool {
    let mut r: Vec<u64> = g.to_vec();
    r.push(1);
    let dh = h.len();
    let mut full_h = h.to_vec();
    full_h.push(1);
    while r.len() > dh {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dh;
        if lead != 0 {
            for (j, &hc) in full_h.iter().enumerate() {
                let t = (r[shift + j] + p * p - (lead * hc) % p) % p;
                r[shift + j] = t;
            }
        }
        r.pop();
    }
    r.iter().all(|&x| x % p == 0)
}

impl QuotientRing {
    /// Builds `o/p^n`; for `e > 1` the ring is `W(F_q)[pi]/(pi^e - p, pi^n)`.
    pub fn new(p: u64, f: u32, e: u32, n: u32) -> Result<Self, RingError> {
        if !is_prime(p) {
            return Err(RingError::NonPrime(p));
        }
        if f == 0 || e == 0 || n == 0 {
            return Err(RingError::Invalid("f, e, n must be positive".into()));
        }
        let big_k = n.div_ceil(e);
        let pk = p
            .checked_pow(big_k)
            .filter(|&v| v < (1u64 << 31))
            .ok_or_else(|| RingError::Overflow(format!("p^{big_k} with p = {p}")))?;
        let q = p
            .checked_pow(f)
            .filter(|&v| v < (1u64 << 20))
            .ok_or_else(|| RingError::Overflow(format!("q = {p}^{f}")))?;
        q.checked_pow(n)
            .filter(|&v| v < (1u64 << 62))
            .ok_or_else(|| RingError::Overflow(format!("q^n with q = {q}, n = {n}")))?;
        let moduli = (0..e).map(|i| p.pow((n.saturating_sub(i)).div_ceil(e))).collect();
        let mut ring = QuotientRing {
            spec: RingSpec { p, f, e, n },
            q,
            modpoly: irreducible_poly(p, f),
            pk,
            moduli,
            teich: Vec::new(),
        };
        ring.teich = (0..q).map(|r| ring.teich_gr(r)).collect();
        Ok(ring)
    }

    pub fn spec(&self) -> RingSpec {
        self.spec
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn len(&self) -> u32 {
        self.spec.n
    }

    /// Element count `q^n`.
    pub fn cardinality(&self) -> u64 {
        self.q.pow(self.spec.n)
    }

    fn f(&self) -> usize {
        self.spec.f as usize
    }

    fn e(&self) -> usize {
        self.spec.e as usize
    }

    // ---- Galois ring layer (coefficients modulo p^K) ----

    fn gr_mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let f = self.f();
        let m = self.pk;
        let mut prod = vec![0u128; 2 * f - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u128 * y as u128) % m as u128;
            }
        }
        // reduce modulo the monic lift: x^f = -sum g_j x^j
        for top in (f..2 * f - 1).rev() {
            let c = prod[top] % m as u128;
            if c == 0 {
                continue;
            }
            prod[top] = 0;
            for j in 0..f {
                let sub = c * self.modpoly[j] as u128 % m as u128;
                let idx = top - f + j;
                prod[idx] = (prod[idx] + m as u128 - sub) % m as u128;
            }
        }
        prod[..f].iter().map(|&x| x as u64).collect()
    }

    fn gr_pow(&self, a: &[u64], mut exp: u64) -> Vec<u64> {
        let mut base = a.to_vec();
        let mut acc = vec![0u64; self.f()];
        acc[0] = 1 % self.pk;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.gr_mul(&acc, &base);
            }
            base = self.gr_mul(&base, &base);
            exp >>= 1;
        }
        acc
    }

    fn residue_coeffs(&self, r: u64) -> Vec<u64> {
        let p = self.spec.p;
        (0..self.spec.f).map(|j| (r / p.pow(j)) % p).collect()
    }

    fn teich_gr(&self, r: u64) -> Vec<u64> {
        let mut x = self.residue_coeffs(r);
        // x^(q^k) converges to the Teichmüller lift; K steps reach precision p^K
        for _ in 0..self.spec.n.div_ceil(self.spec.e) {
            x = self.gr_pow(&x, self.q);
        }
        x
    }

    fn gr_residue_index(&self, a: &[u64]) -> u64 {
        let p = self.spec.p;
        a.iter().enumerate().map(|(j, &c)| (c % p) * p.pow(j as u32)).sum()
    }

    // ---- quotient ring layer ----

    fn normalize(&self, mut c: Vec<u64>) -> RingElem {
        let f = self.f();
        for i in 0..self.e() {
            let m = self.moduli[i];
            for x in &mut c[i * f..(i + 1) * f] {
                *x %= m;
            }
        }
        RingElem { c }
    }

    fn check(&self, x: &RingElem) -> Result<(), RingError> {
        if x.c.len() != self.e() * self.f() {
            return Err(RingError::RingMismatch);
        }
        let f = self.f();
        for i in 0..self.e() {
            if x.c[i * f..(i + 1) * f].iter().any(|&v| v >= self.moduli[i]) {
                return Err(RingError::RingMismatch);
            }
        }
        Ok(())
    }

    pub fn zero(&self) -> RingElem {
        RingElem { c: vec![0; self.e() * self.f()] }
    }

    pub fn one(&self) -> RingElem {
        self.from_int(1)
    }

    /// The uniformizer `pi` (equal to `p` when `e = 1`).
    pub fn pi(&self) -> RingElem {
        if self.spec.e == 1 {
            self.from_int(self.spec.p as i64)
        } else {
            let mut c = vec![0; self.e() * self.f()];
            c[self.f()] = 1;
            self.normalize(c)
        }
    }

    pub fn pi_pow(&self, k: u32) -> RingElem {
        let mut acc = self.one();
        let pi = self.pi();
        for _ in 0..k {
            acc = self.mul(&acc, &pi);
        }
        acc
    }

    pub fn from_int(&self, v: i64) -> RingElem {
        let m = self.pk as i64;
        let mut c = vec![0; self.e() * self.f()];
        c[0] = v.rem_euclid(m) as u64;
        self.normalize(c)
    }

    pub fn add(&self, a: &RingElem, b: &RingElem) -> RingElem {
        let c = a.c.iter().zip(&b.c).map(|(x, y)| (x + y) % self.pk).collect();
        self.normalize(c)
    }

    pub fn neg(&self, a: &RingElem) -> RingElem {
        let c = a.c.iter().map(|&x| (self.pk - x) % self.pk).collect();
        self.normalize(c)
    }

    pub fn sub(&self, a: &RingElem, b: &RingElem) -> RingElem {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &RingElem, b: &RingElem) -> RingElem {
        let (e, f) = (self.e(), self.f());
        let mut acc = vec![vec![0u64; f]; e];
        for i in 0..e {
            let ai = &a.c[i * f..(i + 1) * f];
            if ai.iter().all(|&x| x == 0) {
                continue;
            }
            for j in 0..e {
                let bj = &b.c[j * f..(j + 1) * f];
                if bj.iter().all(|&x| x == 0) {
                    continue;
                }
                let mut prod = self.gr_mul(ai, bj);
                let mut k = i + j;
                if k >= e {
                    k -= e;
                    for x in &mut prod {
                        *x = mulmod(*x, self.spec.p, self.pk);
                    }
                }
                for (dst, src) in acc[k].iter_mut().zip(&prod) {
                    *dst = (*dst + src) % self.pk;
                }
            }
        }
        self.normalize(acc.concat())
    }

    pub fn pow(&self, a: &RingElem, mut exp: u64) -> RingElem {
        let mut base = a.clone();
        let mut acc = self.one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            exp >>= 1;
        }
        acc
    }

    pub fn is_zero(&self, a: &RingElem) -> bool {
        a.c.iter().all(|&x| x == 0)
    }

    pub fn is_unit(&self, a: &RingElem) -> bool {
        let p = self.spec.p;
        a.c[..self.f()].iter().any(|&x| x % p != 0)
    }

    /// Inverse of a unit by Newton iteration from the residue inverse.
    pub fn inv(&self, a: &RingElem) -> Result<RingElem, RingError> {
        self.check(a)?;
        if !self.is_unit(a) {
            return Err(RingError::NonUnit);
        }
        // a^(q-2) inverts a modulo pi
        let mut y = self.pow(a, self.q - 2);
        let two = self.from_int(2);
        let mut prec = 1u32;
        while prec < self.spec.n {
            let ay = self.mul(a, &y);
            y = self.mul(&y, &self.sub(&two, &ay));
            prec *= 2;
        }
        debug_assert_eq!(self.mul(a, &y), self.one());
        Ok(y)
    }

    /// Exact division `a / b`; requires `v(a) >= v(b)` and `b != 0`.
    pub fn div_exact(&self, a: &RingElem, b: &RingElem) -> Result<RingElem, RingError> {
        let vb = self.valuation(b);
        let Val::Finite(vb) = vb else {
            return Err(RingError::NonUnit);
        };
        match self.valuation(a) {
            Val::AtLeast(_) => Ok(self.zero()),
            Val::Finite(va) if va < vb => Err(RingError::NonUnit),
            Val::Finite(va) => {
                let ua = self.unit_part(a);
                let ub = self.unit_part(b);
                let quot = self.mul(&ua, &self.inv(&ub)?);
                Ok(self.mul(&quot, &self.pi_pow(va - vb)))
            }
        }
    }

    /// A unit `u` with `a = pi^v(a) u`; `1` for `a = 0`.
    pub fn unit_part(&self, a: &RingElem) -> RingElem {
        let d = self.digits(a);
        match d.iter().position(|&x| x != 0) {
            None => self.one(),
            Some(v) => {
                let mut shifted = d[v..].to_vec();
                shifted.resize(self.spec.n as usize, 0);
                self.from_digits(&shifted)
            }
        }
    }

    /// `pi`-adic valuation, `AtLeast(n)` for zero.
    pub fn valuation(&self, a: &RingElem) -> Val {
        let (e, f) = (self.e(), self.f());
        let p = self.spec.p;
        let mut best: Option<u32> = None;
        for i in 0..e {
            let coeffs = &a.c[i * f..(i + 1) * f];
            let vp = coeffs
                .iter()
                .filter(|&&x| x != 0)
                .map(|&x| {
                    let mut v = 0;
                    let mut y = x;
                    while y % p == 0 {
                        y /= p;
                        v += 1;
                    }
                    v
                })
                .min();
            if let Some(vp) = vp {
                let cand = vp * self.spec.e + i as u32;
                best = Some(best.map_or(cand, |b: u32| b.min(cand)));
            }
        }
        match best {
            Some(v) => Val::Finite(v),
            None => Val::AtLeast(self.spec.n),
        }
    }

    /// Teichmüller digits `(t_0, ..., t_{n-1})` as residue indices.
    pub fn digits(&self, a: &RingElem) -> Vec<u64> {
        let (e, f) = (self.e(), self.f());
        let p = self.spec.p;
        let mut cur = a.c.clone();
        let mut out = Vec::with_capacity(self.spec.n as usize);
        for _ in 0..self.spec.n {
            let r = self.gr_residue_index(&cur[..f]);
            out.push(r);
            // subtract the digit, then divide by pi
            let t = &self.teich[r as usize];
            for j in 0..f {
                cur[j] = (cur[j] + self.pk - t[j] % self.pk) % self.pk;
            }
            let mut next = vec![0u64; e * f];
            for i in 1..e {
                next[(i - 1) * f..i * f].copy_from_slice(&cur[i * f..(i + 1) * f]);
            }
            for j in 0..f {
                // cur[j] is divisible by p; pi^{-1} p = pi^(e-1)
                next[(e - 1) * f + j] = cur[j] / p;
            }
            cur = next;
        }
        out
    }

    /// Element `sum t_j pi^j` for residue-index digits; missing digits are 0.
    pub fn from_digits(&self, d: &[u64]) -> RingElem {
        let pi = self.pi();
        let mut acc = self.zero();
        for &r in d.iter().rev() {
            acc = self.mul(&acc, &pi);
            acc = self.add(&acc, &self.teich_elem(r));
        }
        acc
    }

    /// Teichmüller lift of the residue with index `r`.
    pub fn teich_elem(&self, r: u64) -> RingElem {
        let mut c = vec![0u64; self.e() * self.f()];
        c[..self.f()].copy_from_slice(&self.teich[r as usize]);
        self.normalize(c)
    }

    /// Index of an element: base-`q` number with most significant digit `t_0`.
    pub fn index_of(&self, a: &RingElem) -> u64 {
        self.digits(a).iter().fold(0, |acc, &d| acc * self.q + d)
    }

    pub fn from_index(&self, idx: u64) -> RingElem {
        let n = self.spec.n as usize;
        let mut d = vec![0u64; n];
        let mut x = idx;
        for j in (0..n).rev() {
            d[j] = x % self.q;
            x /= self.q;
        }
        self.from_digits(&d)
    }

    /// Reduction `o/p^n -> o/p^m` into the ring `target` of length `m <= n`.
    pub fn reduce(&self, a: &RingElem, target: &QuotientRing) -> Result<RingElem, RingError> {
        let (s, t) = (self.spec, target.spec);
        if s.p != t.p || s.f != t.f || s.e != t.e || t.n > s.n {
            return Err(RingError::RingMismatch);
        }
        Ok(target.normalize(a.c.clone()))
    }

    /// Teichmüller representatives of `o/p^l` inside `o/p^n`, in index order.
    pub fn teichmuller_set(&self, l: u32) -> Result<Vec<RingElem>, RingError> {
        if l == 0 || l > self.spec.n {
            return Err(RingError::DepthExceedsLength);
        }
        let count = self.q.pow(l);
        Ok((0..count)
            .map(|idx| {
                let mut d = vec![0u64; l as usize];
                let mut x = idx;
                for j in (0..l as usize).rev() {
                    d[j] = x % self.q;
                    x /= self.q;
                }
                self.from_digits(&d)
            })
            .collect())
    }

    /// Raw coefficient vector (coefficient of `x^j pi^i` at `i*f + j`).
    pub fn coeffs<'a>(&self, a: &'a RingElem) -> &'a [u64] {
        &a.c
    }

    /// Element with the given coefficient vector, reduced.
    pub fn from_coeffs(&self, c: &[u64]) -> Result<RingElem, RingError> {
        if c.len() != self.e() * self.f() {
            return Err(RingError::RingMismatch);
        }
        Ok(self.normalize(c.iter().map(|x| x % self.pk).collect()))
    }

    /// The generator `x` of the unramified part (a root of the chosen modulus lift).
    pub fn unramified_generator(&self) -> RingElem {
        let mut c = vec![0u64; self.e() * self.f()];
        if self.f() > 1 {
            c[1] = 1;
        } else {
            c[0] = 0;
        }
        self.normalize(c)
    }
}

/// Arithmetic operation selector for [`arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Mul,
    Neg,
    Inv,
}

/// Dispatches a ring operation on one or two arguments.
pub fn arith(ring: &QuotientRing, op: ArithOp, args: &[RingElem]) -> Result<RingElem, RingError> {
    for a in args {
        ring.check(a)?;
    }
    let need = match op {
        ArithOp::Add | ArithOp::Mul => 2,
        ArithOp::Neg | ArithOp::Inv => 1,
    };
    if args.len() != need {
        return Err(RingError::Invalid(format!("{op:?} takes {need} arguments")));
    }
    match op {
        ArithOp::Add => Ok(ring.add(&args[0], &args[1])),
        ArithOp::Mul => Ok(ring.mul(&args[0], &args[1])),
        ArithOp::Neg => Ok(ring.neg(&args[0])),
        ArithOp::Inv => ring.inv(&args[0]),
    }
}

/// Convenience constructor matching the `(p, f, e, n)` parameter order.
pub fn make_ring(p: u64, f: u32, e: u32, n: u32) -> Result<QuotientRing, RingError> {
    QuotientRing::new(p, f, e, n)
}

/// Table-driven copy of a small ring: elements are their indices.
///
/// Invariant: index order equals [`QuotientRing::index_of`] order.
#[derive(Debug, Clone)]
pub struct RingTable {
    pub q: u32,
    pub n: u32,
    pub size: usize,
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u16>,
    val: Vec<u8>,
    inv: Vec<u16>,
    unit_part: Vec<u16>,
    pi_pow: Vec<u16>,
}

/// Largest ring that gets full operation tables.
pub const TABLE_LIMIT: u64 = 2048;

impl RingTable {
    pub fn new(ring: &QuotientRing) -> Result<Self, RingError> {
        let size = ring.cardinality();
        if size > TABLE_LIMIT {
            return Err(RingError::Overflow(format!("table ring of size {size}")));
        }
        let size = size as usize;
        let elems: Vec<RingElem> = (0..size as u64).map(|i| ring.from_index(i)).collect();
        let lookup: HashMap<&RingElem, u16> =
            elems.iter().enumerate().map(|(i, x)| (x, i as u16)).collect();
        let idx = |x: &RingElem| lookup[x];
        let mut add = vec![0u16; size * size];
        let mut mul = vec![0u16; size * size];
        for i in 0..size {
            for j in i..size {
                let s = idx(&ring.add(&elems[i], &elems[j]));
                let m = idx(&ring.mul(&elems[i], &elems[j]));
                add[i * size + j] = s;
                add[j * size + i] = s;
                mul[i * size + j] = m;
                mul[j * size + i] = m;
            }
        }
        let neg = elems.iter().map(|x| idx(&ring.neg(x))).collect();
        let val = elems.iter().map(|x| ring.valuation(x).capped() as u8).collect();
        let inv = elems
            .iter()
            .map(|x| ring.inv(x).map(|y| idx(&y)).unwrap_or(0))
            .collect();
        let unit_part = elems.iter().map(|x| idx(&ring.unit_part(x))).collect();
        let pi_pow = (0..=ring.len()).map(|k| idx(&ring.pi_pow(k))).collect();
        Ok(RingTable {
            q: ring.q() as u32,
            n: ring.len(),
            size,
            add,
            mul,
            neg,
            val,
            inv,
            unit_part,
            pi_pow,
        })
    }

    #[inline]
    pub fn add(&self, a: u16, b: u16) -> u16 {
        self.add[a as usize * self.size + b as usize]
    }

    #[inline]
    pub fn mul(&self, a: u16, b: u16) -> u16 {
        self.mul[a as usize * self.size + b as usize]
    }

    #[inline]
    pub fn neg(&self, a: u16) -> u16 {
        self.neg[a as usize]
    }

    #[inline]
    pub fn sub(&self, a: u16, b: u16) -> u16 {
        self.add(a, self.neg(b))
    }

    /// Valuation with zero reported as `n`.
    #[inline]
    pub fn val(&self, a: u16) -> u32 {
        self.val[a as usize] as u32
    }

    /// Inverse of a unit; unspecified for non-units.
    #[inline]
    pub fn inv(&self, a: u16) -> u16 {
        self.inv[a as usize]
    }

    #[inline]
    pub fn unit_part(&self, a: u16) -> u16 {
        self.unit_part[a as usize]
    }

    #[inline]
    pub fn pi_pow(&self, k: u32) -> u16 {
        self.pi_pow[k.min(self.n) as usize]
    }

    pub fn one(&self) -> u16 {
        self.pi_pow[0]
    }

    /// `a / b` for `v(a) >= v(b)`, `b != 0`.
    #[inline]
    pub fn div_exact(&self, a: u16, b: u16) -> u16 {
        let (va, vb) = (self.val(a), self.val(b));
        if va >= self.n {
            return 0;
        }
        let u = self.mul(self.unit_part(a), self.inv(self.unit_part(b)));
        self.mul(u, self.pi_pow(va - vb))
    }

    /// Index of the reduction modulo `pi^m`.
    #[inline]
    pub fn reduce_index(&self, a: u16, m: u32) -> u64 {
        a as u64 / (self.q as u64).pow(self.n - m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cardinalities() {
        assert_eq!(make_ring(3, 2, 1, 2).unwrap().cardinality(), 81);
        assert_eq!(make_ring(2, 1, 2, 4).unwrap().cardinality(), 16);
        assert_eq!(make_ring(4, 1, 1, 1).unwrap_err(), RingError::NonPrime(4));
    }

    #[test]
    fn small_arithmetic() {
        let r = make_ring(3, 1, 1, 3).unwrap();
        let two = r.from_int(2);
        assert_eq!(r.inv(&two).unwrap(), r.from_int(14));
        assert!(r.is_zero(&r.mul(&r.from_int(6), &r.from_int(9))));
        assert_eq!(r.valuation(&r.from_int(6)), Val::Finite(1));
        assert_eq!(r.valuation(&r.zero()), Val::AtLeast(3));
        assert_eq!(r.inv(&r.from_int(3)), Err(RingError::NonUnit));
    }

    #[test]
    fn eisenstein_relation() {
        let r = make_ring(2, 1, 2, 4).unwrap();
        let pi = r.pi();
        assert_eq!(r.mul(&pi, &pi), r.from_int(2));
        assert_eq!(r.valuation(&r.from_int(2)), Val::Finite(2));
        assert!(r.is_zero(&r.pi_pow(4)));
        assert!(!r.is_zero(&r.pi_pow(3)));
    }

    #[test]
    fn teichmuller_digits_of_z9() {
        let r = make_ring(3, 1, 1, 2).unwrap();
        let set: Vec<i64> = r
            .teichmuller_set(2)
            .unwrap()
            .iter()
            .map(|x| r.coeffs(x)[0] as i64)
            .collect();
        let mut expected = Vec::new();
        for t0 in [0, 1, 8] {
            for t1 in [0, 1, 8] {
                expected.push((t0 + 3 * t1) % 9);
            }
        }
        let mut a = set.clone();
        a.sort();
        expected.sort();
        assert_eq!(a, expected);
        let r27 = make_ring(3, 1, 1, 3).unwrap();
        let t: Vec<u64> = r27.teichmuller_set(1).unwrap().iter().map(|x| r27.coeffs(x)[0]).collect();
        assert_eq!(t, vec![0, 1, 26]);
        assert_eq!(r.teichmuller_set(3), Err(RingError::DepthExceedsLength));
    }

    #[test]
    fn digits_roundtrip_all_small_rings() {
        for (p, f, e, n) in [(3, 1, 1, 3), (2, 2, 1, 2), (2, 1, 2, 4), (3, 2, 2, 3), (5, 1, 3, 4)] {
            let r = make_ring(p, f, e, n).unwrap();
            for idx in 0..r.cardinality() {
                let x = r.from_index(idx);
                assert_eq!(r.index_of(&x), idx);
            }
        }
    }

    #[test]
    fn inverse_in_galois_ring() {
        let r = make_ring(3, 2, 1, 2).unwrap();
        for idx in 0..r.cardinality() {
            let x = r.from_index(idx);
            if r.is_unit(&x) {
                let y = r.inv(&x).unwrap();
                assert_eq!(r.mul(&x, &y), r.one());
            }
        }
    }

    #[test]
    fn table_matches_ring() {
        let r = make_ring(2, 1, 2, 3).unwrap();
        let t = RingTable::new(&r).unwrap();
        for a in 0..t.size as u16 {
            for b in 0..t.size as u16 {
                let (x, y) = (r.from_index(a as u64), r.from_index(b as u64));
                assert_eq!(t.mul(a, b) as u64, r.index_of(&r.mul(&x, &y)));
                assert_eq!(t.add(a, b) as u64, r.index_of(&r.add(&x, &y)));
                if t.val(b) <= t.val(a) && t.val(b) < t.n {
                    let d = t.div_exact(a, b);
                    assert_eq!(t.mul(d, b), a);
                }
            }
        }
    }
}
