//! Sparse multivariate Laurent polynomials over the rationals and quotients
//! of them.
//!
//! Monomials are compared lexicographically with the smallest variable most
//! significant (absent variables have exponent 0); this is a group order on
//! exponent vectors, so leading terms are multiplicative.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// A monomial: sorted `(variable, exponent)` pairs with nonzero exponents.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Mono<V: Ord + Clone>(pub Vec<(V, i32)>);

impl<V: Ord + Clone> Mono<V> {
    pub fn one() -> Self {
        Mono(Vec::new())
    }

    pub fn var(v: V, e: i32) -> Self {
        if e == 0 {
            Mono(Vec::new())
        } else {
            Mono(vec![(v, e)])
        }
    }

    pub fn exp(&self, v: &V) -> i32 {
        self.0.iter().find(|(w, _)| w == v).map_or(0, |(_, e)| *e)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out: Vec<(V, i32)> = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() || j < other.0.len() {
            if j == other.0.len() || (i < self.0.len() && self.0[i].0 < other.0[j].0) {
                out.push(self.0[i].clone());
                i += 1;
            } else if i == self.0.len() || other.0[j].0 < self.0[i].0 {
                out.push(other.0[j].clone());
                j += 1;
            } else {
                let e = self.0[i].1 + other.0[j].1;
                if e != 0 {
                    out.push((self.0[i].0.clone(), e));
                }
                i += 1;
                j += 1;
            }
        }
        Mono(out)
    }

    pub fn inv(&self) -> Self {
        Mono(self.0.iter().map(|(v, e)| (v.clone(), -e)).collect())
    }

    pub fn pow(&self, k: i32) -> Self {
        if k == 0 {
            return Mono::one();
        }
        Mono(self.0.iter().map(|(v, e)| (v.clone(), e * k)).collect())
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }
}

impl<V: Ord + Clone> PartialOrd for Mono<V> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<V: Ord + Clone> Ord for Mono<V> {
    fn cmp(&self, other: &Self) -> Ordering {
        let (mut i, mut j) = (0, 0);
        loop {
            match (self.0.get(i), other.0.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some((_, e)), None) => return e.cmp(&0),
                (None, Some((_, e))) => return 0.cmp(e),
                (Some((v, e)), Some((w, f))) => match v.cmp(w) {
                    Ordering::Less => return e.cmp(&0),
                    Ordering::Greater => return 0.cmp(f),
                    Ordering::Equal => {
                        if e != f {
                            return e.cmp(f);
                        }
                        i += 1;
                        j += 1;
                    }
                },
            }
        }
    }
}

/// A Laurent polynomial with rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly<V: Ord + Clone> {
    terms: BTreeMap<Mono<V>, BigRational>,
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl<V: Ord + Clone> Default for Poly<V> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<V: Ord + Clone> Poly<V> {
    pub fn zero() -> Self {
        Poly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::term(c, Mono::one())
    }

    pub fn int(c: i64) -> Self {
        Self::constant(int(c))
    }

    pub fn term(c: BigRational, m: Mono<V>) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    pub fn var(v: V) -> Self {
        Self::term(BigRational::one(), Mono::var(v, 1))
    }

    pub fn monomial(v: V, e: i32) -> Self {
        Self::term(BigRational::one(), Mono::var(v, e))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono<V>, &BigRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    fn add_term(&mut self, m: Mono<V>, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(x) => {
                *x += c;
                if x.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect() }
    }

    pub fn mul_mono(&self, m: &Mono<V>) -> Self {
        Poly { terms: self.terms.iter().map(|(n, c)| (n.mul(m), c.clone())).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            for (n, d) in &other.terms {
                out.add_term(m.mul(n), c * d);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Leading term in the lex order.
    pub fn leading(&self) -> Option<(&Mono<V>, &BigRational)> {
        self.terms.iter().next_back()
    }

    /// Exact quotient `self / d`, or `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        let (lm, lc) = d.leading()?;
        let (lm, lc) = (lm.clone(), lc.clone());
        let mut rem = self.clone();
        let mut quot = Self::zero();
        let mut steps = 0usize;
        let limit = 64 + 4 * (self.terms.len() + 1) * (d.terms.len() + 1);
        while let Some((m, c)) = rem.leading() {
            steps += 1;
            if steps > limit {
                return None;
            }
            let tm = m.mul(&lm.inv());
            let tc = c / &lc;
            let t = Self::term(tc, tm);
            rem = rem.sub(&t.mul(d));
            quot = quot.add(&t);
        }
        Some(quot)
    }

    /// Constant coefficient (the coefficient of the empty monomial).
    pub fn constant_term(&self) -> BigRational {
        self.terms.get(&Mono::one()).cloned().unwrap_or_else(BigRational::zero)
    }

    /// The rational value when the polynomial is constant.
    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    /// Replaces each variable by a Laurent polynomial image; images of
    /// variables with negative exponents must be monomials.
    pub fn substitute<W: Ord + Clone>(&self, f: &dyn Fn(&V) -> Poly<W>) -> Poly<W> {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut acc = Poly::constant(c.clone());
            for (v, e) in &m.0 {
                let img = f(v);
                let factor = if *e >= 0 {
                    img.pow(*e as u32)
                } else {
                    let (mm, cc) = img.leading().expect("substituting zero with a negative power");
                    assert_eq!(img.num_terms(), 1, "negative power of a non-monomial");
                    Poly::term(BigRational::one() / cc.pow(-*e), mm.pow(*e))
                };
                acc = acc.mul(&factor);
            }
            out = out.add(&acc);
        }
        out
    }

    /// Evaluates with rational values for every variable.
    pub fn eval(&self, f: &dyn Fn(&V) -> BigRational) -> BigRational {
        let mut out = BigRational::zero();
        for (m, c) in &self.terms {
            let mut acc = c.clone();
            for (v, e) in &m.0 {
                let x = f(v);
                acc *= x.pow(*e);
            }
            out += acc;
        }
        out
    }

    /// Variables occurring with nonzero exponent.
    pub fn variables(&self) -> Vec<V> {
        let mut vs: Vec<V> = self.terms.keys().flat_map(|m| m.0.iter().map(|(v, _)| v.clone())).collect();
        vs.sort();
        vs.dedup();
        vs
    }

    /// Groups terms by the exponent of `v`: `self = sum_k coeff_k * v^k`.
    pub fn coefficients_in(&self, v: &V) -> BTreeMap<i32, Poly<V>> {
        let mut out: BTreeMap<i32, Poly<V>> = BTreeMap::new();
        for (m, c) in &self.terms {
            let k = m.exp(v);
            let rest = Mono(m.0.iter().filter(|(w, _)| w != v).cloned().collect());
            out.entry(k).or_default().add_term(rest, c.clone());
        }
        out.retain(|_, p| !p.is_zero());
        out
    }

    pub fn map_monomials(&self, f: &dyn Fn(&Mono<V>) -> Mono<V>) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            out.add_term(f(m), c.clone());
        }
        out
    }
}

impl<V: Ord + Clone + fmt::Display> fmt::Display for Poly<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            let show_coeff = !a.is_one() || m.is_one();
            if show_coeff {
                write!(f, "{a}")?;
            }
            for (i, (v, e)) in m.0.iter().enumerate() {
                if show_coeff || i > 0 {
                    write!(f, "*")?;
                }
                if *e == 1 {
                    write!(f, "{v}")?;
                } else {
                    write!(f, "{v}^{e}")?;
                }
            }
        }
        Ok(())
    }
}

/// A quotient of Laurent polynomials; equality is by cross-multiplication.
#[derive(Debug, Clone)]
pub struct RatFn<V: Ord + Clone> {
    pub num: Poly<V>,
    pub den: Poly<V>,
}

impl<V: Ord + Clone> RatFn<V> {
    pub fn new(num: Poly<V>, den: Poly<V>) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        RatFn { num, den }
    }

    pub fn from_poly(p: Poly<V>) -> Self {
        RatFn { num: p, den: Poly::one() }
    }

    pub fn constant(c: BigRational) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.den == o.den {
            return RatFn { num: self.num.add(&o.num), den: self.den.clone() };
        }
        RatFn { num: self.num.mul(&o.den).add(&o.num.mul(&self.den)), den: self.den.mul(&o.den) }
    }

    pub fn neg(&self) -> Self {
        RatFn { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        RatFn { num: self.num.mul(&o.num), den: self.den.mul(&o.den) }
    }

    pub fn inv(&self) -> Self {
        RatFn::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, o: &Self) -> Self {
        self.mul(&o.inv())
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn equals(&self, o: &Self) -> bool {
        self.num.mul(&o.den) == o.num.mul(&self.den)
    }

    pub fn substitute<W: Ord + Clone>(&self, f: &dyn Fn(&V) -> Poly<W>) -> RatFn<W> {
        RatFn::new(self.num.substitute(f), self.den.substitute(f))
    }

    /// Cancels a common polynomial factor if it divides both parts exactly.
    pub fn cancel(&self, g: &Poly<V>) -> Self {
        match (self.num.div_exact(g), self.den.div_exact(g)) {
            (Some(n), Some(d)) => RatFn { num: n, den: d },
            _ => self.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type P = Poly<u8>;

    #[test]
    fn arithmetic_and_division() {
        let x = P::var(0);
        let y = P::var(1);
        let a = x.add(&y.scale(&int(2)));
        let b = x.sub(&P::one());
        let prod = a.mul(&b);
        assert_eq!(prod.div_exact(&b).unwrap(), a);
        assert_eq!(prod.div_exact(&a).unwrap(), b);
        assert!(x.div_exact(&x.add(&P::one())).is_none());
    }

    #[test]
    fn laurent_monomials() {
        let x = P::var(0);
        let xi = P::monomial(0, -1);
        assert_eq!(x.mul(&xi), P::one());
        let f = P::one().sub(&x.mul(&P::var(1)));
        let g = f.substitute(&|v| if *v == 0 { P::monomial(2, 3) } else { P::monomial(2, -1) });
        assert_eq!(g, P::one().sub(&P::monomial(2, 2)));
    }

    #[test]
    fn ratfn_identity() {
        let x = P::var(0);
        let one = P::one();
        // 1/(1-x) - 1 = x/(1-x)
        let lhs = RatFn::new(one.clone(), one.sub(&x)).sub(&RatFn::from_poly(one.clone()));
        let rhs = RatFn::new(x.clone(), one.sub(&x));
        assert!(lhs.equals(&rhs));
    }
}
