//! Lie lattices over `o` given by structure constants.
//!
//! Structure constants are symbolic scalars: Laurent polynomials in the
//! uniformizer `pi` and the quaternion non-residue `a` with rational
//! coefficients. They are evaluated into a concrete [`QuotientRing`] on
//! demand. Invariant: every constructed lattice is antisymmetric and
//! satisfies the Jacobi identity exactly.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poly::{int, Mono, Poly, RatFn};
use crate::qring::{QuotientRing, RingElem, RingError, Val};

/// Symbols occurring in structure constants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sym {
    Pi,
    A,
}

impl fmt::Display for Sym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sym::Pi => write!(f, "pi"),
            Sym::A => write!(f, "a"),
        }
    }
}

/// A symbolic element of the field of fractions of `o`.
pub type Scalar = Poly<Sym>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LieError {
    #[error("unsupported basis: {0}")]
    UnsupportedBasis(String),
    #[error("not a subalgebra")]
    NotSubalgebra,
    #[error("not a lattice")]
    NotLattice,
    #[error("normalization unavailable")]
    NormalizationUnavailable,
    #[error("unknown lattice id {0}")]
    UnknownId(String),
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// Ring family of a lattice: `o` with residue field `F_{p^f}`, ramification `e`
/// and the residue index of the non-residue `a` when the lattice uses it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Family {
    pub p: u64,
    pub f: u32,
    pub e: u32,
    pub a_residue: Option<u64>,
}

impl Family {
    pub fn q(&self) -> u64 {
        self.p.pow(self.f)
    }

    /// Largest length `n` for which `o/p^n` is constructible.
    pub fn max_depth(&self) -> u32 {
        let mut n: u32 = 1;
        loop {
            let k = (n + 1).div_ceil(self.e);
            let pk = (self.p as u128).checked_pow(k);
            let qn = (self.q() as u128).checked_pow(n + 1);
            match (pk, qn) {
                (Some(a), Some(b)) if a < 1 << 31 && b < 1 << 62 => n += 1,
                _ => return n,
            }
        }
    }

    /// Builds `o/p^n` for this family.
    pub fn ring(&self, n: u32) -> Result<QuotientRing, RingError> {
        QuotientRing::new(self.p, self.f, self.e, n)
    }
}

/// An `o`-Lie lattice with basis `b_1..b_d` and `[b_i, b_j] = sum_h lambda[i][j][h] b_h`.
#[derive(Debug, Clone, PartialEq)]
pub struct LieLattice {
    pub id: String,
    pub d: usize,
    pub labels: Vec<String>,
    pub lambda: Vec<Vec<Vec<Scalar>>>,
    pub family: Family,
    /// Dual Coxeter number of the ambient simple algebra, when known.
    pub dual_coxeter: Option<u32>,
}

/// Rewrites `pi^k` as `p^(k div e) pi^(k mod e)`.
pub fn normalize_scalar(s: &Scalar, fam: &Family) -> Scalar {
    let e = fam.e as i32;
    let p = BigInt::from(fam.p);
    s.terms().fold(Scalar::zero(), |acc, (m, c)| {
        let k = m.exp(&Sym::Pi);
        let (t, r) = (k.div_euclid(e), k.rem_euclid(e));
        let rest = Mono(m.0.iter().filter(|(v, _)| *v != Sym::Pi).cloned().collect::<Vec<_>>());
        let factor = if t >= 0 {
            BigRational::from_integer(p.pow(t as u32))
        } else {
            BigRational::new(BigInt::one(), p.pow((-t) as u32))
        };
        acc.add(&Poly::term(c * factor, rest.mul(&Mono::var(Sym::Pi, r))))
    })
}

fn vp(x: &BigInt, p: u64) -> i64 {
    let mut v = 0;
    let mut y = x.abs();
    let pb = BigInt::from(p);
    if y.is_zero() {
        return i64::MAX;
    }
    while (&y % &pb).is_zero() {
        y /= &pb;
        v += 1;
    }
    v
}

/// Lower bound for the valuation of a scalar, term by term.
pub fn scalar_valuation_bound(s: &Scalar, fam: &Family) -> Option<i64> {
    let s = normalize_scalar(s, fam);
    s.terms()
        .map(|(m, c)| {
            let v = vp(c.numer(), fam.p) - vp(c.denom(), fam.p);
            v * fam.e as i64 + m.exp(&Sym::Pi) as i64
        })
        .min()
}

/// Evaluates a scalar in `o/p^n`; fails if it is not integral.
pub fn eval_scalar(s: &Scalar, fam: &Family, ring: &QuotientRing) -> Result<RingElem, LieError> {
    let s = normalize_scalar(s, fam);
    let mut acc = ring.zero();
    for (m, c) in s.terms() {
        let num = c.numer();
        let den = c.denom();
        let (vn, vd) = (vp(num, fam.p), vp(den, fam.p));
        let pb = BigInt::from(fam.p);
        let un = num / pb.pow(vn as u32);
        let ud = den / pb.pow(vd as u32);
        let k = m.exp(&Sym::Pi) as i64 + (vn - vd) * fam.e as i64;
        if k < 0 {
            return Err(LieError::NotLattice);
        }
        let modulus = BigInt::from(ring.q()).pow(ring.len()) * BigInt::from(fam.p);
        let red = |x: &BigInt| -> i64 {
            let r = ((x % &modulus) + &modulus) % &modulus;
            r.to_i64().expect("reduced integer fits")
        };
        let mut term = ring.mul(&ring.from_int(red(&un)), &ring.inv(&ring.from_int(red(&ud)))?);
        term = ring.mul(&term, &ring.pi_pow(k as u32));
        let aexp = m.exp(&Sym::A);
        if aexp != 0 {
            let r = fam.a_residue.ok_or(LieError::UnsupportedBasis("missing non-residue".into()))?;
            let a = ring.teich_elem(r);
            let a = if aexp > 0 { a } else { ring.inv(&a)? };
            term = ring.mul(&term, &ring.pow(&a, aexp.unsigned_abs() as u64));
        }
        acc = ring.add(&acc, &term);
    }
    Ok(acc)
}

/// Smallest residue index whose residue is a non-square in `F_q`.
pub fn smallest_nonresidue(fam: &Family) -> Result<u64, RingError> {
    let ring = QuotientRing::new(fam.p, fam.f, 1, 1)?;
    let q = ring.q();
    let squares: std::collections::HashSet<u64> = (0..q)
        .map(|r| {
            let x = ring.from_index(r);
            ring.index_of(&ring.mul(&x, &x))
        })
        .collect();
    Ok((1..q).find(|r| !squares.contains(r)).expect("odd q has non-squares"))
}

/// Lattice identifiers with built-in constructions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BuiltinId {
    Sl2,
    Sl3,
    Sln(usize),
    /// The `m`-th term of the congruence filtration of the quaternion lattice.
    Sl1Quat(u32),
}

impl BuiltinId {
    pub fn name(&self) -> String {
        match self {
            BuiltinId::Sl2 => "sl2".into(),
            BuiltinId::Sl3 => "sl3".into(),
            BuiltinId::Sln(n) => format!("sl{n}"),
            BuiltinId::Sl1Quat(m) => format!("sl1_quat_{m}"),
        }
    }
}

/// Matrix units `E_ij` of `gl_n` as dense integer matrices.
fn mat_unit(n: usize, i: usize, j: usize) -> Vec<Vec<i64>> {
    let mut m = vec![vec![0; n]; n];
    m[i][j] = 1;
    m
}

fn mat_bracket(x: &[Vec<i64>], y: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = x.len();
    let mut out = vec![vec![0; n]; n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                out[i][j] += x[i][k] * y[k][j] - y[i][k] * x[k][j];
            }
        }
    }
    out
}

/// Chevalley basis of `sl_n`: `h_{i,i+1}`, then `e_ij` and `f_ji` ordered by
/// `(j - i, i)`.
pub fn sln_basis(n: usize) -> (Vec<String>, Vec<Vec<Vec<i64>>>) {
    let mut labels = Vec::new();
    let mut mats = Vec::new();
    for i in 0..n - 1 {
        let mut m = mat_unit(n, i, i);
        m[i + 1][i + 1] = -1;
        labels.push(format!("h{}{}", i + 1, i + 2));
        mats.push(m);
    }
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for gap in 1..n {
        for i in 0..n - gap {
            pairs.push((i, i + gap));
        }
    }
    for &(i, j) in &pairs {
        labels.push(format!("e{}{}", i + 1, j + 1));
        mats.push(mat_unit(n, i, j));
    }
    for &(i, j) in &pairs {
        labels.push(format!("f{}{}", j + 1, i + 1));
        mats.push(mat_unit(n, j, i));
    }
    (labels, mats)
}

/// Coordinates of a traceless integer matrix in [`sln_basis`].
fn sln_coords(n: usize, m: &[Vec<i64>]) -> Vec<i64> {
    let mut c = Vec::new();
    // diagonal: m = sum a_i h_{i,i+1} gives a_i = sum_{k<=i} m_kk
    let mut run = 0;
    for i in 0..n - 1 {
        run += m[i][i];
        c.push(run);
    }
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for gap in 1..n {
        for i in 0..n - gap {
            pairs.push((i, i + gap));
        }
    }
    for &(i, j) in &pairs {
        c.push(m[i][j]);
    }
    for &(i, j) in &pairs {
        c.push(m[j][i]);
    }
    c
}

fn from_int_constants(lam: Vec<Vec<Vec<i64>>>) -> Vec<Vec<Vec<Scalar>>> {
    lam.into_iter()
        .map(|row| row.into_iter().map(|v| v.into_iter().map(Scalar::int).collect()).collect())
        .collect()
}

impl LieLattice {
    /// Built-in lattices with the fixed basis orderings.
    pub fn builtin(id: BuiltinId, p: u64, f: u32, e: u32) -> Result<Self, LieError> {
        let mut fam = Family { p, f, e, a_residue: None };
        let lat = match id {
            BuiltinId::Sl2 => {
                // basis (e, f, h): [e,f] = h, [e,h] = -2e, [f,h] = 2f
                let mut lam = vec![vec![vec![0i64; 3]; 3]; 3];
                lam[0][1][2] = 1;
                lam[1][0][2] = -1;
                lam[0][2][0] = -2;
                lam[2][0][0] = 2;
                lam[1][2][1] = 2;
                lam[2][1][1] = -2;
                LieLattice {
                    id: id.name(),
                    d: 3,
                    labels: vec!["e".into(), "f".into(), "h".into()],
                    lambda: from_int_constants(lam),
                    family: fam,
                    dual_coxeter: Some(2),
                }
            }
            BuiltinId::Sl3 | BuiltinId::Sln(_) => {
                let n = match id {
                    BuiltinId::Sln(n) => n,
                    _ => 3,
                };
                if n < 2 {
                    return Err(LieError::UnknownId(format!("sl{n}")));
                }
                let (labels, mats) = sln_basis(n);
                let d = mats.len();
                let mut lam = vec![vec![vec![0i64; d]; d]; d];
                for i in 0..d {
                    for j in 0..d {
                        lam[i][j] = sln_coords(n, &mat_bracket(&mats[i], &mats[j]));
                    }
                }
                LieLattice {
                    id: if n == 3 { "sl3".into() } else { format!("sl{n}") },
                    d,
                    labels,
                    lambda: from_int_constants(lam),
                    family: fam,
                    dual_coxeter: Some(n as u32),
                }
            }
            BuiltinId::Sl1Quat(m) => {
                if p == 2 {
                    return Err(LieError::UnsupportedBasis("quaternion basis needs p odd".into()));
                }
                fam.a_residue = Some(smallest_nonresidue(&fam)?);
                let base = Self::quaternion_base(fam);
                let up = |k: u32| Scalar::monomial(Sym::Pi, k as i32);
                let (ei, ejk) = (m.div_ceil(2), m.saturating_sub(1).div_ceil(2));
                let mut mat = vec![vec![Scalar::zero(); 3]; 3];
                mat[0][0] = up(ei);
                mat[1][1] = up(ejk);
                mat[2][2] = up(ejk);
                let mut lat = base.sublattice(&mat)?;
                lat.id = id.name();
                lat
            }
        };
        lat.check_identities()?;
        Ok(lat)
    }

    /// `sl_1` of the maximal quaternion order in the basis `(i, j, k)`:
    /// `[i,j] = k`, `[i,k] = a j`, `[j,k] = -pi i`.
    pub fn quaternion_base(fam: Family) -> Self {
        let z = Scalar::zero;
        let mut lam = vec![vec![vec![z(); 3]; 3]; 3];
        let a = Scalar::var(Sym::A);
        let pi = Scalar::var(Sym::Pi);
        lam[0][1][2] = Scalar::one();
        lam[1][0][2] = Scalar::int(-1);
        lam[0][2][1] = a.clone();
        lam[2][0][1] = a.neg();
        lam[1][2][0] = pi.neg();
        lam[2][1][0] = pi.clone();
        LieLattice {
            id: "sl1_quat_0".into(),
            d: 3,
            labels: vec!["i".into(), "j".into(), "k".into()],
            lambda: lam,
            family: fam,
            dual_coxeter: Some(2),
        }
    }

    /// Abelian lattice of rank `d`.
    pub fn abelian(d: usize, p: u64, f: u32, e: u32) -> Self {
        LieLattice {
            id: format!("abelian{d}"),
            d,
            labels: (1..=d).map(|i| format!("x{i}")).collect(),
            lambda: vec![vec![vec![Scalar::zero(); d]; d]; d],
            family: Family { p, f, e, a_residue: None },
            dual_coxeter: None,
        }
    }

    /// Bracket of two coordinate vectors.
    pub fn bracket(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(); self.d];
        for i in 0..self.d {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..self.d {
                if y[j].is_zero() {
                    continue;
                }
                let xy = x[i].mul(&y[j]);
                for h in 0..self.d {
                    if !self.lambda[i][j][h].is_zero() {
                        out[h] = out[h].add(&xy.mul(&self.lambda[i][j][h]));
                    }
                }
            }
        }
        out.iter().map(|s| normalize_scalar(s, &self.family)).collect()
    }

    fn unit_vec(&self, i: usize) -> Vec<Scalar> {
        let mut v = vec![Scalar::zero(); self.d];
        v[i] = Scalar::one();
        v
    }

    /// Asserts antisymmetry and the Jacobi identity exactly.
    pub fn check_identities(&self) -> Result<(), LieError> {
        let d = self.d;
        for i in 0..d {
            for j in 0..d {
                for h in 0..d {
                    let s = normalize_scalar(&self.lambda[i][j][h].add(&self.lambda[j][i][h]), &self.family);
                    if !s.is_zero() {
                        return Err(LieError::NotSubalgebra);
                    }
                }
            }
        }
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    let (x, y, z) = (self.unit_vec(i), self.unit_vec(j), self.unit_vec(k));
                    let a = self.bracket(&x, &self.bracket(&y, &z));
                    let b = self.bracket(&y, &self.bracket(&z, &x));
                    let c = self.bracket(&z, &self.bracket(&x, &y));
                    for h in 0..d {
                        let s = normalize_scalar(&a[h].add(&b[h]).add(&c[h]), &self.family);
                        if !s.is_zero() {
                            return Err(LieError::NotSubalgebra);
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// The lattice spanned by the rows of `m` (coordinates in the current basis).
    pub fn sublattice(&self, m: &[Vec<Scalar>]) -> Result<Self, LieError> {
        let d = self.d;
        let inv = invert_matrix(m).ok_or(LieError::NotLattice)?;
        let mut lam = vec![vec![vec![Scalar::zero(); d]; d]; d];
        for i in 0..d {
            for j in 0..d {
                let br = self.bracket(&m[i], &m[j]);
                // coordinates in the new basis: br * inv
                for g in 0..d {
                    let mut acc = Scalar::zero();
                    for h in 0..d {
                        if !br[h].is_zero() && !inv[h][g].is_zero() {
                            acc = acc.add(&br[h].mul(&inv[h][g]));
                        }
                    }
                    let acc = normalize_scalar(&acc, &self.family);
                    if let Some(v) = scalar_valuation_bound(&acc, &self.family) {
                        if v < 0 {
                            return Err(LieError::NotSubalgebra);
                        }
                    }
                    lam[i][j][g] = acc;
                }
            }
        }
        let out = LieLattice {
            id: format!("{}'", self.id),
            d,
            labels: (0..d).map(|i| format!("{}'", self.labels[i])).collect(),
            lambda: lam,
            family: self.family,
            dual_coxeter: self.dual_coxeter,
        };
        out.check_identities()?;
        Ok(out)
    }

    /// `pi^k` times the lattice.
    pub fn scaled(&self, k: u32) -> Result<Self, LieError> {
        let d = self.d;
        let mut m = vec![vec![Scalar::zero(); d]; d];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = Scalar::monomial(Sym::Pi, k as i32);
        }
        let mut out = self.sublattice(&m)?;
        out.id = format!("{}^{}", self.id, k);
        out.labels = self.labels.clone();
        Ok(out)
    }

    /// The commutator matrix `R(Y)`.
    pub fn commutator_matrix(&self) -> CommutatorMatrix {
        CommutatorMatrix { d: self.d, coeffs: self.lambda.clone(), family: self.family }
    }

    /// Gram matrix of `(2 h)^(-1) Tr(ad x ad y)` with `h` the dual Coxeter number.
    pub fn killing_form(&self) -> Result<Vec<Vec<Scalar>>, LieError> {
        let hv = self.dual_coxeter.ok_or(LieError::NormalizationUnavailable)?;
        let d = self.d;
        let scale = BigRational::new(BigInt::one(), BigInt::from(2 * hv));
        let mut g = vec![vec![Scalar::zero(); d]; d];
        for i in 0..d {
            for j in 0..d {
                // Tr(ad b_i ad b_j) = sum_{h,k} lambda^h_{i k} lambda^k_{j h}
                let mut acc = Scalar::zero();
                for h in 0..d {
                    for k in 0..d {
                        let (x, y) = (&self.lambda[i][k][h], &self.lambda[j][h][k]);
                        if !x.is_zero() && !y.is_zero() {
                            acc = acc.add(&x.mul(y));
                        }
                    }
                }
                g[i][j] = normalize_scalar(&acc.scale(&scale), &self.family);
            }
        }
        Ok(g)
    }

    /// Stable textual fingerprint of the basis and structure constants.
    pub fn fingerprint(&self) -> String {
        let mut s = format!("{}|d={}|{}|", self.id, self.d, self.labels.join(","));
        for i in 0..self.d {
            for j in i + 1..self.d {
                for h in 0..self.d {
                    let c = normalize_scalar(&self.lambda[i][j][h], &self.family);
                    if !c.is_zero() {
                        s.push_str(&format!("{i},{j},{h}:{c};"));
                    }
                }
            }
        }
        if let Some(a) = self.family.a_residue {
            s.push_str(&format!("a={a}"));
        }
        s
    }

    /// JSON description for caches and reports.
    pub fn to_json(&self) -> serde_json::Value {
        let mut consts = Vec::new();
        for i in 0..self.d {
            for j in i + 1..self.d {
                for h in 0..self.d {
                    let c = normalize_scalar(&self.lambda[i][j][h], &self.family);
                    if !c.is_zero() {
                        consts.push(serde_json::json!([i, j, h, c.to_string()]));
                    }
                }
            }
        }
        serde_json::json!({
            "id": self.id,
            "d": self.d,
            "labels": self.labels,
            "p": self.family.p, "f": self.family.f, "e": self.family.e,
            "structure_constants": consts,
        })
    }

    /// Smallest valuation of a nonzero structure constant (the content).
    pub fn content(&self) -> Option<u32> {
        let ring = self.family.ring((24 * self.family.e).min(self.family.max_depth())).ok()?;
        let mut best: Option<u32> = None;
        for i in 0..self.d {
            for j in 0..self.d {
                for h in 0..self.d {
                    let c = &self.lambda[i][j][h];
                    if c.is_zero() {
                        continue;
                    }
                    if let Ok(x) = eval_scalar(c, &self.family, &ring) {
                        if let Val::Finite(v) = ring.valuation(&x) {
                            best = Some(best.map_or(v, |b| b.min(v)));
                        }
                    }
                }
            }
        }
        best
    }

    /// The lattice with all structure constants divided by `pi^k`.
    pub fn divide_constants(&self, k: u32) -> Self {
        let inv = Scalar::monomial(Sym::Pi, -(k as i32));
        let lambda = self
            .lambda
            .iter()
            .map(|row| row.iter().map(|v| v.iter().map(|c| normalize_scalar(&c.mul(&inv), &self.family)).collect()).collect())
            .collect();
        LieLattice { id: format!("{}/pi^{k}", self.id), lambda, ..self.clone() }
    }
}

/// Inverse of a matrix of scalars whose inverse has Laurent-polynomial entries.
pub fn invert_matrix(m: &[Vec<Scalar>]) -> Option<Vec<Vec<Scalar>>> {
    let d = m.len();
    let mut a: Vec<Vec<RatFn<Sym>>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r: Vec<RatFn<Sym>> = row.iter().map(|x| RatFn::from_poly(x.clone())).collect();
            for j in 0..d {
                r.push(RatFn::constant(if i == j { int(1) } else { int(0) }));
            }
            r
        })
        .collect();
    for col in 0..d {
        let piv = (col..d).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        let pinv = a[col][col].inv();
        for x in a[col].iter_mut() {
            *x = simplify(&x.mul(&pinv));
        }
        for r in 0..d {
            if r != col && !a[r][col].is_zero() {
                let factor = a[r][col].clone();
                for c in 0..2 * d {
                    let t = a[col][c].mul(&factor);
                    a[r][c] = simplify(&a[r][c].sub(&t));
                }
            }
        }
    }
    let mut out = vec![vec![Scalar::zero(); d]; d];
    for i in 0..d {
        for j in 0..d {
            let x = &a[i][d + j];
            out[i][j] = if x.num.is_zero() { Scalar::zero() } else { x.num.div_exact(&x.den)? };
        }
    }
    Some(out)
}

/// Determinant of a matrix of scalars, as a rational function in `pi` and `a`.
pub fn determinant(m: &[Vec<Scalar>]) -> RatFn<Sym> {
    let d = m.len();
    let mut a: Vec<Vec<RatFn<Sym>>> =
        m.iter().map(|row| row.iter().map(|x| RatFn::from_poly(x.clone())).collect()).collect();
    let mut det = RatFn::constant(int(1));
    for col in 0..d {
        let Some(piv) = (col..d).find(|&r| !a[r][col].is_zero()) else {
            return RatFn::from_poly(Scalar::zero());
        };
        if piv != col {
            a.swap(col, piv);
            det = det.neg();
        }
        det = simplify(&det.mul(&a[col][col]));
        let pinv = a[col][col].inv();
        for r in col + 1..d {
            if !a[r][col].is_zero() {
                let factor = simplify(&a[r][col].mul(&pinv));
                for c in col..d {
                    let t = a[col][c].mul(&factor);
                    a[r][c] = simplify(&a[r][c].sub(&t));
                }
            }
        }
    }
    det
}

fn simplify(x: &RatFn<Sym>) -> RatFn<Sym> {
    if x.num.is_zero() {
        return RatFn::from_poly(Scalar::zero());
    }
    match x.num.div_exact(&x.den) {
        Some(q) => RatFn::from_poly(q),
        None => x.clone(),
    }
}

/// The antisymmetric matrix of linear forms `R(Y)_{ij} = sum_h lambda^h_{ij} Y_h`.
#[derive(Debug, Clone, PartialEq)]
pub struct CommutatorMatrix {
    pub d: usize,
    pub coeffs: Vec<Vec<Vec<Scalar>>>,
    pub family: Family,
}

impl CommutatorMatrix {
    /// Entry `(i, j)` as a linear form in `Y_1..Y_d`, printed.
    pub fn entry_string(&self, i: usize, j: usize) -> String {
        let mut parts = Vec::new();
        for h in 0..self.d {
            let c = normalize_scalar(&self.coeffs[i][j][h], &self.family);
            if c.is_zero() {
                continue;
            }
            let cs = c.to_string();
            let y = format!("Y{}", h + 1);
            parts.push(match cs.as_str() {
                "1" => y,
                "-1" => format!("-{y}"),
                _ if c.num_terms() == 1 => format!("{cs}*{y}"),
                _ => format!("({cs})*{y}"),
            });
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ").replace("+ -", "- ")
        }
    }

    /// Coefficients evaluated in `o/p^n`: `out[i][j][h]`.
    pub fn evaluate_coeffs(&self, ring: &QuotientRing) -> Result<Vec<Vec<Vec<RingElem>>>, LieError> {
        let mut out = Vec::with_capacity(self.d);
        for i in 0..self.d {
            let mut row = Vec::with_capacity(self.d);
            for j in 0..self.d {
                let mut v = Vec::with_capacity(self.d);
                for h in 0..self.d {
                    v.push(eval_scalar(&self.coeffs[i][j][h], &self.family, ring)?);
                }
                row.push(v);
            }
            out.push(row);
        }
        Ok(out)
    }

    /// `R(y)` for a point `y` of `(o/p^n)^d`.
    pub fn at(&self, ring: &QuotientRing, y: &[RingElem]) -> Result<Vec<Vec<RingElem>>, LieError> {
        let c = self.evaluate_coeffs(ring)?;
        Ok((0..self.d)
            .map(|i| {
                (0..self.d)
                    .map(|j| {
                        (0..self.d).fold(ring.zero(), |acc, h| ring.add(&acc, &ring.mul(&c[i][j][h], &y[h])))
                    })
                    .collect()
            })
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sl2_commutator_entries() {
        let l = LieLattice::builtin(BuiltinId::Sl2, 3, 1, 1).unwrap();
        let r = l.commutator_matrix();
        assert_eq!(r.entry_string(0, 1), "Y3");
        assert_eq!(r.entry_string(0, 2), "-2*Y1");
        assert_eq!(r.entry_string(1, 2), "2*Y2");
        assert_eq!(r.entry_string(1, 0), "-Y3");
    }

    #[test]
    fn quaternion_first_congruence_lattice() {
        let l = LieLattice::builtin(BuiltinId::Sl1Quat(1), 5, 1, 1).unwrap();
        let r = l.commutator_matrix();
        // with e = 1 the symbol pi is normalised to p
        assert_eq!(r.entry_string(0, 1), "5*Y3");
        assert_eq!(r.entry_string(0, 2), "5*a*Y2");
        assert_eq!(r.entry_string(1, 2), "-Y1");
        let l2 = LieLattice::builtin(BuiltinId::Sl1Quat(1), 5, 1, 2).unwrap();
        let r2 = l2.commutator_matrix();
        assert_eq!(r2.entry_string(0, 1), "pi*Y3");
        assert_eq!(r2.entry_string(0, 2), "pi*a*Y2");
    }

    #[test]
    fn sl3_is_a_lie_algebra() {
        let l = LieLattice::builtin(BuiltinId::Sl3, 3, 1, 1).unwrap();
        assert_eq!(l.labels, vec!["h12", "h23", "e12", "e23", "e13", "f21", "f32", "f31"]);
        assert!(l.check_identities().is_ok());
    }

    #[test]
    fn scaling_multiplies_commutator_matrix() {
        let l = LieLattice::builtin(BuiltinId::Sl2, 3, 1, 1).unwrap();
        let s = l.scaled(1).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                for h in 0..3 {
                    let expect = normalize_scalar(&l.lambda[i][j][h].scale(&int(3)), &l.family);
                    assert_eq!(s.lambda[i][j][h], expect);
                }
            }
        }
    }

    #[test]
    fn non_closed_span_is_rejected() {
        let l = LieLattice::builtin(BuiltinId::Sl2, 3, 1, 1).unwrap();
        let z = Scalar::zero;
        // span(e, f, p h) is not closed: [e, f] = h
        let m = vec![
            vec![Scalar::one(), z(), z()],
            vec![z(), Scalar::one(), z()],
            vec![z(), z(), Scalar::int(3)],
        ];
        assert_eq!(l.sublattice(&m), Err(LieError::NotSubalgebra));
    }

    #[test]
    fn killing_forms() {
        let l = LieLattice::builtin(BuiltinId::Sl2, 3, 1, 1).unwrap();
        let g = l.killing_form().unwrap();
        // basis (e, f, h)
        let expect = [[0, 1, 0], [1, 0, 0], [0, 0, 2]];
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(g[i][j], Scalar::int(expect[i][j]));
            }
        }
        assert_eq!(LieLattice::abelian(2, 3, 1, 1).killing_form(), Err(LieError::NormalizationUnavailable));
    }

    #[test]
    fn sl3_killing_determinant() {
        let l = LieLattice::builtin(BuiltinId::Sl3, 5, 1, 1).unwrap();
        let g = l.killing_form().unwrap();
        let det = determinant(&g);
        // h-block has determinant 3; the three e/f swap blocks contribute (-1)^3
        assert!(det.equals(&RatFn::constant(int(-3))));
    }

    #[test]
    fn quaternion_killing_form() {
        let fam = Family { p: 5, f: 1, e: 2, a_residue: Some(2) };
        let l = LieLattice::quaternion_base(fam);
        let g = l.killing_form().unwrap();
        let a = Scalar::var(Sym::A);
        let pi = Scalar::var(Sym::Pi);
        let half = crate::poly::rat(1, 2);
        let expect = [a.clone(), pi.clone(), a.mul(&pi).neg()];
        for i in 0..3 {
            for j in 0..3 {
                let e = if i == j { expect[i].scale(&half) } else { Scalar::zero() };
                assert_eq!(g[i][j], e, "entry {i},{j}");
            }
        }
    }

    #[test]
    fn killing_form_is_ad_invariant() {
        for l in [
            LieLattice::builtin(BuiltinId::Sl2, 3, 1, 1).unwrap(),
            LieLattice::builtin(BuiltinId::Sl3, 3, 1, 1).unwrap(),
            LieLattice::quaternion_base(Family { p: 3, f: 1, e: 2, a_residue: Some(2) }),
        ] {
            let g = l.killing_form().unwrap();
            let form = |x: &[Scalar], y: &[Scalar]| {
                let mut acc = Scalar::zero();
                for i in 0..l.d {
                    for j in 0..l.d {
                        acc = acc.add(&x[i].mul(&y[j]).mul(&g[i][j]));
                    }
                }
                normalize_scalar(&acc, &l.family)
            };
            for i in 0..l.d {
                for j in 0..l.d {
                    for k in 0..l.d {
                        let (x, y, z) = (l.unit_vec(i), l.unit_vec(j), l.unit_vec(k));
                        assert_eq!(form(&l.bracket(&x, &y), &z), form(&x, &l.bracket(&y, &z)));
                    }
                }
            }
        }
    }

    #[test]
    fn nested_sublattices_compose() {
        let l = LieLattice::builtin(BuiltinId::Sl2, 3, 1, 1).unwrap();
        let z = Scalar::zero;
        let p = || Scalar::int(3);
        let m1 = vec![vec![p(), z(), z()], vec![z(), p(), z()], vec![z(), z(), p()]];
        let m2 = vec![vec![Scalar::one(), Scalar::one(), z()], vec![z(), Scalar::one(), z()], vec![z(), z(), p()]];
        let prod: Vec<Vec<Scalar>> = (0..3)
            .map(|i| (0..3).map(|j| (0..3).fold(Scalar::zero(), |acc, k| acc.add(&m2[i][k].mul(&m1[k][j])))).collect())
            .collect();
        let a = l.sublattice(&m1).unwrap().sublattice(&m2).unwrap();
        let b = l.sublattice(&prod).unwrap();
        assert_eq!(a.lambda, b.lambda);
    }
}
