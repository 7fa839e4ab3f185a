//! Adjoint orbits of `GL_n(F_q)` on `sl_2(F_q)`, `sl_3(F_q)` and on the
//! trace `-1` slice of `gl_3(F_q)`, by exhaustive orbit closure.
//!
//! Orbits are the connected components of the graph whose edges are
//! conjugations by a generating set of `GL_n(F_q)` (transvections over an
//! `F_p`-basis of `F_q` plus one diagonal generator); `SL_n`-orbits use the
//! transvections alone. Centralisers are counted independently as invertible
//! points of the commutant, a linear subspace of `M_n(F_q)`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Serialize;
use thiserror::Error;

use crate::dirichlet::factorize;
use crate::lie::{sln_basis, BuiltinId, LieError, LieLattice};
use crate::matalg::{generic_rank_rho, MatError};
use crate::qring::{make_ring, QuotientRing, RingError, RingTable};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrbitError {
    #[error("enumeration of {required} matrices exceeds the budget {budget}")]
    BudgetExceeded { required: u64, budget: u64 },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("label {0} has orbits of different sizes")]
    NonUniform(String),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Mat(#[from] MatError),
}

/// Default cap on the number of matrices in one classification.
pub const ORBIT_BUDGET: u64 = 1_000_000;

/// The finite field `F_q` through lookup tables.
pub struct Field {
    pub p: u64,
    pub f: u32,
    pub q: u64,
    t: RingTable,
    ring: QuotientRing,
    zero: u16,
    one: u16,
}

impl Field {
    pub fn new(q: u64) -> Result<Self, OrbitError> {
        let (p, f) = match factorize(q).as_slice() {
            [(p, f)] => (*p, *f),
            _ => return Err(OrbitError::InvalidParams(format!("{q} is not a prime power"))),
        };
        let ring = make_ring(p, f, 1, 1)?;
        let t = RingTable::new(&ring)?;
        let zero = ring.index_of(&ring.zero()) as u16;
        let one = ring.index_of(&ring.one()) as u16;
        Ok(Field { p, f, q, t, ring, zero, one })
    }
    pub fn zero(&self) -> u16 {
        self.zero
    }
    pub fn one(&self) -> u16 {
        self.one
    }
    pub fn add(&self, a: u16, b: u16) -> u16 {
        self.t.add(a, b)
    }
    pub fn sub(&self, a: u16, b: u16) -> u16 {
        self.t.sub(a, b)
    }
    pub fn mul(&self, a: u16, b: u16) -> u16 {
        self.t.mul(a, b)
    }
    pub fn neg(&self, a: u16) -> u16 {
        self.t.neg(a)
    }
    /// Inverse of a nonzero element.
    pub fn inv(&self, a: u16) -> u16 {
        self.t.inv(a)
    }
    pub fn from_int(&self, v: i64) -> u16 {
        self.ring.index_of(&self.ring.from_int(v)) as u16
    }
    pub fn elements(&self) -> impl Iterator<Item = u16> {
        (0..self.q as u16).map(|x| x)
    }
    /// An `F_p`-basis `1, w, ..., w^(f-1)`.
    pub fn additive_basis(&self) -> Vec<u16> {
        let w = self.ring.index_of(&self.ring.unramified_generator()) as u16;
        let mut out = vec![self.one];
        for _ in 1..self.f {
            out.push(self.mul(*out.last().unwrap(), w));
        }
        out
    }
    pub fn primitive_root(&self) -> u16 {
        let order = |x: u16| {
            let (mut y, mut k) = (x, 1u64);
            while y != self.one {
                y = self.mul(y, x);
                k += 1;
            }
            k
        };
        self.elements().find(|&x| x != self.zero && order(x) == self.q - 1).expect("cyclic unit group")
    }
}

type Mat = Vec<u16>;

fn mat_mul(fd: &Field, n: usize, a: &[u16], b: &[u16]) -> Mat {
    let mut c = vec![fd.zero(); n * n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i * n + k];
            if aik == fd.zero() {
                continue;
            }
            for j in 0..n {
                c[i * n + j] = fd.add(c[i * n + j], fd.mul(aik, b[k * n + j]));
            }
        }
    }
    c
}

fn identity(fd: &Field, n: usize) -> Mat {
    let mut m = vec![fd.zero(); n * n];
    for i in 0..n {
        m[i * n + i] = fd.one();
    }
    m
}

fn det(fd: &Field, n: usize, a: &[u16]) -> u16 {
    match n {
        1 => a[0],
        2 => fd.sub(fd.mul(a[0], a[3]), fd.mul(a[1], a[2])),
        3 => {
            let m = |i: usize, j: usize| a[i * 3 + j];
            let t = |x: u16, y: u16, z: u16| fd.mul(fd.mul(x, y), z);
            let pos = fd.add(fd.add(t(m(0, 0), m(1, 1), m(2, 2)), t(m(0, 1), m(1, 2), m(2, 0))), t(m(0, 2), m(1, 0), m(2, 1)));
            let neg = fd.add(fd.add(t(m(0, 2), m(1, 1), m(2, 0)), t(m(0, 0), m(1, 2), m(2, 1))), t(m(0, 1), m(1, 0), m(2, 2)));
            fd.sub(pos, neg)
        }
        _ => unreachable!("n <= 3"),
    }
}

fn trace(fd: &Field, n: usize, a: &[u16]) -> u16 {
    (0..n).fold(fd.zero(), |acc, i| fd.add(acc, a[i * n + i]))
}

/// Row-reduces in place; returns the pivot columns.
fn row_reduce(fd: &Field, rows: &mut [Vec<u16>]) -> Vec<usize> {
    let cols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(pr) = (r..rows.len()).find(|&i| rows[i][c] != fd.zero()) else { continue };
        rows.swap(r, pr);
        let inv = fd.inv(rows[r][c]);
        for x in rows[r].iter_mut() {
            *x = fd.mul(*x, inv);
        }
        for i in 0..rows.len() {
            if i != r && rows[i][c] != fd.zero() {
                let f = rows[i][c];
                for k in 0..cols {
                    let t = fd.mul(f, rows[r][k]);
                    rows[i][k] = fd.sub(rows[i][k], t);
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    pivots
}

fn rank(fd: &Field, rows: &[Vec<u16>]) -> usize {
    let mut r = rows.to_vec();
    row_reduce(fd, &mut r).len()
}

/// Basis of the null space of `rows` (vectors `v` with `rows v = 0`).
fn kernel(fd: &Field, rows: &[Vec<u16>], cols: usize) -> Vec<Vec<u16>> {
    let mut r = rows.to_vec();
    let pivots = row_reduce(fd, &mut r);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![fd.zero(); cols];
            v[fc] = fd.one();
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = fd.neg(r[i][fc]);
            }
            v
        })
        .collect()
}

/// Which space is classified.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum OrbitSpace {
    Sl2,
    Sl3,
    /// `{x in gl_3 : Tr x = -1}`.
    Gl3TraceMinusOne,
}

impl OrbitSpace {
    fn n(self) -> usize {
        match self {
            OrbitSpace::Sl2 => 2,
            _ => 3,
        }
    }
}

/// One orbit type.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbitReport {
    pub label: String,
    pub orbits: u64,
    pub orbit_size: u64,
    pub total: u64,
    /// `|Cen_GL(x)|`, counted on the commutant.
    pub centraliser_gl: u64,
    /// `|Cen_SL(x)|`, counted on the commutant.
    pub centraliser_sl: u64,
    /// `|SL| / |SL-orbit|`; must equal `centraliser_sl`.
    pub centraliser_sl_from_orbit: u64,
    /// `None` for the central type.
    pub regular: Option<bool>,
    pub representative: Vec<u16>,
}

pub fn gl_order(n: u32, q: u64) -> u64 {
    (0..n).map(|i| q.pow(n) - q.pow(i)).product()
}

pub fn sl_order(n: u32, q: u64) -> u64 {
    gl_order(n, q) / (q - 1)
}

struct Space<'a> {
    fd: &'a Field,
    n: usize,
    tr: u16,
}

impl Space<'_> {
    fn size(&self) -> u64 {
        self.fd.q.pow((self.n * self.n - 1) as u32)
    }
    fn decode(&self, mut key: u64) -> Mat {
        let nn = self.n * self.n;
        let mut m = vec![0u16; nn];
        for i in 0..nn - 1 {
            m[i] = (key % self.fd.q) as u16;
            key /= self.fd.q;
        }
        let partial = (0..self.n - 1).fold(self.fd.zero(), |a, i| self.fd.add(a, m[i * self.n + i]));
        m[nn - 1] = self.fd.sub(self.tr, partial);
        m
    }
    fn encode(&self, m: &[u16]) -> u64 {
        m[..m.len() - 1].iter().rev().fold(0u64, |acc, &d| acc * self.fd.q + d as u64)
    }
}

fn find(parent: &mut [u32], mut x: u32) -> u32 {
    while parent[x as usize] != x {
        parent[x as usize] = parent[parent[x as usize] as usize];
        x = parent[x as usize];
    }
    x
}

fn components(space: &Space, gens: &[(Mat, Mat)]) -> Vec<u32> {
    let total = space.size() as usize;
    let mut parent: Vec<u32> = (0..total as u32).collect();
    for key in 0..total as u64 {
        let x = space.decode(key);
        for (g, gi) in gens {
            let y = mat_mul(space.fd, space.n, &mat_mul(space.fd, space.n, g, &x), gi);
            let (a, b) = (find(&mut parent, key as u32), find(&mut parent, space.encode(&y) as u32));
            if a != b {
                parent[a.max(b) as usize] = a.min(b);
            }
        }
    }
    (0..total as u32).map(|k| find(&mut parent, k)).collect()
}

fn transvections(fd: &Field, n: usize) -> Vec<(Mat, Mat)> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            for &t in &fd.additive_basis() {
                let mut g = identity(fd, n);
                let mut gi = identity(fd, n);
                g[i * n + j] = t;
                gi[i * n + j] = fd.neg(t);
                out.push((g, gi));
            }
        }
    }
    out
}

/// `|{g in Cen_M(x) : det g != 0}|` and `|{... : det g = 1}|`.
fn centraliser_orders(fd: &Field, n: usize, x: &[u16]) -> (u64, u64) {
    // linear map g -> g x - x g on the n^2 entries
    let nn = n * n;
    let mut rows = vec![vec![fd.zero(); nn]; nn];
    for i in 0..n {
        for j in 0..n {
            let r = i * n + j;
            for k in 0..n {
                // (g x)_{ij} = sum_k g_{ik} x_{kj}
                rows[r][i * n + k] = fd.add(rows[r][i * n + k], x[k * n + j]);
                // (x g)_{ij} = sum_k x_{ik} g_{kj}
                rows[r][k * n + j] = fd.sub(rows[r][k * n + j], x[i * n + k]);
            }
        }
    }
    let basis = kernel(fd, &rows, nn);
    let dim = basis.len() as u32;
    let (mut gl, mut sl) = (0u64, 0u64);
    for idx in 0..fd.q.pow(dim) {
        let mut g = vec![fd.zero(); nn];
        let mut r = idx;
        for b in &basis {
            let c = (r % fd.q) as u16;
            r /= fd.q;
            if c != fd.zero() {
                for k in 0..nn {
                    g[k] = fd.add(g[k], fd.mul(c, b[k]));
                }
            }
        }
        let d = det(fd, n, &g);
        if d != fd.zero() {
            gl += 1;
        }
        if d == fd.one() {
            sl += 1;
        }
    }
    (gl, sl)
}

/// Whether the functional `y -> Tr(x y)` on `sl_n(F_q)` has a commutator
/// matrix of rank `2 rho`.
pub fn regularity(fd: &Field, n: usize, x: &[u16]) -> Result<bool, OrbitError> {
    let id = if n == 2 { BuiltinId::Sl2 } else { BuiltinId::Sl3 };
    let rho = generic_rank_rho(&LieLattice::builtin(id, fd.p, fd.f, 1)?.commutator_matrix())?.rho;
    let (_, basis) = sln_basis(n);
    let to_field = |m: &Vec<Vec<i64>>| -> Mat { m.iter().flatten().map(|&v| fd.from_int(v)).collect() };
    let b: Vec<Mat> = basis.iter().map(to_field).collect();
    let d = b.len();
    let mut r = vec![vec![fd.zero(); d]; d];
    for i in 0..d {
        for j in 0..d {
            let br = {
                let (u, v) = (mat_mul(fd, n, &b[i], &b[j]), mat_mul(fd, n, &b[j], &b[i]));
                u.iter().zip(&v).map(|(a, c)| fd.sub(*a, *c)).collect::<Mat>()
            };
            r[i][j] = trace(fd, n, &mat_mul(fd, n, x, &br));
        }
    }
    Ok(rank(fd, &r) >= 2 * rho)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Shape {
    Central,
    /// One eigenvalue of multiplicity `n`, minimal polynomial of degree `k`.
    Unipotent(usize),
    /// Eigenvalues `l, l, m`, semisimple or not.
    DoubleSemisimple,
    DoubleNonSemisimple,
    /// Distinct eigenvalues with `k` of them rational.
    Distinct(usize),
}

fn shape(fd: &Field, n: usize, x: &[u16]) -> Shape {
    let id = identity(fd, n);
    let shifted = |l: u16| -> Mat { x.iter().zip(&id).map(|(a, e)| fd.sub(*a, fd.mul(l, *e))).collect() };
    let is_zero = |m: &Mat| m.iter().all(|&v| v == fd.zero());
    // roots of the characteristic polynomial with multiplicities
    let mut roots: Vec<(u16, usize)> = Vec::new();
    for l in fd.elements() {
        let s = shifted(l);
        if det(fd, n, &s) == fd.zero() {
            // multiplicity via nullity of powers
            let mut pw = s.clone();
            for _ in 1..n {
                pw = mat_mul(fd, n, &pw, &s);
            }
            let rows: Vec<Vec<u16>> = pw.chunks(n).map(|c| c.to_vec()).collect();
            roots.push((l, n - rank(fd, &rows)));
        }
    }
    if roots.len() == 1 && roots[0].1 == n {
        let s = shifted(roots[0].0);
        if is_zero(&s) {
            return Shape::Central;
        }
        let mut k = 1;
        let mut pw = s.clone();
        while !is_zero(&pw) {
            pw = mat_mul(fd, n, &pw, &s);
            k += 1;
        }
        return Shape::Unipotent(k);
    }
    if let Some(&(l, 2)) = roots.iter().find(|r| r.1 == 2) {
        if n == 3 {
            let m = roots.iter().find(|r| r.1 == 1).expect("simple root").0;
            return if is_zero(&mat_mul(fd, n, &shifted(l), &shifted(m))) {
                Shape::DoubleSemisimple
            } else {
                Shape::DoubleNonSemisimple
            };
        }
    }
    Shape::Distinct(roots.len())
}

fn label(space: OrbitSpace, p: u64, n: usize, s: Shape) -> Option<&'static str> {
    use Shape::*;
    Some(match (space, p == 3, s) {
        (OrbitSpace::Sl2, _, Central) => "0",
        (OrbitSpace::Sl2, _, Unipotent(_)) => "1",
        (OrbitSpace::Sl2, _, Distinct(2)) => "2a",
        (OrbitSpace::Sl2, _, Distinct(0)) => "2b",
        (OrbitSpace::Sl3, false, Central) => "0",
        (OrbitSpace::Sl3, false, Unipotent(3)) => "1",
        (OrbitSpace::Sl3, false, Unipotent(2)) => "2",
        (OrbitSpace::Sl3, false, DoubleSemisimple) => "3",
        (OrbitSpace::Sl3, false, DoubleNonSemisimple) => "5",
        (OrbitSpace::Sl3, false, Distinct(3)) => "4a",
        (OrbitSpace::Sl3, false, Distinct(1)) => "4b",
        (OrbitSpace::Sl3, false, Distinct(0)) => "4c",
        (OrbitSpace::Sl3, true, Central) => "A",
        (OrbitSpace::Sl3, true, Unipotent(3)) => "B",
        (OrbitSpace::Sl3, true, Unipotent(2)) => "C",
        (OrbitSpace::Sl3, true, Distinct(3)) => "D",
        (OrbitSpace::Sl3, true, Distinct(1)) => "E",
        (OrbitSpace::Sl3, true, Distinct(0)) => "F",
        (OrbitSpace::Gl3TraceMinusOne, true, DoubleSemisimple) => "G",
        (OrbitSpace::Gl3TraceMinusOne, true, Distinct(3)) => "H",
        (OrbitSpace::Gl3TraceMinusOne, true, Distinct(1)) => "I",
        (OrbitSpace::Gl3TraceMinusOne, true, Distinct(0)) => "J",
        (OrbitSpace::Gl3TraceMinusOne, true, DoubleNonSemisimple) => "K",
        _ => {
            let _ = n;
            return None;
        }
    })
}

/// Label order of each space's table.
fn label_order(space: OrbitSpace, p: u64) -> &'static [&'static str] {
    match (space, p == 3) {
        (OrbitSpace::Sl2, _) => &["0", "1", "2a", "2b"],
        (OrbitSpace::Sl3, false) => &["0", "1", "2", "3", "4a", "4b", "4c", "5"],
        (OrbitSpace::Sl3, true) => &["A", "B", "C", "D", "E", "F"],
        (OrbitSpace::Gl3TraceMinusOne, _) => &["G", "H", "I", "J", "K"],
    }
}

/// Classifies the orbits of `space` over `F_q`.
pub fn classify_space(space: OrbitSpace, q: u64, budget: u64) -> Result<Vec<OrbitReport>, OrbitError> {
    let fd = Field::new(q)?;
    let n = space.n();
    if fd.p == 2 {
        return Err(OrbitError::InvalidParams("odd characteristic required".into()));
    }
    if space == OrbitSpace::Gl3TraceMinusOne && fd.p != 3 {
        return Err(OrbitError::InvalidParams("the trace -1 slice is used in characteristic 3".into()));
    }
    let tr = if space == OrbitSpace::Gl3TraceMinusOne { fd.from_int(-1) } else { fd.zero() };
    let sp = Space { fd: &fd, n, tr };
    if sp.size() > budget {
        return Err(OrbitError::BudgetExceeded { required: sp.size(), budget });
    }
    let sl_gens = transvections(&fd, n);
    let mut gl_gens = sl_gens.clone();
    let z = fd.primitive_root();
    let mut d = identity(&fd, n);
    let mut di = identity(&fd, n);
    d[0] = z;
    di[0] = fd.inv(z);
    gl_gens.push((d, di));
    let gl_comp = components(&sp, &gl_gens);
    let sl_comp = components(&sp, &sl_gens);
    let mut gl_sizes: BTreeMap<u32, u64> = BTreeMap::new();
    let mut sl_sizes: BTreeMap<u32, u64> = BTreeMap::new();
    for (&a, &b) in gl_comp.iter().zip(&sl_comp) {
        *gl_sizes.entry(a).or_default() += 1;
        *sl_sizes.entry(b).or_default() += 1;
    }
    let slo = sl_order(n as u32, q);
    let mut rows: BTreeMap<&'static str, OrbitReport> = BTreeMap::new();
    for (&root, &size) in &gl_sizes {
        let x = sp.decode(root as u64);
        let sh = shape(&fd, n, &x);
        let lab = label(space, fd.p, n, sh).ok_or_else(|| OrbitError::InvalidParams(format!("unexpected shape {sh:?}")))?;
        let regular = if sh == Shape::Central { None } else { Some(regularity(&fd, n, &x)?) };
        let slsize = sl_sizes[&sl_comp[root as usize]];
        match rows.get_mut(lab) {
            Some(r) => {
                if r.orbit_size != size {
                    return Err(OrbitError::NonUniform(lab.into()));
                }
                r.orbits += 1;
                r.total += size;
            }
            None => {
                let (cgl, csl) = centraliser_orders(&fd, n, &x);
                rows.insert(
                    lab,
                    OrbitReport {
                        label: lab.into(),
                        orbits: 1,
                        orbit_size: size,
                        total: size,
                        centraliser_gl: cgl,
                        centraliser_sl: csl,
                        centraliser_sl_from_orbit: slo / slsize,
                        regular,
                        representative: x,
                    },
                );
            }
        }
    }
    Ok(label_order(space, fd.p).iter().filter_map(|l| rows.remove(l)).collect())
}

/// Orbits of `sl_2` or `sl_3` over `F_q`.
pub fn classify(algebra: BuiltinId, q: u64, budget: u64) -> Result<Vec<OrbitReport>, OrbitError> {
    match algebra {
        BuiltinId::Sl2 => classify_space(OrbitSpace::Sl2, q, budget),
        BuiltinId::Sl3 => classify_space(OrbitSpace::Sl3, q, budget),
        other => Err(OrbitError::InvalidParams(format!("no orbit classification for {}", other.name()))),
    }
}

/// Orbits of the trace `-1` slice of `gl_3(F_q)`, `q` a power of 3.
pub fn classify_trace_slice(q: u64, budget: u64) -> Result<Vec<OrbitReport>, OrbitError> {
    classify_space(OrbitSpace::Gl3TraceMinusOne, q, budget)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TableId {
    T1,
    T2,
    T3,
    T4,
    AppB,
}

impl std::str::FromStr for TableId {
    type Err = OrbitError;
    fn from_str(s: &str) -> Result<Self, OrbitError> {
        match s.to_ascii_uppercase().as_str() {
            "T1" | "1" => Ok(TableId::T1),
            "T2" | "2" => Ok(TableId::T2),
            "T3" | "3" => Ok(TableId::T3),
            "T4" | "4" => Ok(TableId::T4),
            "APPB" | "B" => Ok(TableId::AppB),
            _ => Err(OrbitError::InvalidParams(format!("unknown table {s}"))),
        }
    }
}

/// A table row evaluated at `q`; `None` where the table is silent.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExpectedRow {
    pub label: &'static str,
    pub orbits: Option<u64>,
    pub orbit_size: Option<u64>,
    /// Total, modulo scalars for the characteristic-3 tables of `sl_3`/`gl_3`.
    pub total: Option<u64>,
    pub centraliser_sl: Option<u64>,
    pub centraliser_gl: Option<u64>,
    pub regular: Option<bool>,
}

fn exact(num: u64, den: u64) -> Option<u64> {
    (num % den == 0).then(|| num / den)
}

fn row(label: &'static str) -> ExpectedRow {
    ExpectedRow { label, orbits: None, orbit_size: None, total: None, centraliser_sl: None, centraliser_gl: None, regular: None }
}

/// The rows of a table at `q`.
pub fn expected_rows(table: TableId, q: u64) -> Result<Vec<ExpectedRow>, OrbitError> {
    let p = factorize(q).first().map(|x| x.0).unwrap_or(0);
    let need = |ok: bool, why: &str| if ok { Ok(()) } else { Err(OrbitError::InvalidParams(why.into())) };
    let bad = || OrbitError::InvalidParams(format!("q = {q} does not divide the table entries"));
    let rows = match table {
        TableId::T1 => {
            need(p > 2, "Table 1 needs odd q")?;
            let h = |x: u64| exact(x, 2).ok_or_else(bad);
            vec![
                ExpectedRow { orbits: Some(1), orbit_size: Some(1), total: Some(1), ..row("0") },
                ExpectedRow { orbits: Some(1), orbit_size: Some(q * q - 1), total: Some(q * q - 1), regular: Some(true), ..row("1") },
                ExpectedRow { orbits: Some(h(q - 1)?), orbit_size: Some(q * q + q), total: Some(h((q * q - 1) * q)?), regular: Some(true), ..row("2a") },
                ExpectedRow { orbits: Some(h(q - 1)?), orbit_size: Some(q * q - q), total: Some(h((q - 1) * (q - 1) * q)?), regular: Some(true), ..row("2b") },
            ]
        }
        TableId::T2 => {
            need(p > 2, "Table 2 needs odd q")?;
            vec![
                ExpectedRow { centraliser_sl: Some(q * (q * q - 1)), ..row("0") },
                ExpectedRow { centraliser_sl: Some(2 * q), regular: Some(true), ..row("1") },
                ExpectedRow { centraliser_sl: Some(q - 1), regular: Some(true), ..row("2a") },
                ExpectedRow { centraliser_sl: Some(q + 1), regular: Some(true), ..row("2b") },
            ]
        }
        TableId::T3 => {
            need(p == 3, "Table 3 needs q a power of 3")?;
            let (q2, q3) = (q * q, q * q * q);
            vec![
                ExpectedRow { orbits: Some(q), orbit_size: Some(1), total: Some(1), ..row("A") },
                ExpectedRow { orbits: Some(q), orbit_size: Some((q3 - 1) * (q2 - 1) * q), total: Some((q3 - 1) * (q2 - 1) * q), regular: Some(false), ..row("B") },
                ExpectedRow { orbits: Some(q), orbit_size: Some((q3 - 1) * (q + 1)), total: Some((q3 - 1) * (q + 1)), regular: Some(false), ..row("C") },
                ExpectedRow {
                    orbits: Some(exact((q - 1) * q, 6).ok_or_else(bad)?),
                    orbit_size: Some((q2 + q + 1) * (q + 1) * q3),
                    total: Some(exact((q3 - 1) * (q + 1) * q3, 6).ok_or_else(bad)?),
                    regular: Some(true),
                    ..row("D")
                },
                ExpectedRow {
                    orbits: Some(exact((q - 1) * q, 2).ok_or_else(bad)?),
                    orbit_size: Some((q3 - 1) * q3),
                    total: Some(exact((q3 - 1) * (q - 1) * q3, 2).ok_or_else(bad)?),
                    regular: Some(true),
                    ..row("E")
                },
                ExpectedRow {
                    orbits: Some(exact((q - 1) * q, 3).ok_or_else(bad)?),
                    orbit_size: Some((q2 - 1) * (q - 1) * q3),
                    total: Some(exact((q2 - 1) * (q - 1) * (q - 1) * q3, 3).ok_or_else(bad)?),
                    regular: Some(true),
                    ..row("F")
                },
            ]
        }
        TableId::T4 => {
            need(p == 3, "Table 4 needs q a power of 3")?;
            let (q2, q3) = (q * q, q * q * q);
            vec![
                ExpectedRow { orbits: Some(q), orbit_size: Some((q2 + q + 1) * q2), total: Some((q2 + q + 1) * q2), regular: Some(false), ..row("G") },
                ExpectedRow {
                    orbits: Some(exact((q - 3) * q, 6).ok_or_else(bad)?),
                    orbit_size: Some((q2 + q + 1) * (q + 1) * q3),
                    total: Some(exact((q - 3) * (q2 + q + 1) * (q + 1) * q3, 6).ok_or_else(bad)?),
                    regular: Some(true),
                    ..row("H")
                },
                ExpectedRow {
                    orbits: Some(exact((q - 1) * q, 2).ok_or_else(bad)?),
                    orbit_size: Some((q3 - 1) * q3),
                    total: Some(exact((q3 - 1) * (q - 1) * q3, 2).ok_or_else(bad)?),
                    regular: Some(true),
                    ..row("I")
                },
                ExpectedRow {
                    orbits: Some(exact(q2, 3).ok_or_else(bad)?),
                    orbit_size: Some((q2 - 1) * (q - 1) * q3),
                    total: Some(exact((q2 - 1) * (q - 1) * q3 * q, 3).ok_or_else(bad)?),
                    regular: Some(true),
                    ..row("J")
                },
                ExpectedRow { orbits: Some(q), orbit_size: Some((q3 - 1) * (q + 1) * q2), total: Some((q3 - 1) * (q + 1) * q2), regular: Some(true), ..row("K") },
            ]
        }
        TableId::AppB => {
            need(p != 3 && p > 2, "the generic sl3 classification needs characteristic > 3")?;
            // centralisers in GL_3 read off the displayed centraliser shapes
            let (q2, q3) = (q * q, q * q * q);
            let gl = gl_order(3, q);
            let r = |label, cen: u64, regular: Option<bool>| ExpectedRow {
                orbit_size: Some(gl / cen),
                centraliser_gl: Some(cen),
                regular,
                ..row(label)
            };
            vec![
                r("0", gl, None),
                r("1", (q - 1) * q2, Some(true)),
                r("2", (q - 1) * (q - 1) * q3, Some(false)),
                r("3", (q2 - 1) * (q2 - q) * (q - 1), Some(false)),
                r("4a", (q - 1).pow(3), Some(true)),
                r("4b", (q2 - 1) * (q - 1), Some(true)),
                r("4c", q3 - 1, Some(true)),
                r("5", (q - 1) * (q - 1) * q, Some(true)),
            ]
        }
    };
    Ok(rows)
}

#[derive(Debug, Clone, Serialize)]
pub struct RowCheck {
    pub label: &'static str,
    pub expected: ExpectedRow,
    pub observed: Option<OrbitReport>,
    pub mismatches: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct TableCheck {
    pub table: TableId,
    pub q: u64,
    pub rows: Vec<RowCheck>,
    /// Totals add up to the size of the space.
    pub partition: bool,
    /// `orbit size * |Cen_GL| = |GL|` and both `SL`-centraliser counts agree.
    pub orbit_stabilizer: bool,
    /// Labels found that the table does not list.
    pub extra_labels: Vec<String>,
}

impl TableCheck {
    pub fn passed(&self) -> bool {
        self.partition && self.orbit_stabilizer && self.extra_labels.is_empty() && self.rows.iter().all(|r| r.mismatches.is_empty())
    }
}

/// Classifies and compares against the table row by row.
pub fn verify_table(table: TableId, q: u64, budget: u64) -> Result<TableCheck, OrbitError> {
    let expected = expected_rows(table, q)?;
    let (space, n) = match table {
        TableId::T1 | TableId::T2 => (OrbitSpace::Sl2, 2u32),
        TableId::T3 | TableId::AppB => (OrbitSpace::Sl3, 3),
        TableId::T4 => (OrbitSpace::Gl3TraceMinusOne, 3),
    };
    let reports = classify_space(space, q, budget)?;
    let modulo_scalars = matches!(table, TableId::T3 | TableId::T4);
    let space_size = q.pow(n * n - 1);
    let partition = reports.iter().map(|r| r.total).sum::<u64>() == space_size;
    let gl = gl_order(n, q);
    let orbit_stabilizer =
        reports.iter().all(|r| r.orbit_size * r.centraliser_gl == gl && r.centraliser_sl == r.centraliser_sl_from_orbit);
    let mut rows = Vec::new();
    for e in &expected {
        let obs = reports.iter().find(|r| r.label == e.label).cloned();
        let mut mm = Vec::new();
        let zero_expected = e.orbits == Some(0);
        match &obs {
            None if zero_expected => {}
            None => mm.push("type not found".to_string()),
            Some(o) => {
                let total = if modulo_scalars { o.total / q } else { o.total };
                let mut cmp = |name: &str, want: Option<u64>, got: u64| {
                    if let Some(w) = want {
                        if w != got {
                            mm.push(format!("{name}: expected {w}, found {got}"));
                        }
                    }
                };
                cmp("orbits", e.orbits, o.orbits);
                cmp("orbit size", e.orbit_size, o.orbit_size);
                cmp("total", e.total, total);
                cmp("SL centraliser", e.centraliser_sl, o.centraliser_sl);
                cmp("GL centraliser", e.centraliser_gl, o.centraliser_gl);
                if let Some(rg) = e.regular {
                    if o.regular != Some(rg) {
                        mm.push(format!("regularity: expected {rg}, found {:?}", o.regular));
                    }
                }
            }
        }
        rows.push(RowCheck { label: e.label, expected: e.clone(), observed: obs, mismatches: mm });
    }
    let extra_labels =
        reports.iter().filter(|r| !expected.iter().any(|e| e.label == r.label)).map(|r| r.label.clone()).collect();
    Ok(TableCheck { table, q, rows, partition, orbit_stabilizer, extra_labels })
}

/// CSV with the columns of the tables: type, regularity, orbit count, orbit
/// size, total, and the centraliser orders.
pub fn to_csv(reports: &[OrbitReport]) -> String {
    let mut s = String::from("type,regularity,orbits,orbit_size,total,centraliser_sl,centraliser_gl\n");
    for r in reports {
        let reg = match r.regular {
            Some(true) => "regular",
            Some(false) => "irregular",
            None => "-",
        };
        let _ = writeln!(s, "{},{},{},{},{},{},{}", r.label, reg, r.orbits, r.orbit_size, r.total, r.centraliser_sl, r.centraliser_gl);
    }
    s
}

/// Outcome of the centraliser lifting check on `sl_2(Z/p^2)`.
#[derive(Debug, Clone, Serialize)]
pub struct LiftingCheck {
    pub p: u64,
    pub samples: usize,
    pub failures: usize,
}

/// For random primitive `x` in `sl_2(Z/p^2)`, checks that reduction modulo
/// `p` maps `Cen(x)` onto the centraliser of `x mod p` in `SL_2(F_p)`; with
/// the congruence kernel this is `Cen(x mod p) = Cen(x) K`.
pub fn lifting_lemma_check(p: u64, samples: usize, seed: u64) -> Result<LiftingCheck, OrbitError> {
    let ring = make_ring(p, 1, 1, 2)?;
    let t = RingTable::new(&ring)?;
    let size = ring.cardinality() as u16;
    let one = t.one();
    let red = |a: u16| t.reduce_index(a, 1) as u16;
    // SL_2(Z/p^2) as (a, b, c, d)
    let mut group: Vec<[u16; 4]> = Vec::new();
    for a in 0..size {
        for b in 0..size {
            for c in 0..size {
                for d in 0..size {
                    if t.sub(t.mul(a, d), t.mul(b, c)) == one {
                        group.push([a, b, c, d]);
                    }
                }
            }
        }
    }
    let commutes = |g: &[u16; 4], x: &[u16; 3], modp: bool| -> bool {
        // x = [[x0, x1], [x2, -x0]]
        let xm = [x[0], x[1], x[2], t.neg(x[0])];
        let m = |u: &[u16; 4], v: &[u16; 4]| -> [u16; 4] {
            [
                t.add(t.mul(u[0], v[0]), t.mul(u[1], v[2])),
                t.add(t.mul(u[0], v[1]), t.mul(u[1], v[3])),
                t.add(t.mul(u[2], v[0]), t.mul(u[3], v[2])),
                t.add(t.mul(u[2], v[1]), t.mul(u[3], v[3])),
            ]
        };
        let (l, r) = (m(g, &xm), m(&xm, g));
        if modp {
            l.iter().zip(&r).all(|(a, b)| red(*a) == red(*b))
        } else {
            l == r
        }
    };
    let mut rng = StdRng::seed_from_u64(seed);
    let mut failures = 0;
    for _ in 0..samples {
        let x = loop {
            let c: [u16; 3] = [rng.gen_range(0..size), rng.gen_range(0..size), rng.gen_range(0..size)];
            if c.iter().any(|&v| t.val(v) == 0) {
                break c;
            }
        };
        let reduce4 = |g: &[u16; 4]| [red(g[0]), red(g[1]), red(g[2]), red(g[3])];
        let mut lifted: Vec<[u16; 4]> = group.iter().filter(|g| commutes(g, &x, false)).map(reduce4).collect();
        let mut residual: Vec<[u16; 4]> = group.iter().filter(|g| commutes(g, &x, true)).map(reduce4).collect();
        lifted.sort_unstable();
        lifted.dedup();
        residual.sort_unstable();
        residual.dedup();
        if lifted != residual {
            failures += 1;
        }
    }
    Ok(LiftingCheck { p, samples, failures })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sl2_q5_types() {
        let r = classify(BuiltinId::Sl2, 5, ORBIT_BUDGET).unwrap();
        let a = r.iter().find(|x| x.label == "2a").unwrap();
        assert_eq!((a.orbits, a.orbit_size, a.total), (2, 30, 60));
    }

    #[test]
    fn sl2_q9_nilpotent_centraliser() {
        let r = classify(BuiltinId::Sl2, 9, ORBIT_BUDGET).unwrap();
        let one = r.iter().find(|x| x.label == "1").unwrap();
        assert_eq!(one.centraliser_sl, 18);
    }

    #[test]
    fn tables_one_two() {
        for q in [3, 5, 7, 9] {
            assert!(verify_table(TableId::T1, q, ORBIT_BUDGET).unwrap().passed(), "T1 q={q}");
            assert!(verify_table(TableId::T2, q, ORBIT_BUDGET).unwrap().passed(), "T2 q={q}");
        }
        let t2 = verify_table(TableId::T2, 3, ORBIT_BUDGET).unwrap();
        let cen: Vec<u64> = t2.rows.iter().map(|r| r.observed.as_ref().unwrap().centraliser_sl).collect();
        assert_eq!(cen, vec![24, 6, 2, 4]);
    }

    #[test]
    fn characteristic_three_tables() {
        let t3 = verify_table(TableId::T3, 3, ORBIT_BUDGET).unwrap();
        assert!(t3.passed(), "{t3:?}");
        let b = t3.rows.iter().find(|r| r.label == "B").unwrap().observed.clone().unwrap();
        assert_eq!(b.total / 3, 624);
        let t4 = verify_table(TableId::T4, 3, ORBIT_BUDGET).unwrap();
        assert!(t4.passed(), "{t4:?}");
        let mod_scalars: u64 = t4.rows.iter().filter_map(|r| r.observed.as_ref()).map(|o| o.total / 3).sum();
        assert_eq!(mod_scalars, 2187);
        let g = t4.rows.iter().find(|r| r.label == "G").unwrap().observed.clone().unwrap();
        assert_eq!(g.total / 3, 117);
        let k = t4.rows.iter().find(|r| r.label == "K").unwrap().observed.clone().unwrap();
        assert_eq!(k.total / 3, 936);
    }

    #[test]
    fn generic_sl3_at_five() {
        let t = verify_table(TableId::AppB, 5, ORBIT_BUDGET).unwrap();
        assert!(t.passed(), "{t:?}");
        assert_eq!(t.rows.len(), 8);
    }

    #[test]
    fn regularity_examples() {
        let fd = Field::new(7).unwrap();
        let nil = vec![fd.zero(), fd.one(), fd.zero(), fd.zero()];
        assert!(regularity(&fd, 2, &nil).unwrap());
        let f3 = Field::new(3).unwrap();
        let (z, o) = (f3.zero(), f3.one());
        let jordan = vec![z, o, z, z, z, o, z, z, z];
        assert!(!regularity(&f3, 3, &jordan).unwrap());
        let f5 = Field::new(5).unwrap();
        let (z, o) = (f5.zero(), f5.one());
        let square_zero = vec![z, o, z, z, z, z, z, z, z];
        assert!(!regularity(&f5, 3, &square_zero).unwrap());
    }

    #[test]
    fn csv_rows() {
        let r = classify(BuiltinId::Sl2, 3, ORBIT_BUDGET).unwrap();
        let csv = to_csv(&r);
        assert_eq!(csv.lines().count(), 5);
        assert!(csv.contains("2b,regular,1,6,6,4,8"));
    }

    #[test]
    fn lifting_lemma_small() {
        let c = lifting_lemma_check(3, 10, 7).unwrap();
        assert_eq!(c.failures, 0);
    }
}
