//! Finite congruence quotients as explicit groups, their conjugacy classes,
//! and irreducible character degrees by the Dixon–Schneider method over a
//! prime field `F_l` with `l = 1 mod exp(G)`.
//!
//! Characters appear as common eigenvectors `w` of the class matrices,
//! `w_k = |C_k| chi(g_k) / chi(1)`; the degree follows from
//! `sum_k w_k w_k' / |C_k| = |G| / chi(1)^2`, read modulo `l` and lifted
//! uniquely since `chi(1)^2 <= |G| < l^2 / 4`.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigUint;
use num_integer::Integer;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::dirichlet::factorize;
use crate::kirillov::TruncatedSeries;
use crate::qring::{is_prime, make_ring, RingError, RingTable};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("group of order {required} exceeds the budget {budget}")]
    BudgetExceeded { required: u64, budget: u64 },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("no prime l = 1 mod {0} found")]
    NoPrime(u64),
    #[error("eigenspaces did not split after {0} rounds")]
    NoSplit(usize),
    #[error("inconsistent character data: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// Default cap on group orders.
pub const GROUP_BUDGET: u64 = 200_000;

/// The built-in groups.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum GroupId {
    /// `SL_2(o/p^k)`, `o` with residue field `F_(p^f)` and ramification `e`.
    Sl2 { p: u64, f: u32, e: u32, k: u32 },
    /// Kernel of `SL_2(o/p^k) -> SL_2(F_q)`.
    Sl2Congruence { p: u64, f: u32, e: u32, k: u32 },
    /// Image of the norm-one group of the maximal quaternion order `R` in `(R/P^k)^*`, `o` unramified.
    Sl1 { p: u64, f: u32, k: u32 },
    Cyclic { n: u64 },
}

impl GroupId {
    pub fn name(&self) -> String {
        match self {
            GroupId::Sl2 { p, f, e, k } => format!("SL2(o/p^{k}) [p={p}, f={f}, e={e}]"),
            GroupId::Sl2Congruence { p, f, e, k } => format!("SL2^1(o/p^{k}) [p={p}, f={f}, e={e}]"),
            GroupId::Sl1 { p, f, k } => format!("SL1(R/P^{k}) [p={p}, f={f}]"),
            GroupId::Cyclic { n } => format!("C{n}"),
        }
    }
}

enum Model {
    /// Entries `(a, b, c, d)` packed base `s`.
    Sl2 { t: RingTable, s: u64 },
    /// `a + b Pi` with `a` in `O_L/p^ca`, `b` in `O_L/p^cb`, `Pi x = sigma(x) Pi`, `Pi^2 = p`.
    Sl1 { ta: RingTable, tb: Option<RingTable>, sa: u64, sig_a: Vec<u16>, sig_b: Vec<u16>, lift: u64, p_a: u16, cb: u32 },
    Cyclic { n: u64 },
}

impl Model {
    fn mul(&self, x: u64, y: u64) -> u64 {
        match self {
            Model::Sl2 { t, s } => {
                let u = unpack4(x, *s);
                let v = unpack4(y, *s);
                let e = |i: usize, j: usize| t.add(t.mul(u[i], v[j]), t.mul(u[i + 1], v[j + 2]));
                pack4([e(0, 0), e(0, 1), e(2, 0), e(2, 1)], *s)
            }
            Model::Sl1 { ta, tb, sa, sig_a, sig_b, lift, p_a, cb, .. } => {
                let (a, b) = ((x % sa) as u16, (x / sa) as u16);
                let (c, d) = ((y % sa) as u16, (y / sa) as u16);
                let lb = |z: u16| (z as u64 * lift) as u16;
                let first = ta.add(ta.mul(a, c), ta.mul(*p_a, ta.mul(lb(b), sig_a[lb(d) as usize])));
                let second = match tb {
                    Some(tb) => {
                        let rd = |z: u16| ta.reduce_index(z, *cb) as u16;
                        tb.add(tb.mul(rd(a), d), tb.mul(b, sig_b[rd(c) as usize]))
                    }
                    None => 0,
                };
                first as u64 + sa * second as u64
            }
            Model::Cyclic { n } => (x + y) % n,
        }
    }

    fn inv(&self, x: u64) -> u64 {
        match self {
            Model::Sl2 { t, s } => {
                let u = unpack4(x, *s);
                pack4([u[3], t.neg(u[1]), t.neg(u[2]), u[0]], *s)
            }
            Model::Sl1 { tb, sa, sig_a, .. } => {
                let (a, b) = ((x % sa) as u16, (x / sa) as u16);
                let nb = tb.as_ref().map_or(0, |t| t.neg(b));
                sig_a[a as usize] as u64 + sa * nb as u64
            }
            Model::Cyclic { n } => (n - x) % n,
        }
    }
}

fn unpack4(mut x: u64, s: u64) -> [u16; 4] {
    let mut out = [0u16; 4];
    for o in out.iter_mut() {
        *o = (x % s) as u16;
        x /= s;
    }
    out
}

fn pack4(u: [u16; 4], s: u64) -> u64 {
    u.iter().rev().fold(0, |acc, &d| acc * s + d as u64)
}

enum Lookup {
    Dense(Vec<u32>),
    Hashed(HashMap<u64, u32>),
}

impl Lookup {
    fn get(&self, code: u64) -> Option<u32> {
        match self {
            Lookup::Dense(v) => v.get(code as usize).copied().filter(|&i| i != u32::MAX),
            Lookup::Hashed(h) => h.get(&code).copied(),
        }
    }
}

/// An explicit finite group.
pub struct FiniteGroup {
    pub id: GroupId,
    model: Model,
    pub elements: Vec<u64>,
    lookup: Lookup,
    pub identity: u32,
}

impl FiniteGroup {
    pub fn order(&self) -> u64 {
        self.elements.len() as u64
    }
    /// Index of the product of the elements with indices `a` and `b`.
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        let c = self.model.mul(self.elements[a as usize], self.elements[b as usize]);
        self.lookup.get(c).expect("closed under multiplication")
    }
    pub fn inv(&self, a: u32) -> u32 {
        self.lookup.get(self.model.inv(self.elements[a as usize])).expect("closed under inversion")
    }
    pub fn element_order(&self, a: u32) -> u64 {
        let (mut x, mut k) = (a, 1);
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }
    /// Greedy generating set, drawn in a seeded random order.
    pub fn generators(&self, seed: u64) -> Vec<u32> {
        let n = self.elements.len();
        let mut inside = vec![false; n];
        inside[self.identity as usize] = true;
        let mut members = vec![self.identity];
        let mut gens: Vec<u32> = Vec::new();
        let mut order: Vec<u32> = (0..n as u32).collect();
        order.shuffle(&mut StdRng::seed_from_u64(seed));
        for g in order {
            if inside[g as usize] {
                continue;
            }
            gens.push(g);
            // close <members, gens> under right multiplication by the generators
            let mut frontier = members.clone();
            while let Some(x) = frontier.pop() {
                for &h in &gens {
                    let y = self.mul(x, h);
                    if !inside[y as usize] {
                        inside[y as usize] = true;
                        members.push(y);
                        frontier.push(y);
                    }
                }
            }
            if members.len() == n {
                break;
            }
        }
        gens
    }
}

/// Builds the group `id`.
pub fn build_group(id: GroupId, budget: u64) -> Result<FiniteGroup, GroupError> {
    let (model, mut elements) = match id {
        GroupId::Sl2 { p, f, e, k } | GroupId::Sl2Congruence { p, f, e, k } => {
            if k == 0 {
                return Err(GroupError::InvalidParams("k >= 1".into()));
            }
            let ring = make_ring(p, f, e, k)?;
            let s = ring.cardinality();
            let expected = sl2_order(s, p.pow(f));
            let congruence = matches!(id, GroupId::Sl2Congruence { .. });
            let required = if congruence { expected / sl2_order(p.pow(f), p.pow(f)) } else { expected };
            if required > budget {
                return Err(GroupError::BudgetExceeded { required, budget });
            }
            let t = RingTable::new(&ring)?;
            let one = t.one();
            let red = |x: u16| t.reduce_index(x, 1);
            let (r0, r1) = (red(0), red(one));
            let mut el = Vec::new();
            for a in 0..s as u16 {
                for c in 0..s as u16 {
                    let (ua, uc) = (t.val(a) == 0, t.val(c) == 0);
                    if !ua && !uc {
                        continue;
                    }
                    if congruence && (red(a) != r1 || red(c) != r0) {
                        continue;
                    }
                    for x in 0..s as u16 {
                        let (b, d) = if ua {
                            (x, t.mul(t.add(one, t.mul(x, c)), t.inv(a)))
                        } else {
                            (t.mul(t.sub(t.mul(a, x), one), t.inv(c)), x)
                        };
                        if congruence && (red(b) != r0 || red(d) != r1) {
                            continue;
                        }
                        el.push(pack4([a, b, c, d], s));
                    }
                }
            }
            (Model::Sl2 { t, s }, el)
        }
        GroupId::Sl1 { p, f, k } => {
            if k == 0 || p == 2 {
                return Err(GroupError::InvalidParams("k >= 1 and odd p".into()));
            }
            let q = p.pow(f);
            let (ca, cb) = ((k + 1) / 2, k / 2);
            let required = (q + 1) * (1..k).map(|m| if m % 2 == 1 { q * q } else { q }).product::<u64>();
            if required > budget {
                return Err(GroupError::BudgetExceeded { required, budget });
            }
            let ra = make_ring(p, 2 * f, 1, ca)?;
            let ta = RingTable::new(&ra)?;
            let sa = ra.cardinality();
            let frob = |r: &crate::qring::QuotientRing| -> Vec<u16> {
                let ql = r.q();
                let perm: Vec<u64> = (0..ql).map(|d| r.digits(&r.pow(&r.teich_elem(d), q))[0]).collect();
                (0..r.cardinality())
                    .map(|i| {
                        let x = r.from_index(i);
                        let dg: Vec<u64> = r.digits(&x).iter().map(|&d| perm[d as usize]).collect();
                        r.index_of(&r.from_digits(&dg)) as u16
                    })
                    .collect()
            };
            let sig_a = frob(&ra);
            let (tb, sb, sig_b) = if cb > 0 {
                let rb = make_ring(p, 2 * f, 1, cb)?;
                let sb = rb.cardinality();
                (Some(RingTable::new(&rb)?), sb, frob(&rb))
            } else {
                (None, 1, vec![0])
            };
            let lift = (q * q).pow(ca - cb);
            let p_a = ra.index_of(&ra.from_int(p as i64)) as u16;
            let one = ta.one();
            let mut el = Vec::new();
            for a in 0..sa as u16 {
                for b in 0..sb as u16 {
                    let lb = (b as u64 * lift) as u16;
                    let norm = ta.sub(ta.mul(a, sig_a[a as usize]), ta.mul(p_a, ta.mul(lb, sig_a[lb as usize])));
                    if norm == one {
                        el.push(a as u64 + sa * b as u64);
                    }
                }
            }
            (Model::Sl1 { ta, tb, sa, sig_a, sig_b, lift, p_a, cb }, el)
        }
        GroupId::Cyclic { n } => {
            if n == 0 || n > budget {
                return Err(GroupError::BudgetExceeded { required: n, budget });
            }
            (Model::Cyclic { n }, (0..n).collect())
        }
    };
    elements.sort_unstable();
    let max = elements.last().copied().unwrap_or(0);
    let lookup = if max < 1 << 24 {
        let mut v = vec![u32::MAX; max as usize + 1];
        for (i, &c) in elements.iter().enumerate() {
            v[c as usize] = i as u32;
        }
        Lookup::Dense(v)
    } else {
        Lookup::Hashed(elements.iter().enumerate().map(|(i, &c)| (c, i as u32)).collect())
    };
    let id_code = match &model {
        Model::Sl2 { t, s } => pack4([t.one(), 0, 0, t.one()], *s),
        Model::Sl1 { ta, .. } => ta.one() as u64,
        Model::Cyclic { .. } => 0,
    };
    let identity = lookup.get(id_code).ok_or_else(|| GroupError::Inconsistent("identity missing".into()))?;
    Ok(FiniteGroup { id, model, elements, lookup, identity })
}

/// `|SL_2(o/p^k)|` for a ring of size `s` with residue field of size `q`.
fn sl2_order(s: u64, q: u64) -> u64 {
    // s^3 (1 - q^-2)
    s * s * s / (q * q) * (q * q - 1)
}

/// Conjugacy classes; the identity class comes first.
#[derive(Debug, Clone)]
pub struct Classes {
    pub class_of: Vec<u32>,
    pub reps: Vec<u32>,
    pub sizes: Vec<u64>,
}

impl Classes {
    pub fn count(&self) -> usize {
        self.reps.len()
    }
}

pub fn conjugacy_classes(g: &FiniteGroup) -> Classes {
    let n = g.elements.len();
    let gens = g.generators(1);
    let gen_inv: Vec<u32> = gens.iter().map(|&h| g.inv(h)).collect();
    let mut parent: Vec<u32> = (0..n as u32).collect();
    fn find(p: &mut [u32], mut x: u32) -> u32 {
        while p[x as usize] != x {
            p[x as usize] = p[p[x as usize] as usize];
            x = p[x as usize];
        }
        x
    }
    for x in 0..n as u32 {
        for (h, hi) in gens.iter().zip(&gen_inv) {
            let y = g.mul(g.mul(*h, x), *hi);
            let (a, b) = (find(&mut parent, x), find(&mut parent, y));
            if a != b {
                parent[a.max(b) as usize] = a.min(b);
            }
        }
    }
    let roots: Vec<u32> = (0..n as u32).map(|x| find(&mut parent, x)).collect();
    let mut index: BTreeMap<u32, u32> = BTreeMap::new();
    let id_root = roots[g.identity as usize];
    index.insert(id_root, 0);
    let mut reps = vec![g.identity];
    for (x, &r) in roots.iter().enumerate() {
        if !index.contains_key(&r) {
            index.insert(r, reps.len() as u32);
            reps.push(x as u32);
        }
    }
    let class_of: Vec<u32> = roots.iter().map(|r| index[r]).collect();
    let mut sizes = vec![0u64; reps.len()];
    for &c in &class_of {
        sizes[c as usize] += 1;
    }
    Classes { class_of, reps, sizes }
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, m);
        }
        a = mulmod(a, a, m);
        e >>= 1;
    }
    r
}

fn invmod(a: u64, m: u64) -> u64 {
    powmod(a, m - 2, m)
}

/// Polynomials over `F_l`, lowest coefficient first, no trailing zeros.
mod fpoly {
    use super::{invmod, mulmod};

    pub fn trim(mut a: Vec<u64>) -> Vec<u64> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    pub fn sub(a: &[u64], b: &[u64], l: u64) -> Vec<u64> {
        let n = a.len().max(b.len());
        trim((0..n).map(|i| (a.get(i).copied().unwrap_or(0) + l - b.get(i).copied().unwrap_or(0)) % l).collect())
    }

    pub fn mul(a: &[u64], b: &[u64], l: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return vec![];
        }
        let mut c = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                c[i + j] = (c[i + j] + mulmod(x, y, l)) % l;
            }
        }
        trim(c)
    }

    pub fn rem(a: &[u64], m: &[u64], l: u64) -> Vec<u64> {
        let mut r = trim(a.to_vec());
        let lead_inv = invmod(*m.last().expect("nonzero modulus"), l);
        while r.len() >= m.len() {
            let c = mulmod(*r.last().unwrap(), lead_inv, l);
            let shift = r.len() - m.len();
            for (j, &mj) in m.iter().enumerate() {
                r[shift + j] = (r[shift + j] + l - mulmod(c, mj, l)) % l;
            }
            r = trim(r);
        }
        r
    }

    pub fn gcd(a: &[u64], b: &[u64], l: u64) -> Vec<u64> {
        let (mut x, mut y) = (trim(a.to_vec()), trim(b.to_vec()));
        while !y.is_empty() {
            let r = rem(&x, &y, l);
            x = y;
            y = r;
        }
        monic(&x, l)
    }

    pub fn monic(a: &[u64], l: u64) -> Vec<u64> {
        match a.last() {
            None => vec![],
            Some(&c) => {
                let ci = invmod(c, l);
                a.iter().map(|&x| mulmod(x, ci, l)).collect()
            }
        }
    }

    /// `base^e mod m`.
    pub fn powmod_poly(base: &[u64], mut e: u64, m: &[u64], l: u64) -> Vec<u64> {
        let mut r = vec![1u64];
        let mut b = rem(base, m, l);
        while e > 0 {
            if e & 1 == 1 {
                r = rem(&mul(&r, &b, l), m, l);
            }
            b = rem(&mul(&b, &b, l), m, l);
            e >>= 1;
        }
        r
    }
}

/// Distinct roots in `F_l` (Cantor–Zassenhaus).
fn roots(f: &[u64], l: u64, rng: &mut StdRng) -> Vec<u64> {
    let f = fpoly::monic(&fpoly::trim(f.to_vec()), l);
    if f.len() <= 1 {
        return vec![];
    }
    let xl = fpoly::powmod_poly(&[0, 1], l, &f, l);
    let g = fpoly::gcd(&f, &fpoly::sub(&xl, &[0, 1], l), l);
    let mut out = Vec::new();
    let mut stack = vec![g];
    while let Some(g) = stack.pop() {
        match g.len() {
            0 | 1 => {}
            2 => out.push((l - g[0]) % l),
            _ => loop {
                let a = rng.gen_range(0..l);
                let h = fpoly::powmod_poly(&[a, 1], (l - 1) / 2, &g, l);
                let d = fpoly::gcd(&g, &fpoly::sub(&h, &[1], l), l);
                if d.len() > 1 && d.len() < g.len() {
                    let rest = quotient(&g, &d, l);
                    stack.push(d);
                    stack.push(rest);
                    break;
                }
            },
        }
    }
    out.sort_unstable();
    out
}

fn quotient(a: &[u64], b: &[u64], l: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    let mut q = vec![0u64; a.len() - b.len() + 1];
    let bi = invmod(*b.last().unwrap(), l);
    while r.len() >= b.len() {
        let c = mulmod(*r.last().unwrap(), bi, l);
        let shift = r.len() - b.len();
        q[shift] = c;
        for (j, &bj) in b.iter().enumerate() {
            r[shift + j] = (r[shift + j] + l - mulmod(c, bj, l)) % l;
        }
        r.pop();
    }
    fpoly::trim(q)
}

/// Reduction to upper Hessenberg form `H = T^-1 A T`; returns `(H, T)`.
fn hessenberg(mut h: Vec<Vec<u64>>, l: u64) -> (Vec<Vec<u64>>, Vec<Vec<u64>>) {
    let n = h.len();
    let mut t: Vec<Vec<u64>> = (0..n).map(|i| (0..n).map(|j| (i == j) as u64).collect()).collect();
    for m in 1..n.saturating_sub(1) {
        let Some(i) = (m..n).find(|&i| h[i][m - 1] != 0) else { continue };
        if i != m {
            h.swap(i, m);
            for row in h.iter_mut().chain(t.iter_mut()) {
                row.swap(i, m);
            }
        }
        let pinv = invmod(h[m][m - 1], l);
        for j in m + 1..n {
            let u = mulmod(h[j][m - 1], pinv, l);
            if u == 0 {
                continue;
            }
            for k in 0..n {
                h[j][k] = (h[j][k] + l - mulmod(u, h[m][k], l)) % l;
            }
            for row in h.iter_mut().chain(t.iter_mut()) {
                row[m] = (row[m] + mulmod(u, row[j], l)) % l;
            }
        }
    }
    (h, t)
}

/// Characteristic polynomial of an upper Hessenberg matrix.
fn hessenberg_charpoly(h: &[Vec<u64>], l: u64) -> Vec<u64> {
    let n = h.len();
    // p_k = (x - h_kk) p_(k-1) - sum_i h_(k-i,k) prod_(j=k-i+1..k) h_(j,j-1) p_(k-i-1)
    let mut polys: Vec<Vec<u64>> = vec![vec![1]];
    for k in 0..n {
        let mut pk = fpoly::mul(&[(l - h[k][k]) % l, 1], &polys[k], l);
        let mut prod = 1u64;
        for i in 1..=k {
            prod = mulmod(prod, h[k - i + 1][k - i], l);
            let c = mulmod(prod, h[k - i][k], l);
            if c != 0 {
                let t: Vec<u64> = polys[k - i].iter().map(|&x| mulmod(x, c, l)).collect();
                pk = fpoly::sub(&pk, &t, l);
            }
        }
        polys.push(pk);
    }
    polys.pop().unwrap()
}

/// Null space of `H - lambda` for upper Hessenberg `H`, in `O(n^2)` per vector.
fn hessenberg_kernel(h: &[Vec<u64>], lambda: u64, l: u64) -> Vec<Vec<u64>> {
    let n = h.len();
    let mut a: Vec<Vec<u64>> = h.to_vec();
    for (i, row) in a.iter_mut().enumerate() {
        row[i] = (row[i] + l - lambda) % l;
    }
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        if r == n {
            break;
        }
        // below the subdiagonal column c is zero and stays zero
        let end = (c + 2).min(n);
        let Some(pr) = (r..end).find(|&i| a[i][c] != 0) else { continue };
        a.swap(r, pr);
        let inv = invmod(a[r][c], l);
        for i in r + 1..end {
            if a[i][c] != 0 {
                let f = mulmod(a[i][c], inv, l);
                for k in c..n {
                    a[i][k] = (a[i][k] + l - mulmod(f, a[r][k], l)) % l;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (0..n)
        .filter(|c| !pivots.contains(c))
        .map(|fc| {
            let mut y = vec![0u64; n];
            y[fc] = 1;
            for (i, &pc) in pivots.iter().enumerate().rev() {
                let s = (pc + 1..n).fold(0u64, |acc, j| (acc + mulmod(a[i][j], y[j], l)) % l);
                y[pc] = mulmod((l - s) % l, invmod(a[i][pc], l), l);
            }
            y
        })
        .collect()
}

/// Brings basis vectors to reduced echelon form: `out[s][piv[s]] = 1`, zero at other pivots.
fn echelon(mut vs: Vec<Vec<u64>>, l: u64) -> (Vec<Vec<u64>>, Vec<usize>) {
    let cols = vs.first().map_or(0, |v| v.len());
    let mut piv = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(pr) = (r..vs.len()).find(|&i| vs[i][c] != 0) else { continue };
        vs.swap(r, pr);
        let inv = invmod(vs[r][c], l);
        for x in vs[r].iter_mut() {
            *x = mulmod(*x, inv, l);
        }
        for i in 0..vs.len() {
            if i != r && vs[i][c] != 0 {
                let f = vs[i][c];
                for k in 0..cols {
                    vs[i][k] = (vs[i][k] + l - mulmod(f, vs[r][k], l)) % l;
                }
            }
        }
        piv.push(c);
        r += 1;
        if r == vs.len() {
            break;
        }
    }
    vs.truncate(r);
    (vs, piv)
}

/// Output of [`character_degrees`].
#[derive(Debug, Clone, Serialize)]
pub struct CharacterData {
    pub order: u64,
    pub classes: usize,
    pub exponent: u64,
    pub prime: u64,
    /// Sorted degrees.
    pub degrees: Vec<u64>,
}

impl CharacterData {
    pub fn sum_of_squares(&self) -> u64 {
        self.degrees.iter().map(|d| d * d).sum()
    }
}

/// Smallest prime `l = 1 mod e` with `l > 2 sqrt(n)`.
pub fn dixon_prime(e: u64, n: u64) -> Result<u64, GroupError> {
    let floor = 2 * ((n as f64).sqrt().ceil() as u64) + 1;
    let mut l = e + 1;
    while l <= floor {
        l += e;
    }
    for _ in 0..1_000_000 {
        if is_prime(l) {
            return Ok(l);
        }
        l += e;
    }
    Err(GroupError::NoPrime(e))
}

/// Irreducible character degrees by Dixon–Schneider.
pub fn character_degrees(g: &FiniteGroup, seed: u64) -> Result<CharacterData, GroupError> {
    let cl = conjugacy_classes(g);
    let k = cl.count();
    let order = g.order();
    let exponent = cl.reps.iter().fold(1u64, |acc, &r| acc.lcm(&g.element_order(r)));
    let l = dixon_prime(exponent, order)?;
    // (A_j)[i][t] = #{x in C_i : x^-1 z_t in C_j}; a combination sum_j c_j A_j
    // is accumulated directly from the products, never storing the A_j
    let inv: Vec<u32> = (0..order as u32).map(|x| g.inv(x)).collect();
    let combination = |coef: &[u64]| -> Vec<Vec<u64>> {
        let cols: Vec<Vec<u64>> = cl
            .reps
            .par_iter()
            .map(|&z| {
                let mut col = vec![0u64; k];
                for x in 0..order as u32 {
                    let i = cl.class_of[x as usize] as usize;
                    let j = cl.class_of[g.mul(inv[x as usize], z) as usize] as usize;
                    col[i] = (col[i] + coef[j]) % l;
                }
                col
            })
            .collect();
        (0..k).map(|i| (0..k).map(|t| cols[t][i]).collect()).collect()
    };
    let mut rng = StdRng::seed_from_u64(seed);
    // split one invariant subspace into eigenspaces of `a`
    let split = |space: Vec<Vec<u64>>, a: &[Vec<u64>], rng: &mut StdRng| -> Result<Vec<Vec<Vec<u64>>>, GroupError> {
        let (basis, piv) = echelon(space, l);
        let images: Vec<Vec<u64>> = basis
            .iter()
            .map(|v| (0..k).map(|i| (0..k).fold(0u64, |acc, t| (acc + mulmod(a[i][t], v[t], l)) % l)).collect())
            .collect();
        let r = basis.len();
        // restricted matrix B[s'][s] = (A v_s)[piv_s']
        let b: Vec<Vec<u64>> = (0..r).map(|s2| (0..r).map(|s| images[s][piv[s2]]).collect()).collect();
        let (hb, tb) = hessenberg(b, l);
        let eig = roots(&hessenberg_charpoly(&hb, l), l, rng);
        let mut covered = 0;
        let mut parts = Vec::new();
        for lam in eig {
            let ns: Vec<Vec<u64>> = hessenberg_kernel(&hb, lam, l)
                .iter()
                .map(|y| (0..r).map(|i| (0..r).fold(0u64, |acc, j| (acc + mulmod(tb[i][j], y[j], l)) % l)).collect())
                .collect();
            covered += ns.len();
            parts.push(
                ns.iter()
                    .map(|u| (0..k).map(|c| (0..r).fold(0u64, |acc, s| (acc + mulmod(u[s], basis[s][c], l)) % l)).collect())
                    .collect(),
            );
        }
        if covered != r {
            return Err(GroupError::Inconsistent("class matrices not simultaneously diagonalisable".into()));
        }
        Ok(parts)
    };
    let mut pending: Vec<Vec<Vec<u64>>> = vec![(0..k).map(|i| (0..k).map(|c| (i == c) as u64).collect()).collect()];
    let mut done: Vec<Vec<u64>> = Vec::new();
    let mut rounds = 0;
    // one random combination per round, applied to every pending subspace
    while !pending.is_empty() {
        let (single, rest): (Vec<_>, Vec<_>) = pending.into_iter().partition(|sp| sp.len() == 1);
        done.extend(single.into_iter().map(|mut sp| sp.pop().unwrap()));
        if rest.is_empty() {
            break;
        }
        rounds += 1;
        if rounds > 64 + k {
            return Err(GroupError::NoSplit(rounds));
        }
        let coef: Vec<u64> = (0..k).map(|_| rng.gen_range(0..l)).collect();
        let a = combination(&coef);
        pending = Vec::new();
        for space in rest {
            pending.extend(split(space, &a, &mut rng)?);
        }
    }
    let inverse_class: Vec<usize> = cl.reps.iter().map(|&r| cl.class_of[g.inv(r) as usize] as usize).collect();
    let ord_l = order % l;
    let isqrt = (order as f64).sqrt() as u64 + 1;
    let mut degrees = Vec::with_capacity(k);
    for w in &done {
        if w[0] == 0 {
            return Err(GroupError::Inconsistent("eigenvector vanishes at the identity".into()));
        }
        let w0 = invmod(w[0], l);
        let w: Vec<u64> = w.iter().map(|&x| mulmod(x, w0, l)).collect();
        let mut s = 0u64;
        for i in 0..k {
            let t = mulmod(mulmod(w[i], w[inverse_class[i]], l), invmod(cl.sizes[i] % l, l), l);
            s = (s + t) % l;
        }
        let target = mulmod(ord_l, invmod(s, l), l);
        let d = (1..=isqrt)
            .find(|&d| mulmod(d, d, l) == target && order % d == 0)
            .ok_or_else(|| GroupError::Inconsistent("degree not recovered".into()))?;
        degrees.push(d);
    }
    degrees.sort_unstable();
    let data = CharacterData { order, classes: k, exponent, prime: l, degrees };
    if data.sum_of_squares() != order || data.degrees.len() != k {
        return Err(GroupError::Inconsistent(format!("sum of squares {} for order {order}", data.sum_of_squares())));
    }
    Ok(data)
}

/// The finite zeta function `sum_chi chi(1)^(-s)`; complete at every degree.
pub fn degree_zeta(data: &CharacterData) -> TruncatedSeries {
    let mut s = TruncatedSeries::default();
    for &d in &data.degrees {
        s.add_count(BigUint::from(d), BigUint::from(1u32));
    }
    s.complete_through = Some(BigUint::from(data.order));
    s
}

/// Degrees whose counts agree on two consecutive quotients, with the counts.
pub fn stable_counts(coarse: &TruncatedSeries, fine: &TruncatedSeries) -> BTreeMap<BigUint, BigUint> {
    fine.counts
        .iter()
        .filter(|(d, c)| coarse.counts.get(*d) == Some(*c))
        .map(|(d, c)| (d.clone(), c.clone()))
        .collect()
}

/// Whether every count of `coarse` is at most the count in `fine`.
pub fn monotone(coarse: &TruncatedSeries, fine: &TruncatedSeries) -> bool {
    coarse.counts.iter().all(|(d, c)| fine.counts.get(d).is_some_and(|f| f >= c))
}

/// Stabiliser orders of the torsion complement `H` acting on one layer
/// `G_m / G_(m+1)` of an SL1 quotient, one entry per nontrivial layer element.
#[derive(Debug, Clone, Serialize)]
pub struct LayerAction {
    pub level: u32,
    pub h_order: u64,
    /// Distinct stabiliser orders met in the layer.
    pub stabilisers: Vec<u64>,
}

impl FiniteGroup {
    /// Whether an SL1 element has no `Pi` component.
    pub fn sl1_in_torus(&self, g: u32) -> bool {
        match &self.model {
            Model::Sl1 { sa, .. } => self.elements[g as usize] / sa == 0,
            _ => false,
        }
    }
    /// `Pi`-adic level of `g - 1` for an SL1 quotient, capped at `k`.
    pub fn sl1_level(&self, g: u32) -> Option<u32> {
        let Model::Sl1 { ta, tb, sa, .. } = &self.model else { return None };
        let GroupId::Sl1 { k, .. } = self.id else { return None };
        let x = self.elements[g as usize];
        let (a, b) = ((x % sa) as u16, (x / sa) as u16);
        let va = 2 * ta.val(ta.sub(a, ta.one()));
        let vb = tb.as_ref().map_or(k, |t| 2 * t.val(b) + 1);
        Some(va.min(vb).min(k))
    }
}

/// For `SL1(R/P^k)`: the action of the prime-to-`p` complement `H` on each
/// layer `G_m / G_(m+1)`, `1 <= m < k`, by conjugation.
pub fn sl1_layer_actions(p: u64, f: u32, k: u32, budget: u64) -> Result<Vec<LayerAction>, GroupError> {
    let g = build_group(GroupId::Sl1 { p, f, k }, budget)?;
    let q = p.pow(f);
    let n = g.order() as u32;
    let level: Vec<u32> = (0..n).map(|x| g.sl1_level(x).expect("SL1 model")).collect();
    // H: elements of the unramified torus with order dividing q + 1 (Teichmueller lifts)
    let h: Vec<u32> = (0..n).filter(|&x| g.sl1_in_torus(x) && (q + 1) % g.element_order(x) == 0).collect();
    if h.len() as u64 != q + 1 {
        return Err(GroupError::Inconsistent(format!("complement has order {}", h.len())));
    }
    let h_inv: Vec<u32> = h.iter().map(|&x| g.inv(x)).collect();
    let mut out = Vec::new();
    for m in 1..k {
        let mut stabs: Vec<u64> = (0..n)
            .filter(|&x| level[x as usize] == m)
            .map(|x| {
                let xi = g.inv(x);
                h.iter()
                    .zip(&h_inv)
                    .filter(|(&y, &yi)| level[g.mul(g.mul(g.mul(y, x), yi), xi) as usize] > m)
                    .count() as u64
            })
            .collect();
        stabs.sort_unstable();
        stabs.dedup();
        out.push(LayerAction { level: m, h_order: q + 1, stabilisers: stabs });
    }
    Ok(out)
}

/// Prime factorisation helper re-exported for reports.
pub fn order_factorisation(n: u64) -> Vec<(u64, u32)> {
    factorize(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sl2(p: u64, k: u32) -> FiniteGroup {
        build_group(GroupId::Sl2 { p, f: 1, e: 1, k }, GROUP_BUDGET).unwrap()
    }

    #[test]
    fn orders() {
        assert_eq!(sl2(3, 1).order(), 24);
        assert_eq!(sl2(2, 3).order(), 384);
        assert_eq!(sl2(2, 4).order(), 3072);
        let q1 = build_group(GroupId::Sl1 { p: 5, f: 1, k: 3 }, GROUP_BUDGET).unwrap();
        assert_eq!(q1.order(), 750);
        let c = build_group(GroupId::Sl2Congruence { p: 2, f: 1, e: 1, k: 5 }, GROUP_BUDGET).unwrap();
        assert_eq!(c.order(), 4096);
    }

    #[test]
    fn quaternion_filtration() {
        let sizes: Vec<u64> =
            (1..=4).map(|k| build_group(GroupId::Sl1 { p: 5, f: 1, k }, GROUP_BUDGET).unwrap().order()).collect();
        assert_eq!(sizes[0], 6);
        assert_eq!(sizes[1] / sizes[0], 25);
        assert_eq!(sizes[2] / sizes[1], 5);
        assert_eq!(sizes[3] / sizes[2], 25);
    }

    #[test]
    fn sl2_f3() {
        let g = sl2(3, 1);
        assert_eq!(conjugacy_classes(&g).count(), 7);
        let d = character_degrees(&g, 0).unwrap();
        assert_eq!(d.degrees, vec![1, 1, 1, 2, 2, 2, 3]);
    }

    #[test]
    fn sl2_f5_degrees() {
        let d = character_degrees(&sl2(5, 1), 0).unwrap();
        assert_eq!(d.degrees, vec![1, 2, 2, 3, 3, 4, 4, 5, 6]);
    }

    #[test]
    fn cyclic_and_abelian() {
        let g = build_group(GroupId::Cyclic { n: 12 }, GROUP_BUDGET).unwrap();
        assert_eq!(conjugacy_classes(&g).count(), 12);
        assert_eq!(character_degrees(&g, 0).unwrap().degrees, vec![1; 12]);
    }

    #[test]
    fn sl2_z4_consistency() {
        let g = sl2(2, 2);
        let d = character_degrees(&g, 3).unwrap();
        assert_eq!(d.classes, conjugacy_classes(&g).count());
        assert_eq!(d.sum_of_squares(), 48);
    }

    #[test]
    fn root_finding() {
        let mut rng = StdRng::seed_from_u64(1);
        // (x - 2)(x - 5)(x^2 + 1) over F_13 has roots 2, 5, 8 and 5 (x^2 + 1 = (x-5)(x-8))
        let f = fpoly::mul(&fpoly::mul(&[11, 1], &[8, 1], 13), &[1, 0, 1], 13);
        assert_eq!(roots(&f, 13, &mut rng), vec![2, 5, 8]);
    }

    #[test]
    fn sl1_layers() {
        let acts = sl1_layer_actions(5, 1, 3, GROUP_BUDGET).unwrap();
        // odd layers: h acts by h^2, even layers trivially
        assert_eq!(acts[0].stabilisers, vec![2]);
        assert_eq!(acts[1].stabilisers, vec![6]);
    }

}
