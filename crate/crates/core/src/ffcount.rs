//! Counting stable chains over prime fields.
//!
//! A chain on fixed blocks `U_i = sum_j O(a_ij)` is a tuple of maps
//! `phi_i : U_i -> U_{i+1}(2)`, i.e. a point of an affine space over `F_q`.
//! It is unstable when some proper nonzero sub-chain `V_i ⊆ U_i` with
//! `phi_i(V_i) ⊆ V_{i+1}(2)` has slope `>= d/r`. Only saturated `V_i` matter,
//! so each block contributes finitely many candidates: zero, everything,
//! sub-line bundles `O(k) -> U_i` and, in rank 3, kernels of `U_i -> O(k)`.
//!
//! For a fixed pair of candidates on consecutive blocks the compatibility
//! condition is linear in `phi_i`. The counter builds the lattice of
//! intersections of these subspaces for each map, counts how many maps have
//! each exact compatibility pattern, and pushes a table of best sub-chain
//! weights through the maps. Nothing is enumerated point by point except in
//! [`count_stable_tuples_brute`], the reference used by the tests.
//!
//! Dividing by `|Aut| / (q - 1)` turns tuples into isomorphism classes, since
//! stable chains are simple. Interpolating over several primes and putting
//! `q = x^2` gives the Poincaré polynomial of the component, assuming its
//! point count is pure.

use std::collections::HashMap;

use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::chains::{ChainComponent, PoincarePolynomial};
use crate::{Error, Result, Q};

/// Largest prime accepted by the counter.
pub const MAX_PRIME: u64 = 31;

const MAX_NODES: usize = 400_000;
const MAX_STATES: usize = 2_000_000;
const MAX_SUBSHEAVES: u128 = 2_000_000;

type Poly = Vec<u32>;

#[derive(Clone, Copy, Debug)]
struct Fp(u32);

impl Fp {
    fn add(self, a: u32, b: u32) -> u32 {
        ((a as u64 + b as u64) % self.0 as u64) as u32
    }

    fn sub(self, a: u32, b: u32) -> u32 {
        ((a as u64 + self.0 as u64 - b as u64) % self.0 as u64) as u32
    }

    fn mul(self, a: u32, b: u32) -> u32 {
        (a as u64 * b as u64 % self.0 as u64) as u32
    }

    fn inv(self, a: u32) -> u32 {
        let mut r = 1u64;
        let mut b = a as u64;
        let mut e = self.0 - 2;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % self.0 as u64;
            }
            b = b * b % self.0 as u64;
            e >>= 1;
        }
        r as u32
    }

    fn trim(self, mut a: Poly) -> Poly {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    fn padd(self, a: &[u32], b: &[u32]) -> Poly {
        let n = a.len().max(b.len());
        let c = (0..n).map(|i| self.add(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0))).collect();
        self.trim(c)
    }

    fn pneg(self, a: &[u32]) -> Poly {
        a.iter().map(|&x| self.sub(0, x)).collect()
    }

    fn pmul(self, a: &[u32], b: &[u32]) -> Poly {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut c = vec![0; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                c[i + j] = self.add(c[i + j], self.mul(x, y));
            }
        }
        self.trim(c)
    }

    fn prem(self, a: &[u32], b: &[u32]) -> Poly {
        let mut a = a.to_vec();
        let lead = self.inv(*b.last().expect("nonzero divisor"));
        while a.len() >= b.len() {
            let c = self.mul(*a.last().unwrap(), lead);
            let shift = a.len() - b.len();
            for (i, &y) in b.iter().enumerate() {
                a[shift + i] = self.sub(a[shift + i], self.mul(c, y));
            }
            a = self.trim(a);
        }
        a
    }

    fn pgcd(self, a: &[u32], b: &[u32]) -> Poly {
        let (mut a, mut b) = (a.to_vec(), b.to_vec());
        while !b.is_empty() {
            let r = self.prem(&a, &b);
            a = b;
            b = r;
        }
        a
    }

    /// Every polynomial of degree at most `deg` (just zero when `deg < 0`).
    fn polys_up_to(self, deg: i64) -> Vec<Poly> {
        if deg < 0 {
            return vec![Vec::new()];
        }
        let n = deg as usize + 1;
        let mut out = Vec::with_capacity((self.0 as usize).pow(n as u32));
        let mut c = vec![0u32; n];
        loop {
            out.push(self.trim(c.clone()));
            let mut i = 0;
            while i < n {
                c[i] += 1;
                if c[i] < self.0 {
                    break;
                }
                c[i] = 0;
                i += 1;
            }
            if i == n {
                return out;
            }
        }
    }

    /// Reduced row echelon form, zero rows dropped.
    fn rref(self, mut rows: Vec<Vec<u32>>) -> Vec<Vec<u32>> {
        let width = rows.first().map_or(0, Vec::len);
        let mut rank = 0;
        for col in 0..width {
            let Some(piv) = (rank..rows.len()).find(|&i| rows[i][col] != 0) else {
                continue;
            };
            rows.swap(rank, piv);
            let inv = self.inv(rows[rank][col]);
            for x in rows[rank].iter_mut() {
                *x = self.mul(*x, inv);
            }
            for i in 0..rows.len() {
                if i != rank && rows[i][col] != 0 {
                    let f = rows[i][col];
                    for j in 0..width {
                        let t = self.mul(f, rows[rank][j]);
                        rows[i][j] = self.sub(rows[i][j], t);
                    }
                }
            }
            rank += 1;
        }
        rows.truncate(rank);
        rows
    }
}

#[derive(Clone, Debug)]
enum Sub {
    Zero,
    Full,
    /// Image of `O(k) -> U` given by a column of sections.
    Line(Vec<Poly>),
    /// Kernel of `U -> O(k)` given by a row of sections.
    Hyper(Vec<Poly>),
}

#[derive(Clone, Debug)]
struct Choice {
    sub: Sub,
    /// `r deg V - d rk V`; a sub-chain destabilizes when the sum is `>= 0`.
    weight: i64,
}

impl Choice {
    fn flags(&self) -> usize {
        let nonzero = !matches!(self.sub, Sub::Zero) as usize;
        let nonfull = !matches!(self.sub, Sub::Full) as usize;
        nonzero | nonfull << 1
    }
}

fn unit(m: usize, j: usize) -> Vec<Poly> {
    (0..m).map(|k| if k == j { vec![1] } else { Vec::new() }).collect()
}

impl Sub {
    /// Vectors spanning the subsheaf at the generic point.
    fn generators(&self, f: Fp, m: usize) -> Vec<Vec<Poly>> {
        match self {
            Sub::Zero => Vec::new(),
            Sub::Full => (0..m).map(|j| unit(m, j)).collect(),
            Sub::Line(u) => vec![u.clone()],
            Sub::Hyper(t) => {
                let mut out = Vec::new();
                for j in 0..m {
                    for k in j + 1..m {
                        let mut v = vec![Vec::new(); m];
                        v[j] = t[k].clone();
                        v[k] = f.pneg(&t[j]);
                        out.push(v);
                    }
                }
                out
            }
        }
    }

    /// Polynomials that all vanish iff `w` lies in the subsheaf.
    fn membership(&self, f: Fp, w: &[Poly]) -> Vec<Poly> {
        match self {
            Sub::Zero => w.to_vec(),
            Sub::Full => Vec::new(),
            Sub::Line(u) => {
                let mut out = Vec::new();
                for j in 0..u.len() {
                    for k in j + 1..u.len() {
                        out.push(f.padd(&f.pmul(&w[j], &u[k]), &f.pneg(&f.pmul(&w[k], &u[j]))));
                    }
                }
                out
            }
            Sub::Hyper(t) => {
                let mut s = Vec::new();
                for (tj, wj) in t.iter().zip(w) {
                    s = f.padd(&s, &f.pmul(tj, wj));
                }
                vec![s]
            }
        }
    }
}

/// Tuples of sections `s_j` with `deg s_j <= bounds[j]`, without common zeros
/// on the line (including infinity), up to scalars.
fn saturated_vectors(f: Fp, bounds: &[i64]) -> Result<Vec<Vec<Poly>>> {
    let size: u128 = bounds.iter().map(|&b| if b < 0 { 1 } else { (f.0 as u128).pow(b as u32 + 1) }).product();
    if size > MAX_SUBSHEAVES {
        return Err(Error::CostGuard(format!("{size} candidate subsheaves over F_{}", f.0)));
    }
    let options: Vec<Vec<Poly>> = bounds.iter().map(|&b| f.polys_up_to(b)).collect();
    let mut out = Vec::new();
    let mut idx = vec![0usize; bounds.len()];
    loop {
        let v: Vec<Poly> = idx.iter().zip(&options).map(|(&i, o)| o[i].clone()).collect();
        if is_saturated(f, &v, bounds) {
            out.push(v);
        }
        let mut k = 0;
        while k < idx.len() {
            idx[k] += 1;
            if idx[k] < options[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
        if k == idx.len() {
            return Ok(out);
        }
    }
}

fn is_saturated(f: Fp, v: &[Poly], bounds: &[i64]) -> bool {
    let first = v.iter().flatten().find(|&&c| c != 0);
    if first != Some(&1) {
        return false;
    }
    let at_infinity = v.iter().zip(bounds).any(|(s, &b)| !s.is_empty() && s.len() as i64 - 1 == b);
    if !at_infinity {
        return false;
    }
    let g = v.iter().filter(|s| !s.is_empty()).fold(Vec::new(), |g: Poly, s| if g.is_empty() { s.clone() } else { f.pgcd(&g, s) });
    g.len() == 1
}

/// The chain-map spaces `Hom(U_i, U_{i+1}(2))` over `F_q`.
#[derive(Clone, Debug)]
pub struct FfChainSpace {
    blocks: Vec<Vec<i64>>,
    q: u64,
}

impl FfChainSpace {
    pub fn new(c: &ChainComponent, q: u64) -> Result<Self> {
        FfChainSpace::from_blocks(c.blocks(), q)
    }

    pub fn from_blocks(blocks: Vec<Vec<i64>>, q: u64) -> Result<Self> {
        check_prime(q)?;
        if blocks.is_empty() || blocks.iter().any(Vec::is_empty) {
            return Err(Error::Malformed("empty chain block".into()));
        }
        if let Some(b) = blocks.iter().find(|b| b.len() > 3) {
            return Err(Error::Unsupported(format!("finite-field count with a block of rank {}", b.len())));
        }
        let blocks = blocks
            .into_iter()
            .map(|mut b| {
                b.sort_unstable_by(|x, y| y.cmp(x));
                b
            })
            .collect();
        Ok(FfChainSpace { blocks, q })
    }

    pub fn blocks(&self) -> &[Vec<i64>] {
        &self.blocks
    }

    pub fn prime(&self) -> u64 {
        self.q
    }

    pub fn rank(&self) -> i64 {
        self.blocks.iter().map(Vec::len).sum::<usize>() as i64
    }

    pub fn degree(&self) -> i64 {
        self.blocks.iter().flatten().sum()
    }

    /// `deg_bounds()[i][b][a]`: degree bound of the entry of `phi_i` from
    /// summand `a` of `U_i` to summand `b` of `U_{i+1}`; negative means zero.
    pub fn deg_bounds(&self) -> Vec<Vec<Vec<i64>>> {
        self.blocks
            .windows(2)
            .map(|w| w[1].iter().map(|b| w[0].iter().map(|a| b - a + 2).collect()).collect())
            .collect()
    }

    pub fn map_dimension(&self, i: usize) -> usize {
        self.deg_bounds()[i].iter().flatten().map(|&e| (e + 1).max(0) as usize).sum()
    }

    /// `sum_i sum_{a, b} max(0, b - a + 3)`.
    pub fn dimension(&self) -> usize {
        (0..self.blocks.len() - 1).map(|i| self.map_dimension(i)).sum()
    }

    /// Dimension of `prod_i Aut(U_i)`.
    pub fn automorphism_dimension(&self) -> usize {
        self.blocks
            .iter()
            .map(|b| b.iter().flat_map(|x| b.iter().map(move |y| (x - y + 1).max(0) as usize)).sum::<usize>())
            .sum()
    }

    /// `|prod_i Aut(U_i)|` over `F_q`.
    pub fn automorphism_order(&self) -> u128 {
        self.blocks.iter().map(|b| aut_order(b, self.q as u128)).product()
    }

    fn field(&self) -> Fp {
        Fp(self.q as u32)
    }
}

fn gl_order(m: u32, q: u128) -> u128 {
    (0..m).map(|i| q.pow(m) - q.pow(i)).product()
}

/// `|Aut(sum O(a))| = prod_a |GL_{m_a}| * q^(sum_{a > b} m_a m_b (a - b + 1))`.
fn aut_order(split: &[i64], q: u128) -> u128 {
    let mut mult: Vec<(i64, u32)> = Vec::new();
    for &a in split {
        match mult.iter_mut().find(|(x, _)| *x == a) {
            Some((_, m)) => *m += 1,
            None => mult.push((a, 1)),
        }
    }
    let mut out: u128 = mult.iter().map(|&(_, m)| gl_order(m, q)).product();
    for &(a, ma) in &mult {
        for &(b, mb) in &mult {
            if a > b {
                out *= q.pow(ma * mb * (a - b + 1) as u32);
            }
        }
    }
    out
}

fn is_prime(q: u64) -> bool {
    q >= 2 && (2..q).take_while(|k| k * k <= q).all(|k| !q.is_multiple_of(k))
}

fn check_prime(q: u64) -> Result<()> {
    if !is_prime(q) {
        return Err(Error::Malformed(format!("{q} is not prime")));
    }
    if q > MAX_PRIME {
        return Err(Error::CostGuard(format!("prime {q} exceeds {MAX_PRIME}")));
    }
    Ok(())
}

struct Problem {
    space: FfChainSpace,
    choices: Vec<Vec<Choice>>,
    /// Largest weight the blocks after `i` can add.
    headroom: Vec<i64>,
}

impl Problem {
    fn new(space: FfChainSpace) -> Result<Self> {
        let f = space.field();
        let (r, d) = (space.rank(), space.degree());
        let best: Vec<i64> = space
            .blocks
            .iter()
            .map(|b| {
                let (m, s) = (b.len() as i64, b.iter().sum::<i64>());
                let mut w = 0.max(r * s - d * m);
                if m >= 2 {
                    w = w.max(r * b[0] - d);
                }
                if m >= 3 {
                    w = w.max(r * (s - b[b.len() - 1]) - d * (m - 1));
                }
                w
            })
            .collect();
        let total: i64 = best.iter().sum();
        let mut choices = Vec::new();
        for (i, b) in space.blocks.iter().enumerate() {
            let rest = total - best[i];
            let (m, s) = (b.len() as i64, b.iter().sum::<i64>());
            let mut ch = vec![Choice { sub: Sub::Zero, weight: 0 }, Choice { sub: Sub::Full, weight: r * s - d * m }];
            if m >= 2 {
                // r k - d + rest >= 0
                let kmin = num_integer::Integer::div_ceil(&(d - rest), &r);
                for k in (kmin..=b[0]).rev() {
                    let bounds: Vec<i64> = b.iter().map(|a| a - k).collect();
                    for u in saturated_vectors(f, &bounds)? {
                        ch.push(Choice { sub: Sub::Line(u), weight: r * k - d });
                    }
                }
            }
            if m >= 3 {
                // r (s - k) - d (m - 1) + rest >= 0
                let kmax = num_integer::Integer::div_floor(&(r * s - d * (m - 1) + rest), &r);
                for k in b[b.len() - 1]..=kmax {
                    let bounds: Vec<i64> = b.iter().map(|a| k - a).collect();
                    for t in saturated_vectors(f, &bounds)? {
                        ch.push(Choice { sub: Sub::Hyper(t), weight: r * (s - k) - d * (m - 1) });
                    }
                }
            }
            choices.push(ch);
        }
        let mut headroom = vec![0; best.len()];
        for i in (0..best.len().saturating_sub(1)).rev() {
            headroom[i] = headroom[i + 1] + best[i + 1];
        }
        Ok(Problem { space, choices, headroom })
    }

    fn field(&self) -> Fp {
        self.space.field()
    }

    fn n(&self) -> usize {
        self.space.blocks.len()
    }

    /// Basis of `Hom(U_i, U_{i+1}(2))`: (row, column, exponent).
    fn basis(&self, i: usize) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for (b, row) in self.space.deg_bounds()[i].iter().enumerate() {
            for (a, &e) in row.iter().enumerate() {
                for k in 0..=e.max(-1) {
                    out.push((b, a, k as usize));
                }
            }
        }
        out
    }

    fn apply(&self, phi: &[Vec<Poly>], v: &[Poly]) -> Vec<Poly> {
        let f = self.field();
        phi.iter()
            .map(|row| row.iter().zip(v).fold(Vec::new(), |s, (x, y)| f.padd(&s, &f.pmul(x, y))))
            .collect()
    }

    fn compatible(&self, i: usize, phi: &[Vec<Poly>], c: &Choice, c2: &Choice) -> bool {
        let f = self.field();
        let m = self.space.blocks[i].len();
        c.sub.generators(f, m).iter().all(|v| c2.sub.membership(f, &self.apply(phi, v)).iter().all(Vec::is_empty))
    }

    /// Annihilator, in reduced echelon form, of the maps compatible with
    /// `(c, c2)`; `None` when every map is.
    fn constraint(&self, i: usize, basis: &[(usize, usize, usize)], c: &Choice, c2: &Choice) -> Option<Vec<Vec<u32>>> {
        if matches!(c.sub, Sub::Zero) || matches!(c2.sub, Sub::Full) {
            return None;
        }
        let f = self.field();
        let (m, m2) = (self.space.blocks[i].len(), self.space.blocks[i + 1].len());
        let gens = c.sub.generators(f, m);
        let outputs: Vec<Vec<Poly>> = basis
            .iter()
            .map(|&(b, a, k)| {
                let mut mono = vec![0u32; k + 1];
                mono[k] = 1;
                gens.iter()
                    .flat_map(|v| {
                        let mut w = vec![Vec::new(); m2];
                        w[b] = f.pmul(&mono, &v[a]);
                        c2.sub.membership(f, &w)
                    })
                    .collect()
            })
            .collect();
        let slots = outputs.first().map_or(0, Vec::len);
        let mut rows = Vec::new();
        for s in 0..slots {
            let len = outputs.iter().map(|o| o[s].len()).max().unwrap_or(0);
            for t in 0..len {
                rows.push(outputs.iter().map(|o| *o[s].get(t).unwrap_or(&0)).collect());
            }
        }
        let rows = f.rref(rows);
        (!rows.is_empty()).then_some(rows)
    }

    fn initial_state(&self) -> Vec<i32> {
        let mut st = vec![NEG; self.choices[0].len() * 4];
        for (ci, c) in self.choices[0].iter().enumerate() {
            if c.weight + self.headroom[0] >= 0 {
                st[ci * 4 + c.flags()] = c.weight as i32;
            }
        }
        st
    }

    /// Pushes the weight table across map `i`, given which pairs are compatible.
    fn step(&self, i: usize, st: &[i32], ok: impl Fn(usize, usize) -> bool) -> Vec<i32> {
        let next = &self.choices[i + 1];
        let mut out = vec![NEG; next.len() * 4];
        for (ci, _) in self.choices[i].iter().enumerate() {
            for fl in 0..4 {
                let w = st[ci * 4 + fl];
                if w == NEG {
                    continue;
                }
                for (cj, c2) in next.iter().enumerate() {
                    let nw = w as i64 + c2.weight;
                    if nw + self.headroom[i + 1] < 0 || !ok(ci, cj) {
                        continue;
                    }
                    let slot = &mut out[cj * 4 + (fl | c2.flags())];
                    *slot = (*slot).max(nw as i32);
                }
            }
        }
        out
    }

    fn unstable(&self, st: &[i32]) -> bool {
        st.chunks(4).any(|c| c[3] != NEG && c[3] >= 0)
    }
}

const NEG: i32 = i32::MIN;

/// Intersection lattice of the compatibility subspaces of one map.
struct Lattice {
    /// Generator of each pair `(c, c2)`, or `None` if always compatible.
    pair_gen: Vec<Vec<Option<usize>>>,
    /// Exact pattern classes: generators containing the class, and its size.
    classes: Vec<(Vec<u64>, u128)>,
}

fn has_bit(bits: &[u64], g: usize) -> bool {
    bits[g / 64] >> (g % 64) & 1 == 1
}

impl Lattice {
    fn build(pb: &Problem, i: usize) -> Result<Lattice> {
        let f = pb.field();
        let basis = pb.basis(i);
        let dim = basis.len();
        let q = pb.space.q as u128;
        let mut gens: Vec<Vec<Vec<u32>>> = Vec::new();
        let mut gen_index: HashMap<Vec<Vec<u32>>, usize> = HashMap::new();
        let mut pair_gen = Vec::new();
        for c in &pb.choices[i] {
            let mut row = Vec::new();
            for c2 in &pb.choices[i + 1] {
                row.push(pb.constraint(i, &basis, c, c2).map(|rows| {
                    *gen_index.entry(rows.clone()).or_insert_with(|| {
                        gens.push(rows);
                        gens.len() - 1
                    })
                }));
            }
            pair_gen.push(row);
        }
        let words = gens.len().div_ceil(64).max(1);
        let mut nodes: Vec<(Vec<Vec<u32>>, Vec<u64>)> = vec![(Vec::new(), vec![0; words])];
        let mut index: HashMap<Vec<Vec<u32>>, usize> = HashMap::new();
        index.insert(Vec::new(), 0);
        let mut k = 0;
        while k < nodes.len() {
            for (g, grows) in gens.iter().enumerate() {
                let mut rows = nodes[k].0.clone();
                rows.extend(grows.iter().cloned());
                let rows = f.rref(rows);
                if rows.len() == nodes[k].0.len() {
                    nodes[k].1[g / 64] |= 1 << (g % 64);
                } else if !index.contains_key(&rows) {
                    if nodes.len() >= MAX_NODES {
                        return Err(Error::CostGuard(format!("more than {MAX_NODES} subspaces for map {i}")));
                    }
                    index.insert(rows.clone(), nodes.len());
                    nodes.push((rows, vec![0; words]));
                }
            }
            k += 1;
        }
        // Smallest subspaces first; each class is its subspace minus the
        // classes of the subspaces strictly inside it.
        let mut order: Vec<usize> = (0..nodes.len()).collect();
        order.sort_by_key(|&n| std::cmp::Reverse(nodes[n].0.len()));
        let mut exact = vec![0u128; nodes.len()];
        for (pos, &n) in order.iter().enumerate() {
            let d = (dim - nodes[n].0.len()) as u32;
            let mut e = q.checked_pow(d).ok_or_else(|| Error::CostGuard("count overflow".into()))?;
            for &m in &order[..pos] {
                let (pm, pn) = (&nodes[m].1, &nodes[n].1);
                if pm != pn && pm.iter().zip(pn).all(|(a, b)| a & b == *b) {
                    e -= exact[m];
                }
            }
            exact[n] = e;
        }
        let classes = nodes.into_iter().zip(exact).filter(|(_, e)| *e > 0).map(|((_, bits), e)| (bits, e)).collect();
        Ok(Lattice { pair_gen, classes })
    }
}

/// Number of stable chain tuples `(phi_1, ..., phi_{n-1})` over `F_q`.
pub fn count_stable_tuples(blocks: &[Vec<i64>], q: u64) -> Result<u128> {
    let pb = Problem::new(FfChainSpace::from_blocks(blocks.to_vec(), q)?)?;
    let mut states: HashMap<Vec<i32>, u128> = HashMap::new();
    states.insert(pb.initial_state(), 1);
    for i in 0..pb.n() - 1 {
        let lat = Lattice::build(&pb, i)?;
        let mut next: HashMap<Vec<i32>, u128> = HashMap::new();
        for (st, count) in &states {
            for (bits, size) in &lat.classes {
                let ok = |ci: usize, cj: usize| lat.pair_gen[ci][cj].is_none_or(|g| has_bit(bits, g));
                let ns = pb.step(i, st, ok);
                *next.entry(ns).or_insert(0) += count * size;
            }
            if next.len() > MAX_STATES {
                return Err(Error::CostGuard(format!("more than {MAX_STATES} weight tables after map {i}")));
            }
        }
        states = next;
    }
    Ok(states.iter().filter(|(st, _)| !pb.unstable(st)).map(|(_, c)| c).sum())
}

/// Same count by visiting every tuple of maps. Exponential in the dimension;
/// kept as the reference for [`count_stable_tuples`].
pub fn count_stable_tuples_brute(blocks: &[Vec<i64>], q: u64) -> Result<u128> {
    let space = FfChainSpace::from_blocks(blocks.to_vec(), q)?;
    if (q as f64).powi(space.dimension() as i32) > 5e7 {
        return Err(Error::CostGuard(format!("q^{} tuples", space.dimension())));
    }
    let pb = Problem::new(space)?;
    let bases: Vec<_> = (0..pb.n() - 1).map(|i| pb.basis(i)).collect();
    let dims: Vec<usize> = bases.iter().map(Vec::len).collect();
    let total: usize = dims.iter().sum();
    let mut x = vec![0u32; total];
    let mut count = 0u128;
    loop {
        let mut off = 0;
        let phis: Vec<Vec<Vec<Poly>>> = bases
            .iter()
            .enumerate()
            .map(|(i, basis)| {
                let (m, m2) = (pb.space.blocks[i].len(), pb.space.blocks[i + 1].len());
                let mut phi = vec![vec![Vec::new(); m]; m2];
                for (t, &(b, a, k)) in basis.iter().enumerate() {
                    let entry: &mut Poly = &mut phi[b][a];
                    if entry.len() <= k {
                        entry.resize(k + 1, 0);
                    }
                    entry[k] = x[off + t];
                }
                off += basis.len();
                phi.into_iter().map(|r| r.into_iter().map(|e| pb.field().trim(e)).collect()).collect()
            })
            .collect();
        if chain_is_stable_in(&pb, &phis) {
            count += 1;
        }
        let mut k = 0;
        while k < total {
            x[k] += 1;
            if (x[k] as u64) < q {
                break;
            }
            x[k] = 0;
            k += 1;
        }
        if k == total {
            return Ok(count);
        }
    }
}

fn chain_is_stable_in(pb: &Problem, phis: &[Vec<Vec<Poly>>]) -> bool {
    let mut st = pb.initial_state();
    for (i, phi) in phis.iter().enumerate() {
        let (a, b) = (&pb.choices[i], &pb.choices[i + 1]);
        st = pb.step(i, &st, |ci, cj| pb.compatible(i, phi, &a[ci], &b[cj]));
    }
    !pb.unstable(&st)
}

/// Whether a given chain over `F_q` is stable. `phis[i][b][a]` lists the
/// coefficients (constant first) of the entry from summand `a` of `U_i` to
/// summand `b` of `U_{i+1}`, with blocks sorted in non-increasing order.
pub fn chain_is_stable(blocks: &[Vec<i64>], phis: &[Vec<Vec<Vec<u32>>>], q: u64) -> Result<bool> {
    let space = FfChainSpace::from_blocks(blocks.to_vec(), q)?;
    if phis.len() + 1 != space.blocks.len() {
        return Err(Error::Malformed(format!("{} maps for {} blocks", phis.len(), space.blocks.len())));
    }
    let f = space.field();
    let bounds = space.deg_bounds();
    let mut clean = Vec::new();
    for (phi, bd) in phis.iter().zip(&bounds) {
        if phi.len() != bd.len() || phi.iter().zip(bd).any(|(r, b)| r.len() != b.len()) {
            return Err(Error::Malformed("map has the wrong shape".into()));
        }
        let mut m = Vec::new();
        for (row, brow) in phi.iter().zip(bd) {
            let mut out = Vec::new();
            for (e, &deg) in row.iter().zip(brow) {
                let e = f.trim(e.iter().map(|&c| c % f.0).collect());
                if e.len() as i64 > deg + 1 {
                    return Err(Error::Malformed(format!("entry of degree {} exceeds bound {deg}", e.len() - 1)));
                }
                out.push(e);
            }
            m.push(out);
        }
        clean.push(m);
    }
    let pb = Problem::new(space)?;
    Ok(chain_is_stable_in(&pb, &clean))
}

/// Isomorphism classes of stable chains on the component's blocks over `F_q`:
/// `|stable| (q - 1) / |Aut|`, with the division checked to be exact.
pub fn count_stable_chains(c: &ChainComponent, q: u64) -> Result<u64> {
    orbit_count(&c.blocks(), q)
}

fn orbit_count(blocks: &[Vec<i64>], q: u64) -> Result<u64> {
    let space = FfChainSpace::from_blocks(blocks.to_vec(), q)?;
    let n = count_stable_tuples(blocks, q)?;
    let g = space.automorphism_order();
    let num = n * (q as u128 - 1);
    if !num.is_multiple_of(g) {
        return Err(Error::Invariant(format!(
            "{n} stable tuples over F_{q} on {blocks:?} do not split into free orbits of size {g}/{}",
            q - 1
        )));
    }
    u64::try_from(num / g).map_err(|_| Error::CostGuard("orbit count overflow".into()))
}

/// Whether the blocks carry a stable chain: a point over `F_2` or `F_3`.
///
/// A stable chain over `F_p` lifts to one over the rationals, since the
/// unstable locus is closed and defined over the integers. The converse
/// relies on purity: a nonempty component has points over every field.
pub fn stable_chain_exists(blocks: &[Vec<i64>]) -> Result<bool> {
    for q in [2, 3] {
        if count_stable_tuples(blocks, q)? > 0 {
            return Ok(true);
        }
    }
    Ok(false)
}

/// `dim Hom - dim Aut + 1`: the dimension of the component.
pub fn component_dimension(c: &ChainComponent) -> Result<i64> {
    let space = FfChainSpace::new(c, 2)?;
    Ok(space.dimension() as i64 - space.automorphism_dimension() as i64 + 1)
}

/// The first `dim + 2` primes: enough to interpolate plus one to hold out.
pub fn default_primes(c: &ChainComponent) -> Result<Vec<u64>> {
    let need = component_dimension(c)?.max(0) as usize + 2;
    Ok((2..).filter(|&p| is_prime(p)).take(need).collect())
}

/// One line of the oracle table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountRecord {
    pub component: String,
    pub counts: Vec<(u64, u64)>,
    pub q_poly: Vec<u64>,
    pub poincare: PoincarePolynomial,
}

/// Counts over every prime, interpolates on all but the last, checks the
/// last, and converts `q -> x^2`.
pub fn count_record(c: &ChainComponent, primes: &[u64]) -> Result<CountRecord> {
    let mut ps = primes.to_vec();
    ps.sort_unstable();
    ps.dedup();
    if ps.len() != primes.len() {
        return Err(Error::Malformed("repeated prime".into()));
    }
    for &p in &ps {
        check_prime(p)?;
    }
    let need = component_dimension(c)?.max(0) as usize + 2;
    if ps.len() < need {
        return Err(Error::Malformed(format!(
            "component {} of dimension {} needs at least {need} primes, got {}",
            c.key(),
            need - 2,
            ps.len()
        )));
    }
    let counts: Vec<(u64, u64)> = ps.iter().map(|&p| Ok((p, count_stable_chains(c, p)?))).collect::<Result<_>>()?;
    let (fit, held) = counts.split_at(counts.len() - 1);
    let poly = interpolate(fit);
    let (hq, hn) = held[0];
    if eval_q(&poly, hq) != Q::from_integer(hn.into()) {
        return Err(Error::Invariant(format!(
            "counts {counts:?} for {} are not a polynomial in q (held-out F_{hq} gives {hn})",
            c.key()
        )));
    }
    let mut q_poly = Vec::with_capacity(poly.len());
    for x in &poly {
        if !x.is_integer() || x.is_negative() {
            return Err(Error::Invariant(format!("point count of {} has coefficient {x}", c.key())));
        }
        q_poly.push(x.to_integer().to_u64().ok_or_else(|| Error::Invariant("coefficient overflow".into()))?);
    }
    while q_poly.last() == Some(&0) {
        q_poly.pop();
    }
    let poincare = PoincarePolynomial::from_q_poly(&q_poly);
    Ok(CountRecord { component: c.key(), counts, q_poly, poincare })
}

/// The Poincaré polynomial read off from point counts.
pub fn component_poincare_ff(c: &ChainComponent, primes: &[u64]) -> Result<PoincarePolynomial> {
    Ok(count_record(c, primes)?.poincare)
}

/// Lagrange interpolation, coefficients constant first.
fn interpolate(points: &[(u64, u64)]) -> Vec<Q> {
    let n = points.len();
    let mut out = vec![Q::zero(); n];
    for (i, &(xi, yi)) in points.iter().enumerate() {
        let mut basis = vec![Q::one()];
        let mut denom = Q::one();
        for (j, &(xj, _)) in points.iter().enumerate() {
            if i == j {
                continue;
            }
            let xj = Q::from_integer(xj.into());
            let mut nb = vec![Q::zero(); basis.len() + 1];
            for (k, b) in basis.iter().enumerate() {
                nb[k + 1] += b;
                nb[k] -= b * &xj;
            }
            basis = nb;
            denom *= Q::from_integer(xi.into()) - xj;
        }
        let scale = Q::from_integer(yi.into()) / denom;
        for (k, b) in basis.iter().enumerate() {
            out[k] += b * &scale;
        }
    }
    out
}

fn eval_q(poly: &[Q], x: u64) -> Q {
    let x = Q::from_integer(x.into());
    poly.iter().rev().fold(Q::zero(), |acc, c| acc * &x + c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn saturated_sub_line_bundles() {
        let f = Fp(3);
        // O(0) in O + O: the q + 1 points of P^1.
        assert_eq!(saturated_vectors(f, &[0, 0]).unwrap().len(), 4);
        // O(-1) in O + O: coprime pairs of linear forms up to scale,
        // |GL_2(F_3)| / (q - 1) = 24.
        assert_eq!(saturated_vectors(f, &[1, 1]).unwrap().len(), 24);
        // O(-1) in O + O(-1): (linear, constant) with constant nonzero.
        assert_eq!(saturated_vectors(f, &[1, 0]).unwrap().len(), 9);
    }

    #[test]
    fn automorphism_orders() {
        assert_eq!(aut_order(&[0], 2), 1);
        assert_eq!(aut_order(&[0, 0], 2), 6);
        // (d e; 0 f) with e in O(1): 2 * 2 * 3^2
        assert_eq!(aut_order(&[0, -1], 3), 36);
    }

    #[test]
    fn interpolation() {
        let pts = [(2, 7), (3, 13), (5, 31)];
        assert_eq!(interpolate(&pts), vec![Q::one(), Q::one(), Q::one()]);
    }

    #[test]
    fn rref_basics() {
        let f = Fp(5);
        let r = f.rref(vec![vec![2, 4, 1], vec![1, 2, 4], vec![0, 0, 0]]);
        assert_eq!(r, vec![vec![1, 2, 0], vec![0, 0, 1]]);
    }

    #[test]
    fn lattice_matches_brute_force() {
        for blocks in [
            vec![vec![0], vec![-1]],
            vec![vec![0, 0], vec![-1]],
            vec![vec![0], vec![0], vec![-1]],
            vec![vec![1], vec![0, -1], vec![-1]],
            vec![vec![0], vec![-1, -1]],
        ] {
            for q in [2, 3] {
                let fast = count_stable_tuples(&blocks, q).unwrap();
                let slow = count_stable_tuples_brute(&blocks, q).unwrap();
                assert_eq!(fast, slow, "{blocks:?} over F_{q}");
            }
        }
    }
}
