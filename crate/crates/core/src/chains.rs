//! Holomorphic chains `U_1 -> U_2(2) -> ... -> U_n(2(n-1))`: the fixed points of
//! the circle action on the moduli space of co-Higgs bundles of rank `r` and
//! degree `d`, their Morse indices, and the resulting Poincaré series.
//!
//! A component is keyed by the splitting of every block, written
//! `[0|0 0|-1]` for `O, O + O, O(-1)`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::cache::OracleTable;
use crate::ffcount;
use crate::higgs::SplittingType;
use crate::{Error, Result};

/// `(rk U_1, ..., rk U_n)` and `(deg U_1, ..., deg U_n)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ChainShape {
    pub rtype: Vec<usize>,
    pub dvec: Vec<i64>,
}

impl ChainShape {
    pub fn new(rtype: Vec<usize>, dvec: Vec<i64>) -> Result<Self> {
        if rtype.is_empty() || rtype.len() != dvec.len() {
            return Err(Error::Malformed(format!("chain shape {rtype:?} / {dvec:?}")));
        }
        if rtype.contains(&0) {
            return Err(Error::Malformed("chain blocks must have positive rank".into()));
        }
        Ok(ChainShape { rtype, dvec })
    }

    pub fn len(&self) -> usize {
        self.rtype.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rtype.is_empty()
    }

    pub fn rank(&self) -> usize {
        self.rtype.iter().sum()
    }

    pub fn degree(&self) -> i64 {
        self.dvec.iter().sum()
    }

    pub fn is_type_1n(&self) -> bool {
        self.rtype.iter().all(|&r| r == 1)
    }
}

/// Integer coefficients `b_0, b_1, ...` of `x^0, x^1, ...`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "Vec<u64>", into = "Vec<u64>")]
pub struct PoincarePolynomial(Vec<u64>);

impl From<Vec<u64>> for PoincarePolynomial {
    fn from(v: Vec<u64>) -> Self {
        PoincarePolynomial::new(v)
    }
}

impl From<PoincarePolynomial> for Vec<u64> {
    fn from(p: PoincarePolynomial) -> Self {
        p.0
    }
}

impl PoincarePolynomial {
    pub fn new(mut coeffs: Vec<u64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        PoincarePolynomial(coeffs)
    }

    pub fn one() -> Self {
        PoincarePolynomial(vec![1])
    }

    /// `1 + x^2 + ... + x^(2n)`, the Poincaré polynomial of `P^n`.
    pub fn projective_space(n: usize) -> Self {
        let mut c = vec![0; 2 * n + 1];
        for k in 0..=n {
            c[2 * k] = 1;
        }
        PoincarePolynomial(c)
    }

    /// From a point count `sum c_k q^k`, by `q -> x^2`.
    pub fn from_q_poly(c: &[u64]) -> Self {
        let mut out = vec![0; 2 * c.len()];
        for (k, &ck) in c.iter().enumerate() {
            out[2 * k] = ck;
        }
        PoincarePolynomial::new(out)
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.0
    }

    pub fn coeff(&self, k: usize) -> u64 {
        self.0.get(k).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn add(&self, rhs: &PoincarePolynomial) -> PoincarePolynomial {
        let n = self.0.len().max(rhs.0.len());
        PoincarePolynomial::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }

    pub fn mul(&self, rhs: &PoincarePolynomial) -> PoincarePolynomial {
        if self.is_zero() || rhs.is_zero() {
            return PoincarePolynomial::default();
        }
        let mut c = vec![0; self.0.len() + rhs.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in rhs.0.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        PoincarePolynomial::new(c)
    }

    /// Multiplication by `x^k`.
    pub fn shift(&self, k: usize) -> PoincarePolynomial {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = vec![0; k];
        c.extend_from_slice(&self.0);
        PoincarePolynomial(c)
    }

    pub fn is_palindromic(&self) -> bool {
        let lo = self.0.iter().position(|&c| c != 0).unwrap_or(0);
        let c = &self.0[lo..];
        c.iter().eq(c.iter().rev())
    }

    pub fn eval(&self, x: u64) -> u128 {
        self.0.iter().rev().fold(0u128, |acc, &c| acc * x as u128 + c as u128)
    }
}

/// Ascending powers: `1 + x^2 + 3x^4`.
impl fmt::Display for PoincarePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(k, &c)| match (k, c) {
                (0, c) => c.to_string(),
                (1, 1) => "x".into(),
                (1, c) => format!("{c}x"),
                (k, 1) => format!("x^{k}"),
                (k, c) => format!("{c}x^{k}"),
            })
            .collect();
        if terms.is_empty() {
            return f.write_str("0");
        }
        f.write_str(&terms.join(" + "))
    }
}

impl FromStr for PoincarePolynomial {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("polynomial {s:?}"));
        let mut c: Vec<u64> = Vec::new();
        for term in s.split('+').map(str::trim) {
            let (coef, power) = match term.find('x') {
                None => (term, 0),
                Some(i) => {
                    let p = match &term[i + 1..] {
                        "" => 1,
                        rest => rest.strip_prefix('^').ok_or_else(bad)?.parse().map_err(|_| bad())?,
                    };
                    (&term[..i], p)
                }
            };
            let coef: u64 = if coef.is_empty() { 1 } else { coef.parse().map_err(|_| bad())? };
            if c.len() <= power {
                c.resize(power + 1, 0);
            }
            c[power] += coef;
        }
        Ok(PoincarePolynomial::new(c))
    }
}

/// Either a known polynomial or a pointer to the finite-field oracle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ComponentPoincare {
    Known(PoincarePolynomial),
    External,
}

impl Serialize for ComponentPoincare {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ComponentPoincare::Known(p) => p.serialize(s),
            ComponentPoincare::External => s.serialize_str("external"),
        }
    }
}

impl<'de> Deserialize<'de> for ComponentPoincare {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Coeffs(Vec<u64>),
            Marker(String),
        }
        match Repr::deserialize(d)? {
            Repr::Coeffs(c) => Ok(ComponentPoincare::Known(PoincarePolynomial::new(c))),
            Repr::Marker(m) if m == "external" => Ok(ComponentPoincare::External),
            Repr::Marker(m) => Err(serde::de::Error::custom(format!("unknown poincare marker {m:?}"))),
        }
    }
}

/// A fixed-point component: a chain shape with a splitting for every block.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ComponentRepr", into = "ComponentRepr")]
pub struct ChainComponent {
    shape: ChainShape,
    splittings: Vec<SplittingType>,
    morse_index: i64,
    poincare: ComponentPoincare,
}

#[derive(Serialize, Deserialize)]
struct ComponentRepr {
    rtype: Vec<usize>,
    dvec: Vec<i64>,
    splittings: Vec<SplittingType>,
    morse_index: i64,
    poincare: ComponentPoincare,
}

impl TryFrom<ComponentRepr> for ChainComponent {
    type Error = Error;
    fn try_from(r: ComponentRepr) -> Result<Self> {
        let c = ChainComponent::new(r.splittings)?;
        if c.shape.rtype != r.rtype || c.shape.dvec != r.dvec {
            return Err(Error::Malformed("splittings disagree with rtype/dvec".into()));
        }
        if c.morse_index != r.morse_index {
            return Err(Error::Malformed(format!("morse index {} should be {}", r.morse_index, c.morse_index)));
        }
        Ok(c.with_poincare(r.poincare))
    }
}

impl From<ChainComponent> for ComponentRepr {
    fn from(c: ChainComponent) -> Self {
        ComponentRepr {
            rtype: c.shape.rtype,
            dvec: c.shape.dvec,
            splittings: c.splittings,
            morse_index: c.morse_index,
            poincare: c.poincare,
        }
    }
}

impl ChainComponent {
    /// Shape and Morse index are derived; the Poincaré polynomial is the
    /// closed form for type `(1, ..., 1)`, the known value for the rank-3
    /// `(2, 1)` component and its dual, and external otherwise.
    pub fn new(splittings: Vec<SplittingType>) -> Result<Self> {
        let shape = ChainShape::new(
            splittings.iter().map(SplittingType::rank).collect(),
            splittings.iter().map(SplittingType::degree).collect(),
        )?;
        let morse_index = morse_index(&shape);
        let poincare = if shape.is_type_1n() {
            ComponentPoincare::Known(product_poincare(&shape.dvec)?)
        } else if KNOWN.iter().any(|k| *k == component_key(&splittings)) {
            ComponentPoincare::Known(PoincarePolynomial::one())
        } else {
            ComponentPoincare::External
        };
        Ok(ChainComponent { shape, splittings, morse_index, poincare })
    }

    fn with_poincare(mut self, p: ComponentPoincare) -> Self {
        self.poincare = p;
        self
    }

    pub fn shape(&self) -> &ChainShape {
        &self.shape
    }

    pub fn splittings(&self) -> &[SplittingType] {
        &self.splittings
    }

    pub fn morse_index(&self) -> i64 {
        self.morse_index
    }

    pub fn poincare(&self) -> &ComponentPoincare {
        &self.poincare
    }

    pub fn rank(&self) -> usize {
        self.shape.rank()
    }

    pub fn degree(&self) -> i64 {
        self.shape.degree()
    }

    pub fn key(&self) -> String {
        component_key(&self.splittings)
    }

    /// Block splittings as plain degree lists.
    pub fn blocks(&self) -> Vec<Vec<i64>> {
        self.splittings.iter().map(|s| s.degrees().to_vec()).collect()
    }
}

impl FromStr for ChainComponent {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        ChainComponent::new(parse_component_key(s)?)
    }
}

/// The `(2, 1)` component `O + O -> O(-1)` of degree -1 has `b_0 = 1` as its
/// only Betti number; the second key is its dual.
const KNOWN: [&str; 2] = ["[0 0|-1]", "[0|-1 -1]"];

pub fn component_key(splittings: &[SplittingType]) -> String {
    let blocks: Vec<String> = splittings
        .iter()
        .map(|s| s.degrees().iter().map(i64::to_string).collect::<Vec<_>>().join(" "))
        .collect();
    format!("[{}]", blocks.join("|"))
}

pub fn parse_component_key(s: &str) -> Result<Vec<SplittingType>> {
    let bad = || Error::Parse(format!("component key {s:?}, expected e.g. [0|0 0|-1]"));
    let inner = s.trim().strip_prefix('[').and_then(|t| t.strip_suffix(']')).ok_or_else(bad)?;
    inner
        .split('|')
        .map(|block| {
            let degs = block
                .split_whitespace()
                .map(|t| t.parse::<i64>().map_err(|_| bad()))
                .collect::<Result<Vec<_>>>()?;
            SplittingType::new(degs).map_err(|_| bad())
        })
        .collect()
}

/// The closed-form index from the ranks and degrees of the blocks.
pub fn morse_index(shape: &ChainShape) -> i64 {
    let r: Vec<i64> = shape.rtype.iter().map(|&x| x as i64).collect();
    let d = &shape.dvec;
    let n = r.len();
    let mut beta = 0;
    if n > 2 {
        for i in 0..n {
            for j in i + 2..n {
                beta += 4 * r[i] * r[j];
            }
        }
    }
    for i in 0..n.saturating_sub(1) {
        beta -= 2 * (-r[i + 1] * d[i] + r[i] * d[i + 1] + r[i] * r[i + 1]);
    }
    beta
}

fn h0(n: i64) -> i64 {
    (n + 1).max(0)
}

fn h1(n: i64) -> i64 {
    (-n - 1).max(0)
}

/// The index from cohomology of the weight pieces of `End E`, in real
/// dimensions: `H^0_{>=2}(End E(2)) - H^0_{>=1}(End E) + H^1_{>=1}(End E) -
/// H^1_{>=2}(End E(2))`, where weight `w` is `sum_i Hom(U_i, U_{i+w})`.
pub fn morse_index_cohomological(c: &ChainComponent) -> i64 {
    let blocks = c.blocks();
    let n = blocks.len();
    let mut complex = 0;
    for i in 0..n {
        for j in i + 1..n {
            for a in &blocks[i] {
                for b in &blocks[j] {
                    complex += h1(b - a) - h0(b - a);
                    if j >= i + 2 {
                        complex += h0(b - a + 2) - h1(b - a + 2);
                    }
                }
            }
        }
    }
    2 * complex
}

fn check_coprime(r: i64, d: i64) -> Result<()> {
    if r < 1 {
        return Err(Error::Malformed(format!("rank {r}")));
    }
    if r.gcd(&d) != 1 {
        return Err(Error::NotCoprime(r, d));
    }
    Ok(())
}

/// Degree vectors of stable chains of type `(1, ..., 1)`: every map nonzero
/// (`d_{i+1} - d_i + 2 >= 0`) and every trailing block has slope `< d/r`.
///
/// The window `[ceil(d/r) - 2(r-1), floor(d/r) + 2(r-1)]` is exhaustive. The
/// last trailing condition is `d_r < d/r`, and the complement of the first
/// gives `d_1 > d/r`. The gap bound `d_{k+1} >= d_k - 2` read forwards from
/// `d_1` gives `d_k > d/r - 2(k-1)`, read backwards from `d_r` it gives
/// `d_k < d/r + 2(r-k)`. A unit test widens the window and checks.
pub fn stable_degree_vectors_1n(r: i64, d: i64) -> Result<Vec<Vec<i64>>> {
    check_coprime(r, d)?;
    Ok(degree_vectors_1n(r, d, 0))
}

fn degree_vectors_1n(r: i64, d: i64, widen: i64) -> Vec<Vec<i64>> {
    let lo = Integer::div_ceil(&d, &r) - 2 * (r - 1) - widen;
    let hi = Integer::div_floor(&d, &r) + 2 * (r - 1) + widen;
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fill_1n(r as usize, d, lo, hi, &mut cur, &mut out);
    out.retain(|v| is_stable_1n(v, r, d));
    out.sort();
    out.reverse();
    out
}

fn fill_1n(r: usize, d: i64, lo: i64, hi: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
    let used: i64 = cur.iter().sum();
    if cur.len() + 1 == r {
        let last = d - used;
        if (lo..=hi).contains(&last) {
            cur.push(last);
            out.push(cur.clone());
            cur.pop();
        }
        return;
    }
    for x in lo..=hi {
        cur.push(x);
        fill_1n(r, d, lo, hi, cur, out);
        cur.pop();
    }
}

fn is_stable_1n(v: &[i64], r: i64, d: i64) -> bool {
    let gaps = v.windows(2).all(|w| w[1] - w[0] + 2 >= 0);
    let trailing = (1..v.len()).all(|k| {
        let s: i64 = v[k..].iter().sum();
        r * s < d * (v.len() - k) as i64
    });
    gaps && trailing
}

/// `prod_i (1 + x^2 + ... + x^(2(d_{i+1} - d_i + 2)))`.
fn product_poincare(dvec: &[i64]) -> Result<PoincarePolynomial> {
    let mut p = PoincarePolynomial::one();
    for w in dvec.windows(2) {
        let n = w[1] - w[0] + 2;
        if n < 0 {
            return Err(Error::Unstable(format!("no nonzero map O({}) -> O({})", w[0], w[1] + 2)));
        }
        p = p.mul(&PoincarePolynomial::projective_space(n as usize));
    }
    Ok(p)
}

fn compositions(r: usize) -> Vec<Vec<usize>> {
    if r == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for k in 1..=r {
        for mut rest in compositions(r - k) {
            rest.insert(0, k);
            out.push(rest);
        }
    }
    out
}

/// Non-increasing lists of length `rank` with entries in `[lo, hi]`.
fn block_splittings(rank: usize, lo: i64, hi: i64) -> Vec<Vec<i64>> {
    if rank == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for top in (lo..=hi).rev() {
        for mut rest in block_splittings(rank - 1, lo, top) {
            rest.insert(0, top);
            out.push(rest);
        }
    }
    out
}

fn candidate_tuples(rtype: &[usize], d: i64, lo: i64, hi: i64) -> Vec<Vec<Vec<i64>>> {
    let options: Vec<Vec<Vec<i64>>> = rtype.iter().map(|&k| block_splittings(k, lo, hi)).collect();
    let mut out = Vec::new();
    let mut cur = Vec::new();
    product_with_sum(&options, d, &mut cur, &mut out);
    out
}

fn product_with_sum(options: &[Vec<Vec<i64>>], d: i64, cur: &mut Vec<Vec<i64>>, out: &mut Vec<Vec<Vec<i64>>>) {
    if cur.len() == options.len() {
        if cur.iter().flatten().sum::<i64>() == d {
            out.push(cur.clone());
        }
        return;
    }
    for o in &options[cur.len()] {
        cur.push(o.clone());
        product_with_sum(options, d, cur, out);
        cur.pop();
    }
}

/// Sub-chains forced by degree alone: a summand `O(a)` of `U_i` can only map
/// to a summand `O(b)` of `U_{i+1}` when `b - a + 2 >= 0`. Every set of
/// summands closed under these edges spans an invariant sub-chain for every
/// choice of maps. Returns false if one of them, proper and nonzero, has
/// slope `>= d/r`.
pub fn passes_summand_test(blocks: &[Vec<i64>], d: i64) -> bool {
    let nodes: Vec<(usize, i64)> =
        blocks.iter().enumerate().flat_map(|(i, s)| s.iter().map(move |&a| (i, a))).collect();
    let r = nodes.len() as i64;
    let succ: Vec<u64> = nodes
        .iter()
        .map(|&(i, a)| {
            nodes
                .iter()
                .enumerate()
                .filter(|(_, &(j, b))| j == i + 1 && b - a + 2 >= 0)
                .fold(0u64, |m, (k, _)| m | 1 << k)
        })
        .collect();
    let full = (1u64 << nodes.len()) - 1;
    (1..full).all(|mask| {
        let closed = (0..nodes.len()).all(|k| mask >> k & 1 == 0 || succ[k] & !mask == 0);
        if !closed {
            return true;
        }
        let deg: i64 = (0..nodes.len()).filter(|k| mask >> k & 1 == 1).map(|k| nodes[k].1).sum();
        let rk = mask.count_ones() as i64;
        r * deg < d * rk
    })
}

/// Every fixed-point component of the moduli space of stable co-Higgs bundles
/// of rank `r` and degree `d`, sorted by `(rtype, dvec, splittings)`.
///
/// Type `(1, ..., 1)` uses the exact inequalities. Other types range over
/// splittings with summands in `[ceil(d/r) - 2r, floor(d/r) + 2r]`, drop the
/// tuples failing [`passes_summand_test`], and keep a tuple only if a stable
/// chain on it exists over a small prime field (see
/// [`ffcount::stable_chain_exists`]).
///
/// Certified for `r <= 4`. At `r = 5` the fixed splitting per component is
/// not the right model and this is best-effort; it fails with
/// [`Error::Unsupported`] on candidates with a block of rank 4 or more.
pub fn enumerate_components(r: i64, d: i64) -> Result<Vec<ChainComponent>> {
    enumerate_components_widened(r, d, 0)
}

/// [`enumerate_components`] with the splitting window widened by `widen` on
/// each side. Used to check that the default window is exhaustive.
pub fn enumerate_components_widened(r: i64, d: i64, widen: i64) -> Result<Vec<ChainComponent>> {
    check_coprime(r, d)?;
    if r > 5 {
        return Err(Error::Unsupported(format!("census of rank {r} (at most 5)")));
    }
    let lo = Integer::div_ceil(&d, &r) - 2 * r - widen;
    let hi = Integer::div_floor(&d, &r) + 2 * r + widen;
    let mut out = Vec::new();
    for rtype in compositions(r as usize) {
        if rtype.iter().all(|&k| k == 1) {
            for dvec in degree_vectors_1n(r, d, widen) {
                let split = dvec.iter().map(|&a| SplittingType::new(vec![a])).collect::<Result<_>>()?;
                out.push(ChainComponent::new(split)?);
            }
            continue;
        }
        for blocks in candidate_tuples(&rtype, d, lo, hi) {
            if !passes_summand_test(&blocks, d) {
                continue;
            }
            if ffcount::stable_chain_exists(&blocks)? {
                let split = blocks.into_iter().map(SplittingType::new).collect::<Result<_>>()?;
                out.push(ChainComponent::new(split)?);
            }
        }
    }
    sort_census(&mut out);
    Ok(out)
}

/// Lexicographic order on `(rtype, dvec, splittings)`.
pub fn sort_census(components: &mut [ChainComponent]) {
    components.sort_by(|a, b| {
        (&a.shape.rtype, &a.shape.dvec, &a.splittings).cmp(&(&b.shape.rtype, &b.shape.dvec, &b.splittings))
    });
}

/// Poincaré polynomial of one component. Mixed types come from the oracle
/// table, looked up under the component key and then under its dual's key.
pub fn component_poincare(c: &ChainComponent, oracle: Option<&OracleTable>) -> Result<PoincarePolynomial> {
    if let ComponentPoincare::Known(p) = &c.poincare {
        return Ok(p.clone());
    }
    let table = oracle.ok_or_else(|| Error::MissingOracle(c.key()))?;
    table
        .get(&c.key())
        .or_else(|| table.get(&dualize(c).key()))
        .cloned()
        .ok_or_else(|| Error::MissingOracle(c.key()))
}

/// `sum_N x^index(N) P(N; x)` over the census.
pub fn poincare_series(r: i64, d: i64, oracle: Option<&OracleTable>) -> Result<PoincarePolynomial> {
    series_of(&enumerate_components(r, d)?, oracle)
}

/// The localization sum over an already computed census.
pub fn series_of(components: &[ChainComponent], oracle: Option<&OracleTable>) -> Result<PoincarePolynomial> {
    let mut total = PoincarePolynomial::default();
    for c in components {
        let idx = usize::try_from(c.morse_index)
            .map_err(|_| Error::Invariant(format!("negative Morse index at {}", c.key())))?;
        total = total.add(&component_poincare(c, oracle)?.shift(idx));
    }
    Ok(total)
}

/// Dual-and-twist `E -> E* (-1)`: reverses the chain and sends each summand
/// `O(a)` to `O(-a-1)`, so degree `d` goes to `-d - r`.
pub fn dualize(c: &ChainComponent) -> ChainComponent {
    let splittings: Vec<SplittingType> = c
        .splittings
        .iter()
        .rev()
        .map(|s| SplittingType::new(s.degrees().iter().map(|a| -a - 1).collect()).expect("nonempty"))
        .collect();
    let out = ChainComponent::new(splittings).expect("dual of a valid component");
    match (&c.poincare, &out.poincare) {
        (ComponentPoincare::Known(p), ComponentPoincare::External) => {
            let p = p.clone();
            out.with_poincare(ComponentPoincare::Known(p))
        }
        _ => out,
    }
}

/// Splitting summands of every component, for quick duplicate checks.
pub fn census_keys(components: &[ChainComponent]) -> BTreeSet<String> {
    components.iter().map(ChainComponent::key).collect()
}
