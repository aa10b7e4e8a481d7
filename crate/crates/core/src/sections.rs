//! Global sections of the line bundles `O(n)` on the projective line.
//!
//! A section of `O(n)` is stored by its coefficients in the chart `U0`
//! (coordinate `z`), lowest degree first. Its form in the chart `U1`
//! (coordinate `z~ = 1/z`) is `z~^n s(1/z~)`: the same list reversed.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

use crate::rational::{fmt_q, from_strs, parse_q, q, to_strs, QStr};
use crate::{Error, Result, Q};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "SectionRepr", into = "SectionRepr")]
pub struct Section {
    twist: i64,
    coeffs: Vec<Q>,
}

#[derive(Serialize, Deserialize)]
struct SectionRepr {
    twist: i64,
    coeffs: Vec<QStr>,
}

impl TryFrom<SectionRepr> for Section {
    type Error = Error;
    fn try_from(r: SectionRepr) -> Result<Self> {
        Section::new(r.twist, from_strs(r.coeffs))
    }
}

impl From<Section> for SectionRepr {
    fn from(s: Section) -> Self {
        SectionRepr { twist: s.twist, coeffs: to_strs(&s.coeffs) }
    }
}

fn slots(twist: i64) -> usize {
    if twist < 0 {
        0
    } else {
        twist as usize + 1
    }
}

impl Section {
    pub fn new(twist: i64, coeffs: Vec<Q>) -> Result<Self> {
        let expected = slots(twist);
        if coeffs.len() != expected {
            return Err(Error::CoeffCount { twist, expected, got: coeffs.len() });
        }
        Ok(Section { twist, coeffs })
    }

    pub fn from_ints(twist: i64, coeffs: &[i64]) -> Result<Self> {
        Section::new(twist, coeffs.iter().map(|&c| q(c)).collect())
    }

    pub fn zero(twist: i64) -> Self {
        Section { twist, coeffs: vec![Q::zero(); slots(twist)] }
    }

    /// `c * z^k` as a section of `O(twist)`.
    pub fn monomial(twist: i64, k: usize, c: Q) -> Result<Self> {
        let mut s = Section::zero(twist);
        if k >= s.coeffs.len() {
            if c.is_zero() {
                return Ok(s);
            }
            return Err(Error::CoeffCount { twist, expected: slots(twist), got: k + 1 });
        }
        s.coeffs[k] = c;
        Ok(s)
    }

    /// The section that is `c` on `U0`.
    pub fn constant(twist: i64, c: Q) -> Result<Self> {
        Section::monomial(twist, 0, c)
    }

    pub fn one(twist: i64) -> Result<Self> {
        Section::constant(twist, Q::one())
    }

    /// The coordinate function `z` as a section of `O(twist)`, `twist >= 1`.
    pub fn z(twist: i64) -> Result<Self> {
        Section::monomial(twist, 1, Q::one())
    }

    pub fn twist(&self) -> i64 {
        self.twist
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Coefficients in the chart `U1`.
    pub fn other_chart(&self) -> Vec<Q> {
        self.coeffs.iter().rev().cloned().collect()
    }

    pub fn from_other_chart(twist: i64, coeffs: Vec<Q>) -> Result<Self> {
        let mut s = Section::new(twist, coeffs)?;
        s.coeffs.reverse();
        Ok(s)
    }

    pub fn add(&self, rhs: &Section) -> Result<Section> {
        if self.twist != rhs.twist {
            return Err(Error::TwistMismatch(self.twist, rhs.twist));
        }
        let coeffs = self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect();
        Ok(Section { twist: self.twist, coeffs })
    }

    pub fn sub(&self, rhs: &Section) -> Result<Section> {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Section {
        self.scale(&-Q::one())
    }

    pub fn scale(&self, c: &Q) -> Section {
        Section { twist: self.twist, coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    pub fn mul(&self, rhs: &Section) -> Section {
        let twist = self.twist + rhs.twist;
        let mut out = Section::zero(twist);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out.coeffs[i + j] += a * b;
            }
        }
        out
    }

    pub fn eval_u0(&self, z: &Q) -> Q {
        horner(&self.coeffs, z)
    }

    pub fn eval_u1(&self, zt: &Q) -> Q {
        horner(&self.other_chart(), zt)
    }

    /// Fiber value at `p`: the `U0` value when `p` is finite, otherwise the
    /// `U1` value at `z~ = 0`.
    pub fn evaluate(&self, p: &ProjPoint) -> Q {
        match p.affine() {
            Some(z) => self.eval_u0(z),
            None => self.coeffs.last().cloned().unwrap_or_else(Q::zero),
        }
    }

    /// Degree of the `U0` polynomial, `None` for the zero section.
    pub fn u0_degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !c.is_zero())
    }

    /// Order of vanishing at infinity: `twist - deg_U0`.
    pub fn multiplicity_at_infinity(&self) -> Result<usize> {
        let deg = self.u0_degree().ok_or(Error::ZeroSection)?;
        Ok(self.twist as usize - deg)
    }

    /// The unique zero of a nonzero section of `O(1)`: `c0 + c1 z` vanishes at `[-c0 : c1]`.
    pub fn zero_of_linear(&self) -> Result<ProjPoint> {
        if self.twist != 1 {
            return Err(Error::TwistMismatch(self.twist, 1));
        }
        if self.is_zero() {
            return Err(Error::ZeroSection);
        }
        ProjPoint::new(-self.coeffs[0].clone(), self.coeffs[1].clone())
    }

    /// Counts distinct zeros on the projective line without extracting roots:
    /// `gcd(s, s')` in `U0` plus the order of vanishing at infinity.
    pub fn squarefree_info(&self) -> Result<SquarefreeInfo> {
        let inf = self.multiplicity_at_infinity()?;
        let p = trimmed(&self.coeffs);
        let g = poly_gcd(&p, &derivative(&p));
        let finite_distinct = (p.len() - 1) - (g.len() - 1);
        let distinct_roots = finite_distinct + usize::from(inf > 0);
        Ok(SquarefreeInfo { distinct_roots, is_squarefree: g.len() == 1 && inf <= 1 })
    }

    /// `(s(z) - s(z0)) / (z - z0)` as a section of `O(twist - 1)`, by synthetic division.
    pub fn divided_difference(&self, z0: &Q) -> Result<Section> {
        if self.twist < 1 {
            return Err(Error::Unsupported(format!("divided difference on O({})", self.twist)));
        }
        let n = self.coeffs.len();
        let mut out = vec![Q::zero(); n - 1];
        let mut acc = Q::zero();
        for k in (1..n).rev() {
            acc = &acc * z0 + &self.coeffs[k];
            out[k - 1] = acc.clone();
        }
        Section::new(self.twist - 1, out)
    }

    /// Formal derivative in `U0`, as a section of `O(twist - 1)`.
    pub fn derivative_u0(&self) -> Section {
        let d = derivative(&self.coeffs);
        let mut s = Section::zero(self.twist - 1);
        for (k, c) in d.into_iter().enumerate().take(s.coeffs.len()) {
            s.coeffs[k] = c;
        }
        s
    }
}

/// Result of [`Section::squarefree_info`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SquarefreeInfo {
    /// Number of distinct zeros on the projective line (over an algebraic closure).
    pub distinct_roots: usize,
    pub is_squarefree: bool,
}

/// The greatest common divisor of several sections, viewed as binary forms:
/// a section of `O(g)` whose zeros (with multiplicity) are the common zeros.
/// `None` when every input is zero.
pub fn gcd_sections(sections: &[Section]) -> Option<Section> {
    let nonzero: Vec<&Section> = sections.iter().filter(|s| !s.is_zero()).collect();
    if nonzero.is_empty() {
        return None;
    }
    let mut g = trimmed(&nonzero[0].coeffs);
    let mut inf = usize::MAX;
    for s in &nonzero {
        g = poly_gcd(&g, &trimmed(&s.coeffs));
        inf = inf.min(s.multiplicity_at_infinity().unwrap_or(0));
    }
    let twist = (g.len() - 1 + inf) as i64;
    let mut coeffs = g;
    coeffs.resize(twist as usize + 1, Q::zero());
    Some(Section { twist, coeffs })
}

impl fmt::Display for Section {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "O({}):(", self.twist)?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", fmt_q(c))?;
        }
        write!(f, ")")
    }
}

/// A point `[u : v]` of the projective line, meaning `z = u / v`.
/// Canonical form has `v = 1`, or `(u, v) = (1, 0)` at infinity.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProjPoint {
    u: Q,
    v: Q,
}

impl ProjPoint {
    pub fn new(u: Q, v: Q) -> Result<Self> {
        if v.is_zero() {
            if u.is_zero() {
                return Err(Error::DegeneratePoint);
            }
            return Ok(ProjPoint::infinity());
        }
        Ok(ProjPoint { u: u / v, v: Q::one() })
    }

    pub fn finite(z: Q) -> Self {
        ProjPoint { u: z, v: Q::one() }
    }

    pub fn infinity() -> Self {
        ProjPoint { u: Q::one(), v: Q::zero() }
    }

    pub fn is_infinite(&self) -> bool {
        self.v.is_zero()
    }

    /// The affine coordinate `z`, if the point is finite.
    pub fn affine(&self) -> Option<&Q> {
        (!self.is_infinite()).then_some(&self.u)
    }

    pub fn u(&self) -> &Q {
        &self.u
    }

    pub fn v(&self) -> &Q {
        &self.v
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}:{}]", fmt_q(&self.u), fmt_q(&self.v))
    }
}

impl FromStr for ProjPoint {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let inner = s
            .trim()
            .strip_prefix('[')
            .and_then(|t| t.strip_suffix(']'))
            .ok_or_else(|| Error::Parse(format!("not a projective point: {s:?}")))?;
        let (u, v) = inner
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("not a projective point: {s:?}")))?;
        ProjPoint::new(parse_q(u)?, parse_q(v)?)
    }
}

impl Serialize for ProjPoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ProjPoint {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

// Dense univariate polynomials over Q, lowest degree first, no trailing zeros
// (the zero polynomial is the empty vector).

fn horner(coeffs: &[Q], x: &Q) -> Q {
    coeffs.iter().rev().fold(Q::zero(), |acc, c| acc * x + c)
}

fn trimmed(p: &[Q]) -> Vec<Q> {
    let mut v = p.to_vec();
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
    v
}

fn derivative(p: &[Q]) -> Vec<Q> {
    let d: Vec<Q> = p.iter().enumerate().skip(1).map(|(k, c)| c * q(k as i64)).collect();
    trimmed(&d)
}

fn poly_rem(a: &[Q], b: &[Q]) -> Vec<Q> {
    let mut r = trimmed(a);
    let lead = b.last().expect("division by zero polynomial");
    while r.len() >= b.len() && !r.is_empty() {
        let c = r.last().unwrap() / lead;
        let shift = r.len() - b.len();
        for (i, bc) in b.iter().enumerate() {
            r[shift + i] -= &c * bc;
        }
        r = trimmed(&r);
    }
    r
}

/// Monic gcd; `gcd(0, 0)` is the empty vector.
fn poly_gcd(a: &[Q], b: &[Q]) -> Vec<Q> {
    let (mut a, mut b) = (trimmed(a), trimmed(b));
    while !b.is_empty() {
        let r = poly_rem(&a, &b);
        a = b;
        b = r;
    }
    if let Some(lead) = a.last().cloned() {
        for c in &mut a {
            *c /= &lead;
        }
    }
    a
}
