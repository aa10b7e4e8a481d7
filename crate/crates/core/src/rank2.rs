//! Rank-2, trace-free co-Higgs bundles.
//!
//! Odd degree: every stable pair lives on `O + O(-1)` and is recorded by a
//! point of the variety `S = {(z, y, rho) : y^2 = rho(z)}` of the total space
//! of `O(2)` times `H^0(O(4))`. The map is
//! `phi -> (zero of c, a(zero of c), -det phi)`.
//!
//! Even degree: on `O(1) + O(-1)` every stable field is conjugate to a point
//! of the Hitchin section; on `O + O` we separate stable fields from the
//! strictly semistable ones (common eigenvector of the three coefficient
//! matrices).

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::higgs::{Automorphism, HiggsField, SplittingType};
use crate::rational::{fmt_q, from_strs, q, rational_sqrt, to_strs, QStr};
use crate::sections::{gcd_sections, ProjPoint, Section};
use crate::{Error, Result, Q};

fn expect_twist(s: &Section, twist: i64, name: &str) -> Result<()> {
    if s.twist() != twist {
        return Err(Error::Malformed(format!("{name} must live in O({twist}), got O({})", s.twist())));
    }
    Ok(())
}

fn splitting(m: &[i64]) -> SplittingType {
    SplittingType::new(m.to_vec()).expect("nonempty")
}

/// `(a b; c -a)` on `O + O(-1)`: `a` in `O(2)`, `b` in `O(3)`, `c` in `O(1)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OddField {
    pub a: Section,
    pub b: Section,
    pub c: Section,
}

impl OddField {
    pub fn new(a: Section, b: Section, c: Section) -> Result<Self> {
        expect_twist(&a, 2, "a")?;
        expect_twist(&b, 3, "b")?;
        expect_twist(&c, 1, "c")?;
        Ok(OddField { a, b, c })
    }

    pub fn validate(&self) -> Result<()> {
        OddField::new(self.a.clone(), self.b.clone(), self.c.clone()).map(|_| ())
    }

    pub fn to_higgs(&self) -> HiggsField {
        HiggsField::new(splitting(&[0, -1]), vec![vec![self.a.clone(), self.b.clone()], vec![self.c.clone(), self.a.neg()]])
            .expect("twists checked on construction")
    }

    pub fn from_higgs(phi: &HiggsField) -> Result<Self> {
        if phi.splitting().degrees() != [0, -1] {
            return Err(Error::Malformed("odd rank-2 fields live on O + O(-1)".into()));
        }
        if phi.entry(1, 1) != &phi.entry(0, 0).neg() {
            return Err(Error::Malformed("field is not trace-free".into()));
        }
        OddField::new(phi.entry(0, 0).clone(), phi.entry(0, 1).clone(), phi.entry(1, 0).clone())
    }

    /// `-det phi = a^2 + bc`.
    pub fn rho(&self) -> Section {
        self.a.mul(&self.a).add(&self.b.mul(&self.c)).expect("both in O(4)")
    }
}

/// `(a b; c -a)` on `O(1) + O(-1)`: `a` in `O(2)`, `b` in `O(4)`, `c` a constant.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct E11Field {
    pub a: Section,
    pub b: Section,
    pub c: Section,
}

impl E11Field {
    pub fn new(a: Section, b: Section, c: Section) -> Result<Self> {
        expect_twist(&a, 2, "a")?;
        expect_twist(&b, 4, "b")?;
        expect_twist(&c, 0, "c")?;
        Ok(E11Field { a, b, c })
    }

    pub fn validate(&self) -> Result<()> {
        E11Field::new(self.a.clone(), self.b.clone(), self.c.clone()).map(|_| ())
    }

    pub fn to_higgs(&self) -> HiggsField {
        HiggsField::new(splitting(&[1, -1]), vec![vec![self.a.clone(), self.b.clone()], vec![self.c.clone(), self.a.neg()]])
            .expect("twists checked on construction")
    }

    pub fn c_value(&self) -> &Q {
        &self.c.coeffs()[0]
    }
}

/// A trace-free field on `O + O`: all four entries in `O(2)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct E0Field {
    pub entries: [[Section; 2]; 2],
}

impl E0Field {
    pub fn new(entries: [[Section; 2]; 2]) -> Result<Self> {
        for row in &entries {
            for s in row {
                expect_twist(s, 2, "entry")?;
            }
        }
        if entries[1][1] != entries[0][0].neg() {
            return Err(Error::Malformed("field is not trace-free".into()));
        }
        Ok(E0Field { entries })
    }

    pub fn validate(&self) -> Result<()> {
        E0Field::new(self.entries.clone()).map(|_| ())
    }

    pub fn to_higgs(&self) -> HiggsField {
        HiggsField::new(splitting(&[0, 0]), self.entries.iter().map(|r| r.to_vec()).collect())
            .expect("twists checked on construction")
    }

    /// Constant matrix `A_k` of `phi(z) = A_0 + A_1 z + A_2 z^2`.
    pub fn coefficient_matrix(&self, k: usize) -> [[Q; 2]; 2] {
        let e = |i: usize, j: usize| self.entries[i][j].coeffs()[k].clone();
        [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
    }

    /// Conjugate by a constant invertible matrix `g`.
    pub fn conjugate_constant(&self, g: [[Q; 2]; 2]) -> Result<E0Field> {
        let sec = |x: &Q| Section::constant(0, x.clone()).expect("O(0)");
        let psi = Automorphism::new(splitting(&[0, 0]), g.iter().map(|r| r.iter().map(sec).collect()).collect())?;
        let out = self.to_higgs().conjugate(&psi)?;
        E0Field::new([
            [out.entry(0, 0).clone(), out.entry(0, 1).clone()],
            [out.entry(1, 0).clone(), out.entry(1, 1).clone()],
        ])
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TraceFreeHiggs2 {
    Odd(OddField),
    EvenE11(E11Field),
    EvenE0(E0Field),
}

impl TraceFreeHiggs2 {
    pub fn to_higgs(&self) -> HiggsField {
        match self {
            TraceFreeHiggs2::Odd(f) => f.to_higgs(),
            TraceFreeHiggs2::EvenE11(f) => f.to_higgs(),
            TraceFreeHiggs2::EvenE0(f) => f.to_higgs(),
        }
    }
}

/// A point of `S`. `y0` is the fiber coordinate of `O(2)` in the chart of
/// `z0`: `U0` when finite, `U1` at infinity. `rho` lives in `O(4)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SPointRepr", into = "SPointRepr")]
pub struct SPoint {
    z0: ProjPoint,
    y0: Q,
    rho: Section,
}

#[derive(Serialize, Deserialize)]
struct SPointRepr {
    z0: ProjPoint,
    y0: QStr,
    rho: Vec<QStr>,
}

impl TryFrom<SPointRepr> for SPoint {
    type Error = Error;
    fn try_from(r: SPointRepr) -> Result<Self> {
        SPoint::new(r.z0, r.y0.0, Section::new(4, from_strs(r.rho))?)
    }
}

impl From<SPoint> for SPointRepr {
    fn from(p: SPoint) -> Self {
        SPointRepr { z0: p.z0, y0: QStr(p.y0), rho: to_strs(p.rho.coeffs()) }
    }
}

impl SPoint {
    /// Checks `y0^2 = rho(z0)` in the chart of `z0`.
    pub fn new(z0: ProjPoint, y0: Q, rho: Section) -> Result<Self> {
        expect_twist(&rho, 4, "rho")?;
        let lhs = &y0 * &y0;
        let rhs = rho.evaluate(&z0);
        if lhs != rhs {
            return Err(Error::NotOnVariety { lhs: fmt_q(&lhs), rhs: fmt_q(&rhs) });
        }
        Ok(SPoint { z0, y0, rho })
    }

    pub fn z0(&self) -> &ProjPoint {
        &self.z0
    }

    pub fn y0(&self) -> &Q {
        &self.y0
    }

    pub fn rho(&self) -> &Section {
        &self.rho
    }

    /// The other point over `(z0, rho)`.
    pub fn flipped(&self) -> SPoint {
        SPoint { z0: self.z0.clone(), y0: -self.y0.clone(), rho: self.rho.clone() }
    }
}

/// The defining function of `S` in the chart of `z`:
/// `y^2 - a0 - a1 z - ... - a4 z^4` on `U0`, `y~^2 - a4 - ... - a0 z~^4` on `U1`.
pub fn s_equation(z: &ProjPoint, y: &Q, rho: &Section) -> Q {
    y * y - rho.evaluate(z)
}

pub fn is_stable_odd(phi: &OddField) -> bool {
    !phi.c.is_zero()
}

pub fn to_s(phi: &OddField) -> Result<SPoint> {
    phi.validate()?;
    if !is_stable_odd(phi) {
        return Err(Error::Unstable("c = 0 leaves the trivial sub-line bundle invariant".into()));
    }
    let z0 = phi.c.zero_of_linear()?;
    let y0 = phi.a.evaluate(&z0);
    let p = SPoint::new(z0, y0, phi.rho())
        .map_err(|e| Error::Invariant(format!("to_S image off the variety: {e}")))?;
    Ok(p)
}

/// Representative field over a point of `S`: `a` constant in the chart of
/// `z0`, `c` vanishing at `z0`, and `b` the divided difference of `rho`.
pub fn from_s(p: &SPoint) -> OddField {
    let r = p.rho.coeffs();
    match p.z0.affine() {
        Some(z0) => {
            let a = Section::constant(2, p.y0.clone()).expect("O(2)");
            let c = Section::new(1, vec![-z0.clone(), Q::one()]).expect("O(1)");
            let b = p.rho.divided_difference(z0).expect("O(4) has a divided difference");
            OddField { a, b, c }
        }
        None => {
            // In U1: a~ = y0~, c~ = z~, b~ = (rho~ - rho~(0)) / z~.
            let a = Section::monomial(2, 2, p.y0.clone()).expect("O(2)");
            let c = Section::new(1, vec![Q::one(), Q::zero()]).expect("O(1)");
            let b = Section::new(3, r[..4].to_vec()).expect("O(3)");
            OddField { a, b, c }
        }
    }
}

/// Whether the two fields over `(z0, +-y0, rho)` coincide: `y0 = 0`.
pub fn plus_minus_collision(p: &SPoint) -> bool {
    p.y0.is_zero()
}

/// Odd fields are equivalent iff they have the same image in `S`.
pub fn odd_equivalent(lhs: &OddField, rhs: &OddField) -> Result<bool> {
    Ok(to_s(lhs)? == to_s(rhs)?)
}

/// Automorphism `(d e; 0 f)` of `O + O(-1)`, `e` in `O(1)`.
pub fn odd_automorphism(d: Q, e: Section, f: Q) -> Result<Automorphism> {
    expect_twist(&e, 1, "e")?;
    Automorphism::new(
        splitting(&[0, -1]),
        vec![vec![Section::constant(0, d)?, e], vec![Section::zero(-1), Section::constant(0, f)?]],
    )
}

/// Automorphism `(1 d; 0 e)` of `O(1) + O(-1)`, `d` in `O(2)`.
pub fn e11_automorphism(d: Section, e: Q) -> Result<Automorphism> {
    expect_twist(&d, 2, "d")?;
    Automorphism::new(
        splitting(&[1, -1]),
        vec![vec![Section::one(0)?, d], vec![Section::zero(-2), Section::constant(0, e)?]],
    )
}

/// The Hitchin section on `O(1) + O(-1)`: `(0 rho; 1 0)`, so that `-det = rho`.
pub fn q_section(rho: &Section) -> Result<E11Field> {
    expect_twist(rho, 4, "rho")?;
    E11Field::new(Section::zero(2), rho.clone(), Section::one(0)?)
}

/// Conjugates a stable field on `O(1) + O(-1)` into the Hitchin section and
/// returns its `rho = a^2 + bc`. The conjugation is carried out and checked.
pub fn normalize_even_e11(phi: &E11Field) -> Result<Section> {
    phi.validate()?;
    let c = phi.c_value().clone();
    if c.is_zero() {
        return Err(Error::Unstable("c = 0: O(1) is invariant and destabilizing".into()));
    }
    let cinv = Q::one() / &c;
    let psi = e11_automorphism(phi.a.scale(&-cinv.clone()), cinv)?;
    let normal = phi.to_higgs().conjugate(&psi)?;
    let rho = phi.a.mul(&phi.a).add(&phi.b.scale(&c))?;
    if normal != q_section(&rho)?.to_higgs() {
        return Err(Error::Invariant("conjugation did not land on the Hitchin section".into()));
    }
    Ok(rho)
}

/// Outcome of [`classify_even_e0`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum E0Class {
    Stable,
    /// Strictly semistable; the graded object is `diag(a, -a)` with
    /// `a = graded * sqrt(radicand)` (radicand 1 when `a` is rational).
    Semistable { graded: Section, radicand: Q },
}

/// `det[A v | v]` for traceless `A = (alpha beta; gamma -alpha)`, as a section
/// of `O(2)` in `t = v1 / v2`: `beta + 2 alpha t - gamma t^2`.
fn eigen_form(m: &[[Q; 2]; 2]) -> Section {
    let (alpha, beta, gamma) = (&m[0][0], &m[0][1], &m[1][0]);
    Section::new(2, vec![beta.clone(), alpha * q(2), -gamma.clone()]).expect("O(2)")
}

fn eigenvalue(m: &[[Q; 2]; 2], v: &[Q; 2]) -> Q {
    if !v[0].is_zero() {
        (&m[0][0] * &v[0] + &m[0][1] * &v[1]) / &v[0]
    } else {
        (&m[1][0] * &v[0] + &m[1][1] * &v[1]) / &v[1]
    }
}

/// Stable vs strictly semistable on `O + O`, via a common eigenvector of the
/// coefficient matrices, found as a common zero of their eigen-forms.
pub fn classify_even_e0(phi: &E0Field) -> Result<E0Class> {
    phi.validate()?;
    let mats: Vec<[[Q; 2]; 2]> = (0..3).map(|k| phi.coefficient_matrix(k)).collect();
    let forms: Vec<Section> = mats.iter().map(eigen_form).collect();
    let Some(g) = gcd_sections(&forms) else {
        return Ok(E0Class::Semistable { graded: Section::zero(2), radicand: Q::one() });
    };
    if g.twist() == 0 {
        return Ok(E0Class::Stable);
    }
    let graded_from = |v: [Q; 2]| {
        let coeffs = mats.iter().map(|m| eigenvalue(m, &v)).collect();
        E0Class::Semistable { graded: Section::new(2, coeffs).expect("O(2)"), radicand: Q::one() }
    };
    // A root at infinity of the form is the eigenvector e1 = (1, 0).
    if g.multiplicity_at_infinity()? > 0 {
        return Ok(graded_from([Q::one(), Q::zero()]));
    }
    let gc = g.coeffs();
    if g.twist() == 1 {
        return Ok(graded_from([-&gc[0] / &gc[1], Q::one()]));
    }
    let (g0, g1, g2) = (&gc[0], &gc[1], &gc[2]);
    let disc = g1 * g1 - q(4) * g0 * g2;
    if let Some(root) = rational_sqrt(&disc) {
        let t = (-g1 + root) / (q(2) * g2);
        return Ok(graded_from([t, Q::one()]));
    }
    // Irrational common eigenvectors: every nonzero form is kappa_k * g and
    // the eigenvalue on the root (-g1 + sqrt D) / 2 g2 is -kappa_k sqrt(D) / 2.
    let mut coeffs = Vec::with_capacity(3);
    for f in &forms {
        let kappa = if f.is_zero() {
            Q::zero()
        } else {
            let lead = f.coeffs().iter().zip(gc).find(|(_, gv)| !gv.is_zero()).expect("g nonzero");
            lead.0 / lead.1
        };
        coeffs.push(-kappa / q(2));
    }
    Ok(E0Class::Semistable { graded: Section::new(2, coeffs)?, radicand: disc })
}
