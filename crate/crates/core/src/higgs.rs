//! Splitting types, Higgs fields as matrices of sections, and their
//! characteristic coefficients.
//!
//! For `E = O(m_1) + ... + O(m_r)` the `(i, j)` entry of a Higgs field is a
//! section of `O(m_i - m_j + 2)`, and the `(i, j)` entry of a bundle
//! automorphism a section of `O(m_i - m_j)`.
//!
//! Sign convention: `det(eta I - phi) = eta^r - rho_1 eta^(r-1) - ... - rho_r`,
//! so `rho_1 = tr phi` and, in rank 2, `rho_2 = -det phi`.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::rational::q;
use crate::sections::Section;
use crate::{Error, Result, Q};

/// Grothendieck splitting `(m_1 >= m_2 >= ... >= m_r)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct SplittingType(Vec<i64>);

impl TryFrom<Vec<i64>> for SplittingType {
    type Error = Error;
    fn try_from(v: Vec<i64>) -> Result<Self> {
        SplittingType::new(v)
    }
}

impl From<SplittingType> for Vec<i64> {
    fn from(t: SplittingType) -> Self {
        t.0
    }
}

impl SplittingType {
    /// Sorts the degrees into non-increasing order.
    pub fn new(mut m: Vec<i64>) -> Result<Self> {
        if m.is_empty() {
            return Err(Error::Malformed("splitting type of rank 0".into()));
        }
        m.sort_unstable_by(|a, b| b.cmp(a));
        Ok(SplittingType(m))
    }

    pub fn degrees(&self) -> &[i64] {
        &self.0
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn shifted(&self, n: i64) -> SplittingType {
        SplittingType(self.0.iter().map(|m| m + n).collect())
    }

    /// First consecutive pair `(m_i, m_{i+1})` with `m_i > m_{i+1} + 2`.
    pub fn first_violation(&self) -> Option<(i64, i64)> {
        self.0.windows(2).find(|w| w[0] > w[1] + 2).map(|w| (w[0], w[1]))
    }

    /// Whether `E` carries a semistable Higgs field: every sorted gap is at most 2.
    pub fn admits_semistable(&self) -> bool {
        self.first_violation().is_none()
    }

    /// Twist of the `(i, j)` entry of a map `E -> E(shift)`: `m_i - m_j + shift`.
    pub fn entry_twist(&self, i: usize, j: usize, shift: i64) -> i64 {
        self.0[i] - self.0[j] + shift
    }
}

pub fn admits_semistable(t: &SplittingType) -> bool {
    t.admits_semistable()
}

type Matrix = Vec<Vec<Section>>;

fn mat_mul(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    let n = a.len();
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut row = Vec::with_capacity(n);
        for j in 0..n {
            let mut acc = a[i][0].mul(&b[0][j]);
            for k in 1..n {
                acc = acc.add(&a[i][k].mul(&b[k][j]))?;
            }
            row.push(acc);
        }
        out.push(row);
    }
    Ok(out)
}

/// Determinant by cofactor expansion along the first row. Every term of the
/// expansion of these structured matrices has the same twist.
fn det(m: &Matrix, rows: &[usize], cols: &[usize]) -> Result<Section> {
    match rows.len() {
        0 => Section::one(0),
        1 => Ok(m[rows[0]][cols[0]].clone()),
        _ => {
            let mut acc: Option<Section> = None;
            for (k, &c) in cols.iter().enumerate() {
                let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
                let mut term = m[rows[0]][c].mul(&det(m, &rows[1..], &rest)?);
                if k % 2 == 1 {
                    term = term.neg();
                }
                acc = Some(match acc {
                    None => term,
                    Some(a) => a.add(&term)?,
                });
            }
            Ok(acc.expect("nonempty expansion"))
        }
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// A Higgs field on a split bundle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "HiggsRepr", into = "HiggsRepr")]
pub struct HiggsField {
    splitting: SplittingType,
    entries: Matrix,
}

#[derive(Serialize, Deserialize)]
struct HiggsRepr {
    splitting: SplittingType,
    entries: Matrix,
}

impl TryFrom<HiggsRepr> for HiggsField {
    type Error = Error;
    fn try_from(r: HiggsRepr) -> Result<Self> {
        HiggsField::new(r.splitting, r.entries)
    }
}

impl From<HiggsField> for HiggsRepr {
    fn from(h: HiggsField) -> Self {
        HiggsRepr { splitting: h.splitting, entries: h.entries }
    }
}

fn check_shape(t: &SplittingType, entries: &Matrix, shift: i64, what: &str) -> Result<()> {
    let r = t.rank();
    if entries.len() != r || entries.iter().any(|row| row.len() != r) {
        return Err(Error::Malformed(format!("{what} must be {r}x{r}")));
    }
    for (i, row) in entries.iter().enumerate() {
        for (j, s) in row.iter().enumerate() {
            let want = t.entry_twist(i, j, shift);
            if s.twist() != want {
                return Err(Error::Malformed(format!(
                    "{what} entry ({}, {}) lives in O({}), got O({})",
                    i + 1,
                    j + 1,
                    want,
                    s.twist()
                )));
            }
        }
    }
    Ok(())
}

impl HiggsField {
    pub fn new(splitting: SplittingType, entries: Vec<Vec<Section>>) -> Result<Self> {
        check_shape(&splitting, &entries, 2, "Higgs field")?;
        Ok(HiggsField { splitting, entries })
    }

    pub fn zero(splitting: SplittingType) -> Self {
        let r = splitting.rank();
        let entries = (0..r)
            .map(|i| (0..r).map(|j| Section::zero(splitting.entry_twist(i, j, 2))).collect())
            .collect();
        HiggsField { splitting, entries }
    }

    pub fn splitting(&self) -> &SplittingType {
        &self.splitting
    }

    pub fn rank(&self) -> usize {
        self.splitting.rank()
    }

    pub fn entries(&self) -> &[Vec<Section>] {
        &self.entries
    }

    pub fn entry(&self, i: usize, j: usize) -> &Section {
        &self.entries[i][j]
    }

    pub fn trace(&self) -> Result<Section> {
        let mut acc = Section::zero(2);
        for i in 0..self.rank() {
            acc = acc.add(&self.entries[i][i])?;
        }
        Ok(acc)
    }

    pub fn det(&self) -> Result<Section> {
        let idx: Vec<usize> = (0..self.rank()).collect();
        det(&self.entries, &idx, &idx)
    }

    /// `rho_k = (-1)^(k+1) E_k`, with `E_k` the sum of the principal `k x k` minors.
    pub fn char_coeffs(&self) -> Result<CharCoeffs> {
        let r = self.rank();
        let mut rho = Vec::with_capacity(r);
        for k in 1..=r {
            let mut e_k = Section::zero(2 * k as i64);
            for idx in subsets(r, k) {
                e_k = e_k.add(&det(&self.entries, &idx, &idx)?)?;
            }
            rho.push(if k % 2 == 1 { e_k } else { e_k.neg() });
        }
        CharCoeffs::new(rho)
    }

    /// `psi phi psi^-1`.
    pub fn conjugate(&self, psi: &Automorphism) -> Result<HiggsField> {
        if psi.splitting != self.splitting {
            return Err(Error::Malformed("automorphism is for a different splitting".into()));
        }
        let inv = psi.inverse_entries()?;
        let out = mat_mul(&mat_mul(&psi.entries, &self.entries)?, &inv)?;
        HiggsField::new(self.splitting.clone(), out)
    }

    /// `(tr phi, phi - (1/r) tr phi Id)`.
    pub fn trace_split(&self) -> Result<(Section, HiggsField)> {
        let tr = self.trace()?;
        let share = tr.scale(&(Q::one() / q(self.rank() as i64)));
        let mut traceless = self.clone();
        for i in 0..self.rank() {
            traceless.entries[i][i] = traceless.entries[i][i].sub(&share)?;
        }
        Ok((tr, traceless))
    }

    /// Inverse of [`HiggsField::trace_split`].
    pub fn from_trace_split(tr: &Section, traceless: &HiggsField) -> Result<HiggsField> {
        let share = tr.scale(&(Q::one() / q(traceless.rank() as i64)));
        let mut out = traceless.clone();
        for i in 0..out.rank() {
            out.entries[i][i] = out.entries[i][i].add(&share)?;
        }
        Ok(out)
    }

    /// Tensor the bundle by `O(n)`. Entry twists are unchanged.
    pub fn twist_bundle(&self, n: i64) -> HiggsField {
        HiggsField { splitting: self.splitting.shifted(n), entries: self.entries.clone() }
    }
}

/// The field with `1` on the subdiagonal and `z` in the top-right corner.
pub fn canonical_stable_higgs(t: &SplittingType) -> Result<HiggsField> {
    if t.rank() < 2 {
        return Err(Error::Unsupported("canonical field needs rank >= 2".into()));
    }
    if !t.admits_semistable() {
        return Err(Error::Inadmissible(t.degrees().to_vec()));
    }
    let r = t.rank();
    let mut phi = HiggsField::zero(t.clone());
    for i in 0..r - 1 {
        phi.entries[i + 1][i] = Section::one(t.entry_twist(i + 1, i, 2))?;
    }
    phi.entries[0][r - 1] = Section::z(t.entry_twist(0, r - 1, 2))?;
    Ok(phi)
}

/// Characteristic coefficients `(rho_1, ..., rho_r)`, `rho_k` in `O(2k)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Section>", into = "Vec<Section>")]
pub struct CharCoeffs(Vec<Section>);

impl TryFrom<Vec<Section>> for CharCoeffs {
    type Error = Error;
    fn try_from(v: Vec<Section>) -> Result<Self> {
        CharCoeffs::new(v)
    }
}

impl From<CharCoeffs> for Vec<Section> {
    fn from(c: CharCoeffs) -> Self {
        c.0
    }
}

impl CharCoeffs {
    pub fn new(rho: Vec<Section>) -> Result<Self> {
        for (k, s) in rho.iter().enumerate() {
            if s.twist() != 2 * (k as i64 + 1) {
                return Err(Error::Malformed(format!(
                    "rho_{} must live in O({}), got O({})",
                    k + 1,
                    2 * (k + 1),
                    s.twist()
                )));
            }
        }
        Ok(CharCoeffs(rho))
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn get(&self, k: usize) -> &Section {
        &self.0[k - 1]
    }

    pub fn as_slice(&self) -> &[Section] {
        &self.0
    }
}

/// Smooth spectral curve test in trace-free rank 2: `rho_2` must have four
/// distinct zeros on the projective line. The nilpotent cone (`rho_2 = 0`) is
/// not smooth.
pub fn spectral_smooth_r2(rho: &CharCoeffs) -> Result<bool> {
    if rho.rank() != 2 {
        return Err(Error::Unsupported(format!("rank {} spectral data", rho.rank())));
    }
    if !rho.get(1).is_zero() {
        return Err(Error::Malformed("spectral smoothness expects a trace-free field".into()));
    }
    let rho2 = rho.get(2);
    if rho2.is_zero() {
        return Ok(false);
    }
    let info = rho2.squarefree_info()?;
    Ok(info.is_squarefree && info.distinct_roots == 4)
}

/// Bundle automorphism of a split bundle; block upper-triangular with respect
/// to the sorted splitting.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Automorphism {
    splitting: SplittingType,
    entries: Matrix,
    det: Q,
}

impl Automorphism {
    pub fn new(splitting: SplittingType, entries: Vec<Vec<Section>>) -> Result<Self> {
        check_shape(&splitting, &entries, 0, "automorphism")?;
        let idx: Vec<usize> = (0..splitting.rank()).collect();
        let d = det(&entries, &idx, &idx)?;
        let det = d.coeffs()[0].clone();
        if det.is_zero() {
            return Err(Error::NotInvertible);
        }
        Ok(Automorphism { splitting, entries, det })
    }

    pub fn identity(splitting: SplittingType) -> Self {
        let r = splitting.rank();
        let entries = (0..r)
            .map(|i| {
                (0..r)
                    .map(|j| {
                        let t = splitting.entry_twist(i, j, 0);
                        if i == j {
                            Section::one(0).expect("O(0) has a constant")
                        } else {
                            Section::zero(t)
                        }
                    })
                    .collect()
            })
            .collect();
        Automorphism { splitting, entries, det: Q::one() }
    }

    pub fn splitting(&self) -> &SplittingType {
        &self.splitting
    }

    pub fn entries(&self) -> &[Vec<Section>] {
        &self.entries
    }

    pub fn determinant(&self) -> &Q {
        &self.det
    }

    /// Adjugate divided by the determinant.
    fn inverse_entries(&self) -> Result<Matrix> {
        let r = self.splitting.rank();
        let inv_det = Q::one() / &self.det;
        let mut out = Vec::with_capacity(r);
        for i in 0..r {
            let mut row = Vec::with_capacity(r);
            for j in 0..r {
                let rows: Vec<usize> = (0..r).filter(|&x| x != j).collect();
                let cols: Vec<usize> = (0..r).filter(|&x| x != i).collect();
                let mut c = det(&self.entries, &rows, &cols)?;
                if (i + j) % 2 == 1 {
                    c = c.neg();
                }
                let c = c.scale(&inv_det);
                // minors of a matrix with negative-twist zeros come out in the right twist
                debug_assert_eq!(c.twist(), self.splitting.entry_twist(i, j, 0));
                row.push(c);
            }
            out.push(row);
        }
        Ok(out)
    }

    pub fn inverse(&self) -> Result<Automorphism> {
        Automorphism::new(self.splitting.clone(), self.inverse_entries()?)
    }
}
