#![allow(dead_code)]

use cohiggs::higgs::{Automorphism, HiggsField, SplittingType};
use cohiggs::rational::{q, qf};
use cohiggs::sections::Section;
use cohiggs::Q;
use num_traits::Zero;
use proptest::prelude::*;

pub fn st(m: &[i64]) -> SplittingType {
    SplittingType::new(m.to_vec()).unwrap()
}

pub fn small_q() -> impl Strategy<Value = Q> {
    (-9i64..=9, 1i64..=4).prop_map(|(n, d)| qf(n, d))
}

pub fn nonzero_q() -> impl Strategy<Value = Q> {
    small_q().prop_filter("nonzero", |x| !x.is_zero())
}

pub fn section(twist: i64) -> BoxedStrategy<Section> {
    let n = if twist < 0 { 0 } else { twist as usize + 1 };
    proptest::collection::vec(small_q(), n)
        .prop_map(move |c| Section::new(twist, c).unwrap())
        .boxed()
}

/// Random field on `t` with every entry drawn independently.
pub fn higgs_on(t: SplittingType) -> BoxedStrategy<HiggsField> {
    let r = t.rank();
    let strategies: Vec<BoxedStrategy<Section>> = (0..r * r)
        .map(|k| section(t.entry_twist(k / r, k % r, 2)))
        .collect();
    strategies
        .prop_map(move |flat| {
            let entries = flat.chunks(r).map(|row| row.to_vec()).collect();
            HiggsField::new(t.clone(), entries).unwrap()
        })
        .boxed()
}

/// Random automorphism; `None` when the draw is singular.
pub fn automorphism_on(t: SplittingType) -> BoxedStrategy<Option<Automorphism>> {
    let r = t.rank();
    let strategies: Vec<BoxedStrategy<Section>> = (0..r * r)
        .map(|k| section(t.entry_twist(k / r, k % r, 0)))
        .collect();
    strategies
        .prop_map(move |flat| {
            let entries = flat.chunks(r).map(|row| row.to_vec()).collect();
            Automorphism::new(t.clone(), entries).ok()
        })
        .boxed()
}

/// Characteristic polynomial coefficients `c_k` of a numeric matrix,
/// `det(x I - A) = x^r + c_1 x^(r-1) + ... + c_r`, by Faddeev-LeVerrier.
pub fn faddeev_leverrier(a: &[Vec<Q>]) -> Vec<Q> {
    let r = a.len();
    let mut m: Vec<Vec<Q>> = vec![vec![Q::zero(); r]; r];
    let mut c = Vec::with_capacity(r);
    let mut prev = Q::from_integer(1.into());
    for k in 1..=r {
        // M_k = A M_{k-1} + c_{k-1} I
        let mut next = vec![vec![Q::zero(); r]; r];
        for i in 0..r {
            for j in 0..r {
                let mut s = Q::zero();
                for l in 0..r {
                    s += &a[i][l] * &m[l][j];
                }
                if i == j {
                    s += &prev;
                }
                next[i][j] = s;
            }
        }
        let mut tr = Q::zero();
        for i in 0..r {
            for l in 0..r {
                tr += &a[i][l] * &next[l][i];
            }
        }
        let ck = -tr / q(k as i64);
        c.push(ck.clone());
        prev = ck;
        m = next;
    }
    c
}
