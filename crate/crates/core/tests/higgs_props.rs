mod common;

use cohiggs::higgs::{admits_semistable, canonical_stable_higgs, spectral_smooth_r2, CharCoeffs, HiggsField, SplittingType};
use cohiggs::sections::Section;
use cohiggs::{Error, Q};
use common::{automorphism_on, faddeev_leverrier, higgs_on, small_q, st};
use num_traits::{One, Zero};
use proptest::prelude::*;

fn splitting_type(max_rank: usize, bound: i64) -> impl Strategy<Value = SplittingType> {
    proptest::collection::vec(-bound..=bound, 1..=max_rank).prop_map(|m| SplittingType::new(m).unwrap())
}

fn admissible_type(max_rank: usize) -> impl Strategy<Value = SplittingType> {
    (2..=max_rank)
        .prop_flat_map(|r| (-3i64..=3, proptest::collection::vec(0i64..=2, r - 1)))
        .prop_map(|(top, gaps)| {
            let mut m = vec![top];
            for g in gaps {
                m.push(m.last().unwrap() - g);
            }
            SplittingType::new(m).unwrap()
        })
}

fn field_and_automorphism() -> impl Strategy<Value = (HiggsField, Option<cohiggs::higgs::Automorphism>)> {
    admissible_type(4).prop_flat_map(|t| (higgs_on(t.clone()), automorphism_on(t)))
}

/// Numeric matrix of `phi` at the finite point `z`.
fn at(phi: &HiggsField, z: &Q) -> Vec<Vec<Q>> {
    phi.entries().iter().map(|row| row.iter().map(|e| e.eval_u0(z)).collect()).collect()
}

proptest! {
    #[test]
    fn admissibility_ignores_order(m in proptest::collection::vec(-6i64..=6, 1..7), seed in any::<u64>()) {
        let mut shuffled = m.clone();
        let n = shuffled.len();
        for i in (1..n).rev() {
            shuffled.swap(i, (seed as usize).wrapping_mul(i + 7) % (i + 1));
        }
        let a = SplittingType::new(m).unwrap();
        let b = SplittingType::new(shuffled).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(admits_semistable(&a), admits_semistable(&b));
    }

    #[test]
    fn admissibility_is_the_gap_rule(t in splitting_type(7, 6)) {
        let m = t.degrees();
        let gaps_ok = m.windows(2).all(|w| w[0] - w[1] <= 2);
        prop_assert_eq!(t.admits_semistable(), gaps_ok);
    }

    #[test]
    fn twisting_preserves_admissibility(t in splitting_type(6, 5), n in -4i64..=4) {
        prop_assert_eq!(t.admits_semistable(), t.shifted(n).admits_semistable());
    }

    #[test]
    fn char_coeffs_match_numeric_char_poly((phi, _) in field_and_automorphism(), z in small_q()) {
        let rho = phi.char_coeffs().unwrap();
        let c = faddeev_leverrier(&at(&phi, &z));
        for k in 1..=phi.rank() {
            prop_assert_eq!(rho.get(k).twist(), 2 * k as i64);
            // det(x - A) = x^r - sum rho_k x^(r-k)
            prop_assert_eq!(rho.get(k).eval_u0(&z), -c[k - 1].clone());
        }
    }

    #[test]
    fn char_coeffs_are_conjugation_invariant((phi, psi) in field_and_automorphism()) {
        let Some(psi) = psi else { return Ok(()) };
        let conj = phi.conjugate(&psi).unwrap();
        prop_assert_eq!(conj.char_coeffs().unwrap(), phi.char_coeffs().unwrap());
        let back = conj.conjugate(&psi.inverse().unwrap()).unwrap();
        prop_assert_eq!(back, phi);
    }

    #[test]
    fn trace_split_round_trips((phi, _) in field_and_automorphism()) {
        let (tr, traceless) = phi.trace_split().unwrap();
        prop_assert_eq!(&tr, &phi.trace().unwrap());
        prop_assert!(traceless.trace().unwrap().is_zero());
        prop_assert!(traceless.char_coeffs().unwrap().get(1).is_zero());
        prop_assert_eq!(HiggsField::from_trace_split(&tr, &traceless).unwrap(), phi);
    }

    #[test]
    fn twisting_the_bundle_keeps_char_coeffs((phi, _) in field_and_automorphism(), n in -3i64..=3) {
        let tw = phi.twist_bundle(n);
        prop_assert_eq!(tw.splitting(), &phi.splitting().shifted(n));
        prop_assert_eq!(tw.char_coeffs().unwrap(), phi.char_coeffs().unwrap());
    }

    #[test]
    fn spectral_smoothness_is_conjugation_invariant(
        (phi, psi) in (-2i64..=1).prop_flat_map(|top| {
            let t = st(&[top, top - (top.rem_euclid(2))]);
            (higgs_on(t.clone()), automorphism_on(t))
        }),
    ) {
        let Some(psi) = psi else { return Ok(()) };
        let phi = phi.trace_split().unwrap().1;
        let rho = phi.char_coeffs().unwrap();
        let conj = phi.conjugate(&psi).unwrap().char_coeffs().unwrap();
        prop_assert_eq!(spectral_smooth_r2(&rho).unwrap(), spectral_smooth_r2(&conj).unwrap());
    }
}

fn assert_canonical(t: &SplittingType) {
    let phi = canonical_stable_higgs(t).unwrap();
    let r = t.rank();
    let rho = phi.char_coeffs().unwrap();
    for k in 1..r {
        assert!(rho.get(k).is_zero(), "{t:?}: rho_{k} = {}", rho.get(k));
    }
    let mut expected = vec![Q::zero(); 2 * r + 1];
    expected[1] = Q::one();
    assert_eq!(rho.get(r), &Section::new(2 * r as i64, expected).unwrap(), "{t:?}");
    // simple zero at 0, the rest at infinity
    assert_eq!(rho.get(r).multiplicity_at_infinity().unwrap(), 2 * r - 1);
}

#[test]
fn canonical_field_up_to_rank_six() {
    // every sorted admissible type with entries in [-5, 5]
    fn rec(prefix: &mut Vec<i64>, r: usize, count: &mut usize) {
        if prefix.len() == r {
            let t = SplittingType::new(prefix.clone()).unwrap();
            if t.admits_semistable() {
                assert_canonical(&t);
                *count += 1;
            } else {
                assert!(matches!(canonical_stable_higgs(&t), Err(Error::Inadmissible(_))));
            }
            return;
        }
        let hi = prefix.last().copied().unwrap_or(5);
        for m in (-5..=hi).rev() {
            prefix.push(m);
            rec(prefix, r, count);
            prefix.pop();
        }
    }
    let mut count = 0;
    for r in 2..=6 {
        rec(&mut Vec::new(), r, &mut count);
    }
    assert!(count > 1000);
}

#[test]
fn canonical_field_needs_rank_two() {
    assert!(canonical_stable_higgs(&st(&[3])).is_err());
}

#[test]
fn spectral_smoothness_examples() {
    let rho = |c: &[i64]| {
        CharCoeffs::new(vec![Section::zero(2), Section::from_ints(4, c).unwrap()]).unwrap()
    };
    assert!(spectral_smooth_r2(&rho(&[-1, 0, 0, 0, 1])).unwrap());
    assert!(spectral_smooth_r2(&rho(&[0, 1, 0, -1, 0])).unwrap());
    assert!(!spectral_smooth_r2(&rho(&[0, 0, 1, 0, -1])).unwrap());
    assert!(!spectral_smooth_r2(&rho(&[1, 0, 0, 0, 0])).unwrap());
}

#[test]
fn entries_must_have_the_right_twists() {
    let t = st(&[0, -1]);
    let bad = vec![
        vec![Section::zero(2), Section::zero(3)],
        vec![Section::zero(2), Section::zero(2)],
    ];
    assert!(HiggsField::new(t, bad).is_err());
}
