//! One line per acceptance criterion. Run with `cargo test --test acceptance`.

use std::collections::{BTreeMap, BTreeSet};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use cohiggs::cache::OracleTable;
use cohiggs::chains::{
    component_poincare, dualize, enumerate_components, morse_index, morse_index_cohomological, poincare_series,
    series_of, ChainComponent, PoincarePolynomial,
};
use cohiggs::ffcount::{component_poincare_ff, count_record, default_primes};
use cohiggs::higgs::{admits_semistable, canonical_stable_higgs, HiggsField, SplittingType};
use cohiggs::rank2::{from_s, odd_automorphism, to_s, OddField, SPoint};
use cohiggs::rational::qf;
use cohiggs::sections::{ProjPoint, Section};
use cohiggs::Q;
use num_traits::{One, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

/// Rank 5, degree -1. Stored as a known answer only.
const P_5_MINUS_1: &str = "1 + x^2 + 3x^4 + 5x^6 + 10x^8 + 15x^10 + 26x^12 + 38x^14 + 56x^16 + 77x^18 \
     + 105x^20 + 131x^22 + 156x^24 + 165x^26 + 154x^28 + 103x^30 + 40x^32";

const P_4_MINUS_1: &str = "1 + x^2 + 3x^4 + 5x^6 + 9x^8 + 13x^10 + 18x^12 + 22x^14 + 20x^16 + 10x^18";

type Outcome = Result<String, String>;

type Criterion = (&'static str, Duration, fn() -> Outcome);

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn poly(s: &str) -> PoincarePolynomial {
    s.parse().expect("valid polynomial")
}

fn gaps_ok(m: &[i64]) -> bool {
    let mut s = m.to_vec();
    s.sort_unstable_by(|a, b| b.cmp(a));
    s.windows(2).all(|w| w[0] - w[1] <= 2)
}

fn admissibility_and_canonical_field() -> Outcome {
    let mut tuples = 0usize;
    let mut types = BTreeSet::new();
    for r in 1..=5u32 {
        for code in 0..9usize.pow(r) {
            let m: Vec<i64> = (0..r).map(|k| (code / 9usize.pow(k) % 9) as i64 - 4).collect();
            let t = SplittingType::new(m.clone()).map_err(|e| e.to_string())?;
            check(admits_semistable(&t) == gaps_ok(&m), || format!("admissibility wrong on {m:?}"))?;
            tuples += 1;
            if r >= 2 && gaps_ok(&m) {
                types.insert(t);
            }
        }
    }
    for t in &types {
        let phi = canonical_stable_higgs(t).map_err(|e| format!("{t:?}: {e}"))?;
        let again = HiggsField::new(t.clone(), phi.entries().to_vec()).map_err(|e| format!("{t:?}: {e}"))?;
        let rho = again.char_coeffs().map_err(|e| e.to_string())?;
        let r = t.rank();
        for k in 1..r {
            check(rho.get(k).is_zero(), || format!("{t:?}: rho_{k} = {}", rho.get(k)))?;
        }
        let mut z = vec![Q::zero(); 2 * r + 1];
        z[1] = Q::one();
        let z = Section::new(2 * r as i64, z).map_err(|e| e.to_string())?;
        check(rho.get(r) == &z, || format!("{t:?}: rho_{r} = {}", rho.get(r)))?;
    }
    Ok(format!("{tuples} tuples, {} admissible types with canonical field", types.len()))
}

fn rand_q(rng: &mut StdRng) -> Q {
    qf(rng.gen_range(-12..=12), rng.gen_range(1..=5))
}

fn rand_section(rng: &mut StdRng, twist: i64) -> Section {
    Section::new(twist, (0..=twist).map(|_| rand_q(rng)).collect()).expect("right length")
}

fn rand_point(rng: &mut StdRng, i: usize) -> SPoint {
    let infinite = i.is_multiple_of(5) || rng.gen_bool(0.1);
    let y0 = if i % 4 == 1 { Q::zero() } else { rand_q(rng) };
    let mut a: Vec<Q> = (0..5).map(|_| rand_q(rng)).collect();
    let z0 = if infinite {
        a[4] = &y0 * &y0;
        ProjPoint::infinity()
    } else {
        let z = rand_q(rng);
        let rest: Q = (1..5).map(|k| &a[k] * (0..k).fold(Q::one(), |p, _| p * &z)).sum();
        a[0] = &y0 * &y0 - rest;
        ProjPoint::finite(z)
    };
    SPoint::new(z0, y0, Section::new(4, a).expect("O(4)")).expect("constructed on S")
}

fn rank_two_odd_moduli() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let (mut at_infinity, mut on_branch) = (0, 0);
    for i in 0..250 {
        let p = rand_point(&mut rng, i);
        at_infinity += usize::from(p.z0().is_infinite());
        on_branch += usize::from(p.y0().is_zero());
        let back = to_s(&from_s(&p)).map_err(|e| format!("{e}"))?;
        check(back == p, || format!("round trip moved {p:?} to {back:?}"))?;
        let flipped = to_s(&from_s(&p.flipped())).map_err(|e| format!("{e}"))?;
        check((flipped == back) == p.y0().is_zero(), || format!("sheet flip wrong at {p:?}"))?;
    }
    check(at_infinity > 0 && on_branch > 0, || "sample missed the special cases".into())?;
    let mut pairs = 0;
    while pairs < 250 {
        let c = rand_section(&mut rng, 1);
        if c.is_zero() {
            continue;
        }
        let phi = OddField::new(rand_section(&mut rng, 2), rand_section(&mut rng, 3), c).expect("twists");
        let (d, f) = (rand_q(&mut rng), rand_q(&mut rng));
        if d.is_zero() || f.is_zero() {
            continue;
        }
        let psi = odd_automorphism(d, rand_section(&mut rng, 1), f).map_err(|e| e.to_string())?;
        let conj = phi.to_higgs().conjugate(&psi).map_err(|e| e.to_string())?;
        let conj = OddField::from_higgs(&conj).map_err(|e| e.to_string())?;
        check(to_s(&conj).ok() == to_s(&phi).ok(), || format!("conjugation moved {phi:?}"))?;
        pairs += 1;
    }
    Ok(format!("250 points ({at_infinity} at infinity, {on_branch} with y0 = 0), {pairs} conjugation pairs"))
}

fn rank_four_indices() -> BTreeMap<&'static str, i64> {
    [
        ("[0|0|0|-1]", 8),
        ("[0|1|-1|-1]", 8),
        ("[0|1|0|-2]", 10),
        ("[1|-1|0|-1]", 10),
        ("[1|0|-1|-1]", 10),
        ("[1|0|0|-2]", 12),
        ("[1|1|-1|-2]", 12),
        ("[2|0|-2|-1]", 12),
        ("[2|0|-1|-2]", 14),
        ("[2|1|-1|-3]", 16),
        ("[0 0|0|-1]", 4),
        ("[1 0|0|-2]", 8),
        ("[0|0 0|-1]", 0),
        ("[1|0 -1|-1]", 4),
        ("[1|0|-1 -1]", 8),
    ]
    .into_iter()
    .collect()
}

fn rank_three_indices() -> BTreeMap<&'static str, i64> {
    [("[1|0|-2]", 6), ("[1|-1|-1]", 4), ("[0|0|-1]", 2), ("[0 0|-1]", 0)].into_iter().collect()
}

fn morse_indices() -> Outcome {
    let known = rank_four_indices().into_iter().chain(rank_three_indices());
    let mut n = 0;
    for (key, idx) in known {
        let c: ChainComponent = key.parse().map_err(|e| format!("{key}: {e}"))?;
        check(morse_index(c.shape()) == idx, || format!("{key}: {} != {idx}", morse_index(c.shape())))?;
        n += 1;
    }
    let mut compared = 0;
    for r in 1..=4i64 {
        for d in -2 * r..=r {
            let Ok(comps) = enumerate_components(r, d) else { continue };
            for c in comps {
                let (a, b) = (c.morse_index(), morse_index_cohomological(&c));
                check(a == b, || format!("{}: {a} vs {b}", c.key()))?;
                compared += 1;
            }
        }
    }
    Ok(format!("{n} known indices, {compared} components cross-checked"))
}

fn keys(comps: &[ChainComponent]) -> BTreeMap<String, (Vec<usize>, i64)> {
    comps.iter().map(|c| (c.key(), (c.shape().rtype.clone(), c.morse_index()))).collect()
}

fn census_fidelity() -> Outcome {
    let c3 = enumerate_components(3, -1).map_err(|e| e.to_string())?;
    let got: BTreeMap<String, i64> = keys(&c3).into_iter().map(|(k, (_, i))| (k, i)).collect();
    let want: BTreeMap<String, i64> = rank_three_indices().into_iter().map(|(k, i)| (k.to_string(), i)).collect();
    check(got == want, || format!("rank 3: {got:?}"))?;
    let types3: BTreeSet<Vec<usize>> = c3.iter().map(|c| c.shape().rtype.clone()).collect();
    check(types3 == BTreeSet::from([vec![1, 1, 1], vec![2, 1]]), || format!("rank 3 types {types3:?}"))?;

    let c4 = enumerate_components(4, -1).map_err(|e| e.to_string())?;
    let got: BTreeMap<String, i64> = keys(&c4).into_iter().map(|(k, (_, i))| (k, i)).collect();
    let want: BTreeMap<String, i64> = rank_four_indices().into_iter().map(|(k, i)| (k.to_string(), i)).collect();
    check(got == want, || format!("rank 4: {got:?}"))?;
    for empty in [vec![4], vec![3, 1], vec![1, 3], vec![2, 2]] {
        check(c4.iter().all(|c| c.shape().rtype != empty), || format!("type {empty:?} is not empty"))?;
    }
    Ok(format!("{} + {} components", c3.len(), c4.len()))
}

fn oracle_table(comps: &[ChainComponent]) -> Result<(OracleTable, BTreeSet<u64>), String> {
    let mut table = OracleTable::new();
    let mut primes = BTreeSet::new();
    for c in comps.iter().filter(|c| !c.shape().is_type_1n()) {
        let ps = default_primes(c).map_err(|e| e.to_string())?;
        primes.extend(ps.iter().copied());
        table.insert(count_record(c, &ps).map_err(|e| format!("{}: {e}", c.key()))?).map_err(|e| e.to_string())?;
    }
    Ok((table, primes))
}

fn betti_polynomials() -> Outcome {
    let p2 = poincare_series(2, -1, None).map_err(|e| e.to_string())?;
    check(p2 == poly("1 + x^2"), || format!("P(2, -1) = {p2}"))?;
    let p3 = poincare_series(3, -1, None).map_err(|e| e.to_string())?;
    check(p3 == poly("1 + x^2 + 3x^4 + 4x^6 + 3x^8"), || format!("P(3, -1) = {p3}"))?;
    let c4 = enumerate_components(4, -1).map_err(|e| e.to_string())?;
    let start = Instant::now();
    let (table, primes) = oracle_table(&c4)?;
    let oracle_time = start.elapsed();
    let p4 = series_of(&c4, Some(&table)).map_err(|e| e.to_string())?;
    check(p4 == poly(P_4_MINUS_1), || format!("P(4, -1) = {p4}"))?;
    Ok(format!("oracle over primes {primes:?} in {:.2} s", oracle_time.as_secs_f64()))
}

fn oracle_soundness() -> Outcome {
    let mut closed = 0;
    let mut records = 0;
    for (r, d) in [(2, -1), (3, -1), (3, -2), (4, -1), (4, -3)] {
        for c in enumerate_components(r, d).map_err(|e| e.to_string())? {
            let primes = default_primes(&c).map_err(|e| e.to_string())?;
            // count_record enforces the held-out prime and orbit divisibility
            let rec = count_record(&c, &primes).map_err(|e| format!("{}: {e}", c.key()))?;
            records += 1;
            if c.shape().is_type_1n() {
                let cf = component_poincare(&c, None).map_err(|e| e.to_string())?;
                check(rec.poincare == cf, || format!("{}: {} vs {cf}", c.key(), rec.poincare))?;
                closed += 1;
            }
        }
    }
    let point: ChainComponent = "[0 0|-1]".parse().map_err(|e| format!("{e}"))?;
    let p = component_poincare_ff(&point, &[2, 3, 5, 7]).map_err(|e| e.to_string())?;
    check(p == PoincarePolynomial::one(), || format!("[0 0|-1] gives {p}"))?;
    Ok(format!("{closed} closed forms matched, {records} records fit their held-out prime"))
}

fn degree_duality() -> Outcome {
    for (r, d) in [(3, -1), (4, -1)] {
        let dd = -d - r;
        let lhs = enumerate_components(r, d).map_err(|e| e.to_string())?;
        let rhs = enumerate_components(r, dd).map_err(|e| e.to_string())?;
        let image: BTreeMap<String, i64> = lhs.iter().map(|c| (dualize(c).key(), c.morse_index())).collect();
        let target: BTreeMap<String, i64> = rhs.iter().map(|c| (c.key(), c.morse_index())).collect();
        check(image.len() == lhs.len() && image == target, || format!("({r}, {d}) -> ({r}, {dd}) is not a bijection"))?;
        let (table, _) = oracle_table(&lhs)?;
        let a = series_of(&lhs, Some(&table)).map_err(|e| e.to_string())?;
        let b = series_of(&rhs, Some(&table)).map_err(|e| e.to_string())?;
        check(a == b, || format!("P({r}, {d}) = {a} but P({r}, {dd}) = {b}"))?;
    }
    Ok("(3, -1) <-> (3, -2), (4, -1) <-> (4, -3)".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        ("admissibility and canonical field", Duration::from_secs(10), admissibility_and_canonical_field),
        ("rank-2 odd moduli", Duration::from_secs(10), rank_two_odd_moduli),
        ("Morse indices", Duration::from_secs(5), morse_indices),
        ("census fidelity", Duration::from_secs(30), census_fidelity),
        ("Betti polynomials", Duration::from_secs(30 * 60), betti_polynomials),
        ("oracle soundness", Duration::from_secs(30 * 60), oracle_soundness),
        ("degree duality", Duration::from_secs(60), degree_duality),
    ];
    let mut failed = 0;
    for (n, (name, limit, run)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        let outcome = match outcome {
            Ok(detail) if start.elapsed() > limit => Err(format!("{detail}; over the {} s limit", limit.as_secs())),
            other => other,
        };
        match outcome {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail} ({secs:.2} s)", n + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {why} ({secs:.2} s)", n + 1);
            }
        }
    }
    println!("criterion 8: EXCLUDED  rank 5 is not computed; known answer P(5, -1) = {}", poly(P_5_MINUS_1));
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
