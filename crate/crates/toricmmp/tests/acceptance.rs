//! Acceptance suite: one criterion per test, one pass/fail line per
//! criterion, with the stated runtime caps enforced.

use num::bigint::BigInt;
use num::{Integer, One, Zero};
use std::collections::BTreeSet;
use std::time::{Duration, Instant};
use toricmmp::adjoint::{fg_a1, fg_test_stabilization, restricted_dims_for, CharacteristicSequence, FgA1, FgVerdict};
use toricmmp::corpus::*;
use toricmmp::dioph::{approximate, ApproxOutcome};
use toricmmp::divisor::{h0, mob_fix, DivisorPolytope, TorusDivisor};
use toricmmp::exact::{rat, rat_i, QuadReal, Rat};
use toricmmp::mmp::{contract, flip, mori_cone_generators, run_mmp, MmpMode, MmpOutcome, StepKind};
use toricmmp::pairs::{nef_threshold, strip_vanishing_verify, Slope, StripVerdict, ToricPair};

const SEED: u64 = 20260823;

fn report(criterion: usize, name: &str, pass: bool, elapsed: Duration, cap: Duration) {
    let status = if pass && elapsed <= cap { "PASS" } else { "FAIL" };
    println!(
        "criterion {criterion} [{status}] {name} ({:.2?} elapsed, cap {:.0?})",
        elapsed, cap
    );
    assert!(pass, "criterion {criterion} failed: {name}");
    assert!(
        elapsed <= cap,
        "criterion {criterion} exceeded the runtime cap: {elapsed:.2?} > {cap:.0?}"
    );
}

#[test]
fn criterion_1_rationality_bound() {
    let start = Instant::now();
    let mut pass = true;
    let mut equality_attained = false;
    let surfaces = surface_corpus(SEED, 100);
    let threefolds = threefold_corpus(SEED, 20);
    for (idx, fx) in surfaces.iter().chain(threefolds.iter()).enumerate() {
        let pair = ToricPair::trivial(fx.fan.clone());
        let a = 1i64;
        let t = nef_threshold(&pair, &fx.ample, a).expect("K is never nef on these fans");
        let bound = BigInt::from(a * (fx.fan.rank as i64 + 1));
        if t.v > bound {
            pass = false;
            eprintln!("fixture {idx}: v = {} exceeds the bound {bound}", t.v);
        }
        if idx == 0 {
            // The P^2 fixture attains equality: r = 1/3, v = 3 for a = 1.
            equality_attained = t.v == BigInt::from(3) && t.r == rat(1, 3);
        }
    }
    report(
        1,
        "nef-threshold denominators obey v <= a(n+1) on 100 surfaces + 20 threefolds",
        pass && equality_attained,
        start.elapsed(),
        Duration::from_secs(60),
    );
}

#[test]
fn criterion_2_strip_bound() {
    let start = Instant::now();
    let mut pass = true;
    for (idx, fx) in strip_corpus(SEED, 50).iter().enumerate() {
        let verdict = strip_vanishing_verify(
            &fx.poly,
            fx.a,
            &Slope::Rational(fx.r.clone()),
            &fx.eps,
            fx.n,
            fx.degree,
        )
        .expect("corpus inputs are well-formed");
        match verdict {
            StripVerdict::Factor { c, d, multiplicity, bound_ok } => {
                let planted_ok = c == fx.planted.0 && d == fx.planted.1;
                let mult_ok = multiplicity >= fx.multiplicity;
                // v <= a(n+1)/eps for the planted slope's reduced denominator.
                let v = fx.r.denom().clone();
                let rhs = rat_i(fx.a * (i64::from(fx.degree) + 1)) / &fx.eps;
                let denom_ok = Rat::from_integer(v) <= rhs;
                if !(planted_ok && mult_ok && bound_ok && denom_ok) {
                    pass = false;
                    eprintln!("fixture {idx}: factor mismatch");
                }
            }
            other => {
                pass = false;
                eprintln!("fixture {idx}: expected a factor verdict, got {other:?}");
            }
        }
    }
    report(
        2,
        "strip verifier recovers 50 planted factors within the denominator bound",
        pass,
        start.elapsed(),
        Duration::from_secs(30),
    );
}

#[test]
fn criterion_3_a1_proposition() {
    let start = Instant::now();
    let mut pass = true;
    for (idx, seq) in a1_rational_corpus(SEED, 200).iter().enumerate() {
        match fg_a1(seq, 1_000_000) {
            Ok(FgA1::FinitelyGenerated { v, .. }) => {
                let q = seq.q();
                let mut fact = BigInt::one();
                for k in 2..=q {
                    fact *= BigInt::from(k);
                }
                let divides = fact.mod_floor(&BigInt::from(v)).is_zero();
                let d_v = &seq.table[v as usize - 1];
                let limit_ok = match &seq.limit {
                    toricmmp::adjoint::A1Limit::Rational(d) => d_v == d,
                    _ => false,
                };
                if !(divides && limit_ok) {
                    pass = false;
                    eprintln!("rational table {idx}: claim arithmetic failed");
                }
            }
            other => {
                pass = false;
                eprintln!("rational table {idx}: unexpected outcome {other:?}");
            }
        }
    }
    for (idx, seq) in a1_quadratic_corpus(SEED, 50).iter().enumerate() {
        match fg_a1(seq, 1_000_000) {
            Ok(FgA1::RationalityRefutation { j }) => {
                let toricmmp::adjoint::A1Limit::Quadratic(d) = &seq.limit else {
                    panic!("quadratic corpus entry with rational limit")
                };
                let frac = d.mul_rat(&rat_i(j as i64)).fract();
                if frac.cmp_rat(&seq.b) != std::cmp::Ordering::Greater {
                    pass = false;
                    eprintln!("quadratic table {idx}: refutation index does not refute");
                }
            }
            other => {
                pass = false;
                eprintln!("quadratic table {idx}: unexpected outcome {other:?}");
            }
        }
    }
    report(
        3,
        "fg_a1: 200 rational tables certified (v | q!, d_v = d), 50 quadratic tables refuted",
        pass,
        start.elapsed(),
        Duration::from_secs(10),
    );
}

#[test]
fn criterion_4_approximation_lemma() {
    let start = Instant::now();
    let mut pass = true;
    // Pinned fixture: d = sqrt(2) - 1, eps = 1/10 gives j = 12, m = 5.
    let fixture = toricmmp::dioph::ApproxInstance::new(
        vec![vec![1]],
        vec![QuadReal::new(rat_i(-1), rat_i(1), 2).unwrap()],
        rat(1, 10),
    )
    .unwrap();
    match approximate(&fixture, 1000) {
        ApproxOutcome::Certificate(c) => {
            pass &= c.j == 12 && c.m == vec![BigInt::from(5)];
        }
        _ => pass = false,
    }
    for (idx, inst) in approx_corpus(SEED, 25).iter().enumerate() {
        match approximate(inst, 300_000) {
            ApproxOutcome::Certificate(cert) => {
                // Independent re-verification of both conditions.
                let mut has_negative = false;
                let mut ok = true;
                for (row, res) in inst.e.iter().zip(&cert.residual) {
                    let mut acc = QuadReal::from_rat(Rat::zero(), inst.d[0].disc);
                    for (k, &coef) in row.iter().enumerate() {
                        let jd = inst.d[k].mul_rat(&rat_i(cert.j as i64));
                        let term = jd.add_rat(&-Rat::from_integer(cert.m[k].clone()));
                        acc = acc.add(&term.mul_rat(&rat_i(coef))).unwrap();
                    }
                    ok &= acc == *res;
                    ok &= acc.cmp_rat(&inst.eps) == std::cmp::Ordering::Less;
                    ok &= acc.neg().cmp_rat(&inst.eps) == std::cmp::Ordering::Less;
                    has_negative |= acc.sign() < 0;
                }
                if !(ok && has_negative) {
                    pass = false;
                    eprintln!("instance {idx}: certificate failed re-verification");
                }
            }
            ApproxOutcome::NotFoundUpTo(cap) => {
                pass = false;
                eprintln!("instance {idx}: no certificate up to {cap}");
            }
        }
    }
    report(
        4,
        "approximation certificates re-verify exactly on 25 instances over Q(sqrt 2/3/5)",
        pass,
        start.elapsed(),
        Duration::from_secs(20),
    );
}

#[test]
fn criterion_5_mmp_driver() {
    let start = Instant::now();
    let mut pass = true;
    for (idx, fx) in surface_corpus(SEED, 100).iter().enumerate() {
        let pair = ToricPair::trivial(fx.fan.clone());
        let budget = fx.fan.rays.len() - 3 + 1;
        let trace = run_mmp(&pair, &MmpMode::Plain, budget).expect("lc input");
        let ok = matches!(trace.outcome, MmpOutcome::MinimalModel | MmpOutcome::MoriFibreSpace)
            && trace.steps.len() <= budget
            && trace.steps.iter().all(|s| s.kind != StepKind::Flipping);
        if !ok {
            pass = false;
            eprintln!("surface {idx}: {:?} in {} steps", trace.outcome, trace.steps.len());
        }
    }
    // The threefold circuit fixture: one flip with 1+, 2+, 3+ and
    // discrepancy monotonicity on >= 100 sampled valuations.
    let fan = toricmmp::fan::fixtures::flip_local();
    let pair = ToricPair::new(fan, vec![rat(1, 2), rat(1, 2), rat_i(0), rat_i(0)]).unwrap();
    let gens = mori_cone_generators(&pair);
    let step = contract(&pair, &gens[0]).expect("flipping contraction");
    match flip(&pair, &step) {
        Ok((_, rep)) => {
            pass &= rep.small
                && rep.kd_positive_after
                && rep.relative_picard_one
                && rep.sampled_valuations >= 100;
        }
        Err(e) => {
            pass = false;
            eprintln!("flip failed: {e}");
        }
    }
    report(
        5,
        "MMP terminates flip-free within #rays-2 steps on surfaces; the 3-fold flip verifies 1+/2+/3+",
        pass,
        start.elapsed(),
        Duration::from_secs(60),
    );
}

#[test]
fn criterion_6_mob_fix_oracle() {
    let start = Instant::now();
    let mut pass = true;
    let mut divisors: Vec<(toricmmp::fan::Fan, TorusDivisor)> = fg_corpus(SEED, 30);
    for fx in surface_corpus(SEED, 20) {
        divisors.push((fx.fan.clone(), fx.ample.clone()));
    }
    for (idx, (fan, d)) in divisors.iter().enumerate() {
        let (mob, fix) = mob_fix(fan, d).expect("effective divisors have sections");
        let h_full = h0(fan, d).unwrap();
        let h_mob = h0(fan, &mob).unwrap();
        if h_full != h_mob {
            pass = false;
            eprintln!("divisor {idx}: h0 {h_full} != h0(Mob) {h_mob}");
        }
        // Brute-force fixed part: minimum of <m, v_i> + a_i over the points.
        let pts = DivisorPolytope::new(fan, d).lattice_points().unwrap();
        for (i, ray) in fan.rays.iter().enumerate() {
            let min = pts
                .iter()
                .map(|m| ray.dot_rat(&m.to_rat()) + &d.coeffs[i])
                .min()
                .unwrap();
            if min != fix.coeffs[i] {
                pass = false;
                eprintln!("divisor {idx}: Fix mismatch at ray {i}");
            }
        }
    }
    report(
        6,
        "h0(D) = h0(Mob D) with brute-force Fix coefficients on the corpus",
        pass,
        start.elapsed(),
        Duration::from_secs(30),
    );
}

/// Degree-wise Minkowski generation oracle: every lattice point of
/// `P(ik D)` must be a sum of `k` lattice points of `P(i D)`.
fn generation_witness(fan: &toricmmp::fan::Fan, d: &TorusDivisor, horizon: usize) -> Option<usize> {
    let points = |m: usize| -> BTreeSet<Vec<i64>> {
        DivisorPolytope::new(fan, &d.scale_i(m as i64).floor())
            .lattice_points()
            .unwrap()
            .into_iter()
            .map(|p| p.coords)
            .collect()
    };
    'outer: for i in 1..=horizon {
        let base = points(i);
        if base.is_empty() {
            continue;
        }
        let mut sums = base.clone();
        for k in 2..=horizon / i {
            let mut next = BTreeSet::new();
            for s in &sums {
                for b in &base {
                    next.insert(s.iter().zip(b).map(|(x, y)| x + y).collect::<Vec<i64>>());
                }
            }
            sums = next;
            if sums != points(i * k) {
                continue 'outer;
            }
        }
        return Some(i);
    }
    None
}

#[test]
fn criterion_7_fg_criterion() {
    let start = Instant::now();
    let mut pass = true;
    let horizon = 20usize;
    for (idx, (fan, d)) in fg_corpus(SEED, 30).iter().enumerate() {
        let seq = CharacteristicSequence::from_divisor(fan.clone(), d.clone(), horizon)
            .expect("effective corpus divisors");
        let verdict = fg_test_stabilization(&seq, horizon);
        let oracle = generation_witness(fan, d, horizon);
        let agree = match (&verdict, &oracle) {
            (FgVerdict::FGWitness(i), Some(j)) => i == j,
            (FgVerdict::NoWitnessUpTo(_), None) => true,
            _ => false,
        };
        if !agree {
            pass = false;
            eprintln!("fixture {idx}: {verdict:?} vs oracle {oracle:?}");
        }
    }
    report(
        7,
        "stabilization witnesses match brute-force semigroup generation to degree 20 on 30 fixtures",
        pass,
        start.elapsed(),
        Duration::from_secs(60),
    );
}

#[test]
fn criterion_8_restricted_algebra() {
    let start = Instant::now();
    let mut pass = true;
    let horizon = 8usize;
    for (idx, (pair, d)) in restricted_corpus(SEED, 20).iter().enumerate() {
        let table = restricted_dims_for(pair, d, horizon).expect("valid corpus pair");
        // Monomial-basis oracle: restriction image rank = number of lattice
        // points on the S-face of the polytope of each degree.
        for n in 0..=horizon {
            let dn = d.scale_i(n as i64).floor();
            let pts = DivisorPolytope::new(&pair.fan, &dn).lattice_points().unwrap();
            let v_s = &pair.fan.rays[table.s_ray];
            let face = pts
                .iter()
                .filter(|m| v_s.dot_rat(&m.to_rat()) == -dn.coeffs[table.s_ray].clone())
                .count() as u64;
            if face != table.dims[n] {
                pass = false;
                eprintln!("fixture {idx} degree {n}: {face} != {}", table.dims[n]);
            }
        }
    }
    report(
        8,
        "restricted-algebra tables match the monomial restriction-rank oracle on 20 fixtures",
        pass,
        start.elapsed(),
        Duration::from_secs(30),
    );
}
