//! Seeded fixture corpora: random smooth complete toric surfaces and
//! 3-folds carrying ample divisors, strip polynomials with planted linear
//! factors, saturated adjoint tables on the affine line, approximation
//! instances over real quadratic fields, and finite-generation /
//! restricted-algebra fixtures.

use crate::adjoint::{A1Limit, AdjointSequenceA1};
use crate::dioph::ApproxInstance;
use crate::divisor::{is_ample, TorusDivisor};
use crate::exact::{rat, rat_i, QuadReal, Rat};
use crate::fan::{fixtures, Fan};
use crate::lattice::LatticeVec;
use crate::pairs::{stellar_subdivide, ToricPair};
use crate::poly::BivarPoly;
use num::bigint::BigInt;
use num::{One, Zero};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9e3779b97f4a7c15).wrapping_add(stream))
}

/// A smooth complete fan with an ample divisor on it.
#[derive(Debug, Clone)]
pub struct PolarizedFixture {
    pub fan: Fan,
    pub ample: TorusDivisor,
}

/// Stellar subdivision at the barycentre of a random full-dimensional cone
/// (for surfaces) or a random 2/3-subset of one (for 3-folds), with the
/// polarization pulled back and twisted down by the exceptional divisor.
fn blow_up(fix: &PolarizedFixture, rng: &mut ChaCha8Rng) -> Option<PolarizedFixture> {
    let fan = &fix.fan;
    let ci = rng.gen_range(0..fan.max_cones.len());
    let cone = &fan.max_cones[ci];
    let subset: Vec<usize> = if fan.rank == 2 {
        cone.clone()
    } else {
        let mut c = cone.clone();
        c.shuffle(rng);
        let size = rng.gen_range(2..=c.len());
        c.truncate(size);
        c
    };
    let mut w = LatticeVec::new(vec![0; fan.rank]);
    for &r in &subset {
        w = w.add(&fan.rays[r]);
    }
    let new_fan = stellar_subdivide(fan, &w)?;
    if !new_fan.smooth || !new_fan.complete {
        return None;
    }
    // Support-function value of the ample divisor at the new ray equals the
    // coefficient sum over the chosen cone rays; k * pullback - E stays ample
    // for large enough k.
    let psi: Rat = subset.iter().map(|&r| fix.ample.coeffs[r].clone()).sum();
    for k in 2..=8i64 {
        let mut coeffs: Vec<Rat> = fix.ample.coeffs.iter().map(|a| a * rat_i(k)).collect();
        coeffs.push(&psi * rat_i(k) - Rat::one());
        let cand = TorusDivisor { coeffs };
        if is_ample(&new_fan, &cand) {
            return Some(PolarizedFixture { fan: new_fan, ample: cand });
        }
    }
    None
}

/// At least `count` smooth complete polarized surfaces: the classical models
/// first, then seeded blow-up chains over P^2.
pub fn surface_corpus(seed: u64, count: usize) -> Vec<PolarizedFixture> {
    let mut rng = rng_for(seed, 1);
    let mut out: Vec<PolarizedFixture> = Vec::new();
    out.push(PolarizedFixture {
        fan: fixtures::p2(),
        ample: TorusDivisor::from_ints(&fixtures::p2(), &[0, 0, 1]).unwrap(),
    });
    out.push(PolarizedFixture {
        fan: fixtures::p1xp1(),
        ample: TorusDivisor::from_ints(&fixtures::p1xp1(), &[1, 0, 1, 0]).unwrap(),
    });
    for a in 1..=3 {
        let fan = fixtures::hirzebruch(a);
        // C0 + (a+1) f is ample on F_a (C0 the negative section).
        let d = TorusDivisor::from_ints(&fan, &[a + 1, 1, 0, 0]).unwrap();
        assert!(is_ample(&fan, &d));
        out.push(PolarizedFixture { fan, ample: d });
    }
    while out.len() < count {
        let mut cur = out[0].clone(); // P^2 root
        let steps = rng.gen_range(1..=5);
        for _ in 0..steps {
            if let Some(next) = blow_up(&cur, &mut rng) {
                cur = next;
            }
        }
        out.push(cur);
    }
    out
}

/// At least `count` smooth complete polarized 3-folds from blow-up chains
/// over P^3.
pub fn threefold_corpus(seed: u64, count: usize) -> Vec<PolarizedFixture> {
    let mut rng = rng_for(seed, 2);
    let p3 = fixtures::p3();
    let root = PolarizedFixture {
        ample: TorusDivisor::from_ints(&p3, &[0, 0, 0, 1]).unwrap(),
        fan: p3,
    };
    let mut out = vec![root.clone()];
    while out.len() < count {
        let mut cur = root.clone();
        let steps = rng.gen_range(1..=3);
        for _ in 0..steps {
            if let Some(next) = blow_up(&cur, &mut rng) {
                cur = next;
            }
        }
        out.push(cur);
    }
    out
}

/// A strip-verification problem with a planted linear factor.
#[derive(Debug, Clone)]
pub struct StripFixture {
    pub poly: BivarPoly,
    pub a: i64,
    /// Planted rational slope u/v.
    pub r: Rat,
    pub eps: Rat,
    pub n: i64,
    pub degree: u32,
    /// Planted primitive factor `c x + d y`.
    pub planted: (BigInt, BigInt),
    pub multiplicity: u32,
}

pub fn strip_corpus(seed: u64, count: usize) -> Vec<StripFixture> {
    let mut rng = rng_for(seed, 3);
    let mut out = Vec::new();
    while out.len() < count {
        let a = rng.gen_range(1..=3i64);
        let v = rng.gen_range(1..=4i64);
        let u = rng.gen_range(1..=6i64);
        let form = LatticeVec::new(vec![u, -v * a]).primitive().unwrap();
        let (c, d) = (form.coords[0], form.coords[1]);
        let lin = BivarPoly::linear(rat_i(c), rat_i(d));
        // Cofactor not divisible by the planted form.
        let mut cof = BivarPoly::constant(rat_i(rng.gen_range(1..=3)));
        for _ in 0..rng.gen_range(0..=2) {
            let mut term = BivarPoly::zero();
            term.set(
                rng.gen_range(0..=1),
                rng.gen_range(0..=1),
                rat_i(rng.gen_range(1..=4)),
            );
            cof = cof.add(&term);
        }
        if cof.div_linear(&rat_i(c), &rat_i(d)).is_some() {
            continue;
        }
        let multiplicity = rng.gen_range(1..=2u32);
        let mut poly = cof.clone();
        for _ in 0..multiplicity {
            poly = poly.mul(&lin);
        }
        // eps = 1/v keeps the strip 0 < a y - (u/v) x < eps lattice-free,
        // making the vanishing hypothesis hold vacuously.
        out.push(StripFixture {
            degree: poly.degree(),
            poly,
            a,
            r: rat(u, v),
            eps: rat(1, v),
            n: rng.gen_range(20..=40),
            planted: (BigInt::from(c), BigInt::from(d)),
            multiplicity,
        });
    }
    out
}

/// Saturated rational-limit tables: `b = (q-1)/q`, `d = u/v` with `v <= q`,
/// and the canonical concave table `d_i = floor(i d)/i`.
pub fn a1_rational_corpus(seed: u64, count: usize) -> Vec<AdjointSequenceA1> {
    let mut rng = rng_for(seed, 4);
    let mut out = Vec::new();
    while out.len() < count {
        let q = rng.gen_range(1..=6i64);
        let b = rat(q - 1, q);
        let v = rng.gen_range(1..=q);
        let u = rng.gen_range(0..=3 * v);
        let d = rat(u, v);
        let n = (v as usize).max(1) + rng.gen_range(0..=6);
        let table: Vec<Rat> = (1..=n)
            .map(|i| {
                let f = (&d * rat_i(i as i64)).floor();
                f / rat_i(i as i64)
            })
            .collect();
        let seq = AdjointSequenceA1::new(b, table, A1Limit::Rational(d))
            .expect("canonical table satisfies the invariants");
        out.push(seq);
    }
    out
}

/// Saturated-within-horizon tables whose declared limit is a genuine
/// quadratic irrational; `b` is chosen just above the largest fractional
/// part `{j d}` seen inside the horizon.
pub fn a1_quadratic_corpus(seed: u64, count: usize) -> Vec<AdjointSequenceA1> {
    let mut rng = rng_for(seed, 5);
    let discs = [2i64, 3, 5];
    let mut out = Vec::new();
    while out.len() < count {
        let disc = discs[rng.gen_range(0..discs.len())];
        let scale = rat(1, rng.gen_range(1..=3));
        let surd = QuadReal::new(Rat::zero(), scale, disc).unwrap();
        let shift = rng.gen_range(0..=2i64);
        let d = surd.add_rat(&(rat_i(shift) - Rat::from_integer(surd.floor())));
        let n = rng.gen_range(3..=8usize);
        // b strictly above max_{j<=N} {j d}, granular at 1/720.
        let denom = 720i64;
        let mut b_num: Option<i64> = None;
        for k in 1..denom {
            let cand = rat(k, denom);
            if (1..=n as i64).all(|j| {
                d.mul_rat(&rat_i(j)).fract().cmp_rat(&cand) == std::cmp::Ordering::Less
            }) {
                b_num = Some(k);
                break;
            }
        }
        let Some(k) = b_num else { continue };
        let b = rat(k, denom);
        let table: Vec<Rat> = (1..=n)
            .map(|i| {
                Rat::from_integer(d.mul_rat(&rat_i(i as i64)).floor()) / rat_i(i as i64)
            })
            .collect();
        match AdjointSequenceA1::new(b, table, A1Limit::Quadratic(d)) {
            Ok(seq) => out.push(seq),
            Err(_) => continue,
        }
    }
    out
}

/// Approximation instances over Q(sqrt 2), Q(sqrt 3), Q(sqrt 5) with
/// eps in {1/10, 1/100}: one irrational coordinate in (0, 1), optional
/// integral companions, and an identity-plus-sum matrix.
pub fn approx_corpus(seed: u64, count: usize) -> Vec<ApproxInstance> {
    let mut rng = rng_for(seed, 6);
    let discs = [2i64, 3, 5];
    let eps_choices = [rat(1, 10), rat(1, 100)];
    let mut out = Vec::new();
    let mut idx = 0usize;
    while out.len() < count {
        let disc = discs[idx % discs.len()];
        let eps = eps_choices[(idx / discs.len()) % eps_choices.len()].clone();
        idx += 1;
        let bcoef = rat(1, rng.gen_range(1..=2));
        let surd = QuadReal::new(Rat::zero(), bcoef, disc).unwrap();
        let irr = surd.add_rat(&-Rat::from_integer(surd.floor()));
        let l = rng.gen_range(1..=2usize);
        let mut d = vec![irr];
        for _ in 1..l {
            d.push(QuadReal::from_rat(rat_i(rng.gen_range(0..=3)), disc));
        }
        d.shuffle(&mut rng);
        let mut e: Vec<Vec<i64>> = (0..l)
            .map(|r| (0..l).map(|c| i64::from(r == c)).collect())
            .collect();
        if rng.gen_bool(0.5) {
            e.push(vec![1; l]);
        }
        out.push(ApproxInstance::new(e, d, eps).expect("constructed instance is valid"));
    }
    out
}

/// Effective divisors on small surfaces for characteristic sequences:
/// ample classes, nef-but-not-ample classes, and divisors with genuine
/// fixed parts on Hirzebruch surfaces.
pub fn fg_corpus(seed: u64, count: usize) -> Vec<(Fan, TorusDivisor)> {
    let mut rng = rng_for(seed, 7);
    let mut out: Vec<(Fan, TorusDivisor)> = Vec::new();
    let p2 = fixtures::p2();
    for a in 1..=2i64 {
        out.push((p2.clone(), TorusDivisor::from_ints(&p2, &[0, 0, a]).unwrap()));
    }
    let q = fixtures::p1xp1();
    out.push((q.clone(), TorusDivisor::from_ints(&q, &[1, 0, 1, 0]).unwrap()));
    out.push((q.clone(), TorusDivisor::from_ints(&q, &[1, 0, 0, 0]).unwrap())); // one ruling
    for a in 1..=2i64 {
        let f = fixtures::hirzebruch(a);
        // Negative section: Fix = whole divisor.
        out.push((f.clone(), TorusDivisor::from_ints(&f, &[0, 1, 0, 0]).unwrap()));
        // Section plus fibre: big with partial fixed part for a = 2.
        out.push((f.clone(), TorusDivisor::from_ints(&f, &[0, 1, 0, 1]).unwrap()));
        // Ample.
        out.push((f.clone(), TorusDivisor::from_ints(&f, &[a + 1, 1, 0, 0]).unwrap()));
    }
    let surfaces = surface_corpus(seed, 12);
    while out.len() < count {
        let s = &surfaces[rng.gen_range(0..surfaces.len())];
        // Small effective divisors keep the degree-20 tables enumerable.
        let coeffs: Vec<Rat> = (0..s.fan.rays.len())
            .map(|_| rat_i(i64::from(rng.gen_bool(0.6))))
            .collect();
        let d = TorusDivisor { coeffs };
        if d.coeffs.iter().all(|c| c.is_zero()) {
            continue;
        }
        out.push((s.fan.clone(), d));
    }
    out
}

/// Pairs with `S = floor(Delta)` a single ray plus a representing divisor for
/// the restricted-algebra table.
pub fn restricted_corpus(seed: u64, count: usize) -> Vec<(ToricPair, TorusDivisor)> {
    let mut rng = rng_for(seed, 8);
    let surfaces = surface_corpus(seed, 10);
    let mut out = Vec::new();
    let mut idx = 0usize;
    while out.len() < count {
        let s = &surfaces[idx % surfaces.len()];
        idx += 1;
        let nrays = s.fan.rays.len();
        let s_ray = rng.gen_range(0..nrays);
        let mut boundary = vec![Rat::zero(); nrays];
        boundary[s_ray] = Rat::one();
        for (k, c) in boundary.iter_mut().enumerate() {
            if k != s_ray && rng.gen_bool(0.4) {
                *c = rat(1, rng.gen_range(2..=4));
            }
        }
        let pair = ToricPair::new(s.fan.clone(), boundary).unwrap();
        let d = if rng.gen_bool(0.7) {
            // Small effective divisors keep the restricted tables enumerable.
            let mut coeffs: Vec<Rat> =
                (0..nrays).map(|_| rat_i(i64::from(rng.gen_bool(0.6)))).collect();
            if coeffs.iter().all(|c| c.is_zero()) {
                coeffs[s_ray] = Rat::one();
            }
            TorusDivisor { coeffs }
        } else {
            pair.k_plus_delta()
        };
        out.push((pair, d));
    }
    out
}
