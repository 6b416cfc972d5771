//! Log pairs on toric models: discrepancies of toric valuations, the
//! klt/plt/lc classification with a dlt flag, log canonical thresholds, nef
//! thresholds with the rationality denominator bound, and the strip-vanishing
//! verifier for the supporting arithmetic lemma.

use crate::divisor::{is_big, is_nef, TorusDivisor};
use crate::exact::{rat_i, QuadReal, Rat};
use crate::fan::{Fan, FanError};
use crate::lattice::LatticeVec;
use crate::poly::BivarPoly;
use num::bigint::BigInt;
use num::{One, Signed, Zero};
use thiserror::Error;

/// Default cap on the stellar-subdivision depth of the dlt witness search.
pub const DLT_DEPTH_CAP: usize = 6;

#[derive(Debug, Error, PartialEq, Clone)]
pub enum PairError {
    #[error(transparent)]
    Fan(#[from] FanError),
    #[error("valuation lies outside the fan support")]
    OutsideSupport,
    #[error("valuation vector is not primitive")]
    NotPrimitive,
    #[error("pair is not klt")]
    NotKlt,
    #[error("divisor is not effective")]
    NonEffective,
    #[error("K + Delta is already nef")]
    AlreadyNef,
    #[error("H must be nef and big")]
    HNotNefBig,
    #[error("a(K + Delta) is not integral")]
    NotIntegralMultiple,
    #[error("denominator bound violated: v = {v} > a(n+1) = {bound} (implementation bug)")]
    BoundViolation { v: BigInt, bound: BigInt },
    #[error("polynomial degree {actual} exceeds declared degree {declared}")]
    DegreeMismatch { declared: u32, actual: u32 },
}

/// The pair `(X, Delta)`: a fan plus one rational boundary coefficient per
/// ray.  Coefficients outside `[0, 1]` are representable (the classifier must
/// be able to say "not lc"); operations that assume a genuine boundary check
/// `is_boundary` themselves.
#[derive(Debug, Clone, PartialEq)]
pub struct ToricPair {
    pub fan: Fan,
    pub boundary: Vec<Rat>,
}

/// `K_X = -sum D_i`.
pub fn canonical_divisor(fan: &Fan) -> TorusDivisor {
    TorusDivisor { coeffs: vec![-Rat::one(); fan.rays.len()] }
}

impl ToricPair {
    pub fn new(fan: Fan, boundary: Vec<Rat>) -> Result<Self, PairError> {
        if boundary.len() != fan.rays.len() {
            return Err(FanError::CoeffLengthMismatch(boundary.len(), fan.rays.len()).into());
        }
        Ok(ToricPair { fan, boundary })
    }

    pub fn trivial(fan: Fan) -> Self {
        let boundary = vec![Rat::zero(); fan.rays.len()];
        ToricPair { fan, boundary }
    }

    /// `0 <= d_i <= 1` for every ray.
    pub fn is_boundary(&self) -> bool {
        self.boundary.iter().all(|d| !d.is_negative() && *d <= Rat::one())
    }

    pub fn k_plus_delta(&self) -> TorusDivisor {
        TorusDivisor { coeffs: self.boundary.iter().map(|d| d - Rat::one()).collect() }
    }

    pub fn delta(&self) -> TorusDivisor {
        TorusDivisor { coeffs: self.boundary.clone() }
    }

    /// The piecewise-linear log-discrepancy function, taking `1 - d_i` at the
    /// primitive generator of ray `i`, evaluated at `v`.
    pub fn log_discrepancy(&self, v: &LatticeVec) -> Result<Rat, PairError> {
        let (ci, coords) =
            self.fan.cone_containing(v).ok_or(PairError::OutsideSupport)?;
        let cone = &self.fan.max_cones[ci];
        Ok(cone
            .iter()
            .zip(&coords)
            .map(|(&ri, lam)| lam * (Rat::one() - &self.boundary[ri]))
            .sum())
    }

    /// Discrepancy `a(v, X, Delta)` of the toric valuation at the primitive
    /// vector `v`: log discrepancy minus one.
    pub fn discrepancy(&self, v: &LatticeVec) -> Result<Rat, PairError> {
        if !v.is_primitive() {
            return Err(PairError::NotPrimitive);
        }
        Ok(self.log_discrepancy(v)? - Rat::one())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SingClass {
    Klt,
    Plt,
    Lc,
    NotLc,
}

impl SingClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            SingClass::Klt => "klt",
            SingClass::Plt => "plt",
            SingClass::Lc => "lc",
            SingClass::NotLc => "not-lc",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SingularityReport {
    /// The sharpest applicable class (klt implies plt implies lc).
    pub class: SingClass,
    /// `Some(true)` / `Some(false)` when decided; `None` when the capped
    /// subdivision search was inconclusive.
    pub dlt: Option<bool>,
    /// Valuations with their discrepancies witnessing the classification.
    pub witnesses: Vec<(LatticeVec, Rat)>,
}

/// Classifies the singularities of the pair.  On a simplicial fan the
/// log-discrepancy function is linear on each cone, so its sign over the
/// whole support is governed by the ray values `1 - d_i`; interior witnesses
/// only arise from faces all of whose rays carry `d_i = 1`.
pub fn classify(pair: &ToricPair) -> SingularityReport {
    let fan = &pair.fan;
    let mut witnesses: Vec<(LatticeVec, Rat)> = Vec::new();
    for (i, d) in pair.boundary.iter().enumerate() {
        witnesses.push((fan.rays[i].clone(), -d.clone()));
    }
    let not_lc = pair.boundary.iter().any(|d| d > &Rat::one());
    let klt = pair.boundary.iter().all(|d| d < &Rat::one());
    // plt fails exactly when some cone contains two rays with d = 1: the
    // face they span contains primitive points with log discrepancy 0 that
    // are genuine exceptional valuations.
    let mut two_ones: Option<(usize, usize)> = None;
    for cone in &fan.max_cones {
        let ones: Vec<usize> = cone
            .iter()
            .copied()
            .filter(|&ri| pair.boundary[ri] == Rat::one())
            .collect();
        if ones.len() >= 2 {
            two_ones = Some((ones[0], ones[1]));
            break;
        }
    }
    let class = if not_lc {
        // Exhibit an interior witness when a cone has two rays at or above 1.
        SingClass::NotLc
    } else if klt {
        SingClass::Klt
    } else if two_ones.is_none() {
        SingClass::Plt
    } else {
        SingClass::Lc
    };
    if let Some((r0, r1)) = two_ones {
        if let Ok(w) = fan.rays[r0].add(&fan.rays[r1]).primitive() {
            if let Ok(a) = pair.discrepancy(&w) {
                witnesses.push((w, a));
            }
        }
    }
    let dlt = dlt_flag(pair, class);
    SingularityReport { class, dlt, witnesses }
}

/// dlt test: a smooth subdivision on which every inserted ray has log
/// discrepancy > 0 (discrepancy > -1) is a witness.  Smooth fans witness
/// themselves (torus-invariant boundaries are simple normal crossings).
/// The stellar-subdivision search is capped; beyond the cap the flag is
/// `None` (unknown).
fn dlt_flag(pair: &ToricPair, class: SingClass) -> Option<bool> {
    if class == SingClass::NotLc {
        return Some(false);
    }
    if pair.fan.smooth {
        return Some(true);
    }
    if search_dlt_resolution(&pair.fan, pair, DLT_DEPTH_CAP) {
        Some(true)
    } else {
        None
    }
}

fn search_dlt_resolution(fan: &Fan, pair: &ToricPair, depth: usize) -> bool {
    if fan.smooth {
        return true;
    }
    if depth == 0 {
        return false;
    }
    // First singular full-dimensional cone.
    let Some(ci) = (0..fan.max_cones.len()).find(|&ci| {
        let cone = &fan.max_cones[ci];
        cone.len() == fan.rank && {
            let rays: Vec<&LatticeVec> = cone.iter().map(|&i| &fan.rays[i]).collect();
            let d = crate::lattice::det_i64(&rays);
            d != BigInt::one() && d != -BigInt::one()
        }
    }) else {
        // Only lower-dimensional singular cones; out of scope for the search.
        return false;
    };
    for w in box_points(fan, ci) {
        // Only candidates with positive log discrepancy are admissible
        // exceptional rays on a dlt witness.
        let a_plus_one = pair.log_discrepancy(&w).unwrap_or_else(|_| Rat::zero());
        if !a_plus_one.is_positive() {
            continue;
        }
        if let Some(sub) = stellar_subdivide(fan, &w) {
            if search_dlt_resolution(&sub, pair, depth - 1) {
                return true;
            }
        }
    }
    false
}

/// Nonzero primitive lattice points in the half-open fundamental box
/// `{ sum lambda_i u_i : 0 <= lambda_i < 1 }` of a full-dimensional cone.
fn box_points(fan: &Fan, ci: usize) -> Vec<LatticeVec> {
    let cone = &fan.max_cones[ci];
    let rays: Vec<&LatticeVec> = cone.iter().map(|&i| &fan.rays[i]).collect();
    let n = fan.rank;
    // Bounding box of the parallelepiped corners.
    let mut lo = vec![0i64; n];
    let mut hi = vec![0i64; n];
    for mask in 0u32..(1 << rays.len()) {
        let mut corner = vec![0i64; n];
        for (k, r) in rays.iter().enumerate() {
            if mask & (1 << k) != 0 {
                for j in 0..n {
                    corner[j] += r.coords[j];
                }
            }
        }
        for j in 0..n {
            lo[j] = lo[j].min(corner[j]);
            hi[j] = hi[j].max(corner[j]);
        }
    }
    let mut out = Vec::new();
    let mut cur = lo.clone();
    'scan: loop {
        let v = LatticeVec::new(cur.clone());
        if !v.is_zero() && v.is_primitive() {
            if let Some(coords) = fan.cone_coordinates(ci, &v) {
                if coords.iter().all(|l| !l.is_negative() && *l < Rat::one())
                    && coords.iter().any(|l| l.is_positive())
                {
                    out.push(v);
                }
            }
        }
        for j in (0..n).rev() {
            if cur[j] < hi[j] {
                cur[j] += 1;
                for q in (j + 1)..n {
                    cur[q] = lo[q];
                }
                continue 'scan;
            }
        }
        break;
    }
    out
}

/// Stellar subdivision of the fan at the new ray `w`: every maximal cone
/// containing `w` is replaced by the cones spanned by `w` and its facets not
/// containing `w`.
pub fn stellar_subdivide(fan: &Fan, w: &LatticeVec) -> Option<Fan> {
    if fan.rays.contains(w) {
        return None;
    }
    let mut rays = fan.rays.clone();
    rays.push(w.clone());
    let wi = rays.len() - 1;
    let mut cones: Vec<Vec<usize>> = Vec::new();
    for ci in 0..fan.max_cones.len() {
        let cone = &fan.max_cones[ci];
        let inside = cone.len() == fan.rank
            && fan
                .cone_coordinates(ci, w)
                .map(|cs| cs.iter().all(|l| !l.is_negative()))
                .unwrap_or(false);
        if !inside {
            cones.push(cone.clone());
            continue;
        }
        let coords = fan.cone_coordinates(ci, w).unwrap();
        for (k, lam) in coords.iter().enumerate() {
            if lam.is_positive() {
                let mut nc: Vec<usize> =
                    cone.iter().enumerate().filter(|&(q, _)| q != k).map(|(_, &r)| r).collect();
                nc.push(wi);
                cones.push(nc);
            }
        }
    }
    Fan::new(fan.rank, rays, cones).ok()
}

/// Log canonical threshold result; `Infinite` is the documented sentinel for
/// `D = 0`.
#[derive(Debug, Clone, PartialEq)]
pub enum Lct {
    Finite(Rat),
    Infinite,
}

/// `lct(X, Delta; D) = sup { c : (X, Delta + cD) lc }`.
///
/// Per maximal cone the minimized quantity `logdisc(v) / ord_D(v)` is a
/// ratio of linear functionals of the ray coordinates, so the minimum over
/// the cone is attained at a ray generator; the per-cone exact
/// linear-fractional minimization therefore reduces to the ray minimum,
/// which is what is computed (and cross-checked against the LP oracle in
/// tests).
pub fn lct(pair: &ToricPair, d: &TorusDivisor) -> Result<Lct, PairError> {
    if classify(pair).class != SingClass::Klt {
        return Err(PairError::NotKlt);
    }
    if !d.is_effective() {
        return Err(PairError::NonEffective);
    }
    if d.is_zero() {
        return Ok(Lct::Infinite);
    }
    let mut best: Option<Rat> = None;
    for (i, a) in d.coeffs.iter().enumerate() {
        if a.is_positive() {
            let c = (Rat::one() - &pair.boundary[i]) / a;
            best = Some(match best {
                None => c,
                Some(b) => b.min(c),
            });
        }
    }
    Ok(match best {
        Some(c) => Lct::Finite(c),
        None => Lct::Infinite,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct NefThreshold {
    pub r: Rat,
    pub u: BigInt,
    pub v: BigInt,
}

/// The nef threshold `r = max { t : H + t(K + Delta) nef }`, as the minimum
/// of `H.C / (-(K + Delta).C)` over `(K + Delta)`-negative wall curves.  The
/// reduced denominator is checked against the bound `v <= a (dim X + 1)`;
/// a violation is a hard error because the bound is a theorem.
pub fn nef_threshold(
    pair: &ToricPair,
    h: &TorusDivisor,
    a: i64,
) -> Result<NefThreshold, PairError> {
    let fan = &pair.fan;
    if !fan.complete {
        return Err(FanError::NotComplete.into());
    }
    let kd = pair.k_plus_delta();
    if !kd.scale_i(a).is_integral() {
        return Err(PairError::NotIntegralMultiple);
    }
    if !is_nef(fan, h) || !is_big(fan, h) {
        return Err(PairError::HNotNefBig);
    }
    let mut best: Option<Rat> = None;
    for w in &fan.walls() {
        let kc = crate::divisor::intersection_number(fan, &kd, w);
        if kc.is_negative() {
            let hc = crate::divisor::intersection_number(fan, h, w);
            let ratio = hc / -kc;
            best = Some(match best {
                None => ratio,
                Some(b) => b.min(ratio),
            });
        }
    }
    let Some(r) = best else {
        return Err(PairError::AlreadyNef);
    };
    let (u, v) = (r.numer().clone(), r.denom().clone());
    let bound = BigInt::from(a) * BigInt::from(fan.rank as i64 + 1);
    if v > bound {
        return Err(PairError::BoundViolation { v, bound });
    }
    Ok(NefThreshold { r, u, v })
}

/// The arithmetic lemma's denominator bound `a(n+1)/eps`.
pub fn rationality_bound(a: i64, n: i64, eps: &Rat) -> Rat {
    assert!(eps.is_positive(), "epsilon must be positive");
    rat_i(a * (n + 1)) / eps
}

/// Rational or quadratic-irrational slope for the strip verifier.
#[derive(Debug, Clone, PartialEq)]
pub enum Slope {
    Rational(Rat),
    Quadratic(QuadReal),
}

#[derive(Debug, Clone, PartialEq)]
pub enum StripVerdict {
    /// A strip point where `P` does not vanish.
    NonVanishing { x: i64, y: i64 },
    /// The predicted linear factor `c x + d y` divides `P` with this
    /// multiplicity; `bound_ok` records the check `v <= a(n+1)/eps`.
    Factor { c: BigInt, d: BigInt, multiplicity: u32, bound_ok: bool },
    /// `P` vanishes on the strip (possibly vacuously) but carries no linear
    /// factor along the slope; nothing can be concluded.
    InsufficientEvidence,
}

/// Checks `P` against the strip `0 < a y - r x < eps` for lattice points with
/// `0 <= x, y <= n_bound`; when `P` vanishes on all of them attempts exact
/// extraction of the linear factor along the slope (for rational `r = u/v`
/// the line `a y = r x` is spanned by `(v a, u)`, so the factor is
/// `u x - v a y`).
pub fn strip_vanishing_verify(
    p: &BivarPoly,
    a: i64,
    r: &Slope,
    eps: &Rat,
    n_bound: i64,
    declared_deg: u32,
) -> Result<StripVerdict, PairError> {
    assert!(a > 0 && eps.is_positive());
    if p.degree() > declared_deg {
        return Err(PairError::DegreeMismatch { declared: declared_deg, actual: p.degree() });
    }
    for x in 0..=n_bound {
        for y in 0..=n_bound {
            let in_strip = match r {
                Slope::Rational(r) => {
                    let t = rat_i(a * y) - r * rat_i(x);
                    t.is_positive() && t < *eps
                }
                Slope::Quadratic(q) => {
                    let t = q.mul_rat(&-rat_i(x)).add_rat(&rat_i(a * y));
                    t.sign() > 0 && t.cmp_rat(eps) == std::cmp::Ordering::Less
                }
            };
            if in_strip && !p.eval_i(x, y).is_zero() {
                return Ok(StripVerdict::NonVanishing { x, y });
            }
        }
    }
    let Slope::Rational(r) = r else {
        // Irrational slope admits no rational linear factor along the line.
        return Ok(StripVerdict::InsufficientEvidence);
    };
    let (u, v) = (r.numer().clone(), r.denom().clone());
    let c = u;
    let d = -(&v * BigInt::from(a));
    let g = num::Integer::gcd(&c, &d);
    let (c, d) = if g.is_zero() { (c, d) } else { (&c / &g, &d / &g) };
    let (c, d) = (Rat::from_integer(c), Rat::from_integer(d));
    if c.is_zero() {
        return Ok(StripVerdict::InsufficientEvidence);
    }
    let (mult, _) = p.linear_multiplicity(&c, &d);
    if mult == 0 {
        return Ok(StripVerdict::InsufficientEvidence);
    }
    let bound = rationality_bound(a, p.degree() as i64, eps);
    let bound_ok = Rat::from_integer(v.clone()) <= bound;
    Ok(StripVerdict::Factor {
        c: c.to_integer(),
        d: d.to_integer(),
        multiplicity: mult,
        bound_ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use crate::fan::fixtures::*;

    #[test]
    fn canonical_divisors() {
        assert_eq!(canonical_divisor(&p2()).coeffs, vec![rat_i(-1); 3]);
        assert_eq!(canonical_divisor(&p1()).coeffs, vec![rat_i(-1); 2]);
        assert_eq!(canonical_divisor(&p1xp1()).coeffs, vec![rat_i(-1); 4]);
    }

    #[test]
    fn discrepancy_examples() {
        let a2 = a2();
        let trivial = ToricPair::trivial(a2.clone());
        assert_eq!(
            trivial.discrepancy(&LatticeVec::new(vec![1, 1])).unwrap(),
            rat_i(1)
        );
        let half = ToricPair::new(a2.clone(), vec![rat(1, 2), rat(1, 2)]).unwrap();
        assert_eq!(half.discrepancy(&LatticeVec::new(vec![1, 1])).unwrap(), rat_i(0));
        // At a fan ray the discrepancy is -d_i.
        assert_eq!(half.discrepancy(&LatticeVec::new(vec![1, 0])).unwrap(), rat(-1, 2));
        assert_eq!(
            trivial.discrepancy(&LatticeVec::new(vec![-1, -1])).unwrap_err(),
            PairError::OutsideSupport
        );
        assert_eq!(
            trivial.discrepancy(&LatticeVec::new(vec![2, 2])).unwrap_err(),
            PairError::NotPrimitive
        );
    }

    #[test]
    fn classify_examples() {
        let rep = classify(&ToricPair::trivial(p2()));
        assert_eq!(rep.class, SingClass::Klt);
        assert_eq!(rep.dlt, Some(true));

        let a2 = a2();
        let lc_pair = ToricPair::new(a2.clone(), vec![rat_i(1), rat_i(1)]).unwrap();
        let rep = classify(&lc_pair);
        assert_eq!(rep.class, SingClass::Lc);
        assert_eq!(rep.dlt, Some(true));
        // Witness (1,1) with discrepancy -1.
        assert!(rep
            .witnesses
            .iter()
            .any(|(w, a)| w.coords == vec![1, 1] && *a == rat_i(-1)));

        let bad = ToricPair::new(a2.clone(), vec![rat(3, 2), rat(3, 2)]).unwrap();
        let rep = classify(&bad);
        assert_eq!(rep.class, SingClass::NotLc);
        assert_eq!(rep.dlt, Some(false));

        // One coefficient 1: plt.
        let plt = ToricPair::new(a2, vec![rat_i(1), rat(1, 2)]).unwrap();
        assert_eq!(classify(&plt).class, SingClass::Plt);
    }

    #[test]
    fn classify_monotone_in_coefficients() {
        let a2 = a2();
        let order = |c: SingClass| match c {
            SingClass::Klt => 0,
            SingClass::Plt => 1,
            SingClass::Lc => 2,
            SingClass::NotLc => 3,
        };
        let grid = [rat_i(0), rat(1, 2), rat_i(1), rat(3, 2)];
        for d1 in &grid {
            for d2 in &grid {
                for bump in &grid {
                    if bump <= d1 {
                        continue;
                    }
                    let base =
                        classify(&ToricPair::new(a2.clone(), vec![d1.clone(), d2.clone()]).unwrap());
                    let worse =
                        classify(&ToricPair::new(a2.clone(), vec![bump.clone(), d2.clone()]).unwrap());
                    assert!(order(worse.class) >= order(base.class));
                }
            }
        }
    }

    #[test]
    fn lct_examples() {
        let a2 = a2();
        let trivial = ToricPair::trivial(a2.clone());
        let xy = TorusDivisor::from_ints(&a2, &[1, 1]).unwrap();
        assert_eq!(lct(&trivial, &xy).unwrap(), Lct::Finite(rat_i(1)));
        let x2y = TorusDivisor::from_ints(&a2, &[2, 1]).unwrap();
        assert_eq!(lct(&trivial, &x2y).unwrap(), Lct::Finite(rat(1, 2)));
        assert_eq!(lct(&trivial, &TorusDivisor::zero(&a2)).unwrap(), Lct::Infinite);
        // Scaling property: lct(kD) = lct(D)/k.
        let k3 = xy.scale_i(3);
        assert_eq!(lct(&trivial, &k3).unwrap(), Lct::Finite(rat(1, 3)));
        // Errors.
        let lc_pair = ToricPair::new(a2.clone(), vec![rat_i(1), rat_i(1)]).unwrap();
        assert_eq!(lct(&lc_pair, &xy).unwrap_err(), PairError::NotKlt);
        let neg = TorusDivisor::from_ints(&a2, &[-1, 0]).unwrap();
        assert_eq!(lct(&trivial, &neg).unwrap_err(), PairError::NonEffective);
    }

    #[test]
    fn nef_threshold_examples() {
        let p2 = p2();
        let pair = ToricPair::trivial(p2.clone());
        let line = TorusDivisor::from_ints(&p2, &[0, 0, 1]).unwrap();
        let t = nef_threshold(&pair, &line, 1).unwrap();
        assert_eq!(t.r, rat(1, 3));
        assert_eq!(t.u, BigInt::from(1));
        assert_eq!(t.v, BigInt::from(3)); // attains v = a(dim+1)
        // H + r(K+Delta) is nef; a slightly larger multiple is not.
        let kd = pair.k_plus_delta();
        assert!(is_nef(&p2, &line.add(&kd.scale(&t.r))));
        assert!(!is_nef(&p2, &line.add(&kd.scale(&(t.r.clone() + rat(1, 3))))));

        let q = p1xp1();
        let pairq = ToricPair::trivial(q.clone());
        let h = TorusDivisor::from_ints(&q, &[1, 0, 1, 0]).unwrap();
        assert_eq!(nef_threshold(&pairq, &h, 1).unwrap().r, rat(1, 2));

        // K + Delta nef: boundary = sum of all rays makes K + Delta = 0.
        let calabi = ToricPair::new(p2.clone(), vec![rat_i(1); 3]).unwrap();
        assert_eq!(
            nef_threshold(&calabi, &line, 1).unwrap_err(),
            PairError::AlreadyNef
        );
    }

    #[test]
    fn rationality_bound_examples() {
        assert_eq!(rationality_bound(1, 2, &rat_i(1)), rat_i(3));
        assert_eq!(rationality_bound(2, 3, &rat(1, 2)), rat_i(16));
        assert_eq!(rationality_bound(1, 1, &rat_i(1)), rat_i(2));
    }

    #[test]
    fn strip_examples() {
        // P = (x - y)(x + y + 1), a = 1, r = 1, eps = 1/2, N = 50.
        let l = BivarPoly::linear(rat_i(1), rat_i(-1));
        let mut f = BivarPoly::linear(rat_i(1), rat_i(1));
        f.set(0, 0, rat_i(1));
        let p = l.mul(&f);
        let v = strip_vanishing_verify(&p, 1, &Slope::Rational(rat_i(1)), &rat(1, 2), 50, 2)
            .unwrap();
        assert_eq!(
            v,
            StripVerdict::Factor {
                c: BigInt::from(1),
                d: BigInt::from(-1),
                multiplicity: 1,
                bound_ok: true
            }
        );

        // Constant polynomial: vanishes vacuously, no factor.
        let one = BivarPoly::constant(rat_i(1));
        let v = strip_vanishing_verify(&one, 1, &Slope::Rational(rat_i(1)), &rat(1, 2), 50, 2)
            .unwrap();
        assert_eq!(v, StripVerdict::InsufficientEvidence);

        // P = (2x - 3y)^2, a = 1, r = 2/3, eps = 1/4, N = 60.
        let l = BivarPoly::linear(rat_i(2), rat_i(-3));
        let p = l.mul(&l);
        let v = strip_vanishing_verify(&p, 1, &Slope::Rational(rat(2, 3)), &rat(1, 4), 60, 2)
            .unwrap();
        assert_eq!(
            v,
            StripVerdict::Factor {
                c: BigInt::from(2),
                d: BigInt::from(-3),
                multiplicity: 2,
                bound_ok: true
            }
        );

        // A polynomial that fails to vanish on a nonempty strip.
        let p = BivarPoly::constant(rat_i(5));
        let v = strip_vanishing_verify(&p, 1, &Slope::Rational(rat(1, 2)), &rat(3, 4), 10, 2)
            .unwrap();
        assert!(matches!(v, StripVerdict::NonVanishing { .. }));

        // Degree mismatch is an input error.
        let l = BivarPoly::linear(rat_i(1), rat_i(-1));
        let p = l.mul(&l).mul(&l);
        assert!(matches!(
            strip_vanishing_verify(&p, 1, &Slope::Rational(rat_i(1)), &rat(1, 2), 10, 2),
            Err(PairError::DegreeMismatch { .. })
        ));
    }
}
