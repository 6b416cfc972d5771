//! The minimal model program on toric pairs: wall curve classes and extremal
//! rays, contraction classification and fan surgery, flips by circuit
//! re-triangulation, and the budgeted MMP driver (plain and with scaling).

use crate::divisor::{intersection_number, is_nef, TorusDivisor};
use crate::exact::{rat_i, Rat};
use crate::fan::{Fan, FanError, Wall};
use crate::lattice::LatticeVec;
use crate::lp::{lp_feasible, Constraint};
use crate::pairs::{classify, PairError, SingClass, ToricPair};
use num::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Clone)]
pub enum MmpError {
    #[error(transparent)]
    Fan(#[from] FanError),
    #[error(transparent)]
    Pair(#[from] PairError),
    #[error("wall class is not extremal")]
    NotExtremal,
    #[error("wall class is not (K+Delta)-negative")]
    NotNegative,
    #[error("contraction step is not of flipping type")]
    NotFlipping,
    #[error("flip verification failed: {0} (implementation bug)")]
    FlipVerificationFailed(String),
    #[error("MMP requires an lc pair")]
    NotLc,
    #[error("scaling mode requires K+Delta+A nef")]
    ScalingNotNef,
    #[error("divisorial surgery produced an invalid fan: {0}")]
    SurgeryFailed(FanError),
}

/// A wall curve class: the wall plus its pairing vector `(D_i . C)_i`
/// against the prime divisors, which is a complete numerical invariant.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveClass {
    pub wall: Wall,
    pub pairing: Vec<Rat>,
}

impl CurveClass {
    pub fn degree_against(&self, d: &TorusDivisor) -> Rat {
        d.coeffs.iter().zip(&self.pairing).map(|(a, z)| a * z).sum()
    }

    /// `self = t * other` for some `t > 0`?
    pub fn proportional(&self, other: &CurveClass) -> bool {
        let (a, b) = (&self.pairing, &other.pairing);
        let Some(k) = a.iter().position(|x| !x.is_zero()) else {
            return b.iter().all(|x| x.is_zero());
        };
        if b[k].is_zero() {
            return false;
        }
        let t = &a[k] / &b[k];
        if !t.is_positive() {
            return false;
        }
        a.iter().zip(b).all(|(x, y)| *x == y * &t)
    }
}

/// An extremal candidate offered to the MMP driver.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtremalRay {
    pub class: CurveClass,
    /// `(K + Delta) . C`.
    pub kd_degree: Rat,
    /// Indices (into `fan.walls()`) of all walls with a proportional class —
    /// the extremality certificate's support.
    pub proportional_walls: Vec<usize>,
}

/// Generators of the Mori cone: wall classes deduplicated up to positive
/// proportionality, pruned to the extremal ones (a class expressible as a
/// nonnegative combination of the others spans no extremal ray).
pub fn mori_cone_generators(pair: &ToricPair) -> Vec<ExtremalRay> {
    let fan = &pair.fan;
    let kd = pair.k_plus_delta();
    let walls = fan.walls();
    let classes: Vec<CurveClass> = walls
        .iter()
        .map(|w| {
            let pairing: Vec<Rat> = (0..fan.rays.len())
                .map(|i| {
                    let mut coeffs = vec![Rat::zero(); fan.rays.len()];
                    coeffs[i] = Rat::one();
                    intersection_number(fan, &TorusDivisor { coeffs }, w)
                })
                .collect();
            CurveClass { wall: w.clone(), pairing }
        })
        .collect();
    // Deduplicate up to positive proportionality, keeping the lex-least wall
    // as representative.
    let mut reps: Vec<(CurveClass, Vec<usize>)> = Vec::new();
    for (wi, c) in classes.iter().enumerate() {
        if let Some((_, support)) = reps.iter_mut().find(|(r, _)| r.proportional(c)) {
            support.push(wi);
        } else {
            reps.push((c.clone(), vec![wi]));
        }
    }
    // Extremality: representative not a nonnegative combination of the rest.
    let mut out = Vec::new();
    for (i, (c, support)) in reps.iter().enumerate() {
        let others: Vec<&CurveClass> = reps
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, (r, _))| r)
            .collect();
        if is_nonneg_combination(c, &others) {
            continue;
        }
        out.push(ExtremalRay {
            class: c.clone(),
            kd_degree: c.degree_against(&kd),
            proportional_walls: support.clone(),
        });
    }
    out
}

/// Exact LP feasibility: `target = sum lambda_j others_j` with `lambda >= 0`.
fn is_nonneg_combination(target: &CurveClass, others: &[&CurveClass]) -> bool {
    if others.is_empty() {
        return false;
    }
    let m = target.pairing.len();
    let k = others.len();
    let mut cs: Vec<Constraint> = Vec::new();
    for row in 0..m {
        let normal: Vec<Rat> = others.iter().map(|o| o.pairing[row].clone()).collect();
        let rhs = target.pairing[row].clone();
        cs.push(Constraint::new(normal.clone(), rhs.clone()));
        cs.push(Constraint::new(normal.iter().map(|x| -x).collect(), -rhs));
    }
    for j in 0..k {
        let mut normal = vec![Rat::zero(); k];
        normal[j] = Rat::one();
        cs.push(Constraint::new(normal, Rat::zero()));
    }
    lp_feasible(&cs, k).is_some()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepKind {
    Divisorial,
    Flipping,
    Fibration,
}

impl StepKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            StepKind::Divisorial => "divisorial",
            StepKind::Flipping => "flipping",
            StepKind::Fibration => "fibration",
        }
    }
}

/// Result of contracting an extremal ray.
#[derive(Debug, Clone, PartialEq)]
pub struct ContractionStep {
    pub kind: StepKind,
    pub ray: ExtremalRay,
    /// Divisorial only: the removed ray index (in the source fan).
    pub removed_ray: Option<usize>,
    /// Divisorial only: the target pair.
    pub target: Option<ToricPair>,
    /// Fibration only: the quotient fan of the base (empty fan for a point).
    pub base: Option<Fan>,
}

/// Classifies and constructs the contraction of a `(K+Delta)`-negative
/// extremal ray.  The trichotomy reads off the sign pattern of the circuit:
/// no negative coefficient gives a Mori fibration, exactly one gives a
/// divisorial contraction (the negative ray is removed), two or more give a
/// flipping (small) contraction.
pub fn contract(pair: &ToricPair, ray: &ExtremalRay) -> Result<ContractionStep, MmpError> {
    if !ray.kd_degree.is_negative() {
        return Err(MmpError::NotNegative);
    }
    // Extremality re-certification against the current fan.
    let gens = mori_cone_generators(pair);
    if !gens.iter().any(|g| g.class.proportional(&ray.class)) {
        return Err(MmpError::NotExtremal);
    }
    let negatives: Vec<usize> = ray
        .class
        .wall
        .circuit
        .iter()
        .filter(|(_, c)| c.is_negative())
        .map(|(i, _)| *i)
        .collect();
    match negatives.len() {
        0 => {
            let base = fibration_base(pair, ray)?;
            Ok(ContractionStep {
                kind: StepKind::Fibration,
                ray: ray.clone(),
                removed_ray: None,
                target: None,
                base: Some(base),
            })
        }
        1 => {
            let removed = negatives[0];
            // Proof obligation of the divisorial case: E . C < 0 for the
            // contracted divisor E.
            if !ray.class.pairing[removed].is_negative() {
                return Err(MmpError::FlipVerificationFailed(
                    "divisorial contraction with E.C >= 0".into(),
                ));
            }
            let target = divisorial_target(pair, ray, removed)?;
            Ok(ContractionStep {
                kind: StepKind::Divisorial,
                ray: ray.clone(),
                removed_ray: Some(removed),
                target: Some(target),
                base: None,
            })
        }
        _ => Ok(ContractionStep {
            kind: StepKind::Flipping,
            ray: ray.clone(),
            removed_ray: None,
            target: None,
            base: None,
        }),
    }
}

/// Fan surgery for a divisorial contraction: drop the ray, merge each pair
/// of cones across the contracted walls, and re-validate.
fn divisorial_target(
    pair: &ToricPair,
    ray: &ExtremalRay,
    removed: usize,
) -> Result<ToricPair, MmpError> {
    let fan = &pair.fan;
    let walls = fan.walls();
    // Cones adjacent to a contracted wall merge into their union minus the
    // removed ray; other cones survive unchanged (minus reindexing).
    let mut merged: Vec<Vec<usize>> = Vec::new();
    let mut absorbed: Vec<bool> = vec![false; fan.max_cones.len()];
    for &wi in &ray.proportional_walls {
        let w = &walls[wi];
        let (c0, c1) = w.cones;
        if absorbed[c0] || absorbed[c1] {
            continue;
        }
        let mut union: Vec<usize> = fan.max_cones[c0].clone();
        for &r in &fan.max_cones[c1] {
            if !union.contains(&r) {
                union.push(r);
            }
        }
        union.retain(|&r| r != removed);
        merged.push(union);
        absorbed[c0] = true;
        absorbed[c1] = true;
    }
    for (ci, cone) in fan.max_cones.iter().enumerate() {
        if !absorbed[ci] {
            if cone.contains(&removed) {
                return Err(MmpError::FlipVerificationFailed(
                    "removed ray survives outside contracted walls".into(),
                ));
            }
            merged.push(cone.clone());
        }
    }
    // Reindex rays.
    let mut new_rays = Vec::new();
    let mut new_boundary = Vec::new();
    let mut map = vec![usize::MAX; fan.rays.len()];
    for i in 0..fan.rays.len() {
        if i != removed {
            map[i] = new_rays.len();
            new_rays.push(fan.rays[i].clone());
            new_boundary.push(pair.boundary[i].clone());
        }
    }
    let cones: Vec<Vec<usize>> =
        merged.into_iter().map(|c| c.into_iter().map(|r| map[r]).collect()).collect();
    let new_fan = Fan::new(fan.rank, new_rays, cones).map_err(MmpError::SurgeryFailed)?;
    Ok(ToricPair { fan: new_fan, boundary: new_boundary })
}

/// Base of a Mori fibration: the quotient of the lattice by the span of the
/// circuit's support, with the images of the remaining rays.
fn fibration_base(pair: &ToricPair, ray: &ExtremalRay) -> Result<Fan, MmpError> {
    let fan = &pair.fan;
    let span_rays: Vec<usize> = ray
        .class
        .wall
        .circuit
        .iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, _)| *i)
        .collect();
    // Integer functionals vanishing on the span: rows of the projection.
    let rows: Vec<Vec<Rat>> = span_rays.iter().map(|&i| fan.rays[i].to_rat()).collect();
    let mut projection: Vec<LatticeVec> = Vec::new();
    let mut basis_rows = rows.clone();
    // Repeatedly extract kernel functionals, adding each to the row space to
    // find the next independent one.
    loop {
        let Some(phi) = kernel_functional(&basis_rows, fan.rank) else {
            break;
        };
        basis_rows.push(phi.to_rat());
        projection.push(phi);
    }
    let base_rank = projection.len();
    if base_rank == 0 {
        // Fibration to a point.
        return Fan::new(0, Vec::new(), vec![Vec::new()]).map_err(MmpError::SurgeryFailed);
    }
    // Images of the non-span rays, primitivized; cones from max cones.
    let mut img_rays: Vec<LatticeVec> = Vec::new();
    let mut ray_map: Vec<Option<usize>> = vec![None; fan.rays.len()];
    for i in 0..fan.rays.len() {
        if span_rays.contains(&i) {
            continue;
        }
        let img = LatticeVec::new(projection.iter().map(|phi| phi.dot(&fan.rays[i])).collect());
        if img.is_zero() {
            continue;
        }
        let img = img.primitive().expect("nonzero image");
        let pos = img_rays.iter().position(|r| *r == img).unwrap_or_else(|| {
            img_rays.push(img.clone());
            img_rays.len() - 1
        });
        ray_map[i] = Some(pos);
    }
    let mut cones: Vec<Vec<usize>> = Vec::new();
    for cone in &fan.max_cones {
        let mut img: Vec<usize> = cone.iter().filter_map(|&r| ray_map[r]).collect();
        img.sort_unstable();
        img.dedup();
        if !img.is_empty() && !cones.contains(&img) {
            cones.push(img);
        }
    }
    Fan::new(base_rank, img_rays, cones).map_err(MmpError::SurgeryFailed)
}

fn kernel_functional(rows: &[Vec<Rat>], n: usize) -> Option<LatticeVec> {
    use num::bigint::BigInt;
    use num::Integer;
    let v = rational_kernel(rows, n)?;
    let lcm = v.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    let ints: Vec<i64> = v
        .iter()
        .map(|x| i64::try_from(&(x.numer() * (&lcm / x.denom()))).expect("functional size"))
        .collect();
    LatticeVec::new(ints).primitive().ok()
}

fn rational_kernel(rows: &[Vec<Rat>], n: usize) -> Option<Vec<Rat>> {
    let mut a: Vec<Vec<Rat>> = rows.to_vec();
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0usize;
    for col in 0..n {
        if r == a.len() {
            break;
        }
        let Some(piv) = (r..a.len()).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(r, piv);
        let p = a[r][col].clone();
        for j in col..n {
            a[r][j] = &a[r][j] / &p;
        }
        for i in 0..a.len() {
            if i != r && !a[i][col].is_zero() {
                let f = a[i][col].clone();
                for j in col..n {
                    a[i][j] = &a[i][j] - &f * &a[r][j];
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    let free = (0..n).find(|c| !pivots.contains(c))?;
    let mut v = vec![Rat::zero(); n];
    v[free] = Rat::one();
    for (row, &pc) in pivots.iter().enumerate() {
        v[pc] = -a[row][free].clone();
    }
    Some(v)
}

/// Verification artifacts of a completed flip.
#[derive(Debug, Clone, PartialEq)]
pub struct FlipReport {
    /// 1+: small (ray sets identical).
    pub small: bool,
    /// 2+: `(K+Delta)` positive on the flipped wall curves.
    pub kd_positive_after: bool,
    /// 3+: relative Picard rank one (one-dimensional circuit space).
    pub relative_picard_one: bool,
    /// Number of sampled valuations checked for discrepancy monotonicity.
    pub sampled_valuations: usize,
    /// Of those, how many were interior (strict inequality enforced).
    pub strict_samples: usize,
}

/// The flip of a flipping contraction: re-triangulates the circuit to the
/// opposite side (cones omitting a negative ray replace cones omitting a
/// positive ray) and verifies conditions 1+, 2+, 3+ together with
/// discrepancy monotonicity on sampled toric valuations.
pub fn flip(pair: &ToricPair, step: &ContractionStep) -> Result<(ToricPair, FlipReport), MmpError> {
    if step.kind != StepKind::Flipping {
        return Err(MmpError::NotFlipping);
    }
    let fan = &pair.fan;
    let circuit = &step.ray.class.wall.circuit;
    let support: Vec<usize> = circuit.iter().map(|(i, _)| *i).collect();
    let positives: Vec<usize> =
        circuit.iter().filter(|(_, c)| c.is_positive()).map(|(i, _)| *i).collect();
    let negatives: Vec<usize> =
        circuit.iter().filter(|(_, c)| c.is_negative()).map(|(i, _)| *i).collect();
    // Current triangulation of the circuit: the cones omitting one positive
    // ray each; they must all be present.
    let mut old_cones: Vec<Vec<usize>> = Vec::new();
    for &p in &positives {
        let mut c: Vec<usize> = support.iter().copied().filter(|&r| r != p).collect();
        c.sort_unstable();
        let pos = fan
            .max_cones
            .iter()
            .position(|mc| {
                let mut m = mc.clone();
                m.sort_unstable();
                m == c
            })
            .ok_or_else(|| {
                MmpError::FlipVerificationFailed("circuit triangulation not found in fan".into())
            })?;
        old_cones.push(fan.max_cones[pos].clone());
    }
    let mut new_max: Vec<Vec<usize>> = fan
        .max_cones
        .iter()
        .filter(|mc| {
            let mut m = (*mc).clone();
            m.sort_unstable();
            !old_cones.iter().any(|oc| {
                let mut o = oc.clone();
                o.sort_unstable();
                o == m
            })
        })
        .cloned()
        .collect();
    for &s in &negatives {
        let mut c: Vec<usize> = support.iter().copied().filter(|&r| r != s).collect();
        c.sort_unstable();
        new_max.push(c);
    }
    let new_fan =
        Fan::new(fan.rank, fan.rays.clone(), new_max).map_err(MmpError::SurgeryFailed)?;
    let new_pair = ToricPair { fan: new_fan, boundary: pair.boundary.clone() };

    // 1+: small.
    let small = new_pair.fan.rays == fan.rays;
    // 3+: one-dimensional circuit space over the support.
    let mat: Vec<Vec<Rat>> = (0..fan.rank)
        .map(|row| {
            support
                .iter()
                .map(|&i| Rat::from_integer(fan.rays[i].coords[row].into()))
                .collect()
        })
        .collect();
    let relative_picard_one = crate::lattice::rank(&mat) == support.len() - 1;
    // 2+: K+Delta positive on the new wall curves among the flipped cones.
    let kd = new_pair.k_plus_delta();
    let kd_positive_after = new_pair
        .fan
        .walls()
        .iter()
        .filter(|w| {
            // Walls internal to the flipped circuit: all rays in the support.
            w.rays.iter().all(|r| support.contains(r))
                && support.contains(&w.opposite.0)
                && support.contains(&w.opposite.1)
        })
        .all(|w| intersection_number(&new_pair.fan, &kd, w).is_positive());

    // Discrepancy monotonicity on sampled primitive valuations in the
    // circuit's support cone, strict in the relative interior.
    let samples = sample_valuations(fan, &support, 120);
    let mut strict_samples = 0usize;
    for v in &samples {
        let before = pair.discrepancy(v).map_err(MmpError::Pair)?;
        let after = new_pair.discrepancy(v).map_err(MmpError::Pair)?;
        if after < before {
            return Err(MmpError::FlipVerificationFailed(format!(
                "discrepancy dropped at {:?}",
                v.coords
            )));
        }
        if in_relative_interior(fan, &support, v) {
            strict_samples += 1;
            if after == before {
                return Err(MmpError::FlipVerificationFailed(format!(
                    "discrepancy not strictly increased at interior valuation {:?}",
                    v.coords
                )));
            }
        }
    }
    let report = FlipReport {
        small,
        kd_positive_after,
        relative_picard_one,
        sampled_valuations: samples.len(),
        strict_samples,
    };
    if !(report.small && report.kd_positive_after && report.relative_picard_one) {
        return Err(MmpError::FlipVerificationFailed(format!("{report:?}")));
    }
    Ok((new_pair, report))
}

/// Distinct primitive lattice points in the cone spanned by the support rays.
fn sample_valuations(fan: &Fan, support: &[usize], want: usize) -> Vec<LatticeVec> {
    let rays: Vec<&LatticeVec> = support.iter().map(|&i| &fan.rays[i]).collect();
    let mut out: Vec<LatticeVec> = Vec::new();
    let mut bound = 1i64;
    while out.len() < want && bound <= 8 {
        out.clear();
        let k = rays.len();
        let mut coeffs = vec![0i64; k];
        'outer: loop {
            let mut v = LatticeVec::new(vec![0; fan.rank]);
            for (c, r) in coeffs.iter().zip(&rays) {
                v = v.add(&r.scale(*c));
            }
            if !v.is_zero() {
                if let Ok(p) = v.primitive() {
                    if !out.contains(&p) {
                        out.push(p);
                    }
                }
            }
            for j in (0..k).rev() {
                if coeffs[j] < bound {
                    coeffs[j] += 1;
                    for q in (j + 1)..k {
                        coeffs[q] = 0;
                    }
                    continue 'outer;
                }
            }
            break;
        }
        bound += 1;
    }
    out
}

/// Is `v` in the relative interior of the cone spanned by the support rays?
/// (Expressible with all coefficients strictly positive.)
fn in_relative_interior(fan: &Fan, support: &[usize], v: &LatticeVec) -> bool {
    let k = support.len();
    // mu_j >= 1 and sum mu_j u_j = t v with t >= 1 (scale invariance).
    let mut cs: Vec<Constraint> = Vec::new();
    for row in 0..fan.rank {
        let mut normal: Vec<Rat> =
            support.iter().map(|&i| rat_i(fan.rays[i].coords[row])).collect();
        normal.push(-rat_i(v.coords[row]));
        cs.push(Constraint::new(normal.clone(), Rat::zero()));
        cs.push(Constraint::new(normal.iter().map(|x| -x).collect(), Rat::zero()));
    }
    for j in 0..=k {
        let mut normal = vec![Rat::zero(); k + 1];
        normal[j] = Rat::one();
        cs.push(Constraint::new(normal, Rat::one()));
    }
    lp_feasible(&cs, k + 1).is_some()
}

#[derive(Debug, Clone, PartialEq)]
pub enum MmpMode {
    Plain,
    Scaling(TorusDivisor),
}

#[derive(Debug, Clone, PartialEq)]
pub enum MmpOutcome {
    MinimalModel,
    MoriFibreSpace,
    BudgetExceeded,
}

impl MmpOutcome {
    pub fn as_str(&self) -> &'static str {
        match self {
            MmpOutcome::MinimalModel => "minimal-model",
            MmpOutcome::MoriFibreSpace => "mori-fibre-space",
            MmpOutcome::BudgetExceeded => "budget-exceeded",
        }
    }
}

#[derive(Debug, Clone)]
pub struct MmpStep {
    pub kind: StepKind,
    /// Sorted ray indices of the chosen representative wall (in the fan of
    /// that step).
    pub wall_rays: Vec<usize>,
    pub kd_degree: Rat,
    pub lambda: Option<Rat>,
    pub picard_before: usize,
    pub picard_after: usize,
}

#[derive(Debug, Clone)]
pub struct MmpTrace {
    pub steps: Vec<MmpStep>,
    pub outcome: MmpOutcome,
    pub final_pair: ToricPair,
    /// Fibration base when the run ends in a Mori fibre space.
    pub base: Option<Fan>,
}

/// The MMP driver.  Plain mode picks the lex-least `(K+Delta)`-negative
/// extremal ray; scaling mode picks a ray that is trivial against
/// `K+Delta+lambda A` for the minimal nef-making `lambda`.  Execution is
/// budgeted; exhausting the budget is surfaced in the outcome, never silent.
pub fn run_mmp(pair: &ToricPair, mode: &MmpMode, budget: usize) -> Result<MmpTrace, MmpError> {
    let report = classify(pair);
    if report.class == SingClass::NotLc {
        return Err(MmpError::NotLc);
    }
    if let MmpMode::Scaling(a) = mode {
        if !is_nef(&pair.fan, &pair.k_plus_delta().add(a)) {
            return Err(MmpError::ScalingNotNef);
        }
    }
    let mut current = pair.clone();
    let mut scale = match mode {
        MmpMode::Plain => None,
        MmpMode::Scaling(a) => Some(a.clone()),
    };
    let mut steps: Vec<MmpStep> = Vec::new();
    let mut last_lambda: Option<Rat> = None;
    for _ in 0..budget {
        let kd = current.k_plus_delta();
        if is_nef(&current.fan, &kd) {
            return Ok(MmpTrace {
                steps,
                outcome: MmpOutcome::MinimalModel,
                final_pair: current,
                base: None,
            });
        }
        let gens = mori_cone_generators(&current);
        let mut negatives: Vec<&ExtremalRay> =
            gens.iter().filter(|g| g.kd_degree.is_negative()).collect();
        negatives.sort_by_key(|g| g.class.wall.rays.clone());
        assert!(!negatives.is_empty(), "K+Delta not nef must expose a negative wall");
        let (chosen, lambda) = match &scale {
            None => (negatives[0], None),
            Some(a) => {
                // lambda = max over negative walls of (-(K+D).C)/(A.C).
                let mut lam = Rat::zero();
                for g in &negatives {
                    let ac = g.class.degree_against(a);
                    assert!(
                        ac.is_positive(),
                        "K+Delta+A nef forces A positive on negative walls"
                    );
                    let cand = -&g.kd_degree / ac;
                    if cand > lam {
                        lam = cand;
                    }
                }
                let trivial = negatives
                    .iter()
                    .find(|g| {
                        &g.kd_degree + g.class.degree_against(a) * &lam == Rat::zero()
                    })
                    .expect("a lambda-trivial negative ray exists");
                if let Some(prev) = &last_lambda {
                    assert!(lam <= *prev, "lambda must be nonincreasing");
                }
                last_lambda = Some(lam.clone());
                (*trivial, Some(lam))
            }
        };
        let picard_before = current.fan.picard_rank();
        let step = contract(&current, chosen)?;
        match step.kind {
            StepKind::Fibration => {
                steps.push(MmpStep {
                    kind: StepKind::Fibration,
                    wall_rays: chosen.class.wall.rays.clone(),
                    kd_degree: chosen.kd_degree.clone(),
                    lambda,
                    picard_before,
                    picard_after: picard_before,
                });
                return Ok(MmpTrace {
                    steps,
                    outcome: MmpOutcome::MoriFibreSpace,
                    final_pair: current,
                    base: step.base,
                });
            }
            StepKind::Divisorial => {
                let target = step.target.expect("divisorial step has a target");
                let picard_after = target.fan.picard_rank();
                assert_eq!(
                    picard_after + 1,
                    picard_before,
                    "divisorial step drops the Picard number by one"
                );
                steps.push(MmpStep {
                    kind: StepKind::Divisorial,
                    wall_rays: chosen.class.wall.rays.clone(),
                    kd_degree: chosen.kd_degree.clone(),
                    lambda,
                    picard_before,
                    picard_after,
                });
                // The scaling divisor descends by dropping the removed ray.
                if let (Some(a), Some(removed)) = (&scale, step.removed_ray) {
                    let mut coeffs = a.coeffs.clone();
                    coeffs.remove(removed);
                    scale = Some(TorusDivisor { coeffs });
                }
                current = target;
            }
            StepKind::Flipping => {
                let (flipped, _report) = flip(&current, &step)?;
                let picard_after = flipped.fan.picard_rank();
                assert_eq!(picard_after, picard_before, "flips preserve the Picard number");
                steps.push(MmpStep {
                    kind: StepKind::Flipping,
                    wall_rays: chosen.class.wall.rays.clone(),
                    kd_degree: chosen.kd_degree.clone(),
                    lambda,
                    picard_before,
                    picard_after,
                });
                current = flipped;
            }
        }
    }
    Ok(MmpTrace {
        steps,
        outcome: MmpOutcome::BudgetExceeded,
        final_pair: current,
        base: None,
    })
}
