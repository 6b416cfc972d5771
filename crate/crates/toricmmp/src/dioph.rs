//! Simultaneous approximation of real quadratic divisor coefficients with
//! exact certificates: for D = sum d_k P_k with some d_k irrational, find j
//! and a nonnegative integer vector m with ||E(j d - m)||_inf < eps and
//! E(j d - m) not effective, verified entirely in exact arithmetic.

use crate::exact::{convergent_denominators, QuadReal, Rat};
use num::bigint::BigInt;
use num::{Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Clone)]
pub enum ApproxError {
    #[error("epsilon must be positive")]
    NonPositiveEps,
    #[error("matrix entry at ({0}, {1}) is negative")]
    NegativeMatrixEntry(usize, usize),
    #[error("column {0} of E is zero")]
    ZeroColumn(usize),
    #[error("matrix row {0} has wrong length")]
    RaggedMatrix(usize),
    #[error("all coefficients are rational; the instance requires at least one irrational")]
    AllRational,
    #[error("coefficient count does not match the matrix")]
    DimensionMismatch,
}

/// D = sum d_k P_k with P_k expressed in the reduced basis {G_i} by the
/// nonnegative integer matrix E (g rows, l columns).
#[derive(Debug, Clone, PartialEq)]
pub struct ApproxInstance {
    pub e: Vec<Vec<i64>>,
    pub d: Vec<QuadReal>,
    pub eps: Rat,
}

impl ApproxInstance {
    pub fn new(e: Vec<Vec<i64>>, d: Vec<QuadReal>, eps: Rat) -> Result<Self, ApproxError> {
        if !eps.is_positive() {
            return Err(ApproxError::NonPositiveEps);
        }
        let l = d.len();
        for (i, row) in e.iter().enumerate() {
            if row.len() != l {
                return Err(ApproxError::RaggedMatrix(i));
            }
            for (j, &x) in row.iter().enumerate() {
                if x < 0 {
                    return Err(ApproxError::NegativeMatrixEntry(i, j));
                }
            }
        }
        if l == 0 || e.is_empty() {
            return Err(ApproxError::DimensionMismatch);
        }
        for k in 0..l {
            if e.iter().all(|row| row[k] == 0) {
                return Err(ApproxError::ZeroColumn(k));
            }
        }
        if d.iter().all(|x| x.is_rational()) {
            return Err(ApproxError::AllRational);
        }
        Ok(ApproxInstance { e, d, eps })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ApproxCertificate {
    pub j: u64,
    pub m: Vec<BigInt>,
    /// The residual `E (j d - m)` in the G basis.
    pub residual: Vec<QuadReal>,
    /// Index of a strictly negative residual coordinate.
    pub negative_index: usize,
    /// Whether the witness `j` came from the continued-fraction phase
    /// (before the exhaustive fallback).
    pub via_convergent: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ApproxOutcome {
    Certificate(ApproxCertificate),
    /// Search-budget outcome, never a disproof.
    NotFoundUpTo(u64),
}

/// Searches for an approximation certificate with the lowest `j <= cap`.
/// Continued-fraction convergent denominators of the irrational coordinates
/// are tried first; once one succeeds, the (cheap) exhaustive sweep below it
/// confirms minimality.
pub fn approximate(inst: &ApproxInstance, cap: u64) -> ApproxOutcome {
    let mut convergents: Vec<u64> = Vec::new();
    for d in &inst.d {
        if !d.is_rational() {
            for q in convergent_denominators(d, cap, 64) {
                if let Ok(q) = u64::try_from(&q) {
                    if q >= 1 && q <= cap && !convergents.contains(&q) {
                        convergents.push(q);
                    }
                }
            }
        }
    }
    convergents.sort_unstable();
    let mut best: Option<(u64, ApproxCertificate)> = None;
    for &j in &convergents {
        if let Some(cert) = try_j(inst, j, true) {
            best = Some((j, cert));
            break;
        }
    }
    let sweep_top = best.as_ref().map_or(cap, |(j, _)| j - 1);
    for j in 1..=sweep_top {
        if convergents.contains(&j) {
            continue;
        }
        if let Some(cert) = try_j(inst, j, false) {
            best = Some((j, cert));
            break;
        }
    }
    match best {
        Some((_, cert)) => ApproxOutcome::Certificate(cert),
        None => ApproxOutcome::NotFoundUpTo(cap),
    }
}

/// Tests candidate multiplier `j`: each coordinate of `m` ranges over the
/// nearest nonnegative integer to `j d_k` and its +-1 neighbours, nearest
/// first; the first vector meeting both certificate conditions wins.
fn try_j(inst: &ApproxInstance, j: u64, via_convergent: bool) -> Option<ApproxCertificate> {
    let l = inst.d.len();
    let jd: Vec<QuadReal> = inst
        .d
        .iter()
        .map(|d| d.mul_rat(&crate::exact::rat_i(j as i64)))
        .collect();
    let rounded: Vec<BigInt> = jd
        .iter()
        .map(|x| x.add_rat(&crate::exact::rat(1, 2)).floor())
        .collect();
    let offsets = [0i64, -1, 1];
    let mut choice = vec![0usize; l];
    'outer: loop {
        let m: Vec<BigInt> = (0..l).map(|k| &rounded[k] + offsets[choice[k]]).collect();
        if m.iter().all(|x| !x.is_negative()) {
            if let Some(cert) = check_certificate(inst, j, &m, &jd, via_convergent) {
                return Some(cert);
            }
        }
        for k in (0..l).rev() {
            if choice[k] + 1 < offsets.len() {
                choice[k] += 1;
                for q in (k + 1)..l {
                    choice[q] = 0;
                }
                continue 'outer;
            }
        }
        break;
    }
    None
}

fn check_certificate(
    inst: &ApproxInstance,
    j: u64,
    m: &[BigInt],
    jd: &[QuadReal],
    via_convergent: bool,
) -> Option<ApproxCertificate> {
    let l = inst.d.len();
    let diff: Vec<QuadReal> = (0..l)
        .map(|k| jd[k].add_rat(&Rat::from_integer(-m[k].clone())))
        .collect();
    let mut residual: Vec<QuadReal> = Vec::with_capacity(inst.e.len());
    for row in &inst.e {
        let mut acc = QuadReal::from_rat(Rat::zero(), diff[0].disc);
        for (k, &c) in row.iter().enumerate() {
            acc = acc.add(&diff[k].mul_rat(&crate::exact::rat_i(c))).ok()?;
        }
        residual.push(acc);
    }
    // ||residual||_inf < eps, exactly.
    for r in &residual {
        if r.cmp_rat(&inst.eps) != std::cmp::Ordering::Less {
            return None;
        }
        if r.neg().cmp_rat(&inst.eps) != std::cmp::Ordering::Less {
            return None;
        }
    }
    let negative_index = residual.iter().position(|r| r.sign() < 0)?;
    Some(ApproxCertificate {
        j,
        m: m.to_vec(),
        residual,
        negative_index,
        via_convergent,
    })
}
