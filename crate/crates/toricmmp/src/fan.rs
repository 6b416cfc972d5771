//! Fans: complete (or locally quasi-projective) simplicial rational fans,
//! their walls and wall circuits.
//!
//! Only simplicial fans are accepted, so every variety in sight is
//! Q-factorial; non-simplicial input is rejected at validation time.

use crate::exact::Rat;
use crate::lattice::{det_i64, rank as mat_rank, LatticeVec};
use crate::lp::{lp_feasible, Constraint};
use num::bigint::BigInt;
use num::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Clone)]
pub enum FanError {
    #[error("ray {0} is not primitive or is zero")]
    BadRay(usize),
    #[error("duplicate ray {0}")]
    DuplicateRay(usize),
    #[error("cone {0} references ray index out of range")]
    BadConeIndex(usize),
    #[error("cone {0} is not simplicial (generators dependent)")]
    NonSimplicial(usize),
    #[error("cones {0} and {1} overlap beyond a common face")]
    OverlappingCones(usize, usize),
    #[error("operation requires a complete fan")]
    NotComplete,
    #[error("divisor has {0} coefficients but fan has {1} rays")]
    CoeffLengthMismatch(usize, usize),
}

/// A simplicial fan in `Z^rank`.
#[derive(Debug, Clone, PartialEq)]
pub struct Fan {
    pub rank: usize,
    pub rays: Vec<LatticeVec>,
    /// Maximal cones as sorted lists of ray indices.
    pub max_cones: Vec<Vec<usize>>,
    pub complete: bool,
    pub smooth: bool,
}

/// A codimension-one cone shared by two maximal cones, carrying the curve
/// class it represents via its integer circuit.
#[derive(Debug, Clone, PartialEq)]
pub struct Wall {
    /// Indices into `max_cones` of the two adjacent cones.
    pub cones: (usize, usize),
    /// Sorted ray indices spanning the wall.
    pub rays: Vec<usize>,
    /// The ray of each adjacent cone not contained in the wall.
    pub opposite: (usize, usize),
    /// Primitive integer relation `sum c_i v_i = 0` over
    /// `[opposite.0, opposite.1, rays...]`, signed so the two opposite rays
    /// carry positive coefficients.
    pub circuit: Vec<(usize, BigInt)>,
}

impl Fan {
    /// Validates and builds a fan.  Checks: primitive distinct rays, in-range
    /// simplicial cones, pairwise intersections that are faces (via exact
    /// separating functionals), and computes the completeness and smoothness
    /// flags.
    pub fn new(
        rank: usize,
        rays: Vec<LatticeVec>,
        mut max_cones: Vec<Vec<usize>>,
    ) -> Result<Fan, FanError> {
        for (i, r) in rays.iter().enumerate() {
            if r.dim() != rank || r.is_zero() || !r.is_primitive() {
                return Err(FanError::BadRay(i));
            }
            if rays[..i].contains(r) {
                return Err(FanError::DuplicateRay(i));
            }
        }
        for (ci, cone) in max_cones.iter_mut().enumerate() {
            cone.sort_unstable();
            cone.dedup();
            if cone.iter().any(|&i| i >= rays.len()) {
                return Err(FanError::BadConeIndex(ci));
            }
            let mat: Vec<Vec<Rat>> = cone.iter().map(|&i| rays[i].to_rat()).collect();
            if mat_rank(&mat) != cone.len() {
                return Err(FanError::NonSimplicial(ci));
            }
        }
        let fan = Fan { rank, rays, max_cones, complete: false, smooth: false };
        for i in 0..fan.max_cones.len() {
            for j in (i + 1)..fan.max_cones.len() {
                if !fan.cones_meet_in_face(i, j) {
                    return Err(FanError::OverlappingCones(i, j));
                }
            }
        }
        let complete = fan.compute_complete();
        let smooth = fan.compute_smooth();
        Ok(Fan { complete, smooth, ..fan })
    }

    /// Exact separating-functional test: there is a linear functional that
    /// vanishes on the shared rays, is >= 1 on the private rays of one cone
    /// and <= -1 on the private rays of the other.  Such a functional exists
    /// iff the two cones meet exactly in the face spanned by the shared rays.
    fn cones_meet_in_face(&self, i: usize, j: usize) -> bool {
        let a = &self.max_cones[i];
        let b = &self.max_cones[j];
        let shared: Vec<usize> = a.iter().copied().filter(|x| b.contains(x)).collect();
        let only_a: Vec<usize> = a.iter().copied().filter(|x| !shared.contains(x)).collect();
        let only_b: Vec<usize> = b.iter().copied().filter(|x| !shared.contains(x)).collect();
        if only_a.is_empty() && only_b.is_empty() {
            return false; // duplicate cone
        }
        let mut cs: Vec<Constraint> = Vec::new();
        for &s in &shared {
            cs.push(Constraint::from_lattice(&self.rays[s], Rat::zero()));
            let neg: Vec<Rat> = self.rays[s].to_rat().iter().map(|x| -x).collect();
            cs.push(Constraint::new(neg, Rat::zero()));
        }
        for &s in &only_a {
            let neg: Vec<Rat> = self.rays[s].to_rat().iter().map(|x| -x).collect();
            cs.push(Constraint::new(neg, Rat::one()));
        }
        for &s in &only_b {
            cs.push(Constraint::from_lattice(&self.rays[s], Rat::one()));
        }
        lp_feasible(&cs, self.rank).is_some()
    }

    fn facets_of(&self, ci: usize) -> Vec<Vec<usize>> {
        let cone = &self.max_cones[ci];
        if cone.len() < self.rank {
            return Vec::new(); // not full-dimensional; no interior walls
        }
        (0..cone.len())
            .map(|drop| {
                cone.iter().enumerate().filter(|&(k, _)| k != drop).map(|(_, &r)| r).collect()
            })
            .collect()
    }

    /// A fan is complete iff every facet of every full-dimensional cone is
    /// shared by exactly two maximal cones (all cones full-dimensional).
    fn compute_complete(&self) -> bool {
        if self.max_cones.is_empty() || self.max_cones.iter().any(|c| c.len() != self.rank) {
            return false;
        }
        let mut counts: std::collections::HashMap<Vec<usize>, usize> = Default::default();
        for ci in 0..self.max_cones.len() {
            for f in self.facets_of(ci) {
                *counts.entry(f).or_insert(0) += 1;
            }
        }
        counts.values().all(|&c| c == 2)
    }

    fn compute_smooth(&self) -> bool {
        self.max_cones.iter().all(|cone| {
            if cone.len() == self.rank {
                let rays: Vec<&LatticeVec> = cone.iter().map(|&i| &self.rays[i]).collect();
                let d = det_i64(&rays);
                d == BigInt::one() || d == -BigInt::one()
            } else {
                // Lower-dimensional cone: smooth iff generators extend to a
                // lattice basis, i.e. the gcd of maximal minors is 1.
                gcd_maximal_minors(&cone.iter().map(|&i| &self.rays[i]).collect::<Vec<_>>())
                    == BigInt::one()
            }
        })
    }

    /// All walls (codimension-one cones between two maximal cones) with their
    /// circuits.
    pub fn walls(&self) -> Vec<Wall> {
        let mut by_facet: std::collections::HashMap<Vec<usize>, Vec<usize>> = Default::default();
        for ci in 0..self.max_cones.len() {
            for f in self.facets_of(ci) {
                by_facet.entry(f).or_default().push(ci);
            }
        }
        let mut walls: Vec<Wall> = Vec::new();
        let mut keys: Vec<Vec<usize>> = by_facet.keys().cloned().collect();
        keys.sort();
        for f in keys {
            let cones = &by_facet[&f];
            if cones.len() != 2 {
                continue;
            }
            let (c0, c1) = (cones[0], cones[1]);
            let op0 = *self.max_cones[c0].iter().find(|r| !f.contains(r)).expect("facet");
            let op1 = *self.max_cones[c1].iter().find(|r| !f.contains(r)).expect("facet");
            let mut idxs: Vec<usize> = vec![op0, op1];
            idxs.extend(f.iter().copied());
            let vecs: Vec<&LatticeVec> = idxs.iter().map(|&i| &self.rays[i]).collect();
            let mut rel = crate::lattice::integer_relation(&vecs)
                .expect("wall circuit: kernel must be one-dimensional");
            // Opposite rays sit on opposite sides of the wall hyperplane, so
            // their circuit coefficients share a sign; normalize it positive.
            assert_eq!(rel[0].signum(), rel[1].signum(), "wall circuit sign pattern");
            assert!(!rel[0].is_zero());
            if rel[0].is_negative() {
                for x in rel.iter_mut() {
                    *x = -&*x;
                }
            }
            walls.push(Wall {
                cones: (c0, c1),
                rays: f.clone(),
                opposite: (op0, op1),
                circuit: idxs.into_iter().zip(rel).collect(),
            });
        }
        walls
    }

    /// Picard number of the associated complete simplicial toric variety.
    pub fn picard_rank(&self) -> usize {
        self.rays.len() - self.rank
    }

    /// Index of the maximal cone whose span contains `v` (nonnegative
    /// coordinates in the ray basis), if any.
    pub fn cone_containing(&self, v: &LatticeVec) -> Option<(usize, Vec<Rat>)> {
        for ci in 0..self.max_cones.len() {
            if self.max_cones[ci].len() != self.rank {
                continue;
            }
            if let Some(coords) = self.cone_coordinates(ci, v) {
                if coords.iter().all(|c| !c.is_negative()) {
                    return Some((ci, coords));
                }
            }
        }
        None
    }

    /// Barycentric-style coordinates of `v` in the ray basis of cone `ci`.
    pub fn cone_coordinates(&self, ci: usize, v: &LatticeVec) -> Option<Vec<Rat>> {
        let cone = &self.max_cones[ci];
        if cone.len() != self.rank {
            return None;
        }
        // Solve sum_k x_k v_k = v: columns are the cone rays.
        let rows: Vec<Vec<Rat>> = (0..self.rank)
            .map(|r| {
                cone.iter()
                    .map(|&i| Rat::from_integer(BigInt::from(self.rays[i].coords[r])))
                    .collect()
            })
            .collect();
        let rhs: Vec<Rat> =
            v.coords.iter().map(|&c| Rat::from_integer(BigInt::from(c))).collect();
        crate::lattice::solve_square(&rows, &rhs)
    }
}

/// gcd of all maximal minors of the matrix whose rows are the given vectors.
fn gcd_maximal_minors(rows: &[&LatticeVec]) -> BigInt {
    use num::Integer;
    let k = rows.len();
    if k == 0 {
        return BigInt::one();
    }
    let n = rows[0].dim();
    let mut g = BigInt::zero();
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        let sub: Vec<LatticeVec> = rows
            .iter()
            .map(|r| LatticeVec::new(idx.iter().map(|&c| r.coords[c]).collect()))
            .collect();
        let refs: Vec<&LatticeVec> = sub.iter().collect();
        g = g.gcd(&det_i64(&refs));
        let mut pos = k;
        loop {
            if pos == 0 {
                return g;
            }
            pos -= 1;
            if idx[pos] + 1 <= n - (k - pos) {
                idx[pos] += 1;
                for q in (pos + 1)..k {
                    idx[q] = idx[q - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Convenience constructors for the classical fixtures used across tests.
pub mod fixtures {
    use super::*;

    pub fn p1() -> Fan {
        Fan::new(1, vec![LatticeVec::new(vec![1]), LatticeVec::new(vec![-1])], vec![vec![0], vec![1]])
            .unwrap()
    }

    pub fn p2() -> Fan {
        Fan::new(
            2,
            vec![
                LatticeVec::new(vec![1, 0]),
                LatticeVec::new(vec![0, 1]),
                LatticeVec::new(vec![-1, -1]),
            ],
            vec![vec![0, 1], vec![1, 2], vec![0, 2]],
        )
        .unwrap()
    }

    pub fn p1xp1() -> Fan {
        Fan::new(
            2,
            vec![
                LatticeVec::new(vec![1, 0]),
                LatticeVec::new(vec![-1, 0]),
                LatticeVec::new(vec![0, 1]),
                LatticeVec::new(vec![0, -1]),
            ],
            vec![vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3]],
        )
        .unwrap()
    }

    /// Hirzebruch surface `F_a`: rays (1,0), (0,1), (-1,a), (0,-1).
    /// The ray (0,1) carries the negative section (self-intersection -a).
    pub fn hirzebruch(a: i64) -> Fan {
        Fan::new(
            2,
            vec![
                LatticeVec::new(vec![1, 0]),
                LatticeVec::new(vec![0, 1]),
                LatticeVec::new(vec![-1, a]),
                LatticeVec::new(vec![0, -1]),
            ],
            vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3]],
        )
        .unwrap()
    }

    /// Affine plane A^2 (single smooth cone); used by singularity fixtures.
    pub fn a2() -> Fan {
        Fan::new(
            2,
            vec![LatticeVec::new(vec![1, 0]), LatticeVec::new(vec![0, 1])],
            vec![vec![0, 1]],
        )
        .unwrap()
    }

    pub fn p3() -> Fan {
        Fan::new(
            3,
            vec![
                LatticeVec::new(vec![1, 0, 0]),
                LatticeVec::new(vec![0, 1, 0]),
                LatticeVec::new(vec![0, 0, 1]),
                LatticeVec::new(vec![-1, -1, -1]),
            ],
            vec![vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]],
        )
        .unwrap()
    }

    /// The local 3-fold flipping fan: rays (1,0,0), (0,1,0), (0,0,1),
    /// (1,1,-1) with circuit v1 + v2 = v3 + v4, triangulated on the
    /// (v1, v2) side.
    pub fn flip_local() -> Fan {
        Fan::new(
            3,
            vec![
                LatticeVec::new(vec![1, 0, 0]),
                LatticeVec::new(vec![0, 1, 0]),
                LatticeVec::new(vec![0, 0, 1]),
                LatticeVec::new(vec![1, 1, -1]),
            ],
            vec![vec![0, 1, 2], vec![0, 1, 3]],
        )
        .unwrap()
    }
}
