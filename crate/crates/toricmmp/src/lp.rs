//! Exact linear programming over the rationals.
//!
//! A dense two-phase simplex with Bland's rule (guaranteed termination, no
//! floating point) plus a brute-force vertex enumerator used both as a test
//! oracle and for bounding boxes of divisor polytopes.

use crate::exact::Rat;
use crate::lattice::{solve_square, LatticeVec};
use num::{One, Signed, Zero};
use thiserror::Error;

/// `normal . x >= rhs`.
#[derive(Debug, Clone)]
pub struct Constraint {
    pub normal: Vec<Rat>,
    pub rhs: Rat,
}

impl Constraint {
    pub fn new(normal: Vec<Rat>, rhs: Rat) -> Self {
        Constraint { normal, rhs }
    }

    pub fn from_lattice(v: &LatticeVec, rhs: Rat) -> Self {
        Constraint { normal: v.to_rat(), rhs }
    }

    pub fn satisfied(&self, x: &[Rat]) -> bool {
        dot(&self.normal, x) >= self.rhs
    }
}

#[derive(Debug, Error, PartialEq, Clone)]
pub enum LpError {
    #[error("constraint set is infeasible")]
    EmptyFeasible,
    #[error("objective unbounded below")]
    Unbounded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub value: Rat,
    pub point: Vec<Rat>,
}

fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Minimizes `objective . x` subject to `constraints` (free variables).
pub fn lp_min(constraints: &[Constraint], objective: &[Rat]) -> Result<LpSolution, LpError> {
    let n = objective.len();
    // x = u - w with u, w >= 0; slack s >= 0 per constraint: A(u-w) - s = b.
    let k = constraints.len();
    let vars = 2 * n + k;
    let mut rows: Vec<Vec<Rat>> = Vec::with_capacity(k);
    let mut b: Vec<Rat> = Vec::with_capacity(k);
    for (i, c) in constraints.iter().enumerate() {
        assert_eq!(c.normal.len(), n);
        let mut row = vec![Rat::zero(); vars];
        for j in 0..n {
            row[j] = c.normal[j].clone();
            row[n + j] = -c.normal[j].clone();
        }
        row[2 * n + i] = -Rat::one();
        rows.push(row);
        b.push(c.rhs.clone());
    }
    let mut cost = vec![Rat::zero(); vars];
    for j in 0..n {
        cost[j] = objective[j].clone();
        cost[n + j] = -objective[j].clone();
    }
    let z = simplex_eq(rows, b, cost)?;
    let point: Vec<Rat> = (0..n).map(|j| &z.point[j] - &z.point[n + j]).collect();
    Ok(LpSolution { value: z.value, point })
}

/// Minimizes `(num . x + num0) / (den . x + den0)` over the feasible set,
/// assuming the denominator is strictly positive there (Charnes-Cooper
/// transform).  This is the workhorse behind nef thresholds and the log
/// canonical threshold's per-cone minimization.
pub fn lp_min_ratio(
    constraints: &[Constraint],
    num: (&[Rat], &Rat),
    den: (&[Rat], &Rat),
) -> Result<LpSolution, LpError> {
    let n = num.0.len();
    assert_eq!(den.0.len(), n);
    // Variables (y, t): minimize num.y + num0 t  s.t.  A y - b t >= 0,
    // den.y + den0 t = 1 (as two inequalities), t >= 0.
    let mut cs: Vec<Constraint> = Vec::new();
    for c in constraints {
        let mut normal = c.normal.clone();
        normal.push(-c.rhs.clone());
        cs.push(Constraint::new(normal, Rat::zero()));
    }
    let mut den_row = den.0.to_vec();
    den_row.push(den.1.clone());
    cs.push(Constraint::new(den_row.clone(), Rat::one()));
    cs.push(Constraint::new(den_row.iter().map(|x| -x).collect(), -Rat::one()));
    let mut t_pos = vec![Rat::zero(); n];
    t_pos.push(Rat::one());
    cs.push(Constraint::new(t_pos, Rat::zero()));
    let mut obj = num.0.to_vec();
    obj.push(num.1.clone());
    let sol = lp_min(&cs, &obj)?;
    let t = sol.point[n].clone();
    if t.is_zero() {
        // Infimum attained only asymptotically along a recession direction;
        // the value is still the exact infimum but there is no witness point.
        return Ok(LpSolution { value: sol.value, point: Vec::new() });
    }
    let x: Vec<Rat> = (0..n).map(|j| &sol.point[j] / &t).collect();
    Ok(LpSolution { value: sol.value, point: x })
}

/// Feasibility of `constraints` alone (phase-one only, zero objective).
pub fn lp_feasible(constraints: &[Constraint], n: usize) -> Option<Vec<Rat>> {
    match lp_min(constraints, &vec![Rat::zero(); n]) {
        Ok(sol) => Some(sol.point),
        Err(_) => None,
    }
}

struct EqSolution {
    value: Rat,
    point: Vec<Rat>,
}

/// Two-phase simplex on `M z = b, z >= 0`, minimizing `cost . z`.
fn simplex_eq(
    mut rows: Vec<Vec<Rat>>,
    mut b: Vec<Rat>,
    cost: Vec<Rat>,
) -> Result<EqSolution, LpError> {
    let k = rows.len();
    let n = cost.len();
    // Make rhs nonnegative.
    for i in 0..k {
        if b[i].is_negative() {
            for x in rows[i].iter_mut() {
                *x = -x.clone();
            }
            b[i] = -b[i].clone();
        }
    }
    // Append artificials.
    for (i, row) in rows.iter_mut().enumerate() {
        for j in 0..k {
            row.push(if i == j { Rat::one() } else { Rat::zero() });
        }
    }
    let total = n + k;
    let mut basis: Vec<usize> = (n..total).collect();
    let mut tab = rows;
    let mut rhs = b;

    // Phase I: minimize the sum of artificials.
    let phase1: Vec<Rat> = (0..total).map(|j| if j >= n { Rat::one() } else { Rat::zero() }).collect();
    run_simplex(&mut tab, &mut rhs, &mut basis, &phase1, total)?;
    let p1_val: Rat = basis
        .iter()
        .enumerate()
        .map(|(i, &bj)| if bj >= n { rhs[i].clone() } else { Rat::zero() })
        .sum();
    if !p1_val.is_zero() {
        return Err(LpError::EmptyFeasible);
    }
    // Pivot remaining artificials out of the basis where possible.
    for i in 0..k {
        if basis[i] >= n {
            if let Some(j) = (0..n).find(|&j| !tab[i][j].is_zero()) {
                pivot(&mut tab, &mut rhs, &mut basis, i, j);
            }
        }
    }
    // Phase II: original cost, artificials barred from entering.
    let mut full_cost = cost;
    full_cost.resize(total, Rat::zero());
    run_simplex2(&mut tab, &mut rhs, &mut basis, &full_cost, n)?;
    let mut point = vec![Rat::zero(); n];
    for (i, &bj) in basis.iter().enumerate() {
        if bj < n {
            point[bj] = rhs[i].clone();
        }
    }
    let value = dot(&full_cost[..n], &point);
    Ok(EqSolution { value, point })
}

fn run_simplex(
    tab: &mut Vec<Vec<Rat>>,
    rhs: &mut Vec<Rat>,
    basis: &mut Vec<usize>,
    cost: &[Rat],
    enter_limit: usize,
) -> Result<(), LpError> {
    run_simplex2(tab, rhs, basis, cost, enter_limit)
}

fn run_simplex2(
    tab: &mut Vec<Vec<Rat>>,
    rhs: &mut Vec<Rat>,
    basis: &mut Vec<usize>,
    cost: &[Rat],
    enter_limit: usize,
) -> Result<(), LpError> {
    let k = tab.len();
    loop {
        // Reduced costs: d_j = c_j - c_B . T_j  (Bland: first negative).
        let mut entering: Option<usize> = None;
        for j in 0..enter_limit {
            if basis.contains(&j) {
                continue;
            }
            let mut d = cost[j].clone();
            for i in 0..k {
                if !tab[i][j].is_zero() {
                    d -= &cost[basis[i]] * &tab[i][j];
                }
            }
            if d.is_negative() {
                entering = Some(j);
                break;
            }
        }
        let Some(j) = entering else {
            return Ok(());
        };
        // Ratio test with Bland tie-break on the leaving basis variable.
        let mut best: Option<(Rat, usize)> = None;
        for i in 0..k {
            if tab[i][j].is_positive() {
                let ratio = &rhs[i] / &tab[i][j];
                match &best {
                    None => best = Some((ratio, i)),
                    Some((r, bi)) => {
                        if ratio < *r || (ratio == *r && basis[i] < basis[*bi]) {
                            best = Some((ratio, i));
                        }
                    }
                }
            }
        }
        let Some((_, i)) = best else {
            return Err(LpError::Unbounded);
        };
        pivot(tab, rhs, basis, i, j);
    }
}

fn pivot(tab: &mut Vec<Vec<Rat>>, rhs: &mut Vec<Rat>, basis: &mut Vec<usize>, i: usize, j: usize) {
    let p = tab[i][j].clone();
    for x in tab[i].iter_mut() {
        *x = &*x / &p;
    }
    rhs[i] = &rhs[i] / &p;
    let pivot_row = tab[i].clone();
    let pivot_rhs = rhs[i].clone();
    for r in 0..tab.len() {
        if r != i && !tab[r][j].is_zero() {
            let f = tab[r][j].clone();
            for (x, pv) in tab[r].iter_mut().zip(&pivot_row) {
                *x = &*x - &f * pv;
            }
            rhs[r] = &rhs[r] - &f * &pivot_rhs;
        }
    }
    basis[i] = j;
}

/// All vertices of the (assumed pointed) polyhedron cut out by `constraints`,
/// by brute force over n-subsets of facets.  Exponential but exact; used as
/// the oracle the simplex is checked against, and for polytope bounding boxes.
pub fn enumerate_vertices(constraints: &[Constraint], n: usize) -> Vec<Vec<Rat>> {
    let k = constraints.len();
    let mut verts: Vec<Vec<Rat>> = Vec::new();
    let mut idx: Vec<usize> = (0..n).collect();
    if k < n {
        return verts;
    }
    loop {
        let rows: Vec<Vec<Rat>> = idx.iter().map(|&i| constraints[i].normal.clone()).collect();
        let rhs: Vec<Rat> = idx.iter().map(|&i| constraints[i].rhs.clone()).collect();
        if let Some(x) = solve_square(&rows, &rhs) {
            if constraints.iter().all(|c| c.satisfied(&x)) && !verts.contains(&x) {
                verts.push(x);
            }
        }
        // Next combination.
        let mut pos = n;
        loop {
            if pos == 0 {
                return verts;
            }
            pos -= 1;
            if idx[pos] + 1 <= k - (n - pos) {
                idx[pos] += 1;
                for q in (pos + 1)..n {
                    idx[q] = idx[q - 1] + 1;
                }
                break;
            }
        }
    }
}
