//! Torus-invariant divisors: polytopes and section counts, mobile/fixed
//! decomposition, intersection numbers against wall curves, and the
//! positivity predicates nef / ample / big.

use crate::exact::{rat_ceil, rat_floor, Rat};
use crate::fan::{Fan, FanError, Wall};
use crate::lattice::{rank as mat_rank, solve_square, LatticeVec};
use crate::lp::{enumerate_vertices, Constraint};
use num::bigint::BigInt;
use num::{Integer, One, Signed, Zero};
use thiserror::Error;

/// Cap on candidate points scanned when enumerating lattice points of a
/// divisor polytope (bounding-box volume).
pub const LATTICE_ENUM_CAP: u64 = 1_000_000;

#[derive(Debug, Error, PartialEq, Clone)]
pub enum DivisorError {
    #[error(transparent)]
    Fan(#[from] FanError),
    #[error("divisor is not integral")]
    NonIntegralDivisor,
    #[error("linear system is empty (h0 = 0)")]
    EmptyLinearSystem,
    #[error("lattice enumeration cap exceeded ({0} candidates)")]
    EnumerationCapExceeded(u64),
}

/// `D = sum a_i D_i` with one rational coefficient per ray of a fixed fan.
#[derive(Debug, Clone, PartialEq)]
pub struct TorusDivisor {
    pub coeffs: Vec<Rat>,
}

impl TorusDivisor {
    pub fn new(fan: &Fan, coeffs: Vec<Rat>) -> Result<Self, FanError> {
        if coeffs.len() != fan.rays.len() {
            return Err(FanError::CoeffLengthMismatch(coeffs.len(), fan.rays.len()));
        }
        Ok(TorusDivisor { coeffs })
    }

    pub fn zero(fan: &Fan) -> Self {
        TorusDivisor { coeffs: vec![Rat::zero(); fan.rays.len()] }
    }

    pub fn from_ints(fan: &Fan, a: &[i64]) -> Result<Self, FanError> {
        Self::new(fan, a.iter().map(|&x| crate::exact::rat_i(x)).collect())
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    pub fn is_effective(&self) -> bool {
        self.coeffs.iter().all(|c| !c.is_negative())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, other: &TorusDivisor) -> TorusDivisor {
        TorusDivisor {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &TorusDivisor) -> TorusDivisor {
        TorusDivisor {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, k: &Rat) -> TorusDivisor {
        TorusDivisor { coeffs: self.coeffs.iter().map(|a| a * k).collect() }
    }

    pub fn scale_i(&self, k: i64) -> TorusDivisor {
        self.scale(&crate::exact::rat_i(k))
    }

    /// Round every coefficient up (`ceil D`).
    pub fn ceil(&self) -> TorusDivisor {
        TorusDivisor {
            coeffs: self.coeffs.iter().map(|a| Rat::from_integer(rat_ceil(a))).collect(),
        }
    }

    /// Round every coefficient down (`floor D`).
    pub fn floor(&self) -> TorusDivisor {
        TorusDivisor {
            coeffs: self.coeffs.iter().map(|a| Rat::from_integer(rat_floor(a))).collect(),
        }
    }

    /// Coefficientwise `<=`.
    pub fn le(&self, other: &TorusDivisor) -> bool {
        self.coeffs.iter().zip(&other.coeffs).all(|(a, b)| a <= b)
    }

    /// Least common multiple of coefficient denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()))
    }
}

/// The polyhedron `{ m : <m, v_i> >= -a_i for every ray }` of a divisor;
/// its lattice points are a monomial basis of `H^0(X, D)` when `D` is
/// integral on a complete fan.
#[derive(Debug, Clone)]
pub struct DivisorPolytope {
    pub rank: usize,
    pub constraints: Vec<Constraint>,
    pub vertices: Vec<Vec<Rat>>,
}

impl DivisorPolytope {
    pub fn new(fan: &Fan, d: &TorusDivisor) -> Self {
        let constraints: Vec<Constraint> = fan
            .rays
            .iter()
            .zip(&d.coeffs)
            .map(|(v, a)| Constraint::from_lattice(v, -a.clone()))
            .collect();
        let vertices = enumerate_vertices(&constraints, fan.rank);
        DivisorPolytope { rank: fan.rank, constraints, vertices }
    }

    pub fn is_empty(&self) -> bool {
        // Complete fans give bounded polyhedra, so emptiness is equivalent
        // to having no vertex.
        self.vertices.is_empty()
    }

    /// Affine dimension of the polytope.
    pub fn dim(&self) -> usize {
        if self.vertices.is_empty() {
            return 0;
        }
        let v0 = &self.vertices[0];
        let rows: Vec<Vec<Rat>> = self.vertices[1..]
            .iter()
            .map(|v| v.iter().zip(v0).map(|(a, b)| a - b).collect())
            .collect();
        mat_rank(&rows)
    }

    pub fn contains(&self, m: &[Rat]) -> bool {
        self.constraints.iter().all(|c| c.satisfied(m))
    }

    /// All lattice points, by bounding-box scan over the vertex hull.
    pub fn lattice_points(&self) -> Result<Vec<LatticeVec>, DivisorError> {
        if self.vertices.is_empty() {
            return Ok(Vec::new());
        }
        let mut lo: Vec<BigInt> = Vec::with_capacity(self.rank);
        let mut hi: Vec<BigInt> = Vec::with_capacity(self.rank);
        for j in 0..self.rank {
            let mut mn = rat_floor(&self.vertices[0][j]);
            let mut mx = rat_ceil(&self.vertices[0][j]);
            for v in &self.vertices[1..] {
                mn = mn.min(rat_floor(&v[j]));
                mx = mx.max(rat_ceil(&v[j]));
            }
            lo.push(mn);
            hi.push(mx);
        }
        let mut count = BigInt::one();
        for j in 0..self.rank {
            count *= &hi[j] - &lo[j] + 1;
        }
        if count > BigInt::from(LATTICE_ENUM_CAP) {
            return Err(DivisorError::EnumerationCapExceeded(LATTICE_ENUM_CAP));
        }
        let lo: Vec<i64> = lo.iter().map(|x| i64::try_from(x).expect("box bound")).collect();
        let hi: Vec<i64> = hi.iter().map(|x| i64::try_from(x).expect("box bound")).collect();
        let mut pts = Vec::new();
        let mut cur = lo.clone();
        'scan: loop {
            let m: Vec<Rat> = cur.iter().map(|&c| crate::exact::rat_i(c)).collect();
            if self.contains(&m) {
                pts.push(LatticeVec::new(cur.clone()));
            }
            for j in (0..self.rank).rev() {
                if cur[j] < hi[j] {
                    cur[j] += 1;
                    for q in (j + 1)..self.rank {
                        cur[q] = lo[q];
                    }
                    continue 'scan;
                }
            }
            break;
        }
        Ok(pts)
    }
}

/// `h^0(X, O_X(D))` as a lattice-point count.  Requires a complete fan and an
/// integral divisor.
pub fn h0(fan: &Fan, d: &TorusDivisor) -> Result<u64, DivisorError> {
    if !fan.complete {
        return Err(FanError::NotComplete.into());
    }
    if !d.is_integral() {
        return Err(DivisorError::NonIntegralDivisor);
    }
    Ok(DivisorPolytope::new(fan, d).lattice_points()?.len() as u64)
}

/// The rational Cartier data `m_sigma` of `D` on a full-dimensional cone:
/// `<m_sigma, v_i> = -a_i` for every ray of the cone.
pub fn cartier_data(fan: &Fan, d: &TorusDivisor, ci: usize) -> Vec<Rat> {
    let cone = &fan.max_cones[ci];
    assert_eq!(cone.len(), fan.rank, "Cartier data needs a full-dimensional cone");
    let rows: Vec<Vec<Rat>> = cone.iter().map(|&i| fan.rays[i].to_rat()).collect();
    let rhs: Vec<Rat> = cone.iter().map(|&i| -d.coeffs[i].clone()).collect();
    solve_square(&rows, &rhs).expect("simplicial cone is nonsingular")
}

/// Exact `D . C` for the curve of a wall, from the difference of the Cartier
/// data across the wall, corrected by the lattice index of the opposite ray
/// in the quotient by the wall span.
pub fn intersection_number(fan: &Fan, d: &TorusDivisor, w: &Wall) -> Rat {
    let m0 = cartier_data(fan, d, w.cones.0);
    let m1 = cartier_data(fan, d, w.cones.1);
    let u1 = &fan.rays[w.opposite.1];
    // Primitive normal of the wall span.
    let phi = wall_normal(fan, w);
    let k = phi.dot(u1).abs();
    assert!(k != 0, "opposite ray lies off the wall hyperplane");
    let diff: Vec<Rat> = m0.iter().zip(&m1).map(|(a, b)| a - b).collect();
    u1.dot_rat(&diff) / crate::exact::rat_i(k)
}

/// Primitive integer functional vanishing on the wall's rays.
fn wall_normal(fan: &Fan, w: &Wall) -> LatticeVec {
    let rows: Vec<Vec<Rat>> = w.rays.iter().map(|&i| fan.rays[i].to_rat()).collect();
    let kernel = rational_kernel_vector(&rows, fan.rank).expect("wall has a normal");
    let lcm = kernel.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    let ints: Vec<i64> = kernel
        .iter()
        .map(|x| i64::try_from(&(x.numer() * (&lcm / x.denom()))).expect("normal size"))
        .collect();
    LatticeVec::new(ints).primitive().expect("nonzero normal")
}

/// One nonzero vector in the kernel of the matrix (rows acting on R^n).
fn rational_kernel_vector(rows: &[Vec<Rat>], n: usize) -> Option<Vec<Rat>> {
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

/// Nef: nonnegative against every wall curve.
pub fn is_nef(fan: &Fan, d: &TorusDivisor) -> bool {
    assert!(fan.complete, "nef is defined here for complete fans");
    fan.walls().iter().all(|w| !intersection_number(fan, d, w).is_negative())
}

/// Ample: positive against every wall curve; on a complete simplicial fan
/// this is exactly strict convexity of the support function across each wall.
pub fn is_ample(fan: &Fan, d: &TorusDivisor) -> bool {
    assert!(fan.complete, "ample is defined here for complete fans");
    fan.walls().iter().all(|w| intersection_number(fan, d, w).is_positive())
}

/// Big: the polytope of `kD` is full-dimensional, where `k` clears the
/// coefficient denominators (polytopes scale linearly in `k`, so one `k`
/// suffices for the growth-rate criterion).
pub fn is_big(fan: &Fan, d: &TorusDivisor) -> bool {
    assert!(fan.complete, "big is defined here for complete fans");
    let k = d.denominator_lcm();
    let kd = d.scale(&Rat::from_integer(k));
    let p = DivisorPolytope::new(fan, &kd);
    !p.is_empty() && p.dim() == fan.rank
}

/// Mobile/fixed decomposition of the linear system `|D|`:
/// `Fix_i = min over lattice points m of (<m, v_i> + a_i)`, `Mob = D - Fix`.
pub fn mob_fix(
    fan: &Fan,
    d: &TorusDivisor,
) -> Result<(TorusDivisor, TorusDivisor), DivisorError> {
    if !d.is_integral() {
        return Err(DivisorError::NonIntegralDivisor);
    }
    let pts = DivisorPolytope::new(fan, d).lattice_points()?;
    if pts.is_empty() {
        return Err(DivisorError::EmptyLinearSystem);
    }
    let fix: Vec<Rat> = fan
        .rays
        .iter()
        .zip(&d.coeffs)
        .map(|(v, a)| {
            pts.iter()
                .map(|m| v.dot_rat(&m.to_rat()) + a)
                .min()
                .expect("nonempty point set")
        })
        .collect();
    let fix = TorusDivisor { coeffs: fix };
    let mob = d.sub(&fix);
    Ok((mob, fix))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat_i, rat_str};
    use crate::fan::fixtures::*;

    #[test]
    fn h0_examples() {
        let p1 = p1();
        // 2 * D_0 on P^1: sections 1, x, x^2.
        let d = TorusDivisor::from_ints(&p1, &[2, 0]).unwrap();
        assert_eq!(h0(&p1, &d).unwrap(), 3);
        let p2 = p2();
        assert_eq!(h0(&p2, &TorusDivisor::zero(&p2)).unwrap(), 1);
        let line = TorusDivisor::from_ints(&p2, &[0, 0, 1]).unwrap();
        assert_eq!(h0(&p2, &line).unwrap(), 3);
        // -K on P^2 has h0 = 10 (cubics).
        let mk = TorusDivisor::from_ints(&p2, &[1, 1, 1]).unwrap();
        assert_eq!(h0(&p2, &mk).unwrap(), 10);
    }

    #[test]
    fn intersection_examples() {
        let p2 = p2();
        let line = TorusDivisor::from_ints(&p2, &[0, 0, 1]).unwrap();
        for w in &p2.walls() {
            assert_eq!(intersection_number(&p2, &line, w), rat_i(1));
        }
        let zero = TorusDivisor::zero(&p2);
        for w in &p2.walls() {
            assert_eq!(intersection_number(&p2, &zero, w), rat_i(0));
        }
        // P^1 x P^1: a ruling fibre is zero on its own ruling's walls, one on
        // the others.
        let q = p1xp1();
        let fibre = TorusDivisor::from_ints(&q, &[1, 0, 0, 0]).unwrap();
        let walls = q.walls();
        let mut values: Vec<String> =
            walls.iter().map(|w| rat_str(&intersection_number(&q, &fibre, w))).collect();
        values.sort();
        assert_eq!(values, vec!["0", "0", "1", "1"]);
    }

    #[test]
    fn hirzebruch_self_intersections() {
        // On F_a, the wall of ray (0,1) is the negative section: D.(D) = -a.
        for a in 1..=3 {
            let f = hirzebruch(a);
            let d = TorusDivisor::from_ints(&f, &[0, 1, 0, 0]).unwrap();
            let walls = f.walls();
            let w = walls.iter().find(|w| w.rays == vec![1]).unwrap();
            assert_eq!(intersection_number(&f, &d, w), rat_i(-a));
        }
    }

    #[test]
    fn nef_ample_big() {
        let p2 = p2();
        let mk = TorusDivisor::from_ints(&p2, &[1, 1, 1]).unwrap();
        assert!(is_nef(&p2, &mk) && is_ample(&p2, &mk) && is_big(&p2, &mk));
        let neg_line = TorusDivisor::from_ints(&p2, &[0, 0, -1]).unwrap();
        assert!(!is_nef(&p2, &neg_line));
        let zero = TorusDivisor::zero(&p2);
        assert!(is_nef(&p2, &zero) && !is_ample(&p2, &zero) && !is_big(&p2, &zero));
        let line = TorusDivisor::from_ints(&p2, &[0, 0, 1]).unwrap();
        assert!(is_big(&p2, &line));
        let q = p1xp1();
        let fibre = TorusDivisor::from_ints(&q, &[1, 0, 0, 0]).unwrap();
        assert!(is_nef(&q, &fibre) && !is_big(&q, &fibre));
    }

    #[test]
    fn mob_fix_examples() {
        let p2 = p2();
        let line = TorusDivisor::from_ints(&p2, &[0, 0, 1]).unwrap();
        let (mob, fix) = mob_fix(&p2, &line).unwrap();
        assert!(fix.is_zero());
        assert_eq!(mob, line);
        let p1 = p1();
        let d0 = TorusDivisor::from_ints(&p1, &[1, 0]).unwrap();
        let (mob, fix) = mob_fix(&p1, &d0).unwrap();
        assert!(fix.is_zero());
        assert_eq!(mob, d0);
        // Negative section on F_2 is rigid: Fix = D, Mob = 0.
        let f2 = hirzebruch(2);
        let d = TorusDivisor::from_ints(&f2, &[0, 1, 0, 0]).unwrap();
        let (mob, fix) = mob_fix(&f2, &d).unwrap();
        assert_eq!(fix, d);
        assert!(mob.is_zero());
        // h0 is preserved by passing to the mobile part.
        assert_eq!(h0(&f2, &d).unwrap(), h0(&f2, &mob).unwrap());
    }
}
