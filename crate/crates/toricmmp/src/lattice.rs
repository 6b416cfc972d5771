//! Integer lattice vectors and the small amount of exact linear algebra the
//! fan machinery needs: Gaussian elimination over the rationals, ranks,
//! determinants, and one-dimensional integer kernels (circuits).

use crate::exact::{ExactError, Rat};
use num::bigint::BigInt;
use num::{Integer, One, Signed, Zero};

/// A point of the ambient lattice `Z^n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeVec {
    pub coords: Vec<i64>,
}

impl LatticeVec {
    pub fn new(coords: Vec<i64>) -> Self {
        LatticeVec { coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    fn content(&self) -> i64 {
        self.coords.iter().fold(0i64, |g, &c| g.gcd(&c.abs()))
    }

    pub fn is_primitive(&self) -> bool {
        self.content() == 1
    }

    /// Divides by the gcd of the entries; the result generates the same ray.
    pub fn primitive(&self) -> Result<LatticeVec, ExactError> {
        let g = self.content();
        if g == 0 {
            return Err(ExactError::ZeroVector);
        }
        Ok(LatticeVec::new(self.coords.iter().map(|c| c / g).collect()))
    }

    pub fn dot_rat(&self, m: &[Rat]) -> Rat {
        assert_eq!(self.dim(), m.len());
        self.coords
            .iter()
            .zip(m)
            .map(|(&c, r)| r * Rat::from_integer(BigInt::from(c)))
            .sum()
    }

    pub fn dot(&self, other: &LatticeVec) -> i64 {
        assert_eq!(self.dim(), other.dim());
        self.coords.iter().zip(&other.coords).map(|(a, b)| a * b).sum()
    }

    pub fn add(&self, other: &LatticeVec) -> LatticeVec {
        LatticeVec::new(self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect())
    }

    pub fn scale(&self, k: i64) -> LatticeVec {
        LatticeVec::new(self.coords.iter().map(|c| c * k).collect())
    }

    pub fn to_rat(&self) -> Vec<Rat> {
        self.coords.iter().map(|&c| Rat::from_integer(BigInt::from(c))).collect()
    }
}

/// Solves the square system `rows * x = rhs` by fraction-free-ish Gaussian
/// elimination over `Rat`; `None` when the matrix is singular.
pub fn solve_square(rows: &[Vec<Rat>], rhs: &[Rat]) -> Option<Vec<Rat>> {
    let n = rows.len();
    assert!(rows.iter().all(|r| r.len() == n) && rhs.len() == n);
    let mut a: Vec<Vec<Rat>> = rows.to_vec();
    let mut b: Vec<Rat> = rhs.to_vec();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        b.swap(col, piv);
        let p = a[col][col].clone();
        for j in col..n {
            a[col][j] = &a[col][j] / &p;
        }
        b[col] = &b[col] / &p;
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for j in col..n {
                    a[r][j] = &a[r][j] - &f * &a[col][j];
                }
                b[r] = &b[r] - &f * &b[col];
            }
        }
    }
    Some(b)
}

/// Rank of a rational matrix.
pub fn rank(rows: &[Vec<Rat>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let cols = rows[0].len();
    let mut a: Vec<Vec<Rat>> = rows.to_vec();
    let mut r = 0usize;
    for col in 0..cols {
        if r == a.len() {
            break;
        }
        let Some(piv) = (r..a.len()).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(r, piv);
        let p = a[r][col].clone();
        for j in col..cols {
            a[r][j] = &a[r][j] / &p;
        }
        for i in 0..a.len() {
            if i != r && !a[i][col].is_zero() {
                let f = a[i][col].clone();
                for j in col..cols {
                    a[i][j] = &a[i][j] - &f * &a[r][j];
                }
            }
        }
        r += 1;
    }
    r
}

/// Determinant of an integer matrix (given as rows).
pub fn det_i64(rows: &[&LatticeVec]) -> BigInt {
    let n = rows.len();
    assert!(rows.iter().all(|r| r.dim() == n));
    let mat: Vec<Vec<Rat>> = rows.iter().map(|r| r.to_rat()).collect();
    det_rat(&mat).to_integer()
}

fn det_rat(rows: &[Vec<Rat>]) -> Rat {
    let n = rows.len();
    let mut a: Vec<Vec<Rat>> = rows.to_vec();
    let mut det = Rat::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Rat::zero();
        };
        if piv != col {
            a.swap(col, piv);
            det = -det;
        }
        let p = a[col][col].clone();
        det *= p.clone();
        for j in col..n {
            a[col][j] = &a[col][j] / &p;
        }
        for r in (col + 1)..n {
            if !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for j in col..n {
                    a[r][j] = &a[r][j] - &f * &a[col][j];
                }
            }
        }
    }
    det
}

/// Given vectors `v_0..v_k` of rank exactly `k` (one-dimensional kernel),
/// returns the primitive integer relation `c` with `sum c_i v_i = 0`.
/// The overall sign is normalized so that the first nonzero entry is positive;
/// callers re-sign per their own convention.
pub fn integer_relation(vecs: &[&LatticeVec]) -> Option<Vec<BigInt>> {
    let k = vecs.len();
    if k == 0 {
        return None;
    }
    let n = vecs[0].dim();
    // Solve sum c_i v_i = 0 with rational elimination on the transpose.
    let mut a: Vec<Vec<Rat>> = (0..n)
        .map(|row| vecs.iter().map(|v| Rat::from_integer(BigInt::from(v.coords[row]))).collect())
        .collect();
    // Row reduce; track pivot columns.
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0usize;
    for col in 0..k {
        if r == a.len() {
            break;
        }
        let Some(piv) = (r..a.len()).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(r, piv);
        let p = a[r][col].clone();
        for j in col..k {
            a[r][j] = &a[r][j] / &p;
        }
        for i in 0..a.len() {
            if i != r && !a[i][col].is_zero() {
                let f = a[i][col].clone();
                for j in col..k {
                    a[i][j] = &a[i][j] - &f * &a[r][j];
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    if pivots.len() != k - 1 {
        return None; // kernel not one-dimensional
    }
    let free = (0..k).find(|c| !pivots.contains(c))?;
    let mut c: Vec<Rat> = vec![Rat::zero(); k];
    c[free] = Rat::one();
    for (row, &pc) in pivots.iter().enumerate() {
        c[pc] = -a[row][free].clone();
    }
    // Clear denominators and divide by the gcd.
    let lcm = c.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    let mut ints: Vec<BigInt> = c.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() {
        return None;
    }
    for x in ints.iter_mut() {
        *x = &*x / &g;
    }
    if let Some(first) = ints.iter().find(|x| !x.is_zero()) {
        if first.is_negative() {
            for x in ints.iter_mut() {
                *x = -&*x;
            }
        }
    }
    Some(ints)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, rat_i};

    #[test]
    fn primitive_examples() {
        assert_eq!(LatticeVec::new(vec![2, 4]).primitive().unwrap().coords, vec![1, 2]);
        assert_eq!(LatticeVec::new(vec![1, 1, -1]).primitive().unwrap().coords, vec![1, 1, -1]);
        assert_eq!(LatticeVec::new(vec![-6, 9]).primitive().unwrap().coords, vec![-2, 3]);
        assert_eq!(LatticeVec::new(vec![0, 0]).primitive(), Err(ExactError::ZeroVector));
        assert!(LatticeVec::new(vec![3, 5]).is_primitive());
        assert!(!LatticeVec::new(vec![2, 4]).is_primitive());
    }

    #[test]
    fn solve_and_det() {
        // x + y = 1, x - y = 0 -> (1/2, 1/2)
        let rows = vec![vec![rat_i(1), rat_i(1)], vec![rat_i(1), rat_i(-1)]];
        let sol = solve_square(&rows, &[rat_i(1), rat_i(0)]).unwrap();
        assert_eq!(sol, vec![rat(1, 2), rat(1, 2)]);
        let u = LatticeVec::new(vec![1, 0]);
        let v = LatticeVec::new(vec![1, 2]);
        assert_eq!(det_i64(&[&u, &v]), BigInt::from(2));
    }

    #[test]
    fn circuit_of_p2() {
        let v1 = LatticeVec::new(vec![1, 0]);
        let v2 = LatticeVec::new(vec![0, 1]);
        let v3 = LatticeVec::new(vec![-1, -1]);
        let rel = integer_relation(&[&v1, &v2, &v3]).unwrap();
        assert_eq!(rel, vec![BigInt::from(1), BigInt::from(1), BigInt::from(1)]);
    }

    #[test]
    fn circuit_threefold_flip() {
        let v1 = LatticeVec::new(vec![1, 0, 0]);
        let v2 = LatticeVec::new(vec![0, 1, 0]);
        let v3 = LatticeVec::new(vec![0, 0, 1]);
        let v4 = LatticeVec::new(vec![1, 1, -1]);
        let rel = integer_relation(&[&v1, &v2, &v3, &v4]).unwrap();
        assert_eq!(rel, vec![BigInt::from(1), BigInt::from(1), BigInt::from(-1), BigInt::from(-1)]);
    }
}
