//! Bivariate polynomials with rational coefficients, just enough for the
//! strip-vanishing verifier: evaluation, degree, multiplication, and exact
//! division by homogeneous linear forms `c*x + d*y`.

use crate::exact::{rat_i, Rat};
use num::Zero;
use std::collections::BTreeMap;

/// `sum coeffs[(i, j)] x^i y^j`, zero coefficients pruned.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct BivarPoly {
    pub coeffs: BTreeMap<(u32, u32), Rat>,
}

impl BivarPoly {
    pub fn zero() -> Self {
        BivarPoly::default()
    }

    pub fn constant(c: Rat) -> Self {
        let mut p = BivarPoly::default();
        p.set(0, 0, c);
        p
    }

    /// Linear form `c*x + d*y`.
    pub fn linear(c: Rat, d: Rat) -> Self {
        let mut p = BivarPoly::default();
        p.set(1, 0, c);
        p.set(0, 1, d);
        p
    }

    pub fn set(&mut self, i: u32, j: u32, c: Rat) {
        if c.is_zero() {
            self.coeffs.remove(&(i, j));
        } else {
            self.coeffs.insert((i, j), c);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Total degree; zero polynomial reports 0.
    pub fn degree(&self) -> u32 {
        self.coeffs.keys().map(|&(i, j)| i + j).max().unwrap_or(0)
    }

    pub fn eval(&self, x: &Rat, y: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for (&(i, j), c) in &self.coeffs {
            acc += c * pow(x, i) * pow(y, j);
        }
        acc
    }

    pub fn eval_i(&self, x: i64, y: i64) -> Rat {
        self.eval(&rat_i(x), &rat_i(y))
    }

    pub fn add(&self, other: &BivarPoly) -> BivarPoly {
        let mut out = self.clone();
        for (&k, c) in &other.coeffs {
            let cur = out.coeffs.get(&k).cloned().unwrap_or_else(Rat::zero);
            out.set(k.0, k.1, cur + c);
        }
        out
    }

    pub fn mul(&self, other: &BivarPoly) -> BivarPoly {
        let mut out = BivarPoly::default();
        for (&(i1, j1), c1) in &self.coeffs {
            for (&(i2, j2), c2) in &other.coeffs {
                let k = (i1 + i2, j1 + j2);
                let cur = out.coeffs.get(&k).cloned().unwrap_or_else(Rat::zero);
                out.set(k.0, k.1, cur + c1 * c2);
            }
        }
        out
    }

    /// Exact division by `c*x + d*y` with `c != 0`: returns the quotient when
    /// the linear form divides `self`, else `None`.  Long division in `x`
    /// over `Q[y]`; the remainder is `self(x = -d/c * y, y)`.
    pub fn div_linear(&self, c: &Rat, d: &Rat) -> Option<BivarPoly> {
        assert!(!c.is_zero(), "leading x-coefficient must be nonzero");
        if self.is_zero() {
            return Some(BivarPoly::zero());
        }
        let mut rem = self.clone();
        let mut quo = BivarPoly::default();
        loop {
            let Some((&(i, j), _)) = rem.coeffs.iter().rev().max_by_key(|(&(i, _), _)| i) else {
                break;
            };
            if i == 0 {
                break;
            }
            // Leading x-term with the largest x-degree; cancel it.
            let lead = rem
                .coeffs
                .iter()
                .filter(|(&(ii, _), _)| ii == i)
                .map(|(&k, c)| (k, c.clone()))
                .collect::<Vec<_>>();
            let _ = (i, j);
            for ((i, j), coeff) in lead {
                let q = &coeff / c;
                let cur = quo.coeffs.get(&(i - 1, j)).cloned().unwrap_or_else(Rat::zero);
                quo.set(i - 1, j, cur + &q);
                // rem -= q x^{i-1} y^j (c x + d y)
                let r1 = rem.coeffs.get(&(i, j)).cloned().unwrap_or_else(Rat::zero);
                rem.set(i, j, r1 - &q * c);
                let r2 = rem.coeffs.get(&(i - 1, j + 1)).cloned().unwrap_or_else(Rat::zero);
                rem.set(i - 1, j + 1, r2 - &q * d);
            }
        }
        if rem.is_zero() {
            Some(quo)
        } else {
            None
        }
    }

    /// Largest `k` with `(c*x + d*y)^k` dividing `self`, together with the
    /// cofactor.
    pub fn linear_multiplicity(&self, c: &Rat, d: &Rat) -> (u32, BivarPoly) {
        let mut k = 0u32;
        let mut cur = self.clone();
        while !cur.is_zero() {
            match cur.div_linear(c, d) {
                Some(q) => {
                    cur = q;
                    k += 1;
                }
                None => break,
            }
        }
        (k, cur)
    }
}

fn pow(x: &Rat, e: u32) -> Rat {
    let mut acc = Rat::from_integer(1.into());
    for _ in 0..e {
        acc *= x;
    }
    acc
}
