//! Exact number types: arbitrary-precision rationals and real quadratic
//! irrationalities `a + b*sqrt(D)`.
//!
//! Every comparison, floor and ceiling in this module is decided by integer
//! arithmetic (sign tests after squaring, integer square roots); no floating
//! point is consulted anywhere.

use num::bigint::{BigInt, Sign};
use num::{BigRational, One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;
use thiserror::Error;

/// Reduced arbitrary-precision rational with positive denominator.
///
/// `BigRational` maintains both invariants (gcd = 1, denominator > 0) on
/// construction, which is exactly the contract the rest of the crate relies on.
pub type Rat = BigRational;

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum ExactError {
    #[error("zero vector has no primitive representative")]
    ZeroVector,
    #[error("discriminant {0} is not square-free (or < 2)")]
    NotSquareFree(i64),
    #[error("mixed discriminants {0} and {1} in quadratic arithmetic")]
    DiscMismatch(i64, i64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("malformed rational literal {0:?}")]
    BadRatLiteral(String),
}

/// `p/q` as a reduced rational. `q` must be nonzero.
pub fn rat(p: i64, q: i64) -> Rat {
    assert!(q != 0, "rat: zero denominator");
    Rat::new(BigInt::from(p), BigInt::from(q))
}

/// Integer as a rational.
pub fn rat_i(p: i64) -> Rat {
    Rat::from_integer(BigInt::from(p))
}

/// Parses the exact literal forms used across all JSON interfaces: `"p/q"`,
/// `"p"`, with optional leading sign.
pub fn parse_rat(s: &str) -> Result<Rat, ExactError> {
    let bad = || ExactError::BadRatLiteral(s.to_string());
    let t = s.trim();
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n, d),
        None => (t, "1"),
    };
    let n: BigInt = num.parse().map_err(|_| bad())?;
    let d: BigInt = den.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Rat::new(n, d))
}

/// Renders a rational in the canonical `p/q` (or `p` when integral) form used
/// by every report.
pub fn rat_str(x: &Rat) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Floor of a rational as a `BigInt`.
pub fn rat_floor(x: &Rat) -> BigInt {
    x.floor().to_integer()
}

/// Ceiling of a rational as a `BigInt`.
pub fn rat_ceil(x: &Rat) -> BigInt {
    x.ceil().to_integer()
}

fn is_square_free(d: i64) -> bool {
    if d < 2 {
        return false;
    }
    let mut n = d;
    let mut p = 2i64;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return false;
            }
        }
        p += 1;
    }
    true
}

/// Floor of `sqrt(n)` for nonnegative `n`.
fn big_isqrt(n: &BigInt) -> BigInt {
    assert!(!n.is_negative());
    n.sqrt()
}

/// Real quadratic irrationality `a + b*sqrt(disc)` with `a, b` rational and
/// `disc` a square-free integer >= 2.  A plain rational is represented with
/// `b = 0` (the discriminant is then inert but kept for arithmetic
/// compatibility).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadReal {
    pub a: Rat,
    pub b: Rat,
    pub disc: i64,
}

impl QuadReal {
    pub fn new(a: Rat, b: Rat, disc: i64) -> Result<Self, ExactError> {
        if !is_square_free(disc) {
            return Err(ExactError::NotSquareFree(disc));
        }
        Ok(QuadReal { a, b, disc })
    }

    pub fn from_rat(a: Rat, disc: i64) -> Self {
        QuadReal { a, b: Rat::zero(), disc }
    }

    /// `sqrt(disc)` itself.
    pub fn sqrt_disc(disc: i64) -> Result<Self, ExactError> {
        QuadReal::new(Rat::zero(), Rat::one(), disc)
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn as_rat(&self) -> Option<Rat> {
        if self.is_rational() {
            Some(self.a.clone())
        } else {
            None
        }
    }

    fn check_disc(&self, other: &QuadReal) -> Result<(), ExactError> {
        if !self.b.is_zero() && !other.b.is_zero() && self.disc != other.disc {
            return Err(ExactError::DiscMismatch(self.disc, other.disc));
        }
        Ok(())
    }

    fn merged_disc(&self, other: &QuadReal) -> i64 {
        if self.b.is_zero() {
            other.disc
        } else {
            self.disc
        }
    }

    pub fn add(&self, other: &QuadReal) -> Result<QuadReal, ExactError> {
        self.check_disc(other)?;
        Ok(QuadReal {
            a: &self.a + &other.a,
            b: &self.b + &other.b,
            disc: self.merged_disc(other),
        })
    }

    pub fn sub(&self, other: &QuadReal) -> Result<QuadReal, ExactError> {
        self.check_disc(other)?;
        Ok(QuadReal {
            a: &self.a - &other.a,
            b: &self.b - &other.b,
            disc: self.merged_disc(other),
        })
    }

    pub fn mul(&self, other: &QuadReal) -> Result<QuadReal, ExactError> {
        self.check_disc(other)?;
        let d = Rat::from_integer(BigInt::from(self.merged_disc(other)));
        Ok(QuadReal {
            a: &self.a * &other.a + &self.b * &other.b * &d,
            b: &self.a * &other.b + &self.b * &other.a,
            disc: self.merged_disc(other),
        })
    }

    pub fn mul_rat(&self, r: &Rat) -> QuadReal {
        QuadReal { a: &self.a * r, b: &self.b * r, disc: self.disc }
    }

    pub fn add_rat(&self, r: &Rat) -> QuadReal {
        QuadReal { a: &self.a + r, b: self.b.clone(), disc: self.disc }
    }

    pub fn neg(&self) -> QuadReal {
        QuadReal { a: -&self.a, b: -&self.b, disc: self.disc }
    }

    /// `1 / self`; conjugation makes the denominator rational.
    pub fn recip(&self) -> Result<QuadReal, ExactError> {
        let d = Rat::from_integer(BigInt::from(self.disc));
        let norm = &self.a * &self.a - &self.b * &self.b * &d;
        if norm.is_zero() {
            // a^2 = b^2 D with D square-free forces a = b = 0.
            return Err(ExactError::DivisionByZero);
        }
        Ok(QuadReal {
            a: &self.a / &norm,
            b: -&self.b / &norm,
            disc: self.disc,
        })
    }

    /// Exact sign: -1, 0, +1.  Decided by comparing `a^2` with `b^2 D` when
    /// the two terms have opposite signs.
    pub fn sign(&self) -> i32 {
        let sa = rat_sign(&self.a);
        if self.b.is_zero() {
            return sa;
        }
        let sb = rat_sign(&self.b);
        if sa == 0 {
            return sb;
        }
        if sa == sb {
            return sa;
        }
        // Opposite signs: |a| vs |b| sqrt(D), squared.
        let d = Rat::from_integer(BigInt::from(self.disc));
        let lhs = &self.a * &self.a;
        let rhs = &self.b * &self.b * &d;
        match lhs.cmp(&rhs) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            // a^2 = b^2 D is impossible for square-free D with b != 0,
            // but keep the arm total.
            Ordering::Equal => 0,
        }
    }

    pub fn cmp_rat(&self, r: &Rat) -> Ordering {
        match self.add_rat(&-r).sign() {
            -1 => Ordering::Less,
            0 => Ordering::Equal,
            _ => Ordering::Greater,
        }
    }

    pub fn cmp(&self, other: &QuadReal) -> Result<Ordering, ExactError> {
        Ok(match self.sub(other)?.sign() {
            -1 => Ordering::Less,
            0 => Ordering::Equal,
            _ => Ordering::Greater,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// Exact floor.  A candidate is produced from integer square roots and
    /// corrected by exact comparisons (at most a couple of steps).
    pub fn floor(&self) -> BigInt {
        let mut k = &rat_floor(&self.a) + floor_b_sqrt(&self.b, self.disc);
        // Correct the candidate exactly.
        while self.cmp_rat(&Rat::from_integer(k.clone())) == Ordering::Less {
            k -= 1;
        }
        loop {
            let next: BigInt = &k + 1;
            if self.cmp_rat(&Rat::from_integer(next.clone())) != Ordering::Less {
                k = next;
            } else {
                break;
            }
        }
        k
    }

    pub fn ceil(&self) -> BigInt {
        let f = self.floor();
        if self.cmp_rat(&Rat::from_integer(f.clone())) == Ordering::Equal {
            f
        } else {
            f + 1
        }
    }

    /// Fractional part `self - floor(self)` as another `QuadReal`.
    pub fn fract(&self) -> QuadReal {
        self.add_rat(&-Rat::from_integer(self.floor()))
    }

    /// Decimal rendering to `digits` places, correctly truncated toward
    /// minus infinity; used only for human-readable output.
    pub fn decimal(&self, digits: u32) -> String {
        use num::Integer;
        if self.sign() < 0 {
            return format!("-{}", self.neg().decimal(digits));
        }
        let scale = BigInt::from(10u32).pow(digits);
        let scaled = self.mul_rat(&Rat::from_integer(scale.clone()));
        let n = scaled.floor();
        let (int, frac) = (n.div_floor(&scale), n.mod_floor(&scale));
        let mut f = frac.to_string();
        while (f.len() as u32) < digits {
            f.insert(0, '0');
        }
        format!("{int}.{f}")
    }
}

impl fmt::Display for QuadReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", rat_str(&self.a))
        } else {
            write!(f, "{} + {}*sqrt({})", rat_str(&self.a), rat_str(&self.b), self.disc)
        }
    }
}

fn rat_sign(x: &Rat) -> i32 {
    match x.numer().sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

/// Floor of `b * sqrt(D)` via integer square roots.
fn floor_b_sqrt(b: &Rat, disc: i64) -> BigInt {
    if b.is_zero() {
        return BigInt::zero();
    }
    let p = b.numer();
    let q = b.denom();
    let d = BigInt::from(disc);
    let s2 = p * p * &d; // (p sqrt(D))^2
    let s = big_isqrt(&s2);
    if !b.is_negative() {
        // floor(sqrt(s2)/q): candidate s div q, corrected exactly.
        let mut k = &s / q;
        while (&(&k + 1) * q) * (&(&k + 1) * q) <= s2 {
            k += 1;
        }
        while (&k * q) * (&k * q) > s2 {
            k -= 1;
        }
        k
    } else {
        let pos = floor_b_sqrt(&-b, disc);
        let exact = (&s * &s == s2) && (&s % q).is_zero();
        if exact {
            -pos
        } else {
            -pos - 1
        }
    }
}

/// Continued-fraction expansion of a `QuadReal`; returns the convergent
/// denominators `q_1 < q_2 < ...` up to `max_q` (at most `max_terms` of them).
/// These are the classical best-approximation denominators used as priority
/// candidates by the Diophantine search.
pub fn convergent_denominators(x: &QuadReal, max_q: u64, max_terms: usize) -> Vec<BigInt> {
    let mut out = Vec::new();
    let mut cur = x.clone();
    let (mut q_prev, mut q_cur) = (BigInt::zero(), BigInt::one());
    let cap = BigInt::from(max_q);
    for _ in 0..max_terms {
        let a = cur.floor();
        let q_next = &a * &q_cur + &q_prev;
        if q_next > cap {
            break;
        }
        if q_next > BigInt::zero() {
            out.push(q_next.clone());
        }
        q_prev = q_cur;
        q_cur = q_next;
        let frac = cur.fract();
        if frac.is_zero() {
            break; // rational tail
        }
        cur = match frac.recip() {
            Ok(r) => r,
            Err(_) => break,
        };
    }
    out.dedup();
    out
}
