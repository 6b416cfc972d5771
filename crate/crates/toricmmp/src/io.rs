//! JSON input schemas: fans with named divisors, adjoint sequences on the
//! affine line, approximation instances, and strip-verifier problems.  All
//! numbers travel as exact "p/q" strings or quadratic triples.

use crate::adjoint::{A1Limit, AdjointError, AdjointSequenceA1};
use crate::dioph::{ApproxError, ApproxInstance};
use crate::divisor::TorusDivisor;
use crate::exact::{parse_rat, ExactError, QuadReal, Rat};
use crate::fan::{Fan, FanError};
use crate::lattice::LatticeVec;
use crate::pairs::Slope;
use crate::poly::BivarPoly;
use serde::Deserialize;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed JSON at line {line}, column {column}: {message}")]
    Json {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("bad number literal {0:?}: {1}")]
    BadNumber(String, ExactError),
    #[error(transparent)]
    Fan(#[from] FanError),
    #[error(transparent)]
    Adjoint(#[from] AdjointError),
    #[error(transparent)]
    Approx(#[from] ApproxError),
    #[error("unknown divisor {0:?}")]
    UnknownDivisor(String),
    #[error("{0}")]
    Invalid(String),
}

fn read_to_string(path: &str) -> Result<String, IoError> {
    std::fs::read_to_string(path).map_err(|source| IoError::Read {
        path: path.to_string(),
        source,
    })
}

fn from_json<T: serde::de::DeserializeOwned>(text: &str) -> Result<T, IoError> {
    serde_json::from_str(text).map_err(|e| IoError::Json {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

fn rat_lit(s: &str) -> Result<Rat, IoError> {
    parse_rat(s).map_err(|e| IoError::BadNumber(s.to_string(), e))
}

/// Either a rational literal or a quadratic triple `a + b sqrt(disc)`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub enum NumberFile {
    #[serde(rename = "rat")]
    Rat(String),
    #[serde(rename = "quad")]
    Quad { a: String, b: String, disc: i64 },
}

impl NumberFile {
    pub fn to_quad(&self, default_disc: i64) -> Result<QuadReal, IoError> {
        match self {
            NumberFile::Rat(s) => Ok(QuadReal::from_rat(rat_lit(s)?, default_disc)),
            NumberFile::Quad { a, b, disc } => QuadReal::new(rat_lit(a)?, rat_lit(b)?, *disc)
                .map_err(|e| IoError::BadNumber(format!("{a} + {b} sqrt({disc})"), e)),
        }
    }
}

#[derive(Debug, Deserialize)]
struct FanFile {
    rank: usize,
    rays: Vec<Vec<i64>>,
    cones: Vec<Vec<usize>>,
    #[serde(default)]
    divisors: BTreeMap<String, Vec<String>>,
}

/// A fan plus its named divisors.
#[derive(Debug, Clone)]
pub struct FanInput {
    pub fan: Fan,
    pub divisors: BTreeMap<String, TorusDivisor>,
}

impl FanInput {
    pub fn divisor(&self, name: &str) -> Result<&TorusDivisor, IoError> {
        self.divisors
            .get(name)
            .ok_or_else(|| IoError::UnknownDivisor(name.to_string()))
    }
}

pub fn load_fan(path: &str) -> Result<FanInput, IoError> {
    parse_fan(&read_to_string(path)?)
}

pub fn parse_fan(text: &str) -> Result<FanInput, IoError> {
    let file: FanFile = from_json(text)?;
    let rays = file.rays.into_iter().map(LatticeVec::new).collect();
    let fan = Fan::new(file.rank, rays, file.cones)?;
    let mut divisors = BTreeMap::new();
    for (name, coeffs) in file.divisors {
        let coeffs: Vec<Rat> = coeffs.iter().map(|s| rat_lit(s)).collect::<Result<_, _>>()?;
        divisors.insert(name, TorusDivisor::new(&fan, coeffs)?);
    }
    Ok(FanInput { fan, divisors })
}

#[derive(Debug, Deserialize)]
struct A1File {
    b: String,
    limit: NumberFile,
    table: Vec<String>,
    horizon: usize,
}

pub fn load_a1(path: &str) -> Result<AdjointSequenceA1, IoError> {
    parse_a1(&read_to_string(path)?)
}

pub fn parse_a1(text: &str) -> Result<AdjointSequenceA1, IoError> {
    let file: A1File = from_json(text)?;
    if file.table.len() < file.horizon {
        return Err(IoError::Invalid(format!(
            "table has {} entries but the horizon is {}",
            file.table.len(),
            file.horizon
        )));
    }
    let b = rat_lit(&file.b)?;
    let table: Vec<Rat> = file.table[..file.horizon]
        .iter()
        .map(|s| rat_lit(s))
        .collect::<Result<_, _>>()?;
    let limit = match &file.limit {
        NumberFile::Rat(s) => A1Limit::Rational(rat_lit(s)?),
        q @ NumberFile::Quad { .. } => A1Limit::Quadratic(q.to_quad(2)?),
    };
    Ok(AdjointSequenceA1::new(b, table, limit)?)
}

#[derive(Debug, Deserialize)]
struct ApproxFile {
    e: Vec<Vec<i64>>,
    d: Vec<NumberFile>,
    eps: String,
}

pub fn load_approx(path: &str) -> Result<ApproxInstance, IoError> {
    parse_approx(&read_to_string(path)?)
}

pub fn parse_approx(text: &str) -> Result<ApproxInstance, IoError> {
    let file: ApproxFile = from_json(text)?;
    let disc = file
        .d
        .iter()
        .find_map(|n| match n {
            NumberFile::Quad { disc, .. } => Some(*disc),
            NumberFile::Rat(_) => None,
        })
        .unwrap_or(2);
    let d: Vec<QuadReal> = file
        .d
        .iter()
        .map(|n| n.to_quad(disc))
        .collect::<Result<_, _>>()?;
    let eps = rat_lit(&file.eps)?;
    Ok(ApproxInstance::new(file.e, d, eps)?)
}

#[derive(Debug, Deserialize)]
struct StripFile {
    /// Terms as `[i, j, "coeff"]` for `coeff * x^i y^j`.
    poly: Vec<(u32, u32, String)>,
    a: i64,
    r: NumberFile,
    eps: String,
    n: i64,
    degree: u32,
}

/// A strip-verification problem assembled from JSON.
#[derive(Debug, Clone)]
pub struct StripInput {
    pub poly: BivarPoly,
    pub a: i64,
    pub r: Slope,
    pub eps: Rat,
    pub n: i64,
    pub degree: u32,
}

pub fn load_strip(path: &str) -> Result<StripInput, IoError> {
    parse_strip(&read_to_string(path)?)
}

pub fn parse_strip(text: &str) -> Result<StripInput, IoError> {
    let file: StripFile = from_json(text)?;
    let mut poly = BivarPoly::zero();
    for (i, j, c) in &file.poly {
        let cur = poly.coeffs.get(&(*i, *j)).cloned().unwrap_or_else(num::Zero::zero);
        poly.set(*i, *j, cur + rat_lit(c)?);
    }
    let r = match &file.r {
        NumberFile::Rat(s) => Slope::Rational(rat_lit(s)?),
        q @ NumberFile::Quad { .. } => {
            let q = q.to_quad(2)?;
            if q.is_rational() {
                Slope::Rational(q.a.clone())
            } else {
                Slope::Quadratic(q)
            }
        }
    };
    Ok(StripInput {
        poly,
        a: file.a,
        r,
        eps: rat_lit(&file.eps)?,
        n: file.n,
        degree: file.degree,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn fan_roundtrip() {
        let text = r#"{
            "rank": 2,
            "rays": [[1,0],[0,1],[-1,-1]],
            "cones": [[0,1],[1,2],[0,2]],
            "divisors": {"line": ["0","0","1"], "half": ["1/2","0","0"]}
        }"#;
        let input = parse_fan(text).unwrap();
        assert!(input.fan.complete && input.fan.smooth);
        assert_eq!(input.divisor("line").unwrap().coeffs[2], rat(1, 1));
        assert_eq!(input.divisor("half").unwrap().coeffs[0], rat(1, 2));
        assert!(matches!(input.divisor("no"), Err(IoError::UnknownDivisor(_))));
    }

    #[test]
    fn json_errors_carry_position() {
        let err = parse_fan("{\n  \"rank\": oops").unwrap_err();
        match err {
            IoError::Json { line, column, .. } => {
                assert_eq!(line, 2);
                assert!(column > 0);
            }
            other => panic!("unexpected: {other}"),
        }
    }

    #[test]
    fn a1_and_approx() {
        let a1 = parse_a1(
            r#"{"b": "1/2", "limit": {"rat": "3/2"}, "table": ["3/2","3/2","3/2"], "horizon": 3}"#,
        )
        .unwrap();
        assert_eq!(a1.q(), 2);
        let quad = parse_a1(
            r#"{"b": "1/2", "limit": {"quad": {"a":"0","b":"1/2","disc":2}}, "table": ["1/2"], "horizon": 1}"#,
        )
        .unwrap();
        assert!(!quad.limit.is_rational());

        let inst = parse_approx(
            r#"{"e": [[1]], "d": [{"quad": {"a":"-1","b":"1","disc":2}}], "eps": "1/10"}"#,
        )
        .unwrap();
        assert_eq!(inst.eps, rat(1, 10));
        assert!(parse_approx(r#"{"e": [[1]], "d": [{"rat": "1/2"}], "eps": "1/10"}"#).is_err());
    }

    #[test]
    fn strip_input() {
        let s = parse_strip(
            r#"{"poly": [[1,0,"1"],[0,1,"-1"]], "a": 1, "r": {"rat":"1"}, "eps": "1/2", "n": 50, "degree": 1}"#,
        )
        .unwrap();
        assert_eq!(s.poly.degree(), 1);
        assert!(matches!(s.r, Slope::Rational(_)));
    }
}
