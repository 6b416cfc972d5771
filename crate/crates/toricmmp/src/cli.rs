//! Command-line entry point: JSON in, JSON report out.  Exit codes: 0 for a
//! positive verdict, 2 for a negative verdict (violations, not-lc,
//! budget-exhausted searches), 1 for input errors.

use crate::adjoint::{
    fg6_pipeline, fg_a1, saturation_check_a1, saturation_check_toric, A1Verdict,
    CharacteristicSequence, Fg6Verdict, FgA1, ToricVerdict,
};
use crate::dioph::{approximate, ApproxOutcome};
use crate::divisor::TorusDivisor;
use crate::exact::{rat_str, QuadReal, Rat};
use crate::io::{self, FanInput};
use crate::mmp::{contract, flip, mori_cone_generators, run_mmp, MmpMode};
use crate::pairs::{classify, lct, nef_threshold, Lct, PairError, SingClass, ToricPair};
use clap::{Parser, Subcommand};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "toricmmp", about = "Exact toric MMP and adjoint-algebra laboratory")]
struct Cli {
    /// Add human-readable decimal renderings next to exact values.
    #[arg(long, global = true)]
    decimal: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Singularity class of a fan-defined pair.
    Classify {
        input: String,
        /// "trivial" or the name of a divisor in the input supplying the
        /// boundary coefficients.
        #[arg(long, default_value = "trivial")]
        pair: String,
    },
    /// Log canonical threshold of a named divisor against the pair.
    Lct {
        input: String,
        #[arg(long, default_value = "trivial")]
        pair: String,
        #[arg(long)]
        divisor: String,
    },
    /// Nef threshold of H against a(K + Delta), with the denominator bound.
    NefThreshold {
        input: String,
        #[arg(long, default_value = "trivial")]
        pair: String,
        #[arg(long = "H")]
        h: String,
        #[arg(long, default_value_t = 1)]
        a: i64,
    },
    /// Strip-vanishing verification of a bivariate polynomial.
    StripVerify {
        input: String,
    },
    /// Run the MMP on a pair, optionally with scaling by a named divisor.
    MmpRun {
        input: String,
        #[arg(long, default_value = "trivial")]
        pair: String,
        #[arg(long)]
        scaling: Option<String>,
        #[arg(long, default_value_t = 100)]
        budget: usize,
    },
    /// Contract the first flipping ray and perform the verified flip.
    Flip {
        input: String,
        #[arg(long, default_value = "trivial")]
        pair: String,
    },
    /// Saturation / finite-generation checks for adjoint sequences.
    AdjointCheck {
        mode: String,
        input: String,
        /// Toric mode only: horizon for the characteristic sequence.
        #[arg(long, default_value_t = 6)]
        horizon: usize,
        /// Search cap for the rationality refutation.
        #[arg(long, default_value_t = 1_000_000)]
        cap: u64,
    },
    /// Approximation certificate search.
    Approx {
        input: String,
        #[arg(long, default_value_t = 100_000)]
        cap: u64,
    },
    /// Regenerate and sanity-check the randomized corpora.
    CorpusTest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match dispatch(&cli) {
        Ok((report, code)) => {
            println!("{}", serde_json::to_string_pretty(&report).expect("serializable report"));
            code
        }
        Err(msg) => {
            eprintln!("error: {msg}");
            1
        }
    }
}

fn dispatch(cli: &Cli) -> Result<(Value, i32), String> {
    match &cli.cmd {
        Cmd::Classify { input, pair } => {
            let p = load_pair(input, pair)?;
            let report = classify(&p);
            let code = i32::from(report.class == SingClass::NotLc) * 2;
            let witnesses: Vec<Value> = report
                .witnesses
                .iter()
                .map(|(v, d)| json!({"valuation": v.coords, "discrepancy": rat_str(d)}))
                .collect();
            Ok((
                json!({
                    "class": report.class.as_str(),
                    "dlt": report.dlt,
                    "witnesses": witnesses,
                }),
                code,
            ))
        }
        Cmd::Lct { input, pair, divisor } => {
            let fan_input = io::load_fan(input).map_err(|e| e.to_string())?;
            let p = pair_from(&fan_input, pair)?;
            let d = fan_input.divisor(divisor).map_err(|e| e.to_string())?;
            let value = lct(&p, d).map_err(|e| e.to_string())?;
            let report = match &value {
                Lct::Finite(c) => json!({"lct": rat_str(c)}),
                Lct::Infinite => json!({"lct": "infinity"}),
            };
            Ok((report, 0))
        }
        Cmd::NefThreshold { input, pair, h, a } => {
            let fan_input = io::load_fan(input).map_err(|e| e.to_string())?;
            let p = pair_from(&fan_input, pair)?;
            let hdiv = fan_input.divisor(h).map_err(|e| e.to_string())?;
            match nef_threshold(&p, hdiv, *a) {
                Ok(t) => Ok((
                    json!({
                        "r": rat_str(&t.r),
                        "u": t.u.to_string(),
                        "v": v_as_number(&t.v),
                        "a": a,
                        "bound": *a * (p.fan.rank as i64 + 1),
                    }),
                    0,
                )),
                Err(PairError::AlreadyNef) => {
                    Ok((json!({"verdict": "already-nef"}), 2))
                }
                Err(e) => Err(e.to_string()),
            }
        }
        Cmd::StripVerify { input } => {
            let s = io::load_strip(input).map_err(|e| e.to_string())?;
            let verdict = crate::pairs::strip_vanishing_verify(
                &s.poly, s.a, &s.r, &s.eps, s.n, s.degree,
            )
            .map_err(|e| e.to_string())?;
            use crate::pairs::StripVerdict::*;
            let (report, code) = match verdict {
                Factor { c, d, multiplicity, bound_ok } => (
                    json!({
                        "verdict": "factor",
                        "c": c.to_string(),
                        "d": d.to_string(),
                        "multiplicity": multiplicity,
                        "bound_ok": bound_ok,
                    }),
                    0,
                ),
                NonVanishing { x, y } => {
                    (json!({"verdict": "non-vanishing", "x": x, "y": y}), 2)
                }
                InsufficientEvidence => (json!({"verdict": "insufficient-evidence"}), 2),
            };
            Ok((report, code))
        }
        Cmd::MmpRun { input, pair, scaling, budget } => {
            let fan_input = io::load_fan(input).map_err(|e| e.to_string())?;
            let p = pair_from(&fan_input, pair)?;
            let mode = match scaling {
                None => MmpMode::Plain,
                Some(name) => MmpMode::Scaling(
                    fan_input.divisor(name).map_err(|e| e.to_string())?.clone(),
                ),
            };
            let trace = run_mmp(&p, &mode, *budget).map_err(|e| e.to_string())?;
            let steps: Vec<Value> = trace
                .steps
                .iter()
                .map(|s| {
                    json!({
                        "kind": s.kind.as_str(),
                        "wall_rays": s.wall_rays,
                        "kd_degree": rat_str(&s.kd_degree),
                        "lambda": s.lambda.as_ref().map(rat_str),
                        "picard_before": s.picard_before,
                        "picard_after": s.picard_after,
                    })
                })
                .collect();
            let code = i32::from(trace.outcome == crate::mmp::MmpOutcome::BudgetExceeded) * 2;
            Ok((
                json!({
                    "outcome": trace.outcome.as_str(),
                    "steps": steps,
                    "final_rays": trace.final_pair.fan.rays.iter()
                        .map(|r| r.coords.clone()).collect::<Vec<_>>(),
                    "base_rank": trace.base.as_ref().map(|b| b.rank),
                }),
                code,
            ))
        }
        Cmd::Flip { input, pair } => {
            let p = load_pair(input, pair)?;
            let gens = mori_cone_generators(&p);
            let ray = gens
                .iter()
                .filter(|g| g.kd_degree < Rat::from_integer(0.into()))
                .find(|g| {
                    g.class.wall.circuit.iter().filter(|(_, c)| c < &0.into()).count() >= 2
                })
                .ok_or("no flipping (K+Delta)-negative extremal ray")?;
            let step = contract(&p, ray).map_err(|e| e.to_string())?;
            let (flipped, report) = flip(&p, &step).map_err(|e| e.to_string())?;
            Ok((
                json!({
                    "cones": flipped.fan.max_cones,
                    "small": report.small,
                    "kd_positive_after": report.kd_positive_after,
                    "relative_picard_one": report.relative_picard_one,
                    "sampled_valuations": report.sampled_valuations,
                    "strict_samples": report.strict_samples,
                }),
                0,
            ))
        }
        Cmd::AdjointCheck { mode, input, horizon, cap } => match mode.as_str() {
            "a1" => {
                let seq = io::load_a1(input).map_err(|e| e.to_string())?;
                let verdict = saturation_check_a1(&seq);
                let mut report = json!({
                    "mode": "a1",
                    "horizon": seq.horizon(),
                    "note": "verdicts are relative to the declared horizon and limit",
                });
                let obj = report.as_object_mut().expect("object");
                let code = match &verdict {
                    A1Verdict::Saturated => {
                        obj.insert("saturation".into(), json!("saturated"));
                        match fg_a1(&seq, *cap) {
                            Ok(FgA1::FinitelyGenerated { v, u, truncation }) => {
                                obj.insert(
                                    "finite_generation".into(),
                                    json!({
                                        "v": v,
                                        "u": u.to_string(),
                                        "truncation": truncation,
                                    }),
                                );
                                0
                            }
                            Ok(FgA1::RationalityRefutation { j }) => {
                                obj.insert(
                                    "finite_generation".into(),
                                    json!({"rationality_refutation_j": j}),
                                );
                                2
                            }
                            Err(e) => {
                                obj.insert("finite_generation".into(), json!(e.to_string()));
                                2
                            }
                        }
                    }
                    A1Verdict::Violation { i, j } => {
                        obj.insert(
                            "saturation".into(),
                            json!({
                                "violation": {"i": i.map_or(json!("limit"), |x| json!(x)), "j": j}
                            }),
                        );
                        2
                    }
                };
                Ok((report, code))
            }
            "toric" => {
                let fan_input = io::load_fan(input).map_err(|e| e.to_string())?;
                let base = fan_input.divisor("base").map_err(|e| e.to_string())?;
                let f = fan_input
                    .divisors
                    .get("F")
                    .cloned()
                    .unwrap_or_else(|| TorusDivisor::zero(&fan_input.fan));
                let seq = CharacteristicSequence::from_divisor(
                    fan_input.fan.clone(),
                    base.clone(),
                    *horizon,
                )
                .map_err(|e| e.to_string())?;
                let verdict =
                    saturation_check_toric(&seq, &f, *horizon).map_err(|e| e.to_string())?;
                let mut report = json!({
                    "mode": "toric",
                    "horizon": horizon,
                    "note": "checked on the single fixed fan only, not on all models",
                });
                let obj = report.as_object_mut().expect("object");
                let code = match verdict {
                    ToricVerdict::Saturated => {
                        obj.insert("saturation".into(), json!("saturated"));
                        let fg = fg6_pipeline(
                            &seq,
                            &f,
                            None,
                            &crate::exact::rat(1, 100),
                            *cap,
                        )
                        .map_err(|e| e.to_string())?;
                        match fg {
                            Fg6Verdict::FGCertificate(j) => {
                                obj.insert("finite_generation".into(), json!({"certificate": j}));
                                0
                            }
                            Fg6Verdict::Inconclusive(h) => {
                                obj.insert(
                                    "finite_generation".into(),
                                    json!({"inconclusive_at": h}),
                                );
                                2
                            }
                            Fg6Verdict::Refutation { j, m } => {
                                obj.insert(
                                    "finite_generation".into(),
                                    json!({
                                        "refutation": {
                                            "j": j,
                                            "m": m.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                                        }
                                    }),
                                );
                                2
                            }
                        }
                    }
                    ToricVerdict::Violation { i, j } => {
                        obj.insert("saturation".into(), json!({"violation": {"i": i, "j": j}}));
                        2
                    }
                };
                Ok((report, code))
            }
            other => Err(format!("unknown adjoint-check mode {other:?}")),
        },
        Cmd::Approx { input, cap } => {
            let inst = io::load_approx(input).map_err(|e| e.to_string())?;
            match approximate(&inst, *cap) {
                ApproxOutcome::Certificate(cert) => {
                    let residual: Vec<Value> = cert
                        .residual
                        .iter()
                        .map(|q| quad_json(q, cli.decimal))
                        .collect();
                    Ok((
                        json!({
                            "j": cert.j,
                            "m": cert.m.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                            "residual": residual,
                            "negative_index": cert.negative_index,
                            "eps": rat_str(&inst.eps),
                            "via_convergent": cert.via_convergent,
                        }),
                        0,
                    ))
                }
                ApproxOutcome::NotFoundUpTo(j) => {
                    Ok((json!({"verdict": "not-found-up-to", "cap": j}), 2))
                }
            }
        }
        Cmd::CorpusTest { seed } => corpus_test(*seed),
    }
}

fn quad_json(q: &QuadReal, decimal: bool) -> Value {
    let mut v = json!({
        "a": rat_str(&q.a),
        "b": rat_str(&q.b),
        "disc": q.disc,
    });
    if decimal {
        v.as_object_mut()
            .expect("object")
            .insert("decimal".into(), json!(q.decimal(12)));
    }
    v
}

fn v_as_number(v: &num::bigint::BigInt) -> Value {
    match i64::try_from(v) {
        Ok(x) => json!(x),
        Err(_) => json!(v.to_string()),
    }
}

fn load_pair(input: &str, pair: &str) -> Result<ToricPair, String> {
    let fan_input = io::load_fan(input).map_err(|e| e.to_string())?;
    pair_from(&fan_input, pair)
}

fn pair_from(fan_input: &FanInput, pair: &str) -> Result<ToricPair, String> {
    if pair == "trivial" {
        return Ok(ToricPair::trivial(fan_input.fan.clone()));
    }
    let d = fan_input.divisor(pair).map_err(|e| e.to_string())?;
    ToricPair::new(fan_input.fan.clone(), d.coeffs.clone()).map_err(|e| e.to_string())
}

/// Quick shape checks over the regenerated corpora; the acceptance test
/// target performs the full criterion evaluations.
fn corpus_test(seed: u64) -> Result<(Value, i32), String> {
    use crate::corpus::*;
    let surfaces = surface_corpus(seed, 100);
    let threefolds = threefold_corpus(seed, 20);
    let strips = strip_corpus(seed, 50);
    let a1_rat = a1_rational_corpus(seed, 200);
    let a1_quad = a1_quadratic_corpus(seed, 50);
    let approx = approx_corpus(seed, 25);
    let fg = fg_corpus(seed, 30);
    let restricted = restricted_corpus(seed, 20);
    let ok = surfaces.iter().all(|s| s.fan.smooth && s.fan.complete)
        && threefolds.iter().all(|s| s.fan.smooth && s.fan.complete);
    Ok((
        json!({
            "seed": seed,
            "surfaces": surfaces.len(),
            "threefolds": threefolds.len(),
            "strip_polynomials": strips.len(),
            "a1_rational": a1_rat.len(),
            "a1_quadratic": a1_quad.len(),
            "approx_instances": approx.len(),
            "fg_fixtures": fg.len(),
            "restricted_fixtures": restricted.len(),
            "valid": ok,
        }),
        i32::from(!ok) * 2,
    ))
}
