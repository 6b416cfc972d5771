//! Exact-arithmetic toric geometry engine: fans, divisors, singularities of
//! pairs, the minimal model program on torus-invariant data, adjoint-algebra
//! finite generation, and quadratic-irrational Diophantine approximation.

pub mod adjoint;
pub mod cli;
pub mod corpus;
pub mod dioph;
pub mod divisor;
pub mod exact;
pub mod fan;
pub mod io;
pub mod lattice;
pub mod lp;
pub mod mmp;
pub mod pairs;
pub mod poly;

pub use pairs::ToricPair;

/// CLI entry point; returns the process exit code.
pub fn run() -> i32 {
    cli::run(std::env::args())
}
