//! Exact-rational truncated formal power series.
//!
//! Series carry an explicit [`Basis`] tag and a truncation order `K`
//! (`K + 1` stored coefficients). Nothing in this module rounds.

mod rational;
mod series;

pub use rational::{
    binomial, factorial, format_rational, parse_rational, rational_str, rational_vec_str, rising,
    Rational,
};
pub use series::{bernoulli, bernoulli_kernel, Basis, Series};

/// Default truncation order for series-level computations.
pub const DEFAULT_ORDER: usize = 12;
