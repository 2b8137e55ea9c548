//! Hypergeometric series `₁F₁` and `₂F₁` in binary64.

use crate::error::{Error, Result};

const MAX_TERMS: usize = 100_000;

/// Neumaier-compensated running sum.
#[derive(Default, Clone, Copy)]
pub(crate) struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

fn nonpositive_integer(x: f64) -> Option<u64> {
    (x <= 0.0 && x == x.round() && x > -1e15).then(|| (-x) as u64)
}

/// Sums `Σ tₙ` given the term ratio `tₙ₊₁/tₙ`, stopping once terms stagnate
/// below machine precision with a ratio safely under one.
fn sum_series(mut ratio: impl FnMut(usize) -> f64, limit: Option<u64>) -> Result<f64> {
    let mut acc = CompensatedSum::default();
    let mut term = 1.0;
    acc.add(term);
    let mut small = 0;
    for n in 0..MAX_TERMS {
        if let Some(l) = limit {
            if n as u64 >= l {
                return Ok(acc.value());
            }
        }
        let r = ratio(n);
        term *= r;
        acc.add(term);
        if term == 0.0 {
            return Ok(acc.value());
        }
        if term.abs() <= f64::EPSILON * 1e-2 * acc.value().abs() && r.abs() < 1.0 {
            small += 1;
            if small >= 3 {
                return Ok(acc.value());
            }
        } else {
            small = 0;
        }
    }
    Err(Error::Domain(format!("hypergeometric series did not converge in {MAX_TERMS} terms")))
}

pub fn hyp1f1(a: f64, b: f64, x: f64) -> Result<f64> {
    let terminates = nonpositive_integer(a);
    if let Some(pole) = nonpositive_integer(b) {
        if terminates.is_none_or(|t| t > pole) {
            return Err(Error::Domain(format!("₁F₁ has a pole at b = {b}")));
        }
    }
    let nf = |n: usize| n as f64;
    sum_series(|n| (a + nf(n)) / (b + nf(n)) * x / (nf(n) + 1.0), terminates)
}

pub fn hyp2f1(a: f64, b: f64, c: f64, x: f64) -> Result<f64> {
    let terminates = match (nonpositive_integer(a), nonpositive_integer(b)) {
        (Some(p), Some(q)) => Some(p.min(q)),
        (p, q) => p.or(q),
    };
    if let Some(pole) = nonpositive_integer(c) {
        if terminates.is_none_or(|t| t > pole) {
            return Err(Error::Domain(format!("₂F₁ has a pole at c = {c}")));
        }
    }
    if terminates.is_none() && x.abs() >= 1.0 {
        return Err(Error::Domain(format!("₂F₁ series diverges at |x| = {} ≥ 1", x.abs())));
    }
    let nf = |n: usize| n as f64;
    sum_series(
        |n| (a + nf(n)) * (b + nf(n)) / ((c + nf(n)) * (nf(n) + 1.0)) * x,
        terminates,
    )
}
