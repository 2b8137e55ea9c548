//! Row-shape shifted Jack polynomials `Q*₍ₖ₎` and the identities they satisfy.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::cumulants::{cumulants_from_moments, MomentVector};
use crate::error::{Error, Result};
use crate::exactseries::{binomial, factorial, format_rational, rising, Rational};
use crate::rtransform::{kappa_to_c, to_f64};
use crate::spectra::gamma::ln_gamma;

/// Default cap on the number of index tuples summed by [`qstar_row`].
pub const DEFAULT_TUPLE_BUDGET: u64 = 2_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowQStarInput {
    pub x: Vec<Rational>,
    pub theta: Rational,
    pub k: usize,
}

impl RowQStarInput {
    pub fn new(x: Vec<Rational>, theta: Rational, k: usize) -> Result<Self> {
        if x.is_empty() {
            return Err(Error::Precondition("need at least one variable".into()));
        }
        if !theta.is_positive() {
            return Err(Error::Parameter(format!("theta must be positive, got {}", format_rational(&theta))));
        }
        Ok(RowQStarInput { x, theta, k })
    }
}

fn int(n: usize) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `Q*₍ₖ₎` as the literal sum over weakly increasing tuples `i₁ ≤ … ≤ iₖ` of
/// `Π θ↑mₗ/mₗ! · (x_{i₁} − k + 1) ⋯ (x_{i_{k−1}} − 1) x_{iₖ}`.
pub fn qstar_row(input: &RowQStarInput) -> Result<Rational> {
    qstar_row_budget(input, DEFAULT_TUPLE_BUDGET)
}

pub fn qstar_row_budget(input: &RowQStarInput, budget: u64) -> Result<Rational> {
    let n = input.x.len();
    let k = input.k;
    let tuples = binomial(n + k - 1, k);
    if tuples > BigInt::from(budget) {
        return Err(Error::ResourceGuard(format!(
            "Q*_({k}) in {n} variables sums {tuples} tuples, budget is {budget}"
        )));
    }
    let weights: Vec<Rational> = (0..=k)
        .map(|m| rising(&input.theta, m) / Rational::from_integer(factorial(m)))
        .collect();
    let mut total = Rational::zero();
    let mut tuple = vec![0usize; k];
    fn rec(
        pos: usize,
        start: usize,
        tuple: &mut Vec<usize>,
        input: &RowQStarInput,
        weights: &[Rational],
        total: &mut Rational,
    ) {
        let k = tuple.len();
        if pos == k {
            let mut w = Rational::one();
            let mut run = 0;
            for p in 0..k {
                run += 1;
                if p + 1 == k || tuple[p + 1] != tuple[p] {
                    w *= &weights[run];
                    run = 0;
                }
                w *= &input.x[tuple[p]] - int(k - 1 - p);
            }
            *total += w;
            return;
        }
        for i in start..input.x.len() {
            tuple[pos] = i;
            rec(pos + 1, i, tuple, input, weights, total);
        }
    }
    rec(0, 0, &mut tuple, input, &weights, &mut total);
    Ok(total)
}

/// `Q*₍₀₎, …, Q*₍ₖ_max₎` at once. Filling tuple positions from the right, the factor at
/// distance `s` from the end is `(x − s)` whatever `k` is, which gives an `O(N k²)` recursion.
pub fn qstar_rows(x: &[Rational], theta: &Rational, k_max: usize) -> Vec<Rational> {
    let weights: Vec<Rational> = (0..=k_max)
        .map(|m| rising(theta, m) / Rational::from_integer(factorial(m)))
        .collect();
    let mut d = vec![Rational::zero(); k_max + 1];
    d[0] = Rational::one();
    for xi in x.iter().rev() {
        let mut next = d.clone();
        for (j, slot) in next.iter_mut().enumerate().skip(1) {
            let mut falling = Rational::one();
            for m in 1..=j {
                // Positions j−m .. j−1 from the end get index i.
                falling *= xi - int(j - m);
                if falling.is_zero() {
                    break;
                }
                *slot += &d[j - m] * &weights[m] * &falling;
            }
        }
        d = next;
    }
    d
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GammaProductReport {
    pub k_max: usize,
    pub lhs: f64,
    pub rhs: f64,
    pub abs_err: f64,
    pub tol: f64,
    pub pass: bool,
}

/// Compares `Σ_{k ≤ k_max} (−1)ᵏ Q*₍ₖ₎(x; θ) / z↑k` with
/// `Πᵢ Γ(xᵢ+z−iθ) Γ(z−(i−1)θ) / (Γ(xᵢ+z−(i−1)θ) Γ(z−iθ))`.
pub fn gamma_product_check(
    x: &[Rational],
    theta: &Rational,
    z: &Rational,
    k_max: usize,
    tol: f64,
) -> Result<GammaProductReport> {
    if x.is_empty() {
        return Err(Error::Precondition("need at least one variable".into()));
    }
    if !theta.is_positive() {
        return Err(Error::Parameter(format!("theta must be positive, got {}", format_rational(theta))));
    }
    let max_abs = x.iter().map(|v| v.abs()).max().expect("nonempty");
    let edge = int(x.len()) * theta + &max_abs;
    if z <= &edge {
        return Err(Error::Precondition(format!(
            "z = {} must exceed Nθ + max|xᵢ| = {}",
            format_rational(z),
            format_rational(&edge)
        )));
    }
    let q = qstar_rows(x, theta, k_max);
    let mut exact = Rational::zero();
    for (k, qk) in q.iter().enumerate() {
        let term = qk / rising(z, k);
        if k % 2 == 0 {
            exact += term;
        } else {
            exact -= term;
        }
    }
    let lhs = exact.to_f64().unwrap_or(f64::NAN);
    let (zf, th) = (to_f64(z), to_f64(theta));
    let mut log_rhs = 0.0;
    for (idx, xi) in x.iter().enumerate() {
        let i = (idx + 1) as f64;
        let xf = to_f64(xi);
        log_rhs += ln_gamma(xf + zf - i * th) + ln_gamma(zf - (i - 1.0) * th)
            - ln_gamma(xf + zf - (i - 1.0) * th)
            - ln_gamma(zf - i * th);
    }
    let rhs = log_rhs.exp();
    let abs_err = (lhs - rhs).abs();
    Ok(GammaProductReport {
        k_max,
        lhs,
        rhs,
        abs_err,
        tol,
        pass: abs_err < tol,
    })
}

/// `λ` with each part repeated about `N/n` times; the first `N mod n` parts get one extra copy.
pub fn replicate(lambda: &[u64], n: usize, big_n: usize) -> Vec<u64> {
    let base = big_n / n;
    let extra = big_n % n;
    let mut out = Vec::with_capacity(big_n);
    for j in 0..n {
        let part = lambda.get(j).copied().unwrap_or(0);
        let copies = base + usize::from(j < extra);
        out.extend(std::iter::repeat_n(part, copies));
    }
    out
}

/// Limit moments `m_k = Σⱼ ∫_{(j−1)/n}^{j/n} (λⱼ − γx)^k dx` of the replicated partitions.
pub fn replicated_moments(lambda: &[u64], n: usize, gamma: &Rational, k_max: usize) -> MomentVector {
    let m = (1..=k_max)
        .map(|k| {
            let mut acc = Rational::zero();
            for j in 1..=n {
                let part = int(lambda.get(j - 1).copied().unwrap_or(0) as usize);
                let hi = &part - gamma * int(j - 1) / int(n);
                let lo = &part - gamma * int(j) / int(n);
                acc += num_traits::pow(hi, k + 1) - num_traits::pow(lo, k + 1);
            }
            acc / (gamma * int(k + 1))
        })
        .collect();
    MomentVector::new(m)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CkLimitRow {
    #[serde(rename = "N")]
    pub big_n: usize,
    pub qstar: Vec<f64>,
    pub max_error: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CkLimitReport {
    pub gamma: String,
    pub lambda: Vec<u64>,
    pub n: usize,
    /// Predicted `c₁..c_k` as exact rationals.
    pub predicted: Vec<String>,
    pub rows: Vec<CkLimitRow>,
    pub decreasing: bool,
}

/// Evaluates `Q*₍ₖ₎(λₙ⁽ᴺ⁾; γ/N)` along an `N` ladder and compares with the predicted `cₖ`.
pub fn ck_limit_experiment(
    lambda: &[u64],
    n: usize,
    n_list: &[usize],
    gamma: &Rational,
    k_max: usize,
) -> Result<CkLimitReport> {
    if n == 0 || lambda.len() > n {
        return Err(Error::Precondition(format!(
            "λ has {} parts, needs n ≥ that and n ≥ 1 (n = {n})",
            lambda.len()
        )));
    }
    if lambda.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::Precondition("λ must be weakly decreasing".into()));
    }
    if k_max == 0 {
        return Err(Error::Precondition("k_max must be at least 1".into()));
    }
    let moments = replicated_moments(lambda, n, gamma, k_max);
    let kappa = cumulants_from_moments(&moments, gamma, k_max)?;
    let predicted = kappa_to_c(&kappa, k_max)?.c;
    let predicted_f: Vec<f64> = predicted.iter().map(to_f64).collect();
    let mut rows = Vec::with_capacity(n_list.len());
    for &big_n in n_list {
        if big_n == 0 {
            return Err(Error::Precondition("N must be positive".into()));
        }
        let parts = replicate(lambda, n, big_n);
        let x: Vec<Rational> = parts.iter().map(|&p| int(p as usize)).collect();
        let theta = gamma / int(big_n);
        let q: Vec<f64> = qstar_rows(&x, &theta, k_max)[1..].iter().map(to_f64).collect();
        let max_error = q
            .iter()
            .zip(&predicted_f)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        rows.push(CkLimitRow { big_n, qstar: q, max_error });
    }
    let decreasing = rows.windows(2).all(|w| w[1].max_error <= w[0].max_error);
    Ok(CkLimitReport {
        gamma: format_rational(gamma),
        lambda: lambda.to_vec(),
        n,
        predicted: predicted.iter().map(format_rational).collect(),
        rows,
        decreasing,
    })
}
