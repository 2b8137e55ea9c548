//! The entire functions whose real zeros are the Jacobi-operator spectra.

use super::gamma::recip_gamma;
use super::hyper::CompensatedSum;
use crate::exactseries::Rational;
use crate::rtransform::{to_f64, EnsembleSpec};
use num_traits::{One, ToPrimitive, Zero};

const MAX_TERMS: usize = 20_000;

/// Sums `Σ aₙ / Γ(z+n)` where `aₙ₊₁ = aₙ · ratio(n)` and `a₀ = scale`.
fn reciprocal_gamma_series(z: f64, scale: f64, mut ratio: impl FnMut(usize) -> f64) -> f64 {
    let mut acc = CompensatedSum::default();
    let mut coeff = scale;
    // Before n ≈ −z the factors 1/Γ(z+n) grow, so stagnation is only trusted past that point.
    let settled_after = if z < 0.0 { (-z).ceil() as usize + 2 } else { 2 };
    let mut small = 0;
    for n in 0..MAX_TERMS {
        let term = coeff * recip_gamma(z + n as f64);
        acc.add(term);
        if n > settled_after {
            if term.abs() <= 1e-18 * acc.value().abs() || coeff == 0.0 {
                small += 1;
                if small >= 3 {
                    break;
                }
            } else {
                small = 0;
            }
        }
        coeff *= ratio(n);
    }
    acc.value()
}

/// `Σ γ↑n (−η)ⁿ / (n! Γ(z+n))`, equal to `₁F₁(γ; z; −η) / Γ(z)`.
pub fn planch(gamma: f64, eta: f64, z: f64) -> f64 {
    reciprocal_gamma_series(z, 1.0, |n| {
        let n = n as f64;
        (gamma + n) * (-eta) / (n + 1.0)
    })
}

/// `(1−c)^γ Σ γ↑n (z−η)↑n cⁿ / (n! Γ(z+n))`.
pub fn alpha(gamma: f64, c: f64, eta: f64, z: f64) -> f64 {
    let s = reciprocal_gamma_series(z, 1.0, |n| {
        let n = n as f64;
        (gamma + n) * (z - eta + n) * c / (n + 1.0)
    });
    (1.0 - c).powf(gamma) * s
}

/// The same function as [`alpha`] written as `(1−c)^η Σ (z−γ)↑n η↑n cⁿ / (n! Γ(z+n))`.
pub fn alpha_transformed(gamma: f64, c: f64, eta: f64, z: f64) -> f64 {
    alpha(eta, c, gamma, z)
}

/// Monic degree-`M` polynomial `Σₙ (−M)↑n γ↑n cⁿ / n! · (z+n)↑(M−n)`.
pub fn beta(gamma: f64, c: f64, m: u32, z: f64) -> f64 {
    let m = m as usize;
    let mut acc = CompensatedSum::default();
    let mut coeff = 1.0;
    for n in 0..=m {
        let tail: f64 = (0..m - n).map(|j| z + (n + j) as f64).product();
        acc.add(coeff * tail);
        let nf = n as f64;
        coeff *= (nf - m as f64) * (gamma + nf) * c / (nf + 1.0);
    }
    acc.value()
}

/// [`beta`] evaluated exactly at the binary value of `z`, then rounded once.
pub fn beta_exact(gamma: &Rational, c: &Rational, m: u32, z: f64) -> f64 {
    let Some(zq) = Rational::from_float(z) else { return f64::NAN };
    let m = m as usize;
    let mut acc = Rational::zero();
    let mut coeff = Rational::one();
    for n in 0..=m {
        let mut tail = Rational::one();
        for j in n..m {
            tail *= &zq + Rational::from_integer(j.into());
        }
        acc += &coeff * tail;
        let nq = Rational::from_integer(n.into());
        coeff = coeff * (&nq - Rational::from_integer(m.into())) * (gamma + &nq) * c / (nq + Rational::one());
    }
    acc.to_f64().unwrap_or(f64::NAN)
}

/// Coefficients (ascending powers of `z`) of the polynomial in [`beta`].
pub fn beta_coefficients(gamma: f64, c: f64, m: u32) -> Vec<f64> {
    let m = m as usize;
    let mut out = vec![0.0; m + 1];
    let mut coeff = 1.0;
    for n in 0..=m {
        let mut poly = vec![1.0];
        for j in 0..m - n {
            poly = mul_linear(&poly, (n + j) as f64);
        }
        for (k, p) in poly.iter().enumerate() {
            out[k] += coeff * p;
        }
        let nf = n as f64;
        coeff *= (nf - m as f64) * (gamma + nf) * c / (nf + 1.0);
    }
    out
}

/// `p(z) · (z + a)` on ascending coefficients.
pub(crate) fn mul_linear(p: &[f64], a: f64) -> Vec<f64> {
    let mut out = vec![0.0; p.len() + 1];
    for (k, &pk) in p.iter().enumerate() {
        out[k + 1] += pk;
        out[k] += a * pk;
    }
    out
}

pub fn char_fn(spec: &EnsembleSpec, z: f64) -> f64 {
    match spec {
        EnsembleSpec::Planch { gamma, eta } => planch(to_f64(gamma), to_f64(eta), z),
        EnsembleSpec::Alpha { gamma, c, eta } => alpha(to_f64(gamma), to_f64(c), to_f64(eta), z),
        EnsembleSpec::Beta { gamma, c, m } => beta_exact(gamma, c, *m, z),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectra::gamma::gamma as gamma_fn;
    use crate::spectra::hyper::{hyp1f1, hyp2f1};

    #[test]
    fn planch_matches_hypergeometric_form() {
        for &(g, e, z) in &[(2.0, 1.0, 0.7), (1.5, 0.5, 3.2), (2.0, 0.5, 1.3)] {
            let direct = hyp1f1(g, z, -e).unwrap() / gamma_fn(z);
            assert!((planch(g, e, z) - direct).abs() < 1e-12, "{g} {e} {z}");
        }
    }

    #[test]
    fn alpha_forms_agree() {
        for &(g, c, e, z) in &[(1.0, 0.5, 1.0, 0.3), (2.0, 0.3, 1.0, 2.5), (0.7, 0.6, 1.8, -1.4), (1.3, 0.2, 0.4, -3.7)] {
            let a = alpha(g, c, e, z);
            let b = alpha_transformed(g, c, e, z);
            assert!((a - b).abs() < 1e-10 * a.abs().max(1.0), "{a} vs {b}");
        }
    }

    #[test]
    fn alpha_matches_two_f_one_for_positive_z() {
        let (g, c, e, z): (f64, f64, f64, f64) = (1.5, 0.4, 0.8, 2.2);
        let direct = (1.0 - c).powf(e) * hyp2f1(z - g, e, z, c).unwrap() / gamma_fn(z);
        assert!((alpha(g, c, e, z) - direct).abs() < 1e-12);
    }

    #[test]
    fn beta_small_cases() {
        assert!((beta(1.0, 0.5, 1, 0.9) - 0.4).abs() < 1e-15);
        let coeffs = beta_coefficients(1.7, 0.35, 5);
        assert!((coeffs[5] - 1.0).abs() < 1e-15);
        let z = -1.3;
        let horner = coeffs.iter().rev().fold(0.0, |acc, &a| acc * z + a);
        assert!((horner - beta(1.7, 0.35, 5, z)).abs() < 1e-12);
        let q = |n: i64, d: i64| Rational::new(n.into(), d.into());
        assert!((beta_exact(&q(17, 10), &q(7, 20), 5, z) - beta(1.7, 0.35, 5, z)).abs() < 1e-12);
        assert_eq!(beta_exact(&q(1, 1), &q(1, 2), 1, 0.5), 0.0);
    }

    #[test]
    fn planch_near_zero_eta_has_integer_zeros() {
        for k in 0..5 {
            assert!(planch(1.0, 1e-12, -(k as f64)).abs() < 1e-9);
        }
    }
}
