//! The functional equations linking cumulants `κ`, the sequence `c`, and moments `m`,
//! together with the cumulants of the three pure Jack families.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::cumulants::{moments_from_cumulants, CumulantVector, MomentVector};
use crate::error::{Error, Result};
use crate::exactseries::{
    bernoulli_kernel, factorial, format_rational, rational_str, rational_vec_str, rising, Basis,
    Rational, Series,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Planch,
    Alpha,
    Beta,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Planch => "planch",
            Family::Alpha => "alpha",
            Family::Beta => "beta",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum EnsembleSpec {
    Planch {
        #[serde(with = "rational_str")]
        gamma: Rational,
        #[serde(with = "rational_str")]
        eta: Rational,
    },
    Alpha {
        #[serde(with = "rational_str")]
        gamma: Rational,
        #[serde(with = "rational_str")]
        c: Rational,
        #[serde(with = "rational_str")]
        eta: Rational,
    },
    Beta {
        #[serde(with = "rational_str")]
        gamma: Rational,
        #[serde(with = "rational_str")]
        c: Rational,
        #[serde(rename = "M")]
        m: u32,
    },
}

fn positive(name: &str, x: &Rational) -> Result<()> {
    if !x.is_positive() {
        return Err(Error::Parameter(format!("{name} must be positive, got {}", format_rational(x))));
    }
    Ok(())
}

fn unit_open(x: &Rational) -> Result<()> {
    if !x.is_positive() || x >= &Rational::one() {
        return Err(Error::Parameter(format!("c must lie in (0, 1), got {}", format_rational(x))));
    }
    Ok(())
}

impl EnsembleSpec {
    pub fn planch(gamma: Rational, eta: Rational) -> Result<Self> {
        positive("gamma", &gamma)?;
        positive("eta", &eta)?;
        Ok(EnsembleSpec::Planch { gamma, eta })
    }

    pub fn alpha(gamma: Rational, c: Rational, eta: Rational) -> Result<Self> {
        positive("gamma", &gamma)?;
        positive("eta", &eta)?;
        unit_open(&c)?;
        Ok(EnsembleSpec::Alpha { gamma, c, eta })
    }

    pub fn beta(gamma: Rational, c: Rational, m: u32) -> Result<Self> {
        positive("gamma", &gamma)?;
        unit_open(&c)?;
        if m == 0 {
            return Err(Error::Parameter("M must be at least 1".into()));
        }
        Ok(EnsembleSpec::Beta { gamma, c, m })
    }

    /// Re-checks parameter ranges, e.g. after deserialization.
    pub fn validate(&self) -> Result<()> {
        match self.clone() {
            EnsembleSpec::Planch { gamma, eta } => EnsembleSpec::planch(gamma, eta).map(drop),
            EnsembleSpec::Alpha { gamma, c, eta } => EnsembleSpec::alpha(gamma, c, eta).map(drop),
            EnsembleSpec::Beta { gamma, c, m } => EnsembleSpec::beta(gamma, c, m).map(drop),
        }
    }

    pub fn family(&self) -> Family {
        match self {
            EnsembleSpec::Planch { .. } => Family::Planch,
            EnsembleSpec::Alpha { .. } => Family::Alpha,
            EnsembleSpec::Beta { .. } => Family::Beta,
        }
    }

    pub fn gamma(&self) -> &Rational {
        match self {
            EnsembleSpec::Planch { gamma, .. }
            | EnsembleSpec::Alpha { gamma, .. }
            | EnsembleSpec::Beta { gamma, .. } => gamma,
        }
    }

    pub fn gamma_f64(&self) -> f64 {
        to_f64(self.gamma())
    }
}

pub(crate) fn to_f64(x: &Rational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// The sequence `c₁, c₂, ...` of the cumulant functional equation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CSequence {
    #[serde(with = "rational_vec_str")]
    pub c: Vec<Rational>,
}

fn int(n: usize) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

fn fact(n: usize) -> Rational {
    Rational::from_integer(factorial(n))
}

fn sign(n: usize) -> Rational {
    if n % 2 == 0 {
        Rational::one()
    } else {
        -Rational::one()
    }
}

/// Exact `κ₁..κ_{n_max}` of the family's limit measure.
pub fn family_cumulants(spec: &EnsembleSpec, n_max: usize) -> CumulantVector {
    let kappa = (1..=n_max)
        .map(|n| match spec {
            EnsembleSpec::Planch { eta, .. } => {
                if n == 1 {
                    eta.clone()
                } else {
                    Rational::zero()
                }
            }
            EnsembleSpec::Alpha { c, eta, .. } => {
                let ratio = c / (Rational::one() - c);
                eta * num_traits::pow(ratio, n)
            }
            EnsembleSpec::Beta { c, m, .. } => {
                sign(n - 1) * Rational::from_integer(BigInt::from(*m)) * num_traits::pow(c.clone(), n)
            }
        })
        .collect();
    CumulantVector::new(spec.gamma().clone(), kappa).expect("validated spec has gamma > 0")
}

fn check_gamma(gamma: &Rational) -> Result<()> {
    if !gamma.is_positive() {
        return Err(Error::Parameter(format!("gamma must be positive, got {}", format_rational(gamma))));
    }
    Ok(())
}

/// `cₙ = γ↑n · [zⁿ] exp(Σ κₖ zᵏ / k)`.
pub fn kappa_to_c(kv: &CumulantVector, k: usize) -> Result<CSequence> {
    if kv.kappa().len() < k {
        return Err(Error::Precondition(format!(
            "{k} terms need {k} cumulants, only {} given",
            kv.kappa().len()
        )));
    }
    let mut coeffs = vec![Rational::zero(); k + 1];
    for n in 1..=k {
        coeffs[n] = &kv.kappa()[n - 1] / int(n);
    }
    let e = Series::from_coeffs(Basis::ZPowers, coeffs, k).exp()?;
    let c = (1..=k).map(|n| e.coeff(n) * rising(kv.gamma(), n)).collect();
    Ok(CSequence { c })
}

pub fn c_to_kappa(cs: &CSequence, gamma: &Rational, k: usize) -> Result<CumulantVector> {
    check_gamma(gamma)?;
    if cs.c.len() < k {
        return Err(Error::Precondition(format!("{k} cumulants need {k} terms of c, only {} given", cs.c.len())));
    }
    let mut coeffs = vec![Rational::one(); k + 1];
    for n in 1..=k {
        coeffs[n] = &cs.c[n - 1] / rising(gamma, n);
    }
    let l = Series::from_coeffs(Basis::ZPowers, coeffs, k).log()?;
    let kappa = (1..=k).map(|n| l.coeff(n) * int(n)).collect();
    CumulantVector::new(gamma.clone(), kappa)
}

/// `(e^{γt} − 1)/t` in exponential coefficients: `γ^{n+1}/(n+1)`.
fn exp_quotient(gamma: &Rational, order: usize) -> Series {
    let coeffs = (0..=order)
        .map(|n| num_traits::pow(gamma.clone(), n + 1) / int(n + 1))
        .collect();
    Series::from_coeffs(Basis::TPowers, coeffs, order)
}

/// `1 − e^{−t}`.
fn one_minus_exp_neg(order: usize) -> Series {
    let coeffs = (0..=order)
        .map(|n| if n == 0 { Rational::zero() } else { -sign(n) })
        .collect();
    Series::from_coeffs(Basis::TPowers, coeffs, order)
}

/// `1 + Σ (−1)ⁿ cₙ / z↑n` re-expanded in powers of `1/z`, up to `z^{-k}`.
fn raising_side(cs: &CSequence, k: usize) -> Result<Series> {
    let mut coeffs = vec![Rational::one(); k + 1];
    for n in 1..=k {
        coeffs[n] = sign(n) * &cs.c[n - 1];
    }
    Series::from_coeffs(Basis::RaisingInv, coeffs, k).raising_inv_to_zinv()
}

/// Inverse of [`raising_side`]: reads `cₙ` back from `1 + Σ (−1)ⁿ cₙ / z↑n`.
fn c_from_raising_side(a: &Series) -> Result<CSequence> {
    let r = a.zinv_to_raising_inv()?;
    Ok(CSequence {
        c: (1..=r.order()).map(|n| sign(n) * r.coeff(n)).collect(),
    })
}

/// `M(−t) = Σ (−1)ⁿ mₙ tⁿ/n!` with `m₀ = 1`.
fn moment_egf(mv: &MomentVector, order: usize) -> Series {
    let coeffs = (0..=order)
        .map(|n| if n == 0 { Rational::one() } else { sign(n) * &mv.m[n - 1] })
        .collect();
    Series::from_coeffs(Basis::TPowers, coeffs, order)
}

fn moments_from_egf(egf: &Series, lmax: usize) -> MomentVector {
    MomentVector::new((1..=lmax).map(|n| sign(n) * egf.coeff(n)).collect())
}

fn check_lengths(have: usize, need: usize, what: &str) -> Result<()> {
    if need == 0 {
        return Err(Error::Precondition("need at least one term".into()));
    }
    if have < need {
        return Err(Error::Precondition(format!("{need} terms need {need} {what}, only {have} given")));
    }
    Ok(())
}

/// Moments `m₁..m_lmax` from `c` through the logarithmic form
/// `ln(1 + Σ(−1)ⁿcₙ/z↑n) = L̃{(γM(−t) − (e^{γt}−1)/t) / (1 − e^{−t})}`.
pub fn c_to_m(cs: &CSequence, gamma: &Rational, lmax: usize) -> Result<MomentVector> {
    check_gamma(gamma)?;
    check_lengths(cs.c.len(), lmax, "terms of c")?;
    let log_a = raising_side(cs, lmax)?.log()?;
    // The top coefficient of g only ever meets the zero constant of 1 − e^{−t}, so padding is exact.
    let g = log_a.formal_laplace_inv()?.truncate(lmax);
    let m_neg = exp_quotient(gamma, lmax)
        .add(&g.mul(&one_minus_exp_neg(lmax))?)?
        .scale(&gamma.recip());
    Ok(moments_from_egf(&m_neg, lmax))
}

pub fn m_to_c(mv: &MomentVector, gamma: &Rational, k: usize) -> Result<CSequence> {
    check_gamma(gamma)?;
    check_lengths(mv.m.len(), k, "moments")?;
    let h = moment_egf(mv, k).scale(gamma).sub(&exp_quotient(gamma, k))?;
    if !h.coeff(0).is_zero() {
        return Err(Error::Precondition("γM(0) − γ must vanish".into()));
    }
    let g = h.shifted_div(&one_minus_exp_neg(k))?;
    let a = g.formal_laplace()?.exp()?;
    c_from_raising_side(&a)
}

/// `S(t) = Σ_{n≥1} ((−1)ⁿ mₙ/n! − γⁿ/(n+1)!) t^{n−1}` in exponential coefficients, order `lmax − 1`.
fn kernel_partner(mv: &MomentVector, gamma: &Rational, lmax: usize) -> Series {
    let coeffs = (1..=lmax)
        .map(|n| {
            let ord = sign(n) * &mv.m[n - 1] / fact(n) - num_traits::pow(gamma.clone(), n) / fact(n + 1);
            ord * fact(n - 1)
        })
        .collect();
    Series::from_coeffs(Basis::TPowers, coeffs, lmax - 1)
}

/// Moments from `c` through the exponential form
/// `1 + Σ(−1)ⁿcₙ/z↑n = exp(γ L̃{ t/(1−e^{−t}) · S(t) })`.
pub fn c_to_m_kernel(cs: &CSequence, gamma: &Rational, lmax: usize) -> Result<MomentVector> {
    check_gamma(gamma)?;
    check_lengths(cs.c.len(), lmax, "terms of c")?;
    let log_a = raising_side(cs, lmax)?.log()?;
    let product = log_a.formal_laplace_inv()?.scale(&gamma.recip());
    let s = product.div(&bernoulli_kernel(lmax - 1))?;
    let m = (1..=lmax)
        .map(|n| {
            let ord = s.coeff(n - 1) / fact(n - 1);
            sign(n) * fact(n) * (ord + num_traits::pow(gamma.clone(), n) / fact(n + 1))
        })
        .collect();
    Ok(MomentVector::new(m))
}

pub fn m_to_c_kernel(mv: &MomentVector, gamma: &Rational, k: usize) -> Result<CSequence> {
    check_gamma(gamma)?;
    check_lengths(mv.m.len(), k, "moments")?;
    let inner = bernoulli_kernel(k - 1).mul(&kernel_partner(mv, gamma, k))?.scale(gamma);
    let a = inner.formal_laplace()?.exp()?;
    c_from_raising_side(&a)
}

/// Moments through the functional equations only; not limited by path enumeration.
pub fn transform_moments(kv: &CumulantVector, lmax: usize) -> Result<MomentVector> {
    c_to_m(&kappa_to_c(kv, lmax)?, kv.gamma(), lmax)
}

pub fn transform_cumulants(mv: &MomentVector, gamma: &Rational, k: usize) -> Result<CumulantVector> {
    c_to_kappa(&m_to_c(mv, gamma, k)?, gamma, k)
}

/// Exact moments of a family's limit measure.
pub fn family_moments(spec: &EnsembleSpec, lmax: usize) -> Result<MomentVector> {
    transform_moments(&family_cumulants(spec, lmax), lmax)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivalenceRow {
    pub ell: usize,
    #[serde(with = "rational_str")]
    pub paths: Rational,
    #[serde(with = "rational_str")]
    pub transform: Rational,
    pub equal: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivalenceReport {
    #[serde(with = "rational_str")]
    pub gamma: Rational,
    pub lmax: usize,
    pub results: Vec<EquivalenceRow>,
}

impl EquivalenceReport {
    pub fn all_equal(&self) -> bool {
        self.results.iter().all(|r| r.equal)
    }

    pub fn first_mismatch(&self) -> Option<&EquivalenceRow> {
        self.results.iter().find(|r| !r.equal)
    }
}

/// Moments by path enumeration and by the functional equations, side by side.
pub fn equivalence_report(kv: &CumulantVector, lmax: usize) -> Result<EquivalenceReport> {
    let (paths, transform) = rayon::join(
        || moments_from_cumulants(kv, lmax),
        || transform_moments(kv, lmax),
    );
    let (paths, transform) = (paths?, transform?);
    let results = paths
        .m
        .into_iter()
        .zip(transform.m)
        .enumerate()
        .map(|(i, (p, t))| EquivalenceRow {
            ell: i + 1,
            equal: p == t,
            paths: p,
            transform: t,
        })
        .collect();
    Ok(EquivalenceReport {
        gamma: kv.gamma().clone(),
        lmax,
        results,
    })
}

/// Like [`equivalence_report`], but any disagreement is an error naming the first differing `ℓ`.
pub fn equivalence_check(kv: &CumulantVector, lmax: usize) -> Result<EquivalenceReport> {
    let report = equivalence_report(kv, lmax)?;
    if let Some(row) = report.first_mismatch() {
        return Err(Error::Mismatch {
            ell: row.ell,
            paths: format_rational(&row.paths),
            transform: format_rational(&row.transform),
        });
    }
    Ok(report)
}
