//! Real zeros of the characteristic functions by scanning and bisection.

use serde::{Deserialize, Serialize};

use super::charfn::char_fn;
use super::eigen::eigenvalues;
use super::jacobi::JacobiOperator;
use crate::error::{Error, Result};
use crate::rtransform::{EnsembleSpec, Family};

pub const DEFAULT_TOL: f64 = 1e-12;

/// Tag attached to alpha roots when `γ ≠ η`, where only the weaker eigenvalue asymptotics are known.
pub const CONJECTURAL_TAG: &str = "asymptotics-conjectural";

/// Scan step. Consecutive zeros are at least one apart, so each half-step holds at most one.
const STEP: f64 = 0.5;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootList {
    pub spec: EnsembleSpec,
    /// Strictly decreasing.
    pub roots: Vec<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub tags: Vec<String>,
}

impl RootList {
    pub fn family(&self) -> Family {
        self.spec.family()
    }
}

fn bisect(f: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let mut flo = f(lo);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn trace_string(trace: &[(f64, f64)]) -> String {
    trace
        .iter()
        .map(|(z, v)| format!("F({z})={v:e}"))
        .collect::<Vec<_>>()
        .join(", ")
}

/// Scans downward from `γ + 1` in half steps; the `k`-th zero is expected near `1 − k`.
fn scan_roots(spec: &EnsembleSpec, count: usize, tol: f64) -> Result<Vec<f64>> {
    let f = |z: f64| char_fn(spec, z);
    let start = (spec.gamma_f64() + 1.0).ceil();
    let mut roots = Vec::with_capacity(count);
    let mut trace: Vec<(f64, f64)> = Vec::new();
    let mut hi = start;
    let mut fhi = f(hi);
    trace.push((hi, fhi));
    if fhi == 0.0 {
        roots.push(hi);
    }
    let mut step = 0usize;
    while roots.len() < count {
        step += 1;
        let lo = start - STEP * step as f64;
        let flo = f(lo);
        trace.push((lo, flo));
        if trace.len() > 8 {
            trace.remove(0);
        }
        if flo == 0.0 {
            roots.push(lo);
        } else if fhi != 0.0 && (flo < 0.0) != (fhi < 0.0) {
            roots.push(bisect(&f, lo, hi, tol));
        }
        let next = roots.len() + 1;
        if roots.len() < count && lo < 1.0 - next as f64 - 1.5 {
            return Err(Error::Bracket {
                index: next,
                trace: trace_string(&trace),
            });
        }
        hi = lo;
        fhi = flo;
    }
    Ok(roots)
}

/// Beta zeros: eigenvalues of the exact `M × M` operator, each re-bracketed on the polynomial and bisected.
fn beta_roots(spec: &EnsembleSpec, tol: f64) -> Result<Vec<f64>> {
    let op = JacobiOperator::new(spec.clone());
    let m = op.finite_size().expect("beta operator is finite");
    let (d, e) = op.truncation(m)?;
    let f = |z: f64| char_fn(spec, z);
    eigenvalues(&d, &e)
        .into_iter()
        .enumerate()
        .map(|(i, ev)| {
            // Zeros are at least one apart, so this window holds exactly one.
            let center = (ev * 4.0).round() / 4.0;
            let (lo, hi) = (center - 0.25, center + 0.25);
            let (flo, fhi) = (f(lo), f(hi));
            if (flo < 0.0) == (fhi < 0.0) {
                return Err(Error::Bracket {
                    index: i + 1,
                    trace: trace_string(&[(lo, flo), (ev, f(ev)), (hi, fhi)]),
                });
            }
            Ok(bisect(&f, lo, hi, tol))
        })
        .collect()
}

/// The `count` largest real zeros (all `M` of them for beta, whatever `count` is).
pub fn find_roots(spec: &EnsembleSpec, count: usize, tol: f64) -> Result<RootList> {
    if count == 0 {
        return Err(Error::Precondition("count must be at least 1".into()));
    }
    if !(tol > 0.0) {
        return Err(Error::Parameter(format!("tolerance must be positive, got {tol}")));
    }
    let roots = match spec {
        EnsembleSpec::Beta { .. } => beta_roots(spec, tol)?,
        _ => scan_roots(spec, count, tol)?,
    };
    let mut tags = Vec::new();
    if let EnsembleSpec::Alpha { gamma, eta, .. } = spec {
        if gamma != eta {
            tags.push(CONJECTURAL_TAG.to_string());
        }
    }
    Ok(RootList {
        spec: spec.clone(),
        roots,
        tags,
    })
}

/// Upper bound on the largest zero: `γ ≥ ℓ₁` in all three families.
pub fn leading_bound(spec: &EnsembleSpec) -> f64 {
    spec.gamma_f64()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InterlacingViolation {
    pub index: usize,
    pub detail: String,
}

/// Checks `bound ≥ ℓ₁` and `ℓₖ ≥ 1 + ℓₖ₊₁` up to `tol`.
pub fn interlacing_violations(roots: &[f64], bound: f64, tol: f64) -> Vec<InterlacingViolation> {
    let mut out = Vec::new();
    if let Some(&first) = roots.first() {
        if first > bound + tol {
            out.push(InterlacingViolation {
                index: 1,
                detail: format!("ℓ₁ = {first} exceeds {bound}"),
            });
        }
    }
    for (k, w) in roots.windows(2).enumerate() {
        if w[0] + tol < 1.0 + w[1] {
            out.push(InterlacingViolation {
                index: k + 1,
                detail: format!("gap ℓ{} − ℓ{} = {} < 1", k + 1, k + 2, w[0] - w[1]),
            });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactseries::Rational;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn beta_single_root() {
        let r = find_roots(&EnsembleSpec::beta(q(1, 1), q(1, 2), 1).unwrap(), 1, 1e-13).unwrap();
        assert_eq!(r.roots.len(), 1);
        assert!((r.roots[0] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn planch_small_eta_first_root() {
        let spec = EnsembleSpec::planch(q(1, 1), q(1, 1_000_000)).unwrap();
        let r = find_roots(&spec, 3, 1e-15).unwrap();
        assert!((r.roots[0] - 1e-6).abs() < 1e-9, "{:?}", r.roots);
        assert!((r.roots[1] + 1.0).abs() < 1e-5);
    }

    #[test]
    fn planch_reference_roots() {
        let spec = EnsembleSpec::planch(q(2, 1), q(1, 1)).unwrap();
        let r = find_roots(&spec, 5, 1e-13).unwrap();
        let expected = [1.0, -0.45027, -1.72376, -2.88131, -3.95878];
        for (a, b) in r.roots.iter().zip(expected) {
            assert!((a - b).abs() < 1e-5, "{a} vs {b}");
        }
        assert!(interlacing_violations(&r.roots, 2.0, 1e-9).is_empty());
    }

    #[test]
    fn alpha_reference_roots() {
        let spec = EnsembleSpec::alpha(q(1, 1), q(1, 2), q(1, 1)).unwrap();
        let r = find_roots(&spec, 4, 1e-13).unwrap();
        let expected = [0.37477, -0.76692, -1.85078, -2.90493];
        for (a, b) in r.roots.iter().zip(expected) {
            assert!((a - b).abs() < 1e-5, "{a} vs {b}");
        }
        assert!(r.tags.is_empty());
        let other = EnsembleSpec::alpha(q(2, 1), q(1, 2), q(1, 1)).unwrap();
        assert_eq!(find_roots(&other, 2, 1e-10).unwrap().tags, vec![CONJECTURAL_TAG]);
    }

    #[test]
    fn violations_are_reported() {
        assert_eq!(interlacing_violations(&[0.5, -0.2], 1.0, 1e-12).len(), 1);
        assert_eq!(interlacing_violations(&[1.5, 0.0], 1.0, 1e-12).len(), 1);
    }
}
