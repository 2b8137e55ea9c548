//! Characteristic functions, Jacobi operators, and their common real spectra.

pub mod charfn;
pub mod eigen;
pub mod gamma;
pub mod hyper;
pub mod jacobi;
pub mod roots;

use serde::Serialize;

pub use charfn::char_fn;
pub use hyper::{hyp1f1, hyp2f1};
pub use jacobi::JacobiOperator;
pub use roots::{find_roots, interlacing_violations, leading_bound, RootList, DEFAULT_TOL};

use crate::error::{Error, Result};
use crate::rtransform::{EnsembleSpec, Family};

/// Largest truncation tried when sizing automatically.
pub const MAX_TRUNCATION: usize = 16_384;

/// All eigenvalues of the leading `size × size` block, decreasing.
pub fn truncated_eigs(op: &JacobiOperator, size: usize) -> Result<Vec<f64>> {
    top_truncated_eigs(op, size, size)
}

pub fn top_truncated_eigs(op: &JacobiOperator, size: usize, count: usize) -> Result<Vec<f64>> {
    let (d, e) = op.truncation(size)?;
    Ok(eigen::top_eigenvalues(&d, &e, count))
}

/// Doubles the truncation from 64 until the top `count` eigenvalues move by less than `tol/10`.
pub fn converged_eigs(op: &JacobiOperator, count: usize, tol: f64) -> Result<(usize, Vec<f64>)> {
    if let Some(m) = op.finite_size() {
        return Ok((m, top_truncated_eigs(op, m, count)?));
    }
    let mut size = (2 * count).max(64);
    let mut prev = top_truncated_eigs(op, size, count)?;
    while size < MAX_TRUNCATION {
        size = (size * 2).min(MAX_TRUNCATION);
        let cur = top_truncated_eigs(op, size, count)?;
        let moved = max_deviation(&prev, &cur);
        prev = cur;
        if moved < tol / 10.0 {
            return Ok((size, prev));
        }
    }
    Err(Error::ResourceGuard(format!(
        "eigenvalues not settled to {tol} at truncation {MAX_TRUNCATION}"
    )))
}

fn max_deviation(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TruncationRow {
    pub size: usize,
    pub max_deviation: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AgreementReport {
    pub family: Family,
    pub count: usize,
    pub roots: Vec<f64>,
    pub rows: Vec<TruncationRow>,
    /// Deviation at the largest truncation.
    pub max_deviation: f64,
    /// Whether the deviation never grows along the truncation ladder (values under `floor` count as settled).
    pub decreasing: bool,
    pub floor: f64,
    /// For beta: largest relative gap between `det(zI − J)` and `Π(z − ℓₖ)` coefficients.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub poly_rel_deviation: Option<f64>,
}

/// Compares zeros found on the characteristic function with truncated-operator eigenvalues.
pub fn spectrum_root_agreement(
    spec: &EnsembleSpec,
    count: usize,
    trunc_sizes: &[usize],
    tol: f64,
) -> Result<AgreementReport> {
    let op = JacobiOperator::new(spec.clone());
    let roots = find_roots(spec, count, tol)?.roots;
    let floor = 1e-10 * roots.iter().fold(1.0f64, |a, r| a.max(r.abs()));
    let sizes: Vec<usize> = match op.finite_size() {
        Some(m) => vec![m],
        None => trunc_sizes.to_vec(),
    };
    if sizes.is_empty() {
        return Err(Error::Precondition("no truncation sizes given".into()));
    }
    let rows = sizes
        .iter()
        .map(|&size| {
            let eigs = top_truncated_eigs(&op, size, roots.len())?;
            Ok(TruncationRow {
                size,
                max_deviation: max_deviation(&eigs, &roots),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let decreasing = rows
        .windows(2)
        .all(|w| w[1].max_deviation <= w[0].max_deviation || w[1].max_deviation <= floor);
    let poly_rel_deviation = match spec {
        EnsembleSpec::Beta { .. } => {
            let (d, e) = op.truncation(op.finite_size().unwrap())?;
            Some(poly_deviation(&eigen::char_poly(&d, &e), &poly_from_roots(&roots)))
        }
        _ => None,
    };
    Ok(AgreementReport {
        family: spec.family(),
        count: roots.len(),
        max_deviation: rows.last().map_or(f64::NAN, |r| r.max_deviation),
        roots,
        rows,
        decreasing,
        floor,
        poly_rel_deviation,
    })
}

/// Monic `Π(z − rₖ)` in ascending coefficients.
pub fn poly_from_roots(roots: &[f64]) -> Vec<f64> {
    roots
        .iter()
        .fold(vec![1.0], |p, &r| charfn::mul_linear(&p, -r))
}

/// Largest coefficient difference relative to the largest coefficient magnitude.
pub fn poly_deviation(a: &[f64], b: &[f64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let scale = a.iter().chain(b).fold(0.0f64, |m, v| m.max(v.abs())).max(f64::MIN_POSITIVE);
    max_deviation(a, b) / scale
}
