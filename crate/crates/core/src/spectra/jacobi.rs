//! Symmetric tridiagonal operators whose spectra are the zeros of [`super::charfn`].

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rtransform::{to_f64, EnsembleSpec, Family};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct JacobiOperator {
    spec: EnsembleSpec,
}

impl JacobiOperator {
    pub fn new(spec: EnsembleSpec) -> Self {
        JacobiOperator { spec }
    }

    pub fn spec(&self) -> &EnsembleSpec {
        &self.spec
    }

    pub fn family(&self) -> Family {
        self.spec.family()
    }

    /// `Some(M)` for the finite beta operator, `None` for the infinite ones.
    pub fn finite_size(&self) -> Option<usize> {
        match &self.spec {
            EnsembleSpec::Beta { m, .. } => Some(*m as usize),
            _ => None,
        }
    }

    /// Diagonal entry `λᵢ`, `i ≥ 1`.
    pub fn diag(&self, i: usize) -> f64 {
        let i = i as f64;
        match &self.spec {
            EnsembleSpec::Planch { eta, .. } => 1.0 - to_f64(eta) - i,
            EnsembleSpec::Alpha { gamma, c, eta } => {
                let (g, c, e) = (to_f64(gamma), to_f64(c), to_f64(eta));
                (1.0 - i * (1.0 + c) - c * (g + e)) / (1.0 - c)
            }
            EnsembleSpec::Beta { gamma, c, m } => {
                let (g, c, m) = (to_f64(gamma), to_f64(c), f64::from(*m));
                m * (c - 1.0) + c * (g + 1.0) + i * (1.0 - 2.0 * c)
            }
        }
    }

    /// Off-diagonal entry `wᵢ` linking rows `i` and `i+1`.
    pub fn offdiag(&self, i: usize) -> f64 {
        let i = i as f64;
        match &self.spec {
            EnsembleSpec::Planch { gamma, eta } => -(to_f64(eta) * (to_f64(gamma) + i)).sqrt(),
            EnsembleSpec::Alpha { gamma, c, eta } => {
                let (g, c, e) = (to_f64(gamma), to_f64(c), to_f64(eta));
                (c * (i + g) * (i + e)).sqrt() / (1.0 - c)
            }
            EnsembleSpec::Beta { gamma, c, m } => {
                let (g, c, m) = (to_f64(gamma), to_f64(c), f64::from(*m));
                (c * (1.0 - c) * i * (g + m - i)).sqrt()
            }
        }
    }

    /// Diagonal and off-diagonal of the leading `size × size` block.
    pub fn truncation(&self, size: usize) -> Result<(Vec<f64>, Vec<f64>)> {
        if size == 0 {
            return Err(Error::Precondition("truncation size must be at least 1".into()));
        }
        if let Some(m) = self.finite_size() {
            if size != m {
                return Err(Error::Precondition(format!(
                    "the beta operator is exactly {m}×{m}, not {size}×{size}"
                )));
            }
        }
        let d = (1..=size).map(|i| self.diag(i)).collect();
        let e = (1..size).map(|i| self.offdiag(i)).collect();
        Ok((d, e))
    }
}
