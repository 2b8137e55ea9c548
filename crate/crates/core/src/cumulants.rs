//! Łukasiewicz path enumeration and the cumulant-to-moment map it defines.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactseries::{rational_vec_str, rising, Rational};

/// Longest path length enumerated by default (C₁₄ ≈ 2.7 million paths).
pub const DEFAULT_MAX_PATH_LENGTH: usize = 14;

/// Unit-horizontal steps with vertical displacements `≥ −1`, starting and ending at height 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LukasiewiczPath {
    steps: Vec<i32>,
}

impl LukasiewiczPath {
    pub fn new(steps: Vec<i32>) -> Result<Self> {
        if steps.is_empty() {
            return Err(Error::Precondition("a path has at least one step".into()));
        }
        let mut height = 0i64;
        for (pos, &s) in steps.iter().enumerate() {
            if s < -1 {
                return Err(Error::Precondition(format!("step {s} at position {pos} is below -1")));
            }
            height += i64::from(s);
            if height < 0 {
                return Err(Error::Precondition(format!("path goes below zero at position {pos}")));
            }
        }
        if height != 0 {
            return Err(Error::Precondition(format!("path ends at height {height}")));
        }
        Ok(LukasiewiczPath { steps })
    }

    pub fn steps(&self) -> &[i32] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Largest up-step, or 0 for paths without up-steps.
    pub fn max_up(&self) -> usize {
        self.steps.iter().copied().max().unwrap_or(0).max(0) as usize
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CumulantVector {
    #[serde(with = "crate::exactseries::rational_str")]
    gamma: Rational,
    /// `κ₁, κ₂, ...`
    #[serde(with = "rational_vec_str")]
    kappa: Vec<Rational>,
}

impl CumulantVector {
    pub fn new(gamma: Rational, kappa: Vec<Rational>) -> Result<Self> {
        if !gamma.is_positive() {
            return Err(Error::Parameter(format!("gamma must be positive, got {gamma}")));
        }
        Ok(CumulantVector { gamma, kappa })
    }

    pub fn gamma(&self) -> &Rational {
        &self.gamma
    }

    pub fn kappa(&self) -> &[Rational] {
        &self.kappa
    }

    /// `κₙ` for `n ≥ 1`.
    pub fn get(&self, n: usize) -> Option<&Rational> {
        n.checked_sub(1).and_then(|i| self.kappa.get(i))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MomentVector {
    /// `m₁, m₂, ...`; `m₀ = 1` is implicit.
    #[serde(with = "rational_vec_str")]
    pub m: Vec<Rational>,
}

impl MomentVector {
    pub fn new(m: Vec<Rational>) -> Self {
        MomentVector { m }
    }

    /// `mₙ` for `n ≥ 1`.
    pub fn get(&self, n: usize) -> Option<&Rational> {
        n.checked_sub(1).and_then(|i| self.m.get(i))
    }
}

pub fn enumerate_paths(length: usize) -> Result<Vec<LukasiewiczPath>> {
    enumerate_paths_capped(length, DEFAULT_MAX_PATH_LENGTH)
}

pub fn enumerate_paths_capped(length: usize, max_length: usize) -> Result<Vec<LukasiewiczPath>> {
    if length == 0 {
        return Err(Error::Precondition("path length must be at least 1".into()));
    }
    check_cap(length, max_length)?;
    let mut out = Vec::new();
    let mut steps = Vec::with_capacity(length);
    fn rec(remaining: usize, height: usize, steps: &mut Vec<i32>, out: &mut Vec<LukasiewiczPath>) {
        if remaining == 0 {
            out.push(LukasiewiczPath { steps: steps.clone() });
            return;
        }
        let lo = if height > 0 { -1 } else { 0 };
        let hi = remaining as i32 - 1 - height as i32;
        for s in lo..=hi {
            steps.push(s);
            rec(remaining - 1, (height as i32 + s) as usize, steps, out);
            steps.pop();
        }
    }
    rec(length, 0, &mut steps, &mut out);
    Ok(out)
}

fn check_cap(length: usize, max_length: usize) -> Result<()> {
    if length > max_length {
        return Err(Error::ResourceGuard(format!(
            "path length {length} exceeds the enumeration cap {max_length}"
        )));
    }
    Ok(())
}

/// `Δ_γ(x^n)(x)/n` with `Δ_γ f(x) = (f(x) − f(x−γ))/γ`.
fn divided_power(x: &Rational, gamma: &Rational, n: usize) -> Rational {
    let shifted = x - gamma;
    (num_traits::pow(x.clone(), n) - num_traits::pow(shifted, n))
        / (gamma * Rational::from_integer(BigInt::from(n)))
}

/// The weight of a single path for the given cumulants.
pub fn path_weight(p: &LukasiewiczPath, kv: &CumulantVector) -> Result<Rational> {
    let needed = (p.max_up() + 1).max(1);
    if kv.kappa.len() < needed {
        return Err(Error::Precondition(format!(
            "path needs κ_{needed}, only {} cumulants given",
            kv.kappa.len()
        )));
    }
    let k = &kv.kappa;
    let mut weight = Rational::one();
    let mut height = 0usize;
    let mut h0 = 0usize;
    for &s in &p.steps {
        match s {
            0 if height == 0 => h0 += 1,
            0 => weight *= &k[0] + Rational::from_integer(BigInt::from(height)),
            -1 => weight *= Rational::from_integer(BigInt::from(height)) + &kv.gamma,
            j => {
                let j = j as usize;
                weight *= &k[j - 1] + &k[j];
            }
        }
        height = (height as i64 + i64::from(s)) as usize;
    }
    Ok(weight * divided_power(&k[0], &kv.gamma, 1 + h0))
}

/// Per-step factors shared by every path of a given length.
struct StepFactors {
    horizontal: Vec<Rational>,
    down: Vec<Rational>,
    up: Vec<Rational>,
    zero_level: Vec<Rational>,
}

impl StepFactors {
    fn new(kv: &CumulantVector, length: usize) -> Self {
        let k = &kv.kappa;
        let int = |i: usize| Rational::from_integer(BigInt::from(i));
        StepFactors {
            horizontal: (0..length).map(|i| &k[0] + int(i)).collect(),
            down: (0..length).map(|i| int(i) + &kv.gamma).collect(),
            up: (0..length).map(|j| if j == 0 { Rational::zero() } else { &k[j - 1] + &k[j] }).collect(),
            zero_level: (0..=length).map(|h| divided_power(&k[0], &kv.gamma, 1 + h)).collect(),
        }
    }
}

/// Sum of all path weights of the given length, walking the paths depth-first
/// so common prefixes share their partial products.
fn moment_by_paths(kv: &CumulantVector, length: usize) -> Rational {
    let f = StepFactors::new(kv, length);
    // Weight totals keyed by the number of horizontal steps at height zero.
    let mut by_h0 = vec![Rational::zero(); length + 1];
    fn rec(
        f: &StepFactors,
        remaining: usize,
        height: usize,
        h0: usize,
        acc: &Rational,
        by_h0: &mut [Rational],
    ) {
        if acc.is_zero() {
            return;
        }
        if remaining == 0 {
            by_h0[h0] += acc;
            return;
        }
        if height == 0 {
            rec(f, remaining - 1, 0, h0 + 1, acc, by_h0);
        } else {
            rec(f, remaining - 1, height - 1, h0, &(acc * &f.down[height]), by_h0);
            if height < remaining {
                rec(f, remaining - 1, height, h0, &(acc * &f.horizontal[height]), by_h0);
            }
        }
        for j in 1..remaining.saturating_sub(height) {
            rec(f, remaining - 1, height + j, h0, &(acc * &f.up[j]), by_h0);
        }
    }
    rec(&f, length, 0, 0, &Rational::one(), &mut by_h0);
    by_h0
        .iter()
        .zip(&f.zero_level)
        .map(|(w, d)| w * d)
        .fold(Rational::zero(), |a, b| a + b)
}

pub fn moments_from_cumulants(kv: &CumulantVector, lmax: usize) -> Result<MomentVector> {
    moments_from_cumulants_capped(kv, lmax, DEFAULT_MAX_PATH_LENGTH)
}

pub fn moments_from_cumulants_capped(
    kv: &CumulantVector,
    lmax: usize,
    max_length: usize,
) -> Result<MomentVector> {
    check_cap(lmax, max_length)?;
    if kv.kappa.len() < lmax {
        return Err(Error::Precondition(format!(
            "{lmax} moments need {lmax} cumulants, only {} given",
            kv.kappa.len()
        )));
    }
    let m = (1..=lmax)
        .into_par_iter()
        .map(|l| moment_by_paths(kv, l))
        .collect();
    Ok(MomentVector { m })
}

/// Inverts the cumulant-to-moment map, using that `m_ℓ = (γ+1)↑(ℓ−1) κ_ℓ + (terms in κ₁..κ_{ℓ−1})`.
pub fn cumulants_from_moments(
    mv: &MomentVector,
    gamma: &Rational,
    lmax: usize,
) -> Result<CumulantVector> {
    if !gamma.is_positive() {
        return Err(Error::Parameter(format!("gamma must be positive, got {gamma}")));
    }
    check_cap(lmax, DEFAULT_MAX_PATH_LENGTH)?;
    if mv.m.len() < lmax {
        return Err(Error::Precondition(format!(
            "{lmax} cumulants need {lmax} moments, only {} given",
            mv.m.len()
        )));
    }
    let mut kv = CumulantVector {
        gamma: gamma.clone(),
        kappa: vec![Rational::zero(); lmax],
    };
    let one = Rational::one();
    for l in 1..=lmax {
        let rest = moment_by_paths(&kv, l);
        kv.kappa[l - 1] = (&mv.m[l - 1] - rest) / rising(&(gamma + &one), l - 1);
    }
    Ok(kv)
}
