//! Crystallized limit densities: height `1/γ` on disjoint intervals separated by unit gaps.

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize};

use crate::error::{Error, Result};
use crate::rtransform::EnsembleSpec;
use crate::spectra::{find_roots, RootList};

pub const DEFAULT_MASS_TOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CrystalDensity {
    gamma: f64,
    intervals: Vec<[f64; 2]>,
    /// Mass not covered by `intervals` (the truncated tail of an infinite family).
    residual: f64,
}

#[derive(Deserialize)]
struct DensityWire {
    gamma: f64,
    intervals: Vec<[f64; 2]>,
    residual: f64,
}

impl<'de> Deserialize<'de> for CrystalDensity {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = DensityWire::deserialize(d)?;
        CrystalDensity::new(w.gamma, w.intervals, w.residual).map_err(serde::de::Error::custom)
    }
}

impl CrystalDensity {
    /// Validates positivity, finiteness, and that intervals are sorted, nonempty-or-point, and disjoint.
    pub fn new(gamma: f64, intervals: Vec<[f64; 2]>, residual: f64) -> Result<Self> {
        if !(gamma > 0.0 && gamma.is_finite()) {
            return Err(Error::Parameter(format!("gamma must be positive and finite, got {gamma}")));
        }
        if !(residual >= 0.0 && residual.is_finite()) {
            return Err(Error::Parameter(format!("residual must be a finite nonnegative number, got {residual}")));
        }
        for (j, &[a, b]) in intervals.iter().enumerate() {
            if !(a.is_finite() && b.is_finite()) || a > b {
                return Err(Error::Construction(format!("interval {j} = [{a}, {b}] is not a finite ordered pair")));
            }
            if j > 0 && a <= intervals[j - 1][1] {
                return Err(Error::Construction(format!("interval {j} overlaps or precedes interval {}", j - 1)));
            }
        }
        Ok(CrystalDensity { gamma, intervals, residual })
    }

    /// The uniform law on `[−γ, 0]`.
    pub fn uniform(gamma: f64) -> Result<Self> {
        CrystalDensity::new(gamma, vec![[-gamma, 0.0]], 0.0)
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn intervals(&self) -> &[[f64; 2]] {
        &self.intervals
    }

    pub fn residual(&self) -> f64 {
        self.residual
    }

    pub fn height(&self) -> f64 {
        1.0 / self.gamma
    }

    /// Mass carried by the intervals (excludes the residual).
    pub fn mass(&self) -> f64 {
        self.intervals.iter().map(|[a, b]| b - a).sum::<f64>() / self.gamma
    }

    pub fn interval_masses(&self) -> Vec<f64> {
        self.intervals.iter().map(|[a, b]| (b - a) / self.gamma).collect()
    }

    pub fn support_radius(&self) -> f64 {
        self.intervals
            .iter()
            .flat_map(|[a, b]| [a.abs(), b.abs()])
            .fold(0.0, f64::max)
    }

    pub fn density_at(&self, x: f64) -> f64 {
        if self.intervals.iter().any(|&[a, b]| a <= x && x <= b) {
            self.height()
        } else {
            0.0
        }
    }

    pub fn cdf(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for &[a, b] in &self.intervals {
            if x >= b {
                acc += b - a;
            } else {
                if x > a {
                    acc += x - a;
                }
                break;
            }
        }
        acc / self.gamma
    }

    /// Smallest `x` with `cdf(x) = p`, for `p` within the covered mass.
    pub fn quantile(&self, p: f64) -> f64 {
        let mut remaining = p.max(0.0) * self.gamma;
        for &[a, b] in &self.intervals {
            let len = b - a;
            if remaining <= len {
                return a + remaining;
            }
            remaining -= len;
        }
        self.intervals.last().map_or(f64::NAN, |i| i[1])
    }

    /// `∫ xⁿ dμ = (1/γ) Σ (bⁿ⁺¹ − aⁿ⁺¹)/(n+1)`.
    pub fn moment(&self, n: u32) -> f64 {
        let k = n as i32 + 1;
        self.intervals
            .iter()
            .map(|&[a, b]| (b.powi(k) - a.powi(k)) / f64::from(k))
            .sum::<f64>()
            / self.gamma
    }

    /// `∫ e^{itx} dμ`, computed per interval as `e^{it·mid} · len · sinc(t·len/2)`, which is exact at `t = 0`.
    pub fn charfn(&self, t: f64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &[a, b] in &self.intervals {
            let len = b - a;
            let mid = 0.5 * (a + b);
            acc += Complex64::from_polar(len * sinc(0.5 * t * len), t * mid);
        }
        acc / self.gamma
    }

    /// Sup-distance between the empirical CDF of `samples` and [`CrystalDensity::cdf`].
    pub fn ks_distance(&self, samples: &[f64]) -> Result<f64> {
        if samples.is_empty() {
            return Err(Error::Precondition("KS distance needs at least one sample".into()));
        }
        let mut sorted;
        let xs = if samples.windows(2).all(|w| w[0] <= w[1]) {
            samples
        } else {
            sorted = samples.to_vec();
            sorted.sort_by(f64::total_cmp);
            &sorted
        };
        let n = xs.len() as f64;
        let mut worst: f64 = 0.0;
        for (i, &x) in xs.iter().enumerate() {
            let f = self.cdf(x);
            worst = worst.max((i + 1) as f64 / n - f).max(f - i as f64 / n);
        }
        Ok(worst)
    }

    /// `(x, f(x))` on `points` evenly spaced abscissae covering the support with a unit margin.
    pub fn grid(&self, points: usize) -> Vec<(f64, f64)> {
        let (Some(first), Some(last)) = (self.intervals.first(), self.intervals.last()) else {
            return Vec::new();
        };
        let lo = first[0] - 1.0;
        let hi = last[1] + 1.0;
        let steps = points.max(2) - 1;
        (0..=steps)
            .map(|i| {
                let x = lo + (hi - lo) * i as f64 / steps as f64;
                (x, self.density_at(x))
            })
            .collect()
    }
}

fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DensityBuild {
    pub density: CrystalDensity,
    /// Intervals shorter than the root tolerance that were left out.
    pub dropped: usize,
    pub roots_used: usize,
}

fn push_interval(
    out: &mut Vec<[f64; 2]>,
    dropped: &mut usize,
    a: f64,
    b: f64,
    root_tol: f64,
) -> Result<()> {
    if b < a - root_tol {
        return Err(Error::Construction(format!(
            "interval [{a}, {b}] is inverted: the zeros are not unit-gapped"
        )));
    }
    if b - a <= root_tol {
        *dropped += 1;
    } else {
        out.push([a, b]);
    }
    Ok(())
}

fn mass_error(intervals: &[[f64; 2]], gamma: f64, residual: f64, mass_tol: f64) -> Error {
    let masses: Vec<String> = intervals
        .iter()
        .map(|[a, b]| format!("[{a}, {b}]: {:e}", (b - a) / gamma))
        .collect();
    let total: f64 = intervals.iter().map(|[a, b]| b - a).sum::<f64>() / gamma;
    Error::Construction(format!(
        "total mass {total} + residual {residual} misses 1 by more than {mass_tol}; interval masses {}",
        masses.join(", ")
    ))
}

/// Builds the density from the zeros `ℓ₁ > ℓ₂ > …`:
/// `[−γ, −ℓ₁]`, then `[1−ℓₖ, −ℓₖ₊₁]`; beta closes with `[1−ℓ_M, M]`.
pub fn build_density(roots: &RootList, mass_tol: f64, root_tol: f64) -> Result<DensityBuild> {
    let gamma = roots.spec.gamma_f64();
    let l = &roots.roots;
    if l.is_empty() {
        return Err(Error::Precondition("no roots given".into()));
    }
    let mut intervals = Vec::new();
    let mut dropped = 0;
    push_interval(&mut intervals, &mut dropped, -gamma, -l[0], root_tol)?;
    let (residual, used) = match &roots.spec {
        EnsembleSpec::Beta { m, .. } => {
            let m = *m as usize;
            if l.len() != m {
                return Err(Error::Precondition(format!("beta needs exactly {m} roots, got {}", l.len())));
            }
            for k in 1..m {
                push_interval(&mut intervals, &mut dropped, 1.0 - l[k - 1], -l[k], root_tol)?;
            }
            push_interval(&mut intervals, &mut dropped, 1.0 - l[m - 1], m as f64, root_tol)?;
            (0.0, m)
        }
        _ => {
            let mut covered = (gamma - l[0]) / gamma;
            let mut used = 1;
            let mut settled = false;
            for k in 1..l.len() {
                let (a, b) = (1.0 - l[k - 1], -l[k]);
                push_interval(&mut intervals, &mut dropped, a, b, root_tol)?;
                covered += (b - a) / gamma;
                used = k + 1;
                if b - a < mass_tol / 10.0 && covered >= 1.0 - mass_tol {
                    settled = true;
                    break;
                }
            }
            if !settled {
                return Err(Error::Precondition(format!(
                    "{} roots do not reach the tail: covered mass {covered}, need interval lengths below {}",
                    l.len(),
                    mass_tol / 10.0
                )));
            }
            // Telescoping: the intervals up to ℓ_K carry (γ − ℓ_K − (K−1))/γ.
            let residual = ((l[used - 1] + (used - 1) as f64) / gamma).max(0.0);
            (residual, used)
        }
    };
    let total = intervals.iter().map(|[a, b]| b - a).sum::<f64>() / gamma + residual;
    if (total - 1.0).abs() > mass_tol {
        return Err(mass_error(&intervals, gamma, residual, mass_tol));
    }
    Ok(DensityBuild {
        density: CrystalDensity::new(gamma, intervals, residual)?,
        dropped,
        roots_used: used,
    })
}

/// Finds as many zeros as the truncation rule needs and builds the density.
pub fn density_for(spec: &EnsembleSpec, mass_tol: f64, root_tol: f64) -> Result<(RootList, DensityBuild)> {
    if let EnsembleSpec::Beta { m, .. } = spec {
        let roots = find_roots(spec, *m as usize, root_tol)?;
        let build = build_density(&roots, mass_tol, root_tol)?;
        return Ok((roots, build));
    }
    let mut count = 16;
    loop {
        let roots = find_roots(spec, count, root_tol)?;
        match build_density(&roots, mass_tol, root_tol) {
            Ok(build) => return Ok((roots, build)),
            Err(Error::Precondition(_)) if count < 512 => count *= 2,
            Err(e) => return Err(e),
        }
    }
}
