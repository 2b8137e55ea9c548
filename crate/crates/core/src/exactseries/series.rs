use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::rational::{binomial, factorial, rational_vec_str, Rational};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Basis {
    /// `Σ aₙ tⁿ / n!`, storing the exponential coefficients `aₙ`.
    TPowers,
    /// `Σ bₙ zⁿ`.
    ZPowers,
    /// `Σ bₙ z⁻ⁿ`.
    ZinvPowers,
    /// `Σ bₙ / z↑n` with `z↑n = z (z+1) ... (z+n-1)`.
    RaisingInv,
}

impl Basis {
    fn is_power(self) -> bool {
        !matches!(self, Basis::RaisingInv)
    }
}

/// Truncated series with exact rational coefficients indexed `0..=order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series {
    basis: Basis,
    coeffs: Vec<Rational>,
}

#[derive(Serialize, Deserialize)]
struct SeriesWire {
    basis: Basis,
    order: usize,
    #[serde(with = "rational_vec_str")]
    coeffs: Vec<Rational>,
}

impl Serialize for Series {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SeriesWire {
            basis: self.basis,
            order: self.order(),
            coeffs: self.coeffs.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Series {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let wire = SeriesWire::deserialize(d)?;
        if wire.coeffs.len() != wire.order + 1 {
            return Err(serde::de::Error::custom(format!(
                "order {} needs {} coefficients, found {}",
                wire.order,
                wire.order + 1,
                wire.coeffs.len()
            )));
        }
        Ok(Series {
            basis: wire.basis,
            coeffs: wire.coeffs,
        })
    }
}

impl Series {
    pub fn new(basis: Basis, coeffs: Vec<Rational>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Precondition(
                "a series needs at least one coefficient".into(),
            ));
        }
        Ok(Series { basis, coeffs })
    }

    /// Builds a series from coefficients, padding with zeros or truncating to `order`.
    pub fn from_coeffs(basis: Basis, mut coeffs: Vec<Rational>, order: usize) -> Self {
        coeffs.resize(order + 1, Rational::zero());
        Series { basis, coeffs }
    }

    pub fn zero(basis: Basis, order: usize) -> Self {
        Series::from_coeffs(basis, Vec::new(), order)
    }

    pub fn one(basis: Basis, order: usize) -> Self {
        Series::from_coeffs(basis, vec![Rational::one()], order)
    }

    /// The single term `c · x^n` (or `c / z↑n`).
    pub fn monomial(basis: Basis, n: usize, c: Rational, order: usize) -> Self {
        let mut s = Series::zero(basis, order);
        if n <= order {
            s.coeffs[n] = c;
        }
        s
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Rational> {
        self.coeffs
    }

    pub fn coeff(&self, n: usize) -> Rational {
        self.coeffs.get(n).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn truncate(&self, order: usize) -> Series {
        Series::from_coeffs(self.basis, self.coeffs.clone(), order)
    }

    /// Ordinary power coefficients: divides the `T_POWERS` coefficients by `n!`.
    pub fn ordinary_coeffs(&self) -> Vec<Rational> {
        match self.basis {
            Basis::TPowers => self
                .coeffs
                .iter()
                .enumerate()
                .map(|(n, a)| a / Rational::from_integer(factorial(n)))
                .collect(),
            _ => self.coeffs.clone(),
        }
    }

    fn from_ordinary(basis: Basis, ord: Vec<Rational>) -> Series {
        let coeffs = match basis {
            Basis::TPowers => ord
                .into_iter()
                .enumerate()
                .map(|(n, a)| a * Rational::from_integer(factorial(n)))
                .collect(),
            _ => ord,
        };
        Series { basis, coeffs }
    }

    fn same_basis(&self, other: &Series, op: &str) -> Result<()> {
        if self.basis != other.basis {
            return Err(Error::Precondition(format!(
                "{op}: basis mismatch {:?} vs {:?}",
                self.basis, other.basis
            )));
        }
        Ok(())
    }

    fn power_basis(&self, op: &str) -> Result<()> {
        if !self.basis.is_power() {
            return Err(Error::Precondition(format!(
                "{op} is not defined in the inverse raising factorial basis"
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Series) -> Result<Series> {
        self.same_basis(other, "add")?;
        let k = self.order().min(other.order());
        let coeffs = (0..=k).map(|n| &self.coeffs[n] + &other.coeffs[n]).collect();
        Ok(Series {
            basis: self.basis,
            coeffs,
        })
    }

    pub fn sub(&self, other: &Series) -> Result<Series> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Series {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, c: &Rational) -> Series {
        Series {
            basis: self.basis,
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Product truncated to the smaller order. `T_POWERS` uses the binomial convolution.
    pub fn mul(&self, other: &Series) -> Result<Series> {
        self.same_basis(other, "mul")?;
        self.power_basis("mul")?;
        let k = self.order().min(other.order());
        let a = self.ordinary_coeffs();
        let b = other.ordinary_coeffs();
        let mut out = vec![Rational::zero(); k + 1];
        for i in 0..=k {
            if a[i].is_zero() {
                continue;
            }
            for j in 0..=k - i {
                out[i + j] += &a[i] * &b[j];
            }
        }
        Ok(Series::from_ordinary(self.basis, out))
    }

    /// Quotient by a series with nonzero constant term.
    pub fn div(&self, other: &Series) -> Result<Series> {
        self.same_basis(other, "div")?;
        self.power_basis("div")?;
        if other.coeffs[0].is_zero() {
            return Err(Error::Precondition(
                "division needs a nonzero constant term; use shifted_div".into(),
            ));
        }
        let k = self.order().min(other.order());
        let out = divide_ordinary(&self.ordinary_coeffs(), &other.ordinary_coeffs(), k);
        Ok(Series::from_ordinary(self.basis, out))
    }

    /// Quotient where the divisor starts at `x^s`: both sides are divided by `x^s` first.
    /// The numerator must vanish below `x^s`; the result has order `min(K) - s`.
    pub fn shifted_div(&self, other: &Series) -> Result<Series> {
        self.same_basis(other, "shifted_div")?;
        self.power_basis("shifted_div")?;
        let k = self.order().min(other.order());
        let a = self.ordinary_coeffs();
        let b = other.ordinary_coeffs();
        let s = (0..=k)
            .find(|&i| !b[i].is_zero())
            .ok_or_else(|| Error::Precondition("shifted_div by a zero series".into()))?;
        if let Some(i) = (0..s).find(|&i| !a[i].is_zero()) {
            return Err(Error::Precondition(format!(
                "shifted_div: numerator has nonzero coefficient at degree {i} below divisor valuation {s}"
            )));
        }
        let out = divide_ordinary(&a[s..=k], &b[s..=k], k - s);
        Ok(Series::from_ordinary(self.basis, out))
    }

    pub fn exp(&self) -> Result<Series> {
        self.power_basis("exp")?;
        if !self.coeffs[0].is_zero() {
            return Err(Error::Precondition(
                "exp needs a zero constant term".into(),
            ));
        }
        let f = self.ordinary_coeffs();
        let k = self.order();
        let mut g = vec![Rational::zero(); k + 1];
        g[0] = Rational::one();
        for n in 1..=k {
            let mut acc = Rational::zero();
            for j in 1..=n {
                if !f[j].is_zero() {
                    acc += &f[j] * &g[n - j] * Rational::from_integer(BigInt::from(j));
                }
            }
            g[n] = acc / Rational::from_integer(BigInt::from(n));
        }
        Ok(Series::from_ordinary(self.basis, g))
    }

    pub fn log(&self) -> Result<Series> {
        self.power_basis("log")?;
        if !self.coeffs[0].is_one() {
            return Err(Error::Precondition(
                "log needs constant term 1".into(),
            ));
        }
        let f = self.ordinary_coeffs();
        let k = self.order();
        let mut g = vec![Rational::zero(); k + 1];
        for n in 1..=k {
            let mut acc = Rational::zero();
            for j in 1..n {
                if !f[n - j].is_zero() {
                    acc += &g[j] * &f[n - j] * Rational::from_integer(BigInt::from(j));
                }
            }
            g[n] = &f[n] - acc / Rational::from_integer(BigInt::from(n));
        }
        Ok(Series::from_ordinary(self.basis, g))
    }

    /// `Σ aₙ tⁿ/n! ↦ Σ aₙ z^{-n-1}`; order `K` becomes `K + 1`.
    pub fn formal_laplace(&self) -> Result<Series> {
        self.expect(Basis::TPowers, "formal_laplace")?;
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(Rational::zero());
        coeffs.extend(self.coeffs.iter().cloned());
        Ok(Series {
            basis: Basis::ZinvPowers,
            coeffs,
        })
    }

    /// Inverse of [`Series::formal_laplace`]; order `K` becomes `K - 1`.
    pub fn formal_laplace_inv(&self) -> Result<Series> {
        self.expect(Basis::ZinvPowers, "formal_laplace_inv")?;
        if !self.coeffs[0].is_zero() {
            return Err(Error::Precondition(
                "formal_laplace_inv needs a zero z^0 coefficient".into(),
            ));
        }
        if self.order() == 0 {
            return Err(Error::Precondition(
                "formal_laplace_inv needs order at least 1".into(),
            ));
        }
        Ok(Series {
            basis: Basis::TPowers,
            coeffs: self.coeffs[1..].to_vec(),
        })
    }

    /// Re-expands `f(z + x)` in powers of `1/z`.
    pub fn shift_zinv(&self, x: &Rational) -> Result<Series> {
        self.expect(Basis::ZinvPowers, "shift_zinv")?;
        let k = self.order();
        let mut out = vec![Rational::zero(); k + 1];
        out[0] = self.coeffs[0].clone();
        for n in 1..=k {
            if self.coeffs[n].is_zero() {
                continue;
            }
            let mut xpow = Rational::one();
            for j in 0..=k - n {
                let c = Rational::from_integer(binomial(n + j - 1, j)) * &xpow;
                out[n + j] += &self.coeffs[n] * c;
                xpow *= -x;
            }
        }
        Ok(Series {
            basis: Basis::ZinvPowers,
            coeffs: out,
        })
    }

    pub fn raising_inv_to_zinv(&self) -> Result<Series> {
        self.expect(Basis::RaisingInv, "raising_inv_to_zinv")?;
        let k = self.order();
        let mut out = vec![Rational::zero(); k + 1];
        for (n, p) in raising_expansions(k).iter().enumerate() {
            if self.coeffs[n].is_zero() {
                continue;
            }
            for (j, pj) in p.iter().enumerate() {
                out[j] += &self.coeffs[n] * pj;
            }
        }
        Ok(Series {
            basis: Basis::ZinvPowers,
            coeffs: out,
        })
    }

    pub fn zinv_to_raising_inv(&self) -> Result<Series> {
        self.expect(Basis::ZinvPowers, "zinv_to_raising_inv")?;
        let k = self.order();
        let mut residual = self.coeffs.clone();
        let mut out = vec![Rational::zero(); k + 1];
        // 1/z↑n = z^{-n} + higher powers, so peel off leading terms in order.
        for (n, p) in raising_expansions(k).iter().enumerate() {
            let b = residual[n].clone();
            if b.is_zero() {
                continue;
            }
            for (j, pj) in p.iter().enumerate().skip(n) {
                residual[j] -= &b * pj;
            }
            out[n] = b;
        }
        Ok(Series {
            basis: Basis::RaisingInv,
            coeffs: out,
        })
    }

    fn expect(&self, basis: Basis, op: &str) -> Result<()> {
        if self.basis != basis {
            return Err(Error::Precondition(format!(
                "{op} expects {basis:?}, got {:?}",
                self.basis
            )));
        }
        Ok(())
    }
}

fn divide_ordinary(a: &[Rational], b: &[Rational], k: usize) -> Vec<Rational> {
    let inv0 = b[0].recip();
    let mut q = vec![Rational::zero(); k + 1];
    for n in 0..=k {
        let mut acc = a[n].clone();
        for j in 1..=n {
            if !b[j].is_zero() {
                acc -= &b[j] * &q[n - j];
            }
        }
        q[n] = acc * &inv0;
    }
    q
}

/// Coefficients of `1/z↑n` in powers of `1/z` up to `z^{-k}`, for `n = 0..=k`.
fn raising_expansions(k: usize) -> Vec<Vec<Rational>> {
    let mut out = Vec::with_capacity(k + 1);
    let mut p = vec![Rational::zero(); k + 1];
    p[0] = Rational::one();
    out.push(p.clone());
    for n in 1..=k {
        // 1/z↑n = (1/z↑(n-1)) · w / (1 + (n-1) w) with w = 1/z.
        let mut shifted = vec![Rational::zero(); k + 1];
        shifted[1..].clone_from_slice(&p[..k]);
        let m = Rational::from_integer(BigInt::from(n - 1));
        for j in 1..=k {
            let prev = shifted[j - 1].clone();
            shifted[j] -= &m * prev;
        }
        p = shifted;
        out.push(p.clone());
    }
    out
}

/// Bernoulli number `Bₙ` with `B₁ = -1/2`.
pub fn bernoulli(n: usize) -> Rational {
    bernoulli_table(n).pop().expect("table has n + 1 entries")
}

/// `B₀..=Bₙ` with the convention `B₁ = -1/2`.
fn bernoulli_table(n: usize) -> Vec<Rational> {
    let mut b = vec![Rational::one()];
    for m in 1..=n {
        let mut acc = Rational::zero();
        for (j, bj) in b.iter().enumerate() {
            acc += Rational::from_integer(binomial(m + 1, j)) * bj;
        }
        b.push(-acc / Rational::from_integer(BigInt::from(m + 1)));
    }
    b
}

/// `t / (1 − e^{−t})` as a `T_POWERS` series: coefficients `(−1)^m B_m`.
pub fn bernoulli_kernel(order: usize) -> Series {
    let coeffs = bernoulli_table(order)
        .into_iter()
        .enumerate()
        .map(|(m, b)| if m % 2 == 1 { -b } else { b })
        .collect();
    Series {
        basis: Basis::TPowers,
        coeffs,
    }
}
