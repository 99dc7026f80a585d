//! First-order Edgeworth correction for the standardized largest eigenvalue
//! `R_n = √n (ℓ̂ - ρ_n) / σ_n` of a rank-one spiked sample covariance.
//!
//! The corrected distribution function is
//!
//! ```text
//! F_E(x) = Φ(x) + n^{-1/2} p₁(x) φ(x) = Φ(x) - n^{-1/2} (α₂ H₂(x) + α₀) φ(x)
//! ```
//!
//! with `p₁(x) = α₂ (1 - x²) - α₀`. For the spiked model `α₂ = κ₃ κ₂^{-3/2} / 6`
//! and `α₀ = κ₂^{-1/2} μ(g)`, where `κ₂ = 2 𝖥(g²)`, `κ₃ = 8 𝖥(g³)` and `μ(g)`
//! is the Bai–Silverstein mean of the resolvent kernel at the centering.

mod fixed_p;
mod goe;
mod hermite;
mod petrov;

pub use fixed_p::{muirhead_fixed_p_cdf, FixedPTransform};
pub use goe::{goe_correction, GoeCorrection, GoeParams};
pub use hermite::{cdf_derivative, hermite};
pub use petrov::petrov_q;

use crate::error::{Error, Result};
use crate::mp_functionals::{self, check_supercritical};
use crate::normal;
use serde::{Deserialize, Serialize};
use std::f64::consts::SQRT_2;

/// Which aspect ratio enters the correction polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "mode", content = "gamma")]
pub enum GammaMode {
    /// Use the finite ratio `γ_n = p / n`.
    #[default]
    FiniteGammaN,
    /// Use a limiting ratio `γ` in the polynomial; centering and scaling
    /// still use `γ_n`.
    LimitGamma(f64),
}

/// Model parameters `(ℓ, γ_n, n, p)` with `ℓ > 1 + √γ_n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpikeParams {
    ell: f64,
    gamma_n: f64,
    n: usize,
    p: usize,
}

impl SpikeParams {
    /// Parameters with `γ_n = p / n`.
    pub fn new(ell: f64, n: usize, p: usize) -> Result<Self> {
        if n == 0 || p == 0 {
            return Err(Error::domain(format!("n and p must be positive, got n = {n}, p = {p}")));
        }
        let gamma_n = p as f64 / n as f64;
        check_supercritical(ell, gamma_n)?;
        Ok(Self { ell, gamma_n, n, p })
    }

    /// Like [`SpikeParams::new`] but also checks a supplied `γ_n` against `p / n`.
    pub fn with_gamma(ell: f64, gamma_n: f64, n: usize, p: usize) -> Result<Self> {
        let params = Self::new(ell, n, p)?;
        if (params.gamma_n - gamma_n).abs() >= 1e-12 {
            return Err(Error::domain(format!(
                "gamma_n = {gamma_n} is inconsistent with p / n = {p} / {n} = {}",
                params.gamma_n
            )));
        }
        Ok(params)
    }

    /// `p = round(γ n)`, then `γ_n = p / n`.
    pub fn from_gamma(ell: f64, gamma: f64, n: usize) -> Result<Self> {
        Self::new(ell, n, dimension_for(gamma, n)?)
    }

    /// `ℓ = (1 + factor)(1 + √γ_n)`.
    pub fn from_ell_factor(factor: f64, n: usize, p: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("n must be positive"));
        }
        Self::new(ell_from_factor(factor, p as f64 / n as f64), n, p)
    }

    pub fn ell(&self) -> f64 {
        self.ell
    }

    pub fn gamma_n(&self) -> f64 {
        self.gamma_n
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> usize {
        self.p
    }

    /// `ℓ / (1 + √γ_n) - 1`
    pub fn ell_factor(&self) -> f64 {
        self.ell / mp_functionals::critical_ell(self.gamma_n) - 1.0
    }
}

/// `p = round(γ n)`, which must be at least one.
pub fn dimension_for(gamma: f64, n: usize) -> Result<usize> {
    if !(gamma.is_finite() && gamma > 0.0) {
        return Err(Error::domain(format!("gamma must be positive and finite, got {gamma}")));
    }
    let p = (gamma * n as f64).round();
    if p < 1.0 {
        return Err(Error::domain(format!("round(gamma * n) = round({gamma} * {n}) is zero")));
    }
    Ok(p as usize)
}

/// `ℓ = (1 + factor)(1 + √γ)`.
pub fn ell_from_factor(factor: f64, gamma: f64) -> f64 {
    (1.0 + factor) * mp_functionals::critical_ell(gamma)
}

/// `ρ(ℓ, γ) = ℓ + γℓ/(ℓ-1)` and `σ(ℓ, γ) = sqrt(2ℓ² (1 - γ/(ℓ-1)²))`.
pub fn centering_scaling(ell: f64, gamma_n: f64) -> Result<(f64, f64)> {
    check_supercritical(ell, gamma_n)?;
    let h = ell - 1.0;
    let rho = ell + gamma_n * ell / h;
    let sigma2 = 2.0 * ell * ell * (1.0 - gamma_n / (h * h));
    Ok((rho, sigma2.sqrt()))
}

/// Closed-form correction polynomial
/// `p₁(x) = √2 ((1/3)[(ℓ-1)³ + γ](1 - x²) - γℓ/2) ((ℓ-1)² - γ)^{-3/2}`.
pub fn p1(x: f64, params: &SpikeParams, mode: GammaMode) -> Result<f64> {
    let gamma = polynomial_gamma(params, mode)?;
    let ell = params.ell;
    let h = ell - 1.0;
    let d = h * h - gamma;
    Ok(SQRT_2 * ((h * h * h + gamma) * (1.0 - x * x) / 3.0 - 0.5 * gamma * ell) / (d * d.sqrt()))
}

fn polynomial_gamma(params: &SpikeParams, mode: GammaMode) -> Result<f64> {
    match mode {
        GammaMode::FiniteGammaN => Ok(params.gamma_n),
        GammaMode::LimitGamma(g) => {
            if !(g.is_finite() && g >= 0.0) {
                return Err(Error::domain(format!("limit gamma must be non-negative, got {g}")));
            }
            let threshold = mp_functionals::critical_ell(g);
            if params.ell > threshold {
                Ok(g)
            } else {
                Err(Error::Subcritical { ell: params.ell, gamma: g, threshold })
            }
        }
    }
}

/// `(1/n) ((ℓ-1)³ + γ_n)² / ((ℓ-1)² - γ_n)³`; the correction is considered
/// reliable when this is at most [`VALIDITY_THRESHOLD`].
pub fn validity_index(params: &SpikeParams) -> f64 {
    let h = params.ell - 1.0;
    let g = params.gamma_n;
    let num = h * h * h + g;
    let den = h * h - g;
    num * num / (den * den * den) / params.n as f64
}

pub const VALIDITY_THRESHOLD: f64 = 0.2;

/// Hermite-form corrected law `F_E = Φ - s (α₂ H₂ + α₀) φ` with `s = n^{-1/2}`,
/// expressed on the standardized scale and mapped to the `ℓ̂` scale through
/// `ρ` and `σ`. Shared by the spiked-covariance and GOE variants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrectedLaw {
    pub rho: f64,
    pub sigma: f64,
    pub inv_sqrt_n: f64,
    pub alpha2: f64,
    pub alpha0: f64,
}

const QUANTILE_BRACKET: f64 = 10.0;
const QUANTILE_RESIDUAL: f64 = 1e-12;

impl CorrectedLaw {
    /// `p₁(x) = α₂(1 - x²) - α₀`
    pub fn p1(&self, x: f64) -> f64 {
        self.alpha2 * (1.0 - x * x) - self.alpha0
    }

    /// `Φ(x) + n^{-1/2} p₁(x) φ(x)`, not clamped to `[0, 1]`.
    pub fn cdf(&self, x: f64) -> f64 {
        normal::cdf(x) + self.inv_sqrt_n * self.p1(x) * normal::pdf(x)
    }

    /// `Φ - n^{-1/2} (α₂ H₂ + α₀) φ`.
    pub fn cdf_hermite(&self, x: f64) -> f64 {
        normal::cdf(x) - self.inv_sqrt_n * (self.alpha2 * hermite(2, x) + self.alpha0) * normal::pdf(x)
    }

    pub fn cdf_clamped(&self, x: f64) -> f64 {
        self.cdf(x).clamp(0.0, 1.0)
    }

    /// Relative error cubic `q = α₂ H₃ + α₀ H₁`, so that `f_E = φ (1 + n^{-1/2} q)`.
    pub fn relative_error(&self, x: f64) -> f64 {
        self.alpha2 * hermite(3, x) + self.alpha0 * x
    }

    /// Roots `0, ±sqrt(3 - α₀/α₂)` of the relative error cubic, when real.
    pub fn relative_error_roots(&self) -> Option<[f64; 3]> {
        let r2 = 3.0 - self.alpha0 / self.alpha2;
        (r2 > 0.0).then(|| [-r2.sqrt(), 0.0, r2.sqrt()])
    }

    /// `f_E = φ + n^{-1/2} (α₂ H₃ + α₀ H₁) φ`; negative far in the left tail.
    pub fn density(&self, x: f64) -> f64 {
        normal::pdf(x) * (1.0 + self.inv_sqrt_n * self.relative_error(x))
    }

    /// Standardize an eigenvalue: `√n (y - ρ) / σ`.
    pub fn standardize(&self, y: f64) -> f64 {
        (y - self.rho) / (self.sigma * self.inv_sqrt_n)
    }

    /// Back to the eigenvalue scale: `ρ + σ x / √n`.
    pub fn destandardize(&self, x: f64) -> f64 {
        self.rho + self.sigma * self.inv_sqrt_n * x
    }

    /// Density on the `ℓ̂` scale, `(√n/σ) f_E(√n (y - ρ)/σ)`.
    pub fn rescaled_density(&self, y: f64) -> f64 {
        self.density(self.standardize(y)) / (self.sigma * self.inv_sqrt_n)
    }

    /// Gaussian density on the `ℓ̂` scale with mean `ρ` and sd `σ/√n`.
    pub fn rescaled_normal_density(&self, y: f64) -> f64 {
        normal::pdf(self.standardize(y)) / (self.sigma * self.inv_sqrt_n)
    }

    /// First-order skewness of `R_n`, `6 α₂ n^{-1/2}`.
    pub fn predicted_skewness(&self) -> f64 {
        6.0 * self.alpha2 * self.inv_sqrt_n
    }

    /// First-order mean of `R_n`, `α₀ n^{-1/2}`.
    pub fn predicted_mean(&self) -> f64 {
        self.alpha0 * self.inv_sqrt_n
    }

    /// Solve `F_E(x) = u` by Newton's method seeded at the Cornish–Fisher
    /// point `z - n^{-1/2} p₁(z)`, `z = Φ⁻¹(u)`, safeguarded by bisection
    /// on `[-10, 10]`.
    pub fn quantile(&self, u: f64) -> Result<f64> {
        if !(u > 0.0 && u < 1.0) {
            return Err(Error::domain(format!("quantile level must lie in (0, 1), got {u}")));
        }
        let resid = |x: f64| self.cdf(x) - u;
        let (mut lo, mut hi) = (-QUANTILE_BRACKET, QUANTILE_BRACKET);
        let (r_lo, r_hi) = (resid(lo), resid(hi));
        if !(r_lo <= 0.0 && r_hi >= 0.0) {
            return Err(Error::numeric(format!(
                "corrected cdf does not bracket u = {u} on [{lo}, {hi}] (residuals {r_lo:e}, {r_hi:e})"
            )));
        }
        let z = normal::quantile(u);
        let mut x = (z - self.inv_sqrt_n * self.p1(z)).clamp(lo, hi);
        let mut best = (f64::INFINITY, x);
        for _ in 0..200 {
            let r = resid(x);
            if r.abs() < best.0 {
                best = (r.abs(), x);
            }
            if r.abs() < QUANTILE_RESIDUAL {
                return Ok(x);
            }
            if r < 0.0 {
                lo = x;
            } else {
                hi = x;
            }
            let d = self.density(x);
            let newton = x - r / d;
            x = if d > 0.0 && newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
            if hi - lo <= 4.0 * f64::EPSILON * x.abs().max(1.0) {
                break;
            }
        }
        let r = resid(x).abs();
        if r < best.0 {
            best = (r, x);
        }
        if best.0 < QUANTILE_RESIDUAL {
            Ok(best.1)
        } else {
            Err(Error::numeric(format!(
                "quantile iteration for u = {u} stalled at residual {:e}",
                best.0
            )))
        }
    }
}

/// Precomputed centering, scaling, cumulants and Hermite coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EdgeworthApprox {
    pub rho: f64,
    pub sigma: f64,
    pub kappa2: f64,
    pub kappa3: f64,
    pub mu_g: f64,
    pub alpha2: f64,
    pub alpha0: f64,
    pub inv_sqrt_n: f64,
    pub mode: GammaMode,
    pub params: SpikeParams,
}

/// Cumulant approximations at `γ_n`.
pub fn cumulants(params: &SpikeParams) -> Result<EdgeworthApprox> {
    EdgeworthApprox::new(params, GammaMode::FiniteGammaN)
}

impl EdgeworthApprox {
    pub fn new(params: &SpikeParams, mode: GammaMode) -> Result<Self> {
        let (rho, sigma) = centering_scaling(params.ell, params.gamma_n)?;
        let gamma = polynomial_gamma(params, mode)?;
        let ell = params.ell;
        let (kappa2, kappa3, mu_g) = if gamma > 0.0 {
            (
                2.0 * mp_functionals::f_g2(ell, gamma)?,
                8.0 * mp_functionals::f_g3(ell, gamma)?,
                mp_functionals::mu_g(ell, gamma)?,
            )
        } else {
            // γ = 0 limit of the same closed forms
            let t = 1.0 - 1.0 / ell;
            let h = ell - 1.0;
            (2.0 * t * t / (h * h), 8.0 * t * t * t / (h * h * h), 0.0)
        };
        Ok(Self {
            rho,
            sigma,
            kappa2,
            kappa3,
            mu_g,
            alpha2: kappa3 / (6.0 * kappa2 * kappa2.sqrt()),
            alpha0: mu_g / kappa2.sqrt(),
            inv_sqrt_n: 1.0 / (params.n as f64).sqrt(),
            mode,
            params: *params,
        })
    }

    pub fn law(&self) -> CorrectedLaw {
        CorrectedLaw {
            rho: self.rho,
            sigma: self.sigma,
            inv_sqrt_n: self.inv_sqrt_n,
            alpha2: self.alpha2,
            alpha0: self.alpha0,
        }
    }

    /// `p₁(x) = (1/6) κ₂^{-3/2} κ₃ (1 - x²) - κ₂^{-1/2} μ(g)`
    pub fn p1(&self, x: f64) -> f64 {
        self.kappa3 / (6.0 * self.kappa2 * self.kappa2.sqrt()) * (1.0 - x * x)
            - self.mu_g / self.kappa2.sqrt()
    }

    pub fn cdf(&self, x: f64) -> f64 {
        self.law().cdf(x)
    }

    pub fn density(&self, x: f64) -> f64 {
        self.law().density(x)
    }

    pub fn rescaled_density(&self, y: f64) -> f64 {
        self.law().rescaled_density(y)
    }

    pub fn quantile(&self, u: f64) -> Result<f64> {
        self.law().quantile(u)
    }

    /// `n^{-1/2} κ₃ κ₂^{-3/2}`
    pub fn predicted_skewness(&self) -> f64 {
        self.inv_sqrt_n * self.kappa3 / (self.kappa2 * self.kappa2.sqrt())
    }

    pub fn validity_index(&self) -> f64 {
        validity_index(&self.params)
    }
}

/// `F_E(x)`, optionally clamped to `[0, 1]`.
pub fn corrected_cdf(x: f64, approx: &EdgeworthApprox, clamp: bool) -> f64 {
    let law = approx.law();
    if clamp {
        law.cdf_clamped(x)
    } else {
        law.cdf(x)
    }
}

pub fn corrected_density(x: f64, approx: &EdgeworthApprox) -> f64 {
    approx.density(x)
}

pub fn rescaled_density(y: f64, approx: &EdgeworthApprox) -> f64 {
    approx.rescaled_density(y)
}

pub fn corrected_quantile(u: f64, approx: &EdgeworthApprox) -> Result<f64> {
    approx.quantile(u)
}

#[cfg(test)]
mod tests;
