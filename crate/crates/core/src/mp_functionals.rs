//! Functionals of the Marchenko–Pastur law `F_γ` and its companion `𝖥_γ`.
//!
//! `F_γ` is the limiting spectrum of the `p x p` matrix `n⁻¹ Z'Z` and the
//! companion law `𝖥_γ = (1 - γ) δ₀ + γ F_γ` is the limit for the `n x n`
//! matrix `n⁻¹ Z Z'`. Integrals against the continuous part are computed
//! after the substitution `x = 1 + γ + 2√γ cos θ`, which turns the square
//! root edges of the density into a smooth periodic integrand. Point masses
//! at zero are added analytically.

use crate::error::{Error, Result};
use crate::quadrature;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

fn check_gamma(gamma: f64) -> Result<()> {
    if gamma.is_finite() && gamma > 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("aspect ratio gamma must be positive and finite, got {gamma}")))
    }
}

/// Aspect ratio `γ = p / n` of the noise block.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MpParams {
    gamma: f64,
}

impl MpParams {
    pub fn new(gamma: f64) -> Result<Self> {
        check_gamma(gamma)?;
        Ok(Self { gamma })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn support(&self) -> SupportInterval {
        edges(self.gamma)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SupportInterval {
    pub a: f64,
    pub b: f64,
}

impl SupportInterval {
    pub fn width(&self) -> f64 {
        self.b - self.a
    }
}

fn edges(gamma: f64) -> SupportInterval {
    let r = gamma.sqrt();
    SupportInterval { a: (1.0 - r) * (1.0 - r), b: (1.0 + r) * (1.0 + r) }
}

/// Bulk edges `((1 - √γ)², (1 + √γ)²)`.
pub fn support_edges(gamma: f64) -> Result<SupportInterval> {
    check_gamma(gamma)?;
    Ok(edges(gamma))
}

/// Which of the two laws an expectation is taken against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Law {
    /// `F_γ`, spectrum of the `p x p` Gram matrix.
    Standard,
    /// `𝖥_γ`, spectrum of the `n x n` Gram matrix.
    Companion,
}

/// Decomposition of a law into its atom at zero and its continuous part.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CompanionLaw {
    pub gamma: f64,
    pub atom_weight: f64,
    pub continuous_weight: f64,
}

impl CompanionLaw {
    pub fn new(gamma: f64) -> Result<Self> {
        check_gamma(gamma)?;
        let atom_weight = (1.0 - gamma).max(0.0);
        Ok(Self { gamma, atom_weight, continuous_weight: 1.0 - atom_weight })
    }

    pub fn total_mass(&self) -> f64 {
        self.atom_weight + self.continuous_weight
    }
}

/// Atom at zero and multiplier of the normalized-by-`γ` continuous density.
fn law_parts(gamma: f64, law: Law) -> (f64, f64) {
    match law {
        // F_γ: atom 1 - 1/γ when γ > 1; density sqrt((b-x)(x-a)) / (2πγx)
        Law::Standard => ((1.0 - 1.0 / gamma).max(0.0), 1.0),
        // 𝖥_γ = (1-γ)δ₀ + γ F_γ
        Law::Companion => ((1.0 - gamma).max(0.0), gamma),
    }
}

/// `x(θ) = 1 + γ + 2√γ cos θ` written as `(1-√γ)² + 4√γ cos²(θ/2)` so the
/// lower edge is exact even when it is zero.
#[inline]
fn cosine_point(gamma: f64, theta: f64) -> f64 {
    let r = gamma.sqrt();
    let c = (0.5 * theta).cos();
    (1.0 - r) * (1.0 - r) + 4.0 * r * c * c
}

/// Integral of `f` against the continuous part of `F_γ`,
/// `(2/π) ∫₀^π f(x(θ)) sin²θ / x(θ) dθ`.
fn continuous_part<F: Fn(f64) -> f64>(f: &F, gamma: f64) -> Result<f64> {
    let integral = quadrature::integrate(
        |theta| {
            let x = cosine_point(gamma, theta);
            let (s, c) = (0.5 * theta).sin_cos();
            let sin2 = 4.0 * s * s * c * c;
            f(x) * sin2 / x
        },
        0.0,
        PI,
        quadrature::DEFAULT_TOL,
    )?;
    Ok(2.0 / PI * integral)
}

/// `∫ f dF_γ` or `∫ f d𝖥_γ`, including the atom at zero when present.
pub fn mp_expect<F: Fn(f64) -> f64>(f: F, gamma: f64, law: Law) -> Result<f64> {
    check_gamma(gamma)?;
    let (atom, scale) = law_parts(gamma, law);
    let atom_term = if atom > 0.0 {
        let f0 = f(0.0);
        if !f0.is_finite() {
            return Err(Error::domain(format!(
                "integrand is undefined at the atom 0 (mass {atom}) of the {law:?} law"
            )));
        }
        atom * f0
    } else {
        0.0
    };
    Ok(atom_term + scale * continuous_part(&f, gamma)?)
}

/// Companion Stieltjes transform `𝖥_γ((λ - z)⁻¹)` for real `z` above the bulk.
pub fn companion_stieltjes(gamma: f64, z: f64) -> Result<f64> {
    check_gamma(gamma)?;
    let b = edges(gamma).b;
    if !(z > b) || !z.is_finite() {
        return Err(Error::domain(format!(
            "Stieltjes argument z = {z} must lie strictly above the bulk edge b = {b}"
        )));
    }
    // (-z + γ - 1 + sqrt((z-γ-1)² - 4γ)) / (2z), rationalized to avoid
    // cancellation for large z
    let d = z - gamma - 1.0;
    let root = (d * d - 4.0 * gamma).max(0.0).sqrt();
    Ok(-(1.0 + 2.0 * gamma / (root + d)) / z)
}

/// Critical spike strength `1 + √γ`.
pub fn critical_ell(gamma: f64) -> f64 {
    1.0 + gamma.sqrt()
}

/// Reject `ell <= 1 + √γ`.
pub fn check_supercritical(ell: f64, gamma: f64) -> Result<()> {
    check_gamma(gamma)?;
    let threshold = critical_ell(gamma);
    if ell.is_finite() && ell > threshold {
        Ok(())
    } else {
        Err(Error::Subcritical { ell, gamma, threshold })
    }
}

/// Centering point `ρ(ℓ, γ) = ℓ + γℓ/(ℓ - 1)`.
pub(crate) fn rho(ell: f64, gamma: f64) -> f64 {
    ell + gamma * ell / (ell - 1.0)
}

/// The resolvent kernel `g(λ) = (ρ(ℓ, γ) - λ)⁻¹`.
pub fn resolvent_kernel(ell: f64, gamma: f64) -> Result<impl Fn(f64) -> f64 + Copy> {
    check_supercritical(ell, gamma)?;
    let rho = rho(ell, gamma);
    Ok(move |lambda: f64| 1.0 / (rho - lambda))
}

/// `𝖥_γ(g) = ℓ⁻¹`.
pub fn f_g(ell: f64, gamma: f64) -> Result<f64> {
    check_supercritical(ell, gamma)?;
    Ok(1.0 / ell)
}

/// `𝖥_γ(g²) = (1 - ℓ⁻¹)² / ((ℓ-1)² - γ)`, equal to `2/σ²`.
pub fn f_g2(ell: f64, gamma: f64) -> Result<f64> {
    check_supercritical(ell, gamma)?;
    let h = ell - 1.0;
    let t = 1.0 - 1.0 / ell;
    Ok(t * t / (h * h - gamma))
}

/// `𝖥_γ(g³) = (1 - ℓ⁻¹)³ ((ℓ-1)³ + γ) / ((ℓ-1)² - γ)³`.
pub fn f_g3(ell: f64, gamma: f64) -> Result<f64> {
    check_supercritical(ell, gamma)?;
    let h = ell - 1.0;
    let t = 1.0 - 1.0 / ell;
    let d = h * h - gamma;
    Ok(t * t * t * (h * h * h + gamma) / (d * d * d))
}

/// Bai–Silverstein asymptotic mean of `G_n(g)`: `γ(ℓ-1) / ((ℓ-1)² - γ)²`.
pub fn mu_g(ell: f64, gamma: f64) -> Result<f64> {
    check_supercritical(ell, gamma)?;
    let h = ell - 1.0;
    let d = h * h - gamma;
    Ok(gamma * h / (d * d))
}

/// Gap between the centering point and the bulk edge, `ρ - b = (ℓ-1-√γ)² / (ℓ-1)`.
pub fn eta(ell: f64, gamma: f64) -> Result<f64> {
    check_supercritical(ell, gamma)?;
    let h = ell - 1.0;
    let t = h - gamma.sqrt();
    Ok(t * t / h)
}

/// Asymptotic mean `μ(f)` of the centered linear statistic `G_n(f)`:
///
/// `(f(a) + f(b))/4 - (1/2π) ∫_a^b f(x) / sqrt(4γ - (x-1-γ)²) dx`,
///
/// with the integral evaluated as `(1/2) ∫_{-π}^{π} f(1 + γ + 2√γ cos θ) dθ`.
/// The same expression is used for `γ > 1`; it is invariant under the
/// `(n, p, γ) ↔ (p, n, 1/γ)` duality.
pub fn bs_mean<F: Fn(f64) -> f64>(f: F, gamma: f64) -> Result<f64> {
    check_gamma(gamma)?;
    let SupportInterval { a, b } = edges(gamma);
    let (fa, fb) = (f(a), f(b));
    if !(fa.is_finite() && fb.is_finite()) {
        return Err(Error::domain("function must be finite at the bulk edges"));
    }
    let integral = quadrature::integrate(
        |theta| f(cosine_point(gamma, theta)),
        0.0,
        PI,
        quadrature::DEFAULT_TOL,
    )?;
    Ok(0.25 * (fa + fb) - integral / (2.0 * PI))
}
