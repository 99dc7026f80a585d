use super::CorrectedLaw;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Rank-one perturbation `θ e₁e₁ᵀ + Z` of a `p x p` GOE matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GoeParams {
    theta: f64,
    p: usize,
}

impl GoeParams {
    pub fn new(theta: f64, p: usize) -> Result<Self> {
        if !(theta.is_finite() && theta > 1.0) {
            return Err(Error::domain(format!("GOE perturbation theta must exceed 1, got {theta}")));
        }
        if p == 0 {
            return Err(Error::domain("GOE dimension p must be positive"));
        }
        Ok(Self { theta, p })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn p(&self) -> usize {
        self.p
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GoeCorrection {
    pub rho: f64,
    pub sigma: f64,
    pub alpha2: f64,
    pub alpha0: f64,
    pub p: usize,
    theta: f64,
}

impl GoeCorrection {
    /// `√2 / (θ² - 1)^{3/2} ((1 - x²)/3 - 1/2)`
    pub fn p1(&self, x: f64) -> f64 {
        let t = self.theta * self.theta - 1.0;
        std::f64::consts::SQRT_2 / (t * t.sqrt()) * ((1.0 - x * x) / 3.0 - 0.5)
    }

    /// Corrected law with `n` replaced by the matrix dimension `p`.
    pub fn law(&self) -> CorrectedLaw {
        CorrectedLaw {
            rho: self.rho,
            sigma: self.sigma,
            inv_sqrt_n: 1.0 / (self.p as f64).sqrt(),
            alpha2: self.alpha2,
            alpha0: self.alpha0,
        }
    }
}

/// Centering `θ + θ⁻¹`, scale `sqrt(2(1 - θ⁻²))` and the skewness
/// correction of the largest eigenvalue.
pub fn goe_correction(params: GoeParams) -> GoeCorrection {
    let theta = params.theta;
    let t = theta * theta - 1.0;
    let base = std::f64::consts::SQRT_2 / (t * t.sqrt());
    GoeCorrection {
        rho: theta + 1.0 / theta,
        sigma: (2.0 * (1.0 - 1.0 / (theta * theta))).sqrt(),
        alpha2: base / 3.0,
        alpha0: base / 2.0,
        p: params.p,
        theta,
    }
}
