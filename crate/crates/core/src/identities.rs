//! Exact identities between closed forms, quadratures and the two
//! algebraic forms of the correction, evaluated at one `(ℓ, γ)`.

use crate::edgeworth::{hermite, CorrectedLaw};
use crate::error::Result;
use crate::mp_functionals::{self as mp, Law};
use crate::normal;
use serde::Serialize;
use std::f64::consts::SQRT_2;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub value: f64,
    pub reference: f64,
    pub residual: f64,
}

impl IdentityCheck {
    fn new(name: &'static str, value: f64, reference: f64) -> Self {
        let residual = (value - reference).abs();
        Self { name, value, reference, residual }
    }

    fn max_over(name: &'static str, residuals: impl Iterator<Item = f64>) -> Self {
        let worst = residuals.fold(0.0, f64::max);
        Self { name, value: worst, reference: 0.0, residual: worst }
    }
}

/// `(√2/3)(h³+γ)/(h²-γ)^{3/2}` and `γℓ/(√2 (h²-γ)^{3/2})` with `h = ℓ - 1`.
pub fn hermite_coefficients_display(ell: f64, gamma: f64) -> (f64, f64) {
    let h = ell - 1.0;
    let d = h * h - gamma;
    let d32 = d * d.sqrt();
    (SQRT_2 / 3.0 * (h * h * h + gamma) / d32, gamma * ell / (SQRT_2 * d32))
}

/// Runs every identity at `(ell, gamma)`; the correction is scaled by `n^{-1/2}`.
pub fn identity_suite(ell: f64, gamma: f64, n: usize) -> Result<Vec<IdentityCheck>> {
    mp::check_supercritical(ell, gamma)?;
    let g = mp::resolvent_kernel(ell, gamma)?;
    let (rho, sigma) = crate::edgeworth::centering_scaling(ell, gamma)?;
    let kappa2 = 2.0 * mp::f_g2(ell, gamma)?;
    let kappa3 = 8.0 * mp::f_g3(ell, gamma)?;
    let mu = mp::mu_g(ell, gamma)?;
    let alpha2 = kappa3 / (6.0 * kappa2 * kappa2.sqrt());
    let alpha0 = mu / kappa2.sqrt();
    let (alpha2_display, alpha0_display) = hermite_coefficients_display(ell, gamma);
    let law = CorrectedLaw { rho, sigma, inv_sqrt_n: 1.0 / (n as f64).sqrt(), alpha2, alpha0 };

    let grid: Vec<f64> = (0..=160).map(|k| -8.0 + 0.1 * k as f64).collect();
    let p1_cumulant = |x: f64| kappa3 / (6.0 * kappa2.powf(1.5)) * (1.0 - x * x) - mu / kappa2.sqrt();

    Ok(vec![
        IdentityCheck::new("kappa2_times_sigma2", kappa2 * sigma * sigma, 4.0),
        IdentityCheck::new("alpha2_display", alpha2, alpha2_display),
        IdentityCheck::new("alpha0_display", alpha0, alpha0_display),
        IdentityCheck::max_over(
            "p1_dual_forms",
            grid.iter().map(|&x| (p1_cumulant(x) - law.p1(x)).abs()),
        ),
        IdentityCheck::max_over(
            "p1_hermite_form",
            grid.iter().map(|&x| (law.p1(x) + alpha2 * hermite(2, x) + alpha0).abs()),
        ),
        IdentityCheck::max_over(
            "cdf_hermite_form",
            grid.iter().map(|&x| (law.cdf(x) - law.cdf_hermite(x)).abs()),
        ),
        IdentityCheck::new("companion_total_mass", mp::mp_expect(|_| 1.0, gamma, Law::Companion)?, 1.0),
        IdentityCheck::new("companion_m1", mp::mp_expect(|x| x, gamma, Law::Companion)?, gamma),
        IdentityCheck::new("companion_m2", mp::mp_expect(|x| x * x, gamma, Law::Companion)?, gamma * (1.0 + gamma)),
        IdentityCheck::new("f_g_quadrature", mp::mp_expect(g, gamma, Law::Companion)?, mp::f_g(ell, gamma)?),
        IdentityCheck::new("f_g2_quadrature", mp::mp_expect(|x| g(x).powi(2), gamma, Law::Companion)?, mp::f_g2(ell, gamma)?),
        IdentityCheck::new("f_g3_quadrature", mp::mp_expect(|x| g(x).powi(3), gamma, Law::Companion)?, mp::f_g3(ell, gamma)?),
        IdentityCheck::new("mu_g_quadrature", mp::bs_mean(g, gamma)?, mu),
        IdentityCheck::new(
            "stieltjes_at_rho",
            -mp::companion_stieltjes(gamma, rho)?,
            1.0 / ell,
        ),
        IdentityCheck::new("cdf_at_zero", law.cdf(0.0), 0.5 + law.inv_sqrt_n * (alpha2 - alpha0) * normal::pdf(0.0)),
    ])
}
