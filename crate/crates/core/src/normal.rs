//! Standard Gaussian density, distribution function and quantile.

use libm::erfc;
use statrs::function::erf::erfc_inv;
use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};

/// `1 / sqrt(2 pi)`
pub const INV_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

#[inline]
pub fn pdf(x: f64) -> f64 {
    INV_SQRT_2PI * (-0.5 * x * x).exp()
}

/// `Phi(x)` through the complementary error function, accurate in both tails.
#[inline]
pub fn cdf(x: f64) -> f64 {
    0.5 * erfc(-x * FRAC_1_SQRT_2)
}

/// `Phi^{-1}(u)` for `u` in `(0, 1)`; returns `-inf`/`inf` at the endpoints.
pub fn quantile(u: f64) -> f64 {
    if u <= 0.0 {
        return f64::NEG_INFINITY;
    }
    if u >= 1.0 {
        return f64::INFINITY;
    }
    let x = -SQRT_2 * erfc_inv(2.0 * u);
    // one Halley step against the erfc-based cdf
    let e = cdf(x) - u;
    let d = e * (2.0 * PI).sqrt() * (0.5 * x * x).exp();
    x - d / (1.0 + 0.5 * x * d)
}
