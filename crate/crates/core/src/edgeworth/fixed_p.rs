//! Classical fixed-dimension expansion for `Ř_n = √n (ℓ̂ - ℓ) / (√2 ℓ)`.

use crate::error::{Error, Result};
use crate::normal;
use std::f64::consts::SQRT_2;

/// `Φ(x) + n^{-1/2} ((√2/3)(1 - x²) - p / (√2 (ℓ - 1))) φ(x)`
pub fn muirhead_fixed_p_cdf(x: f64, ell: f64, p: usize, n: usize) -> Result<f64> {
    check(ell, n)?;
    let poly = SQRT_2 / 3.0 * (1.0 - x * x) - p as f64 / (SQRT_2 * (ell - 1.0));
    Ok(normal::cdf(x) + poly * normal::pdf(x) / (n as f64).sqrt())
}

/// Coefficients relating `R_n` to `Ř_n`: `R_n = c_n⁻¹ (Ř_n - d_n)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedPTransform {
    pub b_n: f64,
    pub c_n: f64,
    pub d_n: f64,
}

impl FixedPTransform {
    pub fn new(ell: f64, p: usize, n: usize) -> Result<Self> {
        check(ell, n)?;
        let h = ell - 1.0;
        let gamma_n = p as f64 / n as f64;
        let c2 = 1.0 - gamma_n / (h * h);
        if c2 <= 0.0 {
            return Err(Error::Subcritical {
                ell,
                gamma: gamma_n,
                threshold: crate::mp_functionals::critical_ell(gamma_n),
            });
        }
        Ok(Self {
            b_n: gamma_n / h,
            c_n: c2.sqrt(),
            d_n: p as f64 / ((2.0 * n as f64).sqrt() * h),
        })
    }

    /// `x̌_n = c_n x + d_n`
    pub fn map(&self, x: f64) -> f64 {
        self.c_n * x + self.d_n
    }
}

fn check(ell: f64, n: usize) -> Result<()> {
    if !(ell.is_finite() && ell > 1.0) {
        return Err(Error::domain(format!("fixed-p expansion needs ell > 1, got {ell}")));
    }
    if n == 0 {
        return Err(Error::domain("sample size n must be positive"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_abscissa_keeps_only_dimension_term() {
        let (ell, p, n) = (3.0, 4, 400);
        for &x in &[-1.0, 1.0] {
            let v = muirhead_fixed_p_cdf(x, ell, p, n).unwrap();
            let expect = normal::cdf(x) - p as f64 * normal::pdf(1.0) / (SQRT_2 * 2.0) / 20.0;
            assert!((v - expect).abs() < 1e-15);
        }
    }

    #[test]
    fn zero_dimension_is_gamma_zero_correction() {
        let n = 64;
        for &x in &[-2.0, 0.0, 0.7] {
            let v = muirhead_fixed_p_cdf(x, 2.5, 0, n).unwrap();
            let e = normal::cdf(x) + SQRT_2 / 3.0 * (1.0 - x * x) * normal::pdf(x) / 8.0;
            assert!((v - e).abs() < 1e-15);
        }
    }

    #[test]
    fn transform_coefficients() {
        let t = FixedPTransform::new(3.0, 5, 1000).unwrap();
        assert!((t.b_n - 0.0025).abs() < 1e-16);
        assert!((t.d_n - 5.0 / (2000f64.sqrt() * 2.0)).abs() < 1e-16);
        // d_n = sqrt(n/2) b_n
        assert!((t.d_n - (500f64).sqrt() * t.b_n).abs() < 1e-15);
        assert!(muirhead_fixed_p_cdf(0.0, 1.0, 1, 10).is_err());
    }
}
