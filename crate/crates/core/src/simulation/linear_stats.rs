use super::secular::NoiseDraw;
use crate::error::Result;
use crate::mp_functionals::{mp_expect, Law};

/// `S_n(f) = n^{-1/2} Σ f(λᵢ)(zᵢ² - 1)` and `G_n(f) = Σ f(λᵢ) - n 𝖥_{γ_n}(f)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearStatistics {
    pub s_n: f64,
    pub g_n: f64,
    /// `𝖥_{γ_n}(f)`
    pub companion_mean: f64,
}

pub fn linear_statistics<F: Fn(f64) -> f64>(draw: &NoiseDraw, f: F, gamma_n: f64) -> Result<LinearStatistics> {
    let n = draw.n() as f64;
    let companion_mean = mp_expect(&f, gamma_n, Law::Companion)?;
    let (mut weighted, mut total) = (0.0, 0.0);
    for (&l, &z) in draw.lambdas().iter().zip(draw.z()) {
        let v = f(l);
        weighted += v * (z * z - 1.0);
        total += v;
    }
    Ok(LinearStatistics {
        s_n: weighted / n.sqrt(),
        g_n: total - n * companion_mean,
        companion_mean,
    })
}
