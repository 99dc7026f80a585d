//! Largest eigenvalue of `θ e₁e₁ᵀ + Z` for a `p x p` GOE matrix `Z` with
//! `Z_ii ~ N(0, 2/p)` and `Z_ij ~ N(0, 1/p)`.

use super::dense::largest_symmetric_eigenvalue;
use super::rng::{stream, StreamRole};
use super::{first_failure, thread_pool};
use crate::edgeworth::{goe_correction, GoeParams};
use crate::error::Result;
use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

pub fn sample_goe<R: Rng>(params: GoeParams, rng: &mut R) -> Result<f64> {
    let p = params.p();
    let off = (1.0 / p as f64).sqrt();
    let diag = (2.0 / p as f64).sqrt();
    let mut m = DMatrix::zeros(p, p);
    for j in 0..p {
        for i in 0..=j {
            let g: f64 = rng.sample(StandardNormal);
            if i == j {
                m[(i, i)] = diag * g;
            } else {
                m[(i, j)] = off * g;
                m[(j, i)] = off * g;
            }
        }
    }
    m[(0, 0)] += params.theta();
    largest_symmetric_eigenvalue(m)
}

/// Replicates of `θ̂` and `R_p = √p (θ̂ - ρ) / σ`.
#[derive(Debug, Clone, PartialEq)]
pub struct GoeSamples {
    pub params: GoeParams,
    pub seed: u64,
    pub theta_hat: Vec<f64>,
    pub r_p: Vec<f64>,
}

pub fn goe_monte_carlo(params: GoeParams, replicates: usize, seed: u64, workers: usize) -> Result<GoeSamples> {
    let corr = goe_correction(params);
    let scale = (params.p() as f64).sqrt() / corr.sigma;
    let pool = thread_pool(workers)?;
    let results: Vec<Result<f64>> = pool.install(|| {
        (0..replicates as u64)
            .into_par_iter()
            .map(|i| sample_goe(params, &mut stream(seed, i, StreamRole::Goe)))
            .collect()
    });
    let theta_hat = first_failure(results, seed)?;
    let r_p = theta_hat.iter().map(|t| scale * (t - corr.rho)).collect();
    Ok(GoeSamples { params, seed, theta_hat, r_p })
}
