//! Monte Carlo replicates of the largest eigenvalue under the rank-one
//! spiked model, by a dense eigensolve or by the secular equation.

mod dense;
mod goe;
mod io;
mod linear_stats;
pub mod rng;
mod secular;

pub use dense::{sample_dense, DenseInputs};
pub use goe::{goe_monte_carlo, sample_goe, GoeSamples};
pub use io::{format_float, parse_samples_csv, sidecar_path, CsvRow, CSV_HEADER};
pub use linear_stats::{linear_statistics, LinearStatistics};
pub use secular::{sample_noise, secular_solve, NoiseDraw};

use crate::edgeworth::{centering_scaling, SpikeParams};
use crate::error::{Error, Result};
use rayon::prelude::*;
use rng::{stream, StreamRole};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Dense,
    #[default]
    Secular,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Dense => "dense",
            Method::Secular => "secular",
        })
    }
}

impl FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dense" => Ok(Method::Dense),
            "secular" => Ok(Method::Secular),
            other => Err(Error::parse(format!("unknown method {other:?}, expected dense or secular"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    params: SpikeParams,
    replicates: usize,
    seed: u64,
    method: Method,
    workers: usize,
}

impl SimConfig {
    /// Supercriticality is guaranteed by `params`; `workers` defaults to the
    /// number of available CPUs.
    pub fn new(params: SpikeParams, replicates: usize, seed: u64, method: Method) -> Result<Self> {
        if replicates == 0 {
            return Err(Error::domain("replicates must be at least 1"));
        }
        let workers = std::thread::available_parallelism().map_or(1, |n| n.get());
        Ok(Self { params, replicates, seed, method, workers })
    }

    pub fn with_workers(mut self, workers: usize) -> Result<Self> {
        if workers == 0 {
            return Err(Error::domain("workers must be at least 1"));
        }
        self.workers = workers;
        Ok(self)
    }

    pub fn params(&self) -> &SpikeParams {
        &self.params
    }
    pub fn n(&self) -> usize {
        self.params.n()
    }
    pub fn p(&self) -> usize {
        self.params.p()
    }
    pub fn ell(&self) -> f64 {
        self.params.ell()
    }
    pub fn replicates(&self) -> usize {
        self.replicates
    }
    pub fn seed(&self) -> u64 {
        self.seed
    }
    pub fn method(&self) -> Method {
        self.method
    }
    pub fn workers(&self) -> usize {
        self.workers
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Replicate {
    pub replicate_index: u64,
    pub ell_hat: f64,
    pub r_n: f64,
    pub method: Method,
}

/// Provenance of a [`SampleSet`]; serialized as the JSON sidecar.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampleMeta {
    pub seed: u64,
    pub n: usize,
    pub p: usize,
    pub gamma_n: f64,
    pub ell: f64,
    pub method: Method,
    pub replicates: usize,
    pub rho_n: f64,
    pub sigma_n: f64,
}

impl SampleMeta {
    pub fn params(&self) -> Result<SpikeParams> {
        SpikeParams::with_gamma(self.ell, self.gamma_n, self.n, self.p)
    }

    /// `√n (ℓ̂ - ρ_n) / σ_n`
    pub fn standardize(&self, ell_hat: f64) -> f64 {
        (self.n as f64).sqrt() * (ell_hat - self.rho_n) / self.sigma_n
    }
}

/// Standardized replicates with their provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSet {
    meta: SampleMeta,
    replicates: Vec<Replicate>,
}

impl SampleSet {
    pub fn meta(&self) -> &SampleMeta {
        &self.meta
    }

    pub fn replicates(&self) -> &[Replicate] {
        &self.replicates
    }

    pub fn len(&self) -> usize {
        self.replicates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.replicates.is_empty()
    }

    pub fn r_n(&self) -> Vec<f64> {
        self.replicates.iter().map(|r| r.r_n).collect()
    }

    pub fn ell_hat(&self) -> Vec<f64> {
        self.replicates.iter().map(|r| r.ell_hat).collect()
    }

    /// Re-centres the same `ℓ̂` values with a different `γ` in `(ρ, σ)`.
    pub fn restandardize(&self, gamma: f64) -> Result<Vec<f64>> {
        let (rho, sigma) = centering_scaling(self.meta.ell, gamma)?;
        let root_n = (self.meta.n as f64).sqrt();
        Ok(self.replicates.iter().map(|r| root_n * (r.ell_hat - rho) / sigma).collect())
    }

    /// Assembles and validates a set, e.g. after parsing.
    pub fn from_parts(meta: SampleMeta, rows: Vec<CsvRow>) -> Result<Self> {
        let params = meta.params()?;
        let (rho, sigma) = centering_scaling(params.ell(), params.gamma_n())?;
        if !close(rho, meta.rho_n) || !close(sigma, meta.sigma_n) {
            return Err(Error::domain(format!(
                "sidecar rho_n = {}, sigma_n = {} disagree with the centering ({rho}, {sigma}) implied by (ell, gamma_n)",
                meta.rho_n, meta.sigma_n
            )));
        }
        if meta.replicates == 0 || rows.len() != meta.replicates {
            return Err(Error::domain(format!(
                "sidecar declares {} replicates but the table has {} rows",
                meta.replicates,
                rows.len()
            )));
        }
        let mut replicates = Vec::with_capacity(rows.len());
        for (k, row) in rows.into_iter().enumerate() {
            if row.replicate_index != k as u64 {
                return Err(Error::domain(format!(
                    "row {k} has replicate_index {}, expected {k}",
                    row.replicate_index
                )));
            }
            let r = meta.standardize(row.ell_hat);
            if (r - row.r_n).abs() > 1e-12 * (1.0 + r.abs()) {
                return Err(Error::domain(format!(
                    "row {k}: r_n = {} is inconsistent with ell_hat (recomputed {r})",
                    row.r_n
                )));
            }
            replicates.push(Replicate {
                replicate_index: row.replicate_index,
                ell_hat: row.ell_hat,
                r_n: row.r_n,
                method: meta.method,
            });
        }
        Ok(Self { meta, replicates })
    }
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(1.0)
}

pub(crate) fn thread_pool(workers: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::Io(std::io::Error::other(e)))
}

/// Lowest-index failure wins, so the reported error does not depend on scheduling.
pub(crate) fn first_failure<T>(results: Vec<Result<T>>, seed: u64) -> Result<Vec<T>> {
    let mut out = Vec::with_capacity(results.len());
    for (i, r) in results.into_iter().enumerate() {
        match r {
            Ok(v) => out.push(v),
            Err(e) => {
                let msg = format!("replicate {i} (seed {seed}) failed: {e}");
                return Err(match e {
                    Error::Numeric(_) => Error::Numeric(msg),
                    _ => Error::Domain(msg),
                });
            }
        }
    }
    Ok(out)
}

/// `ℓ̂` for replicate `index`, drawn from that replicate's own streams.
pub fn sample_replicate(config: &SimConfig, index: u64) -> Result<f64> {
    let (n, p, ell, seed) = (config.n(), config.p(), config.ell(), config.seed);
    match config.method {
        Method::Dense => sample_dense(
            n,
            p,
            ell,
            &mut stream(seed, index, StreamRole::DenseSignal),
            &mut stream(seed, index, StreamRole::DenseNoise),
        ),
        Method::Secular => {
            let draw = sample_noise(
                n,
                p,
                &mut stream(seed, index, StreamRole::SecularSignal),
                &mut stream(seed, index, StreamRole::SecularNoise),
            )?;
            secular_solve(&draw, ell)
        }
    }
}

pub fn monte_carlo(config: &SimConfig) -> Result<SampleSet> {
    let params = config.params;
    let (rho_n, sigma_n) = centering_scaling(params.ell(), params.gamma_n())?;
    let meta = SampleMeta {
        seed: config.seed,
        n: params.n(),
        p: params.p(),
        gamma_n: params.gamma_n(),
        ell: params.ell(),
        method: config.method,
        replicates: config.replicates,
        rho_n,
        sigma_n,
    };
    let pool = thread_pool(config.workers)?;
    let results: Vec<Result<f64>> = pool.install(|| {
        (0..config.replicates as u64)
            .into_par_iter()
            .map(|i| sample_replicate(config, i))
            .collect()
    });
    let replicates = first_failure(results, config.seed)?
        .into_iter()
        .enumerate()
        .map(|(i, ell_hat)| Replicate {
            replicate_index: i as u64,
            ell_hat,
            r_n: meta.standardize(ell_hat),
            method: config.method,
        })
        .collect();
    Ok(SampleSet { meta, replicates })
}
