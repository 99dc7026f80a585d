//! Goodness of fit of Monte Carlo samples against the normal and corrected
//! laws, and plot-ready figure data.

use crate::edgeworth::{goe_correction, CorrectedLaw, EdgeworthApprox, GammaMode, SpikeParams};
use crate::error::{Error, Result};
use crate::mp_functionals::support_edges;
use crate::normal;
use crate::simulation::{format_float, GoeSamples, SampleMeta, SampleSet};
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

/// One-sample Kolmogorov–Smirnov distance against `cdf` for sorted `samples`.
pub fn ks_distance<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::domain("KS distance needs at least one sample"));
    }
    check_sorted(samples)?;
    let n = samples.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in samples.iter().enumerate() {
        let c = cdf(x);
        let above = (i + 1) as f64 / n - c;
        let below = c - i as f64 / n;
        d = d.max(above.abs()).max(below.abs());
    }
    Ok(d)
}

fn check_sorted(samples: &[f64]) -> Result<()> {
    if samples.iter().any(|x| x.is_nan()) {
        return Err(Error::domain("samples contain NaN"));
    }
    if samples.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::domain("samples must be sorted ascending"));
    }
    Ok(())
}

/// Two-sample KS statistic and its asymptotic Kolmogorov p-value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoSampleKs {
    pub statistic: f64,
    pub p_value: f64,
}

pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<TwoSampleKs> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::domain("two-sample KS needs non-empty samples"));
    }
    check_sorted(a)?;
    check_sorted(b)?;
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    let ne = na * nb / (na + nb);
    let lambda = (ne.sqrt() + 0.12 + 0.11 / ne.sqrt()) * d;
    Ok(TwoSampleKs { statistic: d, p_value: kolmogorov_survival(lambda) })
}

/// `P(K > λ) = 2 Σ_{k≥1} (-1)^{k-1} exp(-2k²λ²)`
pub fn kolmogorov_survival(lambda: f64) -> f64 {
    if lambda < 0.2 {
        return 1.0;
    }
    let mut sum = 0.0;
    for k in 1..=100 {
        let k = k as f64;
        let term = (-2.0 * k * k * lambda * lambda).exp();
        sum += if k as u64 % 2 == 1 { term } else { -term };
        if term < 1e-17 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// Sample mean, unbiased variance, moment skewness and its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleMoments {
    pub mean: f64,
    pub variance: f64,
    pub skewness: f64,
    /// Delta-method standard error of `skewness`.
    pub skewness_se: f64,
    pub count: usize,
}

pub fn sample_moments(x: &[f64]) -> Result<SampleMoments> {
    if x.len() < 2 {
        return Err(Error::domain("moments need at least two samples"));
    }
    let n = x.len() as f64;
    let mean = x.iter().sum::<f64>() / n;
    let (mut m2, mut m3) = (0.0, 0.0);
    for &v in x {
        let d = v - mean;
        m2 += d * d;
        m3 += d * d * d;
    }
    m2 /= n;
    m3 /= n;
    let sd = m2.sqrt();
    let skewness = m3 / (m2 * sd);
    // influence function of m3/m2^{3/2}
    let if2 = x
        .iter()
        .map(|&v| {
            let u = (v - mean) / sd;
            let f = u * u * u - 3.0 * u - 1.5 * skewness * (u * u - 1.0);
            f * f
        })
        .sum::<f64>()
        / n;
    Ok(SampleMoments {
        mean,
        variance: m2 * n / (n - 1.0),
        skewness,
        skewness_se: (if2 / n).sqrt(),
        count: x.len(),
    })
}

/// Real roots of `x³ + p x + q`, ascending.
fn depressed_cubic_roots(p: f64, q: f64) -> Vec<f64> {
    let disc = -(4.0 * p * p * p + 27.0 * q * q);
    if disc > 0.0 {
        let m = 2.0 * (-p / 3.0).sqrt();
        let theta = (3.0 * q / (p * m)).clamp(-1.0, 1.0).acos() / 3.0;
        let mut r: Vec<f64> = (0..3)
            .map(|k| m * (theta - 2.0 * std::f64::consts::PI * k as f64 / 3.0).cos())
            .collect();
        r.sort_by(f64::total_cmp);
        r
    } else {
        let s = (q * q / 4.0 + p * p * p / 27.0).max(0.0).sqrt();
        vec![(-q / 2.0 + s).cbrt() + (-q / 2.0 - s).cbrt()]
    }
}

/// `x ↦ sup_{t ≤ x} F_E(t)` clamped to `[0, 1]`: a distribution function
/// that coincides with `F_E` wherever `F_E` is increasing and in range.
#[derive(Debug, Clone, Copy)]
pub struct RectifiedCdf {
    law: CorrectedLaw,
    local_max: Option<(f64, f64)>,
}

impl RectifiedCdf {
    pub fn new(law: CorrectedLaw) -> Self {
        // f_E / φ = 1 + ε (α₂ x³ + (α₀ - 3α₂) x)
        let a = law.inv_sqrt_n * law.alpha2;
        let c = law.inv_sqrt_n * (law.alpha0 - 3.0 * law.alpha2);
        let local_max = if a > 0.0 {
            let roots = depressed_cubic_roots(c / a, 1.0 / a);
            // sign pattern - + - +: F_E peaks at the middle root
            (roots.len() == 3).then(|| (roots[1], law.cdf(roots[1])))
        } else {
            None
        };
        Self { law, local_max }
    }

    pub fn eval(&self, x: f64) -> f64 {
        let mut v = self.law.cdf(x);
        if let Some((r, peak)) = self.local_max {
            if x >= r {
                v = v.max(peak);
            }
        }
        v.clamp(0.0, 1.0)
    }
}

/// KS distances and moments of standardized samples against a corrected law.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitSummary {
    pub ks_vs_normal: f64,
    pub ks_vs_corrected: f64,
    pub sample_mean: f64,
    pub sample_var: f64,
    pub sample_skewness: f64,
    pub sample_skewness_se: f64,
    pub predicted_skewness: f64,
    pub predicted_mean: f64,
    pub n_samples: usize,
}

/// Fit of sorted standardized samples; moments are `NaN` for a single sample.
pub fn fit_summary(sorted: &[f64], law: CorrectedLaw) -> Result<FitSummary> {
    let rectified = RectifiedCdf::new(law);
    let ks_vs_normal = ks_distance(sorted, normal::cdf)?;
    let ks_vs_corrected = ks_distance(sorted, |x| rectified.eval(x))?;
    let (mean, var, skew, se) = if sorted.len() >= 2 {
        let m = sample_moments(sorted)?;
        (m.mean, m.variance, m.skewness, m.skewness_se)
    } else {
        (sorted[0], f64::NAN, f64::NAN, f64::NAN)
    };
    Ok(FitSummary {
        ks_vs_normal,
        ks_vs_corrected,
        sample_mean: mean,
        sample_var: var,
        sample_skewness: skew,
        sample_skewness_se: se,
        predicted_skewness: law.predicted_skewness(),
        predicted_mean: law.predicted_mean(),
        n_samples: sorted.len(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    #[serde(flatten)]
    pub fit: FitSummary,
    pub validity_index: f64,
    pub metadata: SampleMeta,
}

impl ComparisonReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization is infallible")
    }
}

fn check_params(meta: &SampleMeta, params: &SpikeParams) -> Result<()> {
    let same = meta.n == params.n()
        && meta.p == params.p()
        && (meta.ell - params.ell()).abs() <= 1e-12 * params.ell()
        && (meta.gamma_n - params.gamma_n()).abs() <= 1e-12;
    if same {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "parameters (ell = {}, n = {}, p = {}) do not match the sample metadata (ell = {}, n = {}, p = {})",
            params.ell(),
            params.n(),
            params.p(),
            meta.ell,
            meta.n,
            meta.p
        )))
    }
}

/// Normal and corrected fits of the standardized samples `R_n`.
pub fn compare(samples: &SampleSet, params: &SpikeParams) -> Result<ComparisonReport> {
    check_params(samples.meta(), params)?;
    let approx = EdgeworthApprox::new(params, GammaMode::FiniteGammaN)?;
    let mut r = samples.r_n();
    r.sort_by(f64::total_cmp);
    Ok(ComparisonReport {
        fit: fit_summary(&r, approx.law())?,
        validity_index: approx.validity_index(),
        metadata: *samples.meta(),
    })
}

/// GOE counterpart of [`ComparisonReport`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GoeReport {
    #[serde(flatten)]
    pub fit: FitSummary,
    pub theta: f64,
    pub p: usize,
    pub seed: u64,
    pub rho: f64,
    pub sigma: f64,
}

pub fn compare_goe(samples: &GoeSamples) -> Result<GoeReport> {
    let corr = goe_correction(samples.params);
    let mut r = samples.r_p.clone();
    r.sort_by(f64::total_cmp);
    Ok(GoeReport {
        fit: fit_summary(&r, corr.law())?,
        theta: samples.params.theta(),
        p: samples.params.p(),
        seed: samples.seed,
        rho: corr.rho,
        sigma: corr.sigma,
    })
}

pub const DEFAULT_BINS: usize = 100;
pub const DEFAULT_GRID_POINTS: usize = 1000;
pub const PADDING: f64 = 0.05;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FigureMetadata {
    pub bulk_edge: f64,
    pub bins: usize,
    pub grid_points: usize,
    pub padding: f64,
    pub seed: u64,
    pub params: SampleMeta,
    pub n_samples: usize,
    /// Trapezoid integrals of the density columns over the grid.
    pub corrected_mass_trapezoid: f64,
    pub normal_mass_trapezoid: f64,
    /// Exact mass of each law inside the grid range; `1 -` these is the truncation.
    pub corrected_mass_exact: f64,
    pub normal_mass_exact: f64,
    pub density_crossings: usize,
    pub predicted_crossings: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FigureData {
    pub grid: Vec<f64>,
    pub corrected_density: Vec<f64>,
    pub normal_density: Vec<f64>,
    pub histogram_edges: Vec<f64>,
    pub histogram_density: Vec<f64>,
    pub bulk_edge: f64,
    pub metadata: FigureMetadata,
}

fn trapezoid(x: &[f64], y: &[f64]) -> f64 {
    x.windows(2).zip(y.windows(2)).map(|(x, y)| 0.5 * (x[1] - x[0]) * (y[0] + y[1])).sum()
}

/// Sign changes of `a - b` along the grid, ignoring exact zeros.
fn crossings(a: &[f64], b: &[f64]) -> usize {
    let signs: Vec<bool> = a.iter().zip(b).filter(|(x, y)| x != y).map(|(x, y)| x > y).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Densities on the `ℓ̂` scale and an area-normalized histogram of `ℓ̂`,
/// both over the sample range padded by 5% on each side.
pub fn figure_data(samples: &SampleSet, params: &SpikeParams, bins: usize, grid_points: usize) -> Result<FigureData> {
    if grid_points < 100 {
        return Err(Error::domain(format!("grid_points must be at least 100, got {grid_points}")));
    }
    let (lo, hi) = padded_range(&samples.ell_hat())?;
    let grid = (0..grid_points)
        .map(|k| lo + (hi - lo) * k as f64 / (grid_points - 1) as f64)
        .collect();
    figure_data_on_grid(samples, params, bins, grid)
}

fn padded_range(y: &[f64]) -> Result<(f64, f64)> {
    let (min, max) = y.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    let range = max - min;
    if !(range > 0.0 && range.is_finite()) {
        return Err(Error::domain("sample range is degenerate; cannot build a figure grid"));
    }
    Ok((min - PADDING * range, max + PADDING * range))
}

/// [`figure_data`] with caller-supplied density grid (ascending `ℓ̂` values).
pub fn figure_data_on_grid(samples: &SampleSet, params: &SpikeParams, bins: usize, grid: Vec<f64>) -> Result<FigureData> {
    check_params(samples.meta(), params)?;
    if bins < 10 {
        return Err(Error::domain(format!("bins must be at least 10, got {bins}")));
    }
    if grid.len() < 2 || grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::domain("figure grid must have at least two strictly increasing points"));
    }
    let law = EdgeworthApprox::new(params, GammaMode::FiniteGammaN)?.law();
    let y = samples.ell_hat();
    let (lo, hi) = padded_range(&y)?;

    let corrected_density: Vec<f64> = grid.iter().map(|&v| law.rescaled_density(v)).collect();
    let normal_density: Vec<f64> = grid.iter().map(|&v| law.rescaled_normal_density(v)).collect();

    let width = (hi - lo) / bins as f64;
    let histogram_edges: Vec<f64> = (0..=bins).map(|k| lo + width * k as f64).collect();
    let mut counts = vec![0usize; bins];
    for &v in &y {
        let k = (((v - lo) / width) as usize).min(bins - 1);
        counts[k] += 1;
    }
    let total = y.len() as f64;
    let histogram_density: Vec<f64> = counts
        .iter()
        .zip(histogram_edges.windows(2))
        .map(|(&c, e)| c as f64 / (total * (e[1] - e[0])))
        .collect();

    let (xa, xb) = (law.standardize(grid[0]), law.standardize(grid[grid.len() - 1]));
    let bulk_edge = support_edges(params.gamma_n())?.b;
    let metadata = FigureMetadata {
        bulk_edge,
        bins,
        grid_points: grid.len(),
        padding: PADDING,
        seed: samples.meta().seed,
        params: *samples.meta(),
        n_samples: y.len(),
        corrected_mass_trapezoid: trapezoid(&grid, &corrected_density),
        normal_mass_trapezoid: trapezoid(&grid, &normal_density),
        corrected_mass_exact: law.cdf(xb) - law.cdf(xa),
        normal_mass_exact: normal::cdf(xb) - normal::cdf(xa),
        density_crossings: crossings(&corrected_density, &normal_density),
        predicted_crossings: law.relative_error_roots().map_or(1, |r| r.len()),
    };
    Ok(FigureData {
        grid,
        corrected_density,
        normal_density,
        histogram_edges,
        histogram_density,
        bulk_edge,
        metadata,
    })
}

impl FigureData {
    /// `y,f_corrected,f_normal`
    pub fn density_csv(&self) -> String {
        let mut out = String::from("y,f_corrected,f_normal\n");
        for ((y, c), d) in self.grid.iter().zip(&self.corrected_density).zip(&self.normal_density) {
            let _ = writeln!(out, "{},{},{}", format_float(*y), format_float(*c), format_float(*d));
        }
        out
    }

    /// `bin_left,bin_right,density`
    pub fn histogram_csv(&self) -> String {
        let mut out = String::from("bin_left,bin_right,density\n");
        for (e, d) in self.histogram_edges.windows(2).zip(&self.histogram_density) {
            let _ = writeln!(out, "{},{},{}", format_float(e[0]), format_float(e[1]), format_float(*d));
        }
        out
    }

    pub fn metadata_json(&self) -> String {
        serde_json::to_string_pretty(&self.metadata).expect("metadata serialization is infallible")
    }
}

#[cfg(test)]
mod tests;
