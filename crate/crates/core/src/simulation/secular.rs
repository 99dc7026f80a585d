//! Secular-equation path: `ℓ̂` is the root of `1 = (ℓ/n) Σ zᵢ² / (x - λᵢ)`
//! on `(λ₁, ∞)`, given the noise spectrum `Λ` and rotated signal `z`.

use crate::error::{Error, Result};
use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;

/// Noise spectrum (descending, zero-padded to length `n`) and rotated signal.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseDraw {
    lambdas: Vec<f64>,
    z: Vec<f64>,
}

impl NoiseDraw {
    pub fn new(lambdas: Vec<f64>, z: Vec<f64>) -> Result<Self> {
        if lambdas.is_empty() || lambdas.len() != z.len() {
            return Err(Error::domain(format!(
                "lambdas and z must be non-empty with equal length, got {} and {}",
                lambdas.len(),
                z.len()
            )));
        }
        if lambdas.iter().chain(&z).any(|v| !v.is_finite()) {
            return Err(Error::domain("noise draw contains non-finite values"));
        }
        if lambdas.iter().any(|&l| l < 0.0) {
            return Err(Error::domain("noise eigenvalues must be non-negative"));
        }
        if lambdas.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::domain("noise eigenvalues must be sorted descending"));
        }
        Ok(Self { lambdas, z })
    }

    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }

    pub fn z(&self) -> &[f64] {
        &self.z
    }

    pub fn n(&self) -> usize {
        self.lambdas.len()
    }

    pub fn largest(&self) -> f64 {
        self.lambdas[0]
    }

    /// Number of exactly-zero trailing eigenvalues.
    pub fn zero_count(&self) -> usize {
        self.lambdas.iter().rev().take_while(|&&l| l == 0.0).count()
    }

    /// `(ℓ/n) Σ zᵢ² / (x - λᵢ) - 1`
    pub fn secular_function(&self, ell: f64, x: f64) -> f64 {
        let (s, _) = self.sums(x);
        ell / self.n() as f64 * s - 1.0
    }

    /// `(Σ zᵢ²/(x-λᵢ), Σ zᵢ²/(x-λᵢ)²)`
    fn sums(&self, x: f64) -> (f64, f64) {
        self.lambdas.iter().zip(&self.z).fold((0.0, 0.0), |(s, d), (&l, &z)| {
            let r = 1.0 / (x - l);
            let t = z * z * r;
            (s + t, d + t * r)
        })
    }
}

/// Eigenvalues of `n⁻¹ Z₂ Z₂'` for an `n x p` white Gaussian `Z₂`, plus
/// `n` independent standard normals for `z`.
pub fn sample_noise<R: Rng>(n: usize, p: usize, signal: &mut R, noise: &mut R) -> Result<NoiseDraw> {
    if n == 0 || p == 0 {
        return Err(Error::domain(format!("n and p must be positive, got n = {n}, p = {p}")));
    }
    let z2 = DMatrix::from_fn(n, p, |_, _| noise.sample::<f64, _>(StandardNormal));
    let gram = if p < n { z2.tr_mul(&z2) } else { &z2 * z2.transpose() } / n as f64;
    let dim = gram.nrows();
    let mut eig: Vec<f64> = gram.symmetric_eigenvalues().iter().copied().collect();
    if eig.iter().any(|v| !v.is_finite()) {
        return Err(Error::numeric(format!("noise eigensolve on a {dim}x{dim} Gram matrix produced non-finite values")));
    }
    eig.sort_by(|a, b| b.total_cmp(a));
    let mut lambdas: Vec<f64> = eig.into_iter().map(|v| v.max(0.0)).collect();
    lambdas.resize(n, 0.0);
    let z = (0..n).map(|_| signal.sample(StandardNormal)).collect();
    NoiseDraw::new(lambdas, z)
}

const MAX_EXPANSIONS: usize = 200;
const RESIDUAL_TARGET: f64 = 1e-13;

/// Unique root `ℓ̂ > λ₁` of the secular equation.
pub fn secular_solve(draw: &NoiseDraw, ell: f64) -> Result<f64> {
    if !(ell.is_finite() && ell > 0.0) {
        return Err(Error::domain(format!("ell must be positive, got {ell}")));
    }
    let n = draw.n() as f64;
    let z2: f64 = draw.z.iter().map(|z| z * z).sum();
    if z2 == 0.0 {
        return Err(Error::numeric("secular equation undefined: z is identically zero"));
    }
    let psi = |x: f64| draw.secular_function(ell, x);
    let l1 = draw.largest();

    // left end: ψ → +∞ at λ₁⁺ unless z vanishes on the top eigenspace
    let mut offset = if l1 > 0.0 { 1e-12 * l1 } else { f64::MIN_POSITIVE };
    let mut lo = l1 + offset;
    let mut expansions = 0;
    while !(psi(lo) > 0.0) {
        offset *= 0.5;
        let next = l1 + offset;
        expansions += 1;
        if next <= l1 || expansions > MAX_EXPANSIONS {
            return Err(Error::numeric(format!(
                "secular function is not positive just right of lambda_1 = {l1:e}"
            )));
        }
        lo = next;
    }
    let mut hi = l1 + ell * (1.0 + z2 / n);
    expansions = 0;
    while !(psi(hi) < 0.0) {
        hi = l1 + 2.0 * (hi - l1);
        expansions += 1;
        if expansions > MAX_EXPANSIONS || !hi.is_finite() {
            return Err(Error::numeric(format!(
                "no sign change of the secular function after {MAX_EXPANSIONS} bracket expansions"
            )));
        }
    }

    let width = 1e-13 * l1.max(1.0);
    while hi - lo > width {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if psi(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }

    let mut x = 0.5 * (lo + hi);
    for _ in 0..50 {
        let (s, d) = draw.sums(x);
        let r = ell / n * s - 1.0;
        if r.abs() < RESIDUAL_TARGET {
            break;
        }
        let next = x + r / (ell / n * d);
        if !(next > l1 && next.is_finite()) || next == x {
            break;
        }
        x = next;
    }
    Ok(x)
}
