//! Direct path: largest eigenvalue of `S = n⁻¹ X'X` with `X = [√ℓ Z₁, Z₂]`.

use super::secular::NoiseDraw;
use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;

/// Gaussian inputs of one replicate: signal column `Z₁` (`n`) and noise
/// block `Z₂` (`n x p`).
#[derive(Debug, Clone)]
pub struct DenseInputs {
    pub z1: DVector<f64>,
    pub z2: DMatrix<f64>,
}

impl DenseInputs {
    pub fn draw<R: Rng>(n: usize, p: usize, signal: &mut R, noise: &mut R) -> Self {
        let z1 = DVector::from_fn(n, |_, _| signal.sample(StandardNormal));
        let z2 = DMatrix::from_fn(n, p, |_, _| noise.sample(StandardNormal));
        Self { z1, z2 }
    }

    pub fn n(&self) -> usize {
        self.z1.len()
    }

    pub fn p(&self) -> usize {
        self.z2.ncols()
    }

    /// `ℓ̂`, from the smaller of the two Gram matrices of `X`.
    pub fn largest_eigenvalue(&self, ell: f64) -> Result<f64> {
        let (n, p) = (self.n(), self.p());
        let mut x = DMatrix::zeros(n, p + 1);
        x.column_mut(0).copy_from(&(&self.z1 * ell.sqrt()));
        x.columns_mut(1, p).copy_from(&self.z2);
        let gram = if p + 1 <= n { x.tr_mul(&x) } else { &x * x.transpose() };
        largest_symmetric_eigenvalue(gram / n as f64)
    }

    /// The `(Λ, z)` representation of these inputs: `n⁻¹ Z₂ Z₂' = U Λ U'`,
    /// `z = U' Z₁`. The `n - p` null eigenvalues are set to exactly zero.
    pub fn noise_draw(&self) -> Result<NoiseDraw> {
        let (n, p) = (self.n(), self.p());
        let gram = (&self.z2 * self.z2.transpose()) / n as f64;
        let eig = nalgebra::SymmetricEigen::try_new(gram, f64::EPSILON, 0)
            .ok_or_else(|| Error::numeric(format!("eigendecomposition of the {n}x{n} noise Gram matrix failed")))?;
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
        let rank = p.min(n);
        let lambdas: Vec<f64> = order
            .iter()
            .enumerate()
            .map(|(k, &i)| if k < rank { eig.eigenvalues[i].max(0.0) } else { 0.0 })
            .collect();
        let z: Vec<f64> = order.iter().map(|&i| eig.eigenvectors.column(i).dot(&self.z1)).collect();
        NoiseDraw::new(lambdas, z)
    }
}

pub(crate) fn largest_symmetric_eigenvalue(m: DMatrix<f64>) -> Result<f64> {
    let dim = m.nrows();
    let max_abs = m.amax();
    if !max_abs.is_finite() {
        return Err(Error::numeric(format!("{dim}x{dim} symmetric matrix has non-finite entries")));
    }
    let top = m.symmetric_eigenvalues().iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if top.is_finite() {
        Ok(top)
    } else {
        Err(Error::numeric(format!(
            "symmetric eigensolver failed on a {dim}x{dim} matrix (max |entry| = {max_abs:e})"
        )))
    }
}

/// One dense-path draw of `ℓ̂`.
pub fn sample_dense<R: Rng>(n: usize, p: usize, ell: f64, signal: &mut R, noise: &mut R) -> Result<f64> {
    DenseInputs::draw(n, p, signal, noise).largest_eigenvalue(ell)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simulation::rng::{stream, StreamRole};

    #[test]
    fn one_by_one_matches_two_by_two_formula() {
        let mut s = stream(11, 0, StreamRole::DenseSignal);
        let mut q = stream(11, 0, StreamRole::DenseNoise);
        let inputs = DenseInputs::draw(1, 1, &mut s, &mut q);
        let ell = 25.0;
        let (a, b) = (inputs.z1[0], inputs.z2[(0, 0)]);
        // S = [[ℓa², √ℓab], [√ℓab, b²]]
        let (s11, s12, s22) = (ell * a * a, ell.sqrt() * a * b, b * b);
        let tr = s11 + s22;
        let det = s11 * s22 - s12 * s12;
        let top = 0.5 * (tr + (tr * tr - 4.0 * det).max(0.0).sqrt());
        let got = inputs.largest_eigenvalue(ell).unwrap();
        assert!((got - top).abs() < 1e-12 * top.max(1.0));
    }

    #[test]
    fn both_gram_sides_agree() {
        let mut s = stream(3, 1, StreamRole::DenseSignal);
        let mut q = stream(3, 1, StreamRole::DenseNoise);
        let inputs = DenseInputs::draw(12, 7, &mut s, &mut q);
        let ell = 4.0;
        let mut x = DMatrix::zeros(12, 8);
        x.column_mut(0).copy_from(&(&inputs.z1 * 2.0));
        x.columns_mut(1, 7).copy_from(&inputs.z2);
        let big = largest_symmetric_eigenvalue(&x * x.transpose() / 12.0).unwrap();
        let small = inputs.largest_eigenvalue(ell).unwrap();
        assert!((big - small).abs() < 1e-12 * big);
    }

    #[test]
    fn noise_draw_has_exact_null_block() {
        let mut s = stream(5, 2, StreamRole::DenseSignal);
        let mut q = stream(5, 2, StreamRole::DenseNoise);
        let draw = DenseInputs::draw(30, 12, &mut s, &mut q).noise_draw().unwrap();
        assert_eq!(draw.lambdas().len(), 30);
        assert_eq!(draw.zero_count(), 18);
        assert!(draw.lambdas()[11] > 0.0);
    }

    #[test]
    fn fixed_streams_are_deterministic() {
        let run = || {
            let mut s = stream(42, 9, StreamRole::DenseSignal);
            let mut q = stream(42, 9, StreamRole::DenseNoise);
            sample_dense(40, 20, 3.0, &mut s, &mut q).unwrap()
        };
        assert_eq!(run().to_bits(), run().to_bits());
    }

    #[test]
    fn non_finite_matrix_is_numeric_error() {
        let m = DMatrix::from_element(3, 3, f64::NAN);
        assert!(matches!(largest_symmetric_eigenvalue(m), Err(Error::Numeric(_))));
    }
}
