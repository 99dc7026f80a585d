//! Expansion terms `Q_{vn}` for standardized sums of independent variables.

use super::hermite::cdf_derivative;
use crate::error::{Error, Result};

/// Compositions of `v` into `w` positive parts.
fn compositions(v: usize, w: usize) -> Vec<Vec<usize>> {
    if w == 0 {
        return if v == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 1..=v.saturating_sub(w - 1) {
        for mut rest in compositions(v - first, w - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

/// `Q_v(x) = Σ_{w=1}^{v} (1/w!) Σ_{j₁+…+j_w=v} Π χ̄_{j_k+2}/(j_k+2)! · (-1)^{v+2w} d^{v+2w}Φ/dx^{v+2w}`.
///
/// `avg_cumulants[0]` is `χ̄₃`, `avg_cumulants[1]` is `χ̄₄`. Only `v ∈ {1, 2}`
/// is supported.
pub fn petrov_q(v: usize, avg_cumulants: &[f64], x: f64) -> Result<f64> {
    if !(1..=2).contains(&v) {
        return Err(Error::Unsupported(format!("Q_v is implemented for v in {{1, 2}}, got v = {v}")));
    }
    if avg_cumulants.len() < v {
        return Err(Error::domain(format!(
            "Q_{v} needs the average cumulants of order 3..={}, got {} values",
            v + 2,
            avg_cumulants.len()
        )));
    }
    let mut total = 0.0;
    for w in 1..=v {
        let inner: f64 = compositions(v, w)
            .iter()
            .map(|js| js.iter().map(|&j| avg_cumulants[j - 1] / factorial(j + 2)).product::<f64>())
            .sum();
        let order = v + 2 * w;
        let sign = if order % 2 == 0 { 1.0 } else { -1.0 };
        total += inner / factorial(w) * sign * cdf_derivative(order, x);
    }
    Ok(total)
}
