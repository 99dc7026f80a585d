//! `lo:hi:step` evaluation grids.

use crate::error::{Error, Result};

pub const MAX_GRID_POINTS: usize = 1_000_000;

/// Points `lo + k step` for `k = 0, 1, ...` up to `hi` (inclusive, with a
/// relative slack of `1e-9` steps so that `0:1:0.1` ends at `1`).
pub fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    let [lo, hi, step] = parts.as_slice() else {
        return Err(Error::parse(format!("grid {spec:?} must have the form lo:hi:step")));
    };
    let num = |s: &str, what: &str| -> Result<f64> {
        let v: f64 = s
            .trim()
            .parse()
            .map_err(|_| Error::parse(format!("grid {what} {s:?} is not a number")))?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::parse(format!("grid {what} must be finite")))
        }
    };
    let (lo, hi, step) = (num(lo, "lower bound")?, num(hi, "upper bound")?, num(step, "step")?);
    if step <= 0.0 {
        return Err(Error::domain(format!("grid step must be positive, got {step}")));
    }
    if hi < lo {
        return Err(Error::domain(format!("grid upper bound {hi} is below lower bound {lo}")));
    }
    let count = ((hi - lo) / step + 1e-9).floor();
    if !(count < MAX_GRID_POINTS as f64) {
        return Err(Error::domain(format!("grid {spec:?} has more than {MAX_GRID_POINTS} points")));
    }
    Ok((0..=count as usize).map(|k| lo + k as f64 * step).collect())
}
