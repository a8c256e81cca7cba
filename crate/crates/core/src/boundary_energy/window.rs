use rayon::prelude::*;
use serde::Serialize;

use super::dyson::IntervalProfile;
use super::square::nn2d_boundary_gap;
use crate::error::{Error, Result};
use crate::models::{DisorderRealization, DEFAULT_WINDOW_FACTOR};
use crate::rng::realization_seed;

/// Which boundary variable is tested against the window: the interval
/// energy `W_N` for Dyson chains, the plus/minus gap for the 2D box.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WindowTarget {
    Dyson { alpha: f64 },
    Nn2d,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WindowEstimate {
    pub n: usize,
    pub delta: f64,
    pub width: f64,
    pub hits: usize,
    pub trials: usize,
    pub estimate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    /// Set when `δ ≥ 1/2`.
    pub outside_regime: bool,
}

/// 95% Wilson score interval for `hits` successes in `trials`.
pub fn wilson_interval(hits: usize, trials: usize) -> (f64, f64) {
    const Z: f64 = 1.959_963_984_540_054;
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = hits as f64 / n;
    let z2 = Z * Z;
    let centre = (p + z2 / (2.0 * n)) / (1.0 + z2 / n);
    let half = Z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / (1.0 + z2 / n);
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

/// Estimates `P(|X_N| ≤ N^δ)` over realizations `0..n_seeds` of `master`.
pub fn window_probability(
    target: WindowTarget,
    n: usize,
    delta: f64,
    n_seeds: usize,
    master: u64,
) -> Result<WindowEstimate> {
    if !(delta >= 0.0) || !delta.is_finite() {
        return Err(Error::invalid("delta", delta, "0 <= delta < 1/2"));
    }
    if n_seeds < 1000 {
        return Err(Error::invalid("n_seeds", n_seeds, "at least 1000"));
    }
    let width = (n as f64).powf(delta);
    let values: Vec<f64> = match target {
        WindowTarget::Dyson { alpha } => {
            let profile = IntervalProfile::new(alpha, n, DEFAULT_WINDOW_FACTOR * n)?;
            profile
                .sample(n_seeds, master)
                .into_iter()
                .map(|e| e.total)
                .collect()
        }
        WindowTarget::Nn2d => (0..n_seeds as u64)
            .into_par_iter()
            .map(|r| {
                nn2d_boundary_gap(n, &DisorderRealization::seeded(realization_seed(master, r)))
            })
            .collect::<Result<_>>()?,
    };
    let hits = values.iter().filter(|v| v.abs() <= width).count();
    let (ci_low, ci_high) = wilson_interval(hits, n_seeds);
    Ok(WindowEstimate {
        n,
        delta,
        width,
        hits,
        trials: n_seeds,
        estimate: hits as f64 / n_seeds as f64,
        ci_low,
        ci_high,
        outside_regime: delta >= 0.5,
    })
}
