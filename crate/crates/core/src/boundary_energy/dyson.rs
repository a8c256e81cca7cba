use rayon::prelude::*;
use serde::Serialize;

use super::tail::{tail_sum, TailSum, DEFAULT_TAIL_EPSILON};
use crate::error::{Error, Result};
use crate::models::window_tail_bound;
use crate::models::DisorderRealization;
use crate::rng::realization_seed;
use crate::stats::compensated_sum;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundedValue {
    pub value: f64,
    pub error_bound: f64,
}

/// Coefficients `a_q = Σ_{j≥0} (q + j)^{−α}` of `η_{−q}` in the half-line
/// energy `W⁺`, for `q = 1..=M`.
#[derive(Debug, Clone)]
pub struct HalfLineProfile {
    alpha: f64,
    coefficients: Vec<f64>,
    error_bound: f64,
}

impl HalfLineProfile {
    pub fn new(alpha: f64, window: usize) -> Result<Self> {
        Self::with_epsilon(alpha, window, DEFAULT_TAIL_EPSILON)
    }

    pub fn with_epsilon(alpha: f64, window: usize, eps: f64) -> Result<Self> {
        if window < 1 {
            return Err(Error::invalid("window", window, "M >= 1"));
        }
        let tails: Vec<TailSum> = (1..=window as u64)
            .map(|q| tail_sum(alpha, q, eps))
            .collect::<Result<_>>()?;
        Ok(HalfLineProfile {
            alpha,
            coefficients: tails.iter().map(|t| t.value).collect(),
            error_bound: compensated_sum(tails.iter().map(|t| t.error_bound)),
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn window(&self) -> usize {
        self.coefficients.len()
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    /// `Σ_{q=1}^{M} η_{−q} a_q`.
    pub fn sample(&self, eta: &DisorderRealization) -> BoundedValue {
        BoundedValue {
            value: eta.line_dot(-1, -1, &self.coefficients),
            error_bound: self.error_bound,
        }
    }
}

pub fn sample_w_plus(alpha: f64, window: usize, eta: &DisorderRealization) -> Result<BoundedValue> {
    Ok(HalfLineProfile::new(alpha, window)?.sample(eta))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecompositionCheck {
    /// `Σ_i W_i`, grouped by exterior site.
    pub by_sites: f64,
    /// `Σ_j W′_j`, grouped by interior site.
    pub by_columns: f64,
    pub discrepancy: f64,
    /// `W′_j` for `j = 0..M`.
    pub columns: Vec<f64>,
}

/// Sums `Σ_{i=−M}^{−1} Σ_{j=0}^{M−1} |i−j|^{−α} η_i` in both orders.
pub fn decomposition_crosscheck(
    alpha: f64,
    window: usize,
    eta: &DisorderRealization,
) -> DecompositionCheck {
    let m = window as i64;
    let weight = |i: i64, j: i64| ((j - i) as f64).powf(-alpha);
    let signs: Vec<f64> = (1..=m)
        .map(|q| eta.site(crate::Site::line(-q)).value())
        .collect();
    let by_sites = compensated_sum(
        (1..=m).map(|q| signs[(q - 1) as usize] * compensated_sum((0..m).map(|j| weight(-q, j)))),
    );
    let columns: Vec<f64> = (0..m)
        .map(|j| compensated_sum((1..=m).map(|q| signs[(q - 1) as usize] * weight(-q, j))))
        .collect();
    let by_columns = compensated_sum(columns.iter().copied());
    DecompositionCheck {
        by_sites,
        by_columns,
        discrepancy: (by_sites - by_columns).abs(),
        columns,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ColumnMoment {
    pub j: usize,
    pub sample: f64,
    /// `Σ_{k=1}^{M} (k + j)^{−2α}`.
    pub exact: f64,
}

/// Sample second moments `E[(W′_j)²]` of the column variables over
/// realizations `0..n_seeds` of `master`.
pub fn column_second_moments(
    alpha: f64,
    window: usize,
    columns: &[usize],
    n_seeds: usize,
    master: u64,
) -> Vec<ColumnMoment> {
    let weights: Vec<Vec<f64>> = columns
        .iter()
        .map(|&j| {
            (1..=window)
                .map(|k| ((k + j) as f64).powf(-alpha))
                .collect()
        })
        .collect();
    let sums = (0..n_seeds as u64)
        .into_par_iter()
        .map(|r| {
            let eta = DisorderRealization::seeded(realization_seed(master, r));
            weights
                .iter()
                .map(|w| eta.line_dot(-1, -1, w).powi(2))
                .collect::<Vec<f64>>()
        })
        .collect::<Vec<_>>();
    columns
        .iter()
        .enumerate()
        .map(|(c, &j)| ColumnMoment {
            j,
            sample: compensated_sum(sums.iter().map(|s| s[c])) / n_seeds as f64,
            exact: compensated_sum(weights[c].iter().map(|w| w * w)),
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IntervalEnergy {
    pub left: f64,
    pub right: f64,
    pub total: f64,
    pub truncation_bound: f64,
}

/// Exterior coefficients of the all-plus interval `{0..N−1}`:
/// `c_k = Σ_{i=0}^{N−1} (k + i)^{−α}` for the sites at distance `k = 1..=M`
/// on either side.
#[derive(Debug, Clone)]
pub struct IntervalProfile {
    alpha: f64,
    n: usize,
    coefficients: Vec<f64>,
    truncation_bound: f64,
}

impl IntervalProfile {
    /// Coefficients from compensated prefix sums `S(r) = Σ_{m≤r} m^{−α}`.
    pub fn new(alpha: f64, n: usize, window: usize) -> Result<Self> {
        check(alpha, n, window)?;
        let len = window + n;
        let mut prefix = Vec::with_capacity(len);
        let (mut s, mut c) = (0.0f64, 0.0f64);
        prefix.push(0.0);
        for m in 1..len {
            let x = (m as f64).powf(-alpha);
            let t = s + x;
            c += if s.abs() >= x.abs() {
                (s - t) + x
            } else {
                (x - t) + s
            };
            s = t;
            prefix.push(s + c);
        }
        let coefficients = (1..=window)
            .map(|k| prefix[k + n - 1] - prefix[k - 1])
            .collect();
        Ok(Self::assemble(alpha, n, window, coefficients))
    }

    /// Coefficients from Hurwitz-zeta differences `ζ(α, k) − ζ(α, k + N)`.
    pub fn from_tail_sums(alpha: f64, n: usize, window: usize) -> Result<Self> {
        check(alpha, n, window)?;
        let coefficients = (1..=window as u64)
            .map(|k| {
                let a = tail_sum(alpha, k, 1e-300)?.value;
                let b = tail_sum(alpha, k + n as u64, 1e-300)?.value;
                Ok(a - b)
            })
            .collect::<Result<_>>()?;
        Ok(Self::assemble(alpha, n, window, coefficients))
    }

    fn assemble(alpha: f64, n: usize, window: usize, coefficients: Vec<f64>) -> Self {
        IntervalProfile {
            alpha,
            n,
            coefficients,
            truncation_bound: window_tail_bound(alpha, n, window),
        }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn energy(
        &self,
        eta_left: &DisorderRealization,
        eta_right: &DisorderRealization,
    ) -> IntervalEnergy {
        let left = eta_left.line_dot(-1, -1, &self.coefficients);
        let right = eta_right.line_dot(self.n as i64, 1, &self.coefficients);
        IntervalEnergy {
            left,
            right,
            total: left + right,
            truncation_bound: self.truncation_bound,
        }
    }

    /// `Var(W) = 2 Σ_k c_k²` for symmetric ±1 disorder.
    pub fn exact_variance(&self) -> f64 {
        2.0 * compensated_sum(self.coefficients.iter().map(|c| c * c))
    }

    /// Energies for realizations `0..n_seeds` of `master`, in index order.
    pub fn sample(&self, n_seeds: usize, master: u64) -> Vec<IntervalEnergy> {
        (0..n_seeds as u64)
            .into_par_iter()
            .map(|r| {
                let eta = DisorderRealization::seeded(realization_seed(master, r));
                self.energy(&eta, &eta)
            })
            .collect()
    }
}

fn check(alpha: f64, n: usize, window: usize) -> Result<()> {
    crate::models::Kernel::PowerLaw { alpha }.validate()?;
    if n < 1 {
        return Err(Error::invalid("N", n, "N >= 1"));
    }
    if window < 1 {
        return Err(Error::invalid("window", window, "M >= 1"));
    }
    Ok(())
}

/// `W` of the all-plus interval `{0..N−1}` against `η_left` on `−M..−1`
/// and `η_right` on `N..N+M−1`.
pub fn interval_boundary_energy(
    alpha: f64,
    n: usize,
    window: usize,
    eta_left: &DisorderRealization,
    eta_right: &DisorderRealization,
) -> Result<IntervalEnergy> {
    Ok(IntervalProfile::new(alpha, n, window)?.energy(eta_left, eta_right))
}
