//! Boundary-energy random variables and their scaling.
//!
//! Sign convention: with boundary field η, the all-plus ground state has
//! cross-boundary energy `−W` and the all-minus state `+W`, where
//! `W = Σ_j c_j η_j` and `c_j` is the total coupling of exterior site `j` to
//! the volume. The plus/minus energy gap is therefore `−2W` and the
//! zero-temperature mixture weight of the plus state is
//! `λ = e^{βW} / (e^{βW} + e^{−βW})`.

mod dyson;
mod fit;
mod square;
mod tail;
mod weight;
mod window;

pub use dyson::{
    column_second_moments, decomposition_crosscheck, interval_boundary_energy, sample_w_plus,
    BoundedValue, ColumnMoment, DecompositionCheck, HalfLineProfile, IntervalEnergy,
    IntervalProfile,
};
pub use fit::{fit_power_law, scaling_fit, scaling_fit_with, FitPolicy, ScalingFit, Statistic};
pub use square::{nn2d_boundary_gap, nn2d_gap_moments, sample_nn2d_gaps};
pub use tail::{hurwitz_zeta, tail_sum, tail_sum_with_window, TailSum, DEFAULT_TAIL_EPSILON};
pub use weight::{lambda_bin, metastate_weight, weight_bin};
pub use window::{wilson_interval, window_probability, WindowEstimate, WindowTarget};
