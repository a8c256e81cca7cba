//! Spin systems with random boundary conditions.
//!
//! The crate is organised bottom-up:
//!
//! * [`models`]: volumes, spins, boundary conditions, quenched disorder and
//!   the five finite-volume Hamiltonians (nearest-neighbour Ising, Dyson,
//!   Mattis, random-field Ising, Edwards-Anderson), plus the Mattis gauge map.
//! * [`gibbs`]: brute-force enumeration of finite-volume Gibbs measures for
//!   small volumes; the ground truth every sampler is checked against.
//! * [`boundary_energy`]: the random variables that measure how a random
//!   boundary interacts with a ground state, with certified truncation error,
//!   and the power-law fits used to read off their growth with N.
//! * [`montecarlo`]: single-spin Metropolis for volumes beyond enumeration.
//! * [`metastate`]: histograms of mixture weights over disorder, sign-flip
//!   and null-recurrence diagnostics along volume sequences.
//!
//! All randomness flows from counter-based streams in [`rng`], so every
//! quantity is a pure function of `(master seed, realization index)` and is
//! independent of how work is split across threads.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod boundary_energy;
pub mod error;
pub mod gibbs;
pub mod metastate;
pub mod models;
pub mod montecarlo;
pub mod rng;
pub mod stats;

pub use error::{Error, Result};
pub use models::{
    BoundaryCondition, DisorderRealization, Family, Kernel, ModelSpec, Reach, Site, Spin,
    SpinConfiguration, Volume, VolumeKind,
};

pub use boundary_energy::{ScalingFit, TailSum};
pub use gibbs::GibbsTable;
pub use metastate::{MetastateHistogram, VolumeSequence};
pub use montecarlo::McRun;

/// Crate version, echoed in experiment summaries.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
