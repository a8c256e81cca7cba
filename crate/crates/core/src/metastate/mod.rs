//! Empirical metastates over disorder realizations.
//!
//! Every realization index `r` of a master seed owns one η field on all of
//! `Z`; volumes of a sequence read it by prefix, so energies at different
//! sizes are computed against the same frozen boundary.

mod csd;
mod histogram;
mod sequence;

pub use csd::{
    csd_flip_statistics, csd_over_seeds, null_recurrence_frequency, FlipRecord, NullRecurrence,
};
pub use histogram::{
    empirical_metastate, EmpiricalMetastate, MetastateConfig, MetastateHistogram, WeightMode,
    DEFAULT_BINS, ENDPOINT_EPSILON,
};
pub use sequence::{make_volume_sequence, SequenceKind, VolumeSequence};
