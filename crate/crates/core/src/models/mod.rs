//! Volumes, configurations, disorder and the finite-volume Hamiltonians.

mod boundary;
mod disorder;
mod family;
mod gauge;
mod hamiltonian;
mod spin;
mod volume;

pub use boundary::BoundaryCondition;
pub use disorder::DisorderRealization;
pub use family::{pair_coupling, Family, Kernel, ModelSpec, DEFAULT_WINDOW_FACTOR};
pub use gauge::{gauge_boundary, gauge_to_ferromagnet, gauge_transform, GaugedFerromagnet};
pub(crate) use hamiltonian::window_tail_bound;
pub use hamiltonian::{
    boundary_bonds, finite_volume_energy, interior_bonds, Bond, CompiledHamiltonian, Energy,
};
pub use spin::{Spin, SpinConfiguration};
pub use volume::{Reach, Site, Volume, VolumeKind};
