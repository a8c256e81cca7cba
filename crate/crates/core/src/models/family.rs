use serde::{Deserialize, Serialize};

use super::volume::{Reach, Site, Volume, VolumeKind};
use crate::error::{Error, Result};

/// Default long-range boundary window, in units of the interval length.
pub const DEFAULT_WINDOW_FACTOR: usize = 10;

/// Coupling strength as a function of the separation of two sites.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Kernel {
    /// `J = 1` between lattice neighbours, `0` otherwise.
    NearestNeighbour,
    /// `J(r) = r^{−α}` on the line.
    PowerLaw { alpha: f64 },
}

impl Kernel {
    /// `J(a − b)` for `a != b`.
    #[inline]
    pub fn coupling(&self, a: Site, b: Site) -> f64 {
        match *self {
            Kernel::NearestNeighbour => {
                if a.manhattan(b) == 1 {
                    1.0
                } else {
                    0.0
                }
            }
            Kernel::PowerLaw { alpha } => (a.manhattan(b) as f64).powf(-alpha),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Kernel::NearestNeighbour => Ok(()),
            Kernel::PowerLaw { alpha } => check_alpha(alpha),
        }
    }
}

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 1.0 && alpha <= 2.0 {
        Ok(())
    } else {
        Err(Error::invalid("alpha", alpha, "alpha in (1, 2]"))
    }
}

/// Hamiltonian family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Family {
    /// Nearest-neighbour ferromagnet on Z or Z².
    NnIsing,
    /// Ferromagnet on Z with couplings `|i − j|^{−α}`.
    Dyson { alpha: f64 },
    /// Couplings `J(i − j) η_i η_j` from site disorder.
    Mattis { kernel: Kernel },
    /// Ferromagnet plus the field `−h Σ η_i σ_i`.
    Rfim { kernel: Kernel, field: f64 },
    /// Couplings `η_{ij} J(i − j)` from bond disorder.
    EdwardsAnderson { kernel: Kernel },
}

impl Family {
    pub fn kernel(&self) -> Kernel {
        match *self {
            Family::NnIsing => Kernel::NearestNeighbour,
            Family::Dyson { alpha } => Kernel::PowerLaw { alpha },
            Family::Mattis { kernel }
            | Family::Rfim { kernel, .. }
            | Family::EdwardsAnderson { kernel } => kernel,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Family::NnIsing => "nn_ising",
            Family::Dyson { .. } => "dyson",
            Family::Mattis { .. } => "mattis",
            Family::Rfim { .. } => "rfim",
            Family::EdwardsAnderson { .. } => "ea",
        }
    }

    pub fn alpha(&self) -> Option<f64> {
        match self.kernel() {
            Kernel::PowerLaw { alpha } => Some(alpha),
            Kernel::NearestNeighbour => None,
        }
    }

    pub fn needs_disorder(&self) -> bool {
        !matches!(self, Family::NnIsing | Family::Dyson { .. })
    }

    /// True when the Hamiltonian is invariant under flipping every spin and
    /// every boundary value at once.
    pub fn is_flip_symmetric(&self) -> bool {
        !matches!(self, Family::Rfim { field, .. } if *field != 0.0)
    }

    /// The ferromagnet with the same kernel.
    pub fn ferromagnet(kernel: Kernel) -> Family {
        match kernel {
            Kernel::NearestNeighbour => Family::NnIsing,
            Kernel::PowerLaw { alpha } => Family::Dyson { alpha },
        }
    }
}

/// A Hamiltonian family at inverse temperature `beta`.
///
/// `window` is the long-range boundary cutoff `M`; `None` means
/// [`DEFAULT_WINDOW_FACTOR`]` · N`. Nearest-neighbour kernels ignore it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub family: Family,
    pub beta: f64,
    pub window: Option<usize>,
}

impl ModelSpec {
    pub fn new(family: Family, beta: f64) -> Result<Self> {
        let spec = ModelSpec {
            family,
            beta,
            window: None,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn nn_ising(beta: f64) -> Result<Self> {
        Self::new(Family::NnIsing, beta)
    }

    pub fn dyson(alpha: f64, beta: f64) -> Result<Self> {
        Self::new(Family::Dyson { alpha }, beta)
    }

    pub fn mattis(kernel: Kernel, beta: f64) -> Result<Self> {
        Self::new(Family::Mattis { kernel }, beta)
    }

    pub fn rfim(kernel: Kernel, field: f64, beta: f64) -> Result<Self> {
        Self::new(Family::Rfim { kernel, field }, beta)
    }

    pub fn edwards_anderson(kernel: Kernel, beta: f64) -> Result<Self> {
        Self::new(Family::EdwardsAnderson { kernel }, beta)
    }

    pub fn with_window(mut self, window: usize) -> Self {
        self.window = Some(window);
        self
    }

    pub fn with_beta(mut self, beta: f64) -> Self {
        self.beta = beta;
        self
    }

    pub fn kernel(&self) -> Kernel {
        self.family.kernel()
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.beta >= 0.0 && self.beta.is_finite()) {
            return Err(Error::invalid("beta", self.beta, "a finite beta >= 0"));
        }
        if let Family::Rfim { field, .. } = self.family {
            if !field.is_finite() {
                return Err(Error::invalid("field", field, "a finite field strength"));
            }
        }
        if self.window == Some(0) {
            return Err(Error::invalid("window", 0, "a positive window"));
        }
        self.kernel().validate()
    }

    /// Checks that the family can live on `volume`.
    pub fn validate_for(&self, volume: &Volume) -> Result<()> {
        self.validate()?;
        if volume.kind() == VolumeKind::Square && matches!(self.kernel(), Kernel::PowerLaw { .. }) {
            return Err(Error::Unsupported(
                "power-law kernels are defined on the line only".into(),
            ));
        }
        Ok(())
    }

    pub fn reach(&self, volume: &Volume) -> Reach {
        match self.kernel() {
            Kernel::NearestNeighbour => Reach::Adjacent,
            Kernel::PowerLaw { .. } => Reach::Window(
                self.window
                    .unwrap_or(DEFAULT_WINDOW_FACTOR * volume.extent()),
            ),
        }
    }
}

/// Coupling `J(i − j)` of the family's kernel, before any disorder sign.
pub fn pair_coupling(spec: &ModelSpec, i: Site, j: Site) -> Result<f64> {
    if i == j {
        return Err(Error::SelfCoupling(i));
    }
    Ok(spec.kernel().coupling(i, j))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn coupling_examples() {
        let d2 = ModelSpec::dyson(2.0, 1.0).unwrap();
        assert_relative_eq!(
            pair_coupling(&d2, Site::line(0), Site::line(3)).unwrap(),
            1.0 / 9.0
        );
        let d15 = ModelSpec::dyson(1.5, 1.0).unwrap();
        assert_relative_eq!(
            pair_coupling(&d15, Site::line(0), Site::line(4)).unwrap(),
            0.125
        );
        let nn = ModelSpec::nn_ising(1.0).unwrap();
        assert_eq!(
            pair_coupling(&nn, Site::line(0), Site::line(2)).unwrap(),
            0.0
        );
        assert_eq!(
            pair_coupling(&nn, Site::line(0), Site::line(1)).unwrap(),
            1.0
        );
        assert!(matches!(
            pair_coupling(&nn, Site::line(1), Site::line(1)),
            Err(Error::SelfCoupling(_))
        ));
    }

    #[test]
    fn alpha_range_enforced() {
        assert!(ModelSpec::dyson(1.0, 1.0).is_err());
        assert!(ModelSpec::dyson(2.5, 1.0).is_err());
        assert!(ModelSpec::dyson(2.0, 1.0).is_ok());
        assert!(ModelSpec::nn_ising(-1.0).is_err());
    }

    proptest! {
        #[test]
        fn coupling_is_symmetric(alpha in 1.01f64..=2.0, i in -50i64..50, j in -50i64..50) {
            prop_assume!(i != j);
            let spec = ModelSpec::dyson(alpha, 1.0).unwrap();
            let a = pair_coupling(&spec, Site::line(i), Site::line(j)).unwrap();
            let b = pair_coupling(&spec, Site::line(j), Site::line(i)).unwrap();
            prop_assert_eq!(a, b);
        }
    }
}
