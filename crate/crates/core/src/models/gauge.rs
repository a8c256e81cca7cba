use super::boundary::BoundaryCondition;
use super::disorder::DisorderRealization;
use super::family::{Family, ModelSpec};
use super::spin::{Spin, SpinConfiguration};
use super::volume::{Site, Volume};
use crate::error::{Error, Result};

/// `σ′_i = η_i σ_i`. Involutive.
pub fn gauge_transform(sigma: &SpinConfiguration, eta: &[Spin]) -> Result<SpinConfiguration> {
    if sigma.len() != eta.len() {
        return Err(Error::DimensionMismatch {
            what: "gauge field",
            expected: sigma.len(),
            got: eta.len(),
        });
    }
    Ok(sigma
        .spins()
        .iter()
        .zip(eta)
        .map(|(s, e)| *s * *e)
        .collect::<Vec<_>>()
        .into())
}

/// Applies the gauge to boundary values on `exterior`. A fixed boundary
/// becomes the explicit boundary `η_j b_j`; free stays free.
pub fn gauge_boundary(
    b: &BoundaryCondition,
    exterior: &[Site],
    eta: &DisorderRealization,
) -> Result<BoundaryCondition> {
    Ok(match b.resolve(exterior)? {
        None => BoundaryCondition::Free,
        Some(vals) => BoundaryCondition::Explicit(
            vals.iter()
                .zip(exterior)
                .map(|(v, s)| *v * eta.site(*s))
                .collect(),
        ),
    })
}

/// The ferromagnetic image of a Mattis system.
#[derive(Debug, Clone)]
pub struct GaugedFerromagnet {
    pub spec: ModelSpec,
    pub sigma: SpinConfiguration,
    pub boundary: BoundaryCondition,
}

/// Maps a Mattis configuration and boundary to the equivalent ferromagnet
/// with the same kernel, beta and window.
pub fn gauge_to_ferromagnet(
    spec: &ModelSpec,
    volume: &Volume,
    sigma: &SpinConfiguration,
    b: &BoundaryCondition,
    eta: &DisorderRealization,
) -> Result<GaugedFerromagnet> {
    let Family::Mattis { kernel } = spec.family else {
        return Err(Error::Unsupported(format!(
            "gauge map to a ferromagnet needs the mattis family, got {}",
            spec.family.name()
        )));
    };
    spec.validate_for(volume)?;
    let exterior = volume.exterior(spec.reach(volume))?;
    Ok(GaugedFerromagnet {
        spec: ModelSpec {
            family: Family::ferromagnet(kernel),
            ..*spec
        },
        sigma: gauge_transform(sigma, &eta.site_values(volume))?,
        boundary: gauge_boundary(b, &exterior, eta)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{finite_volume_energy, Kernel};

    #[test]
    fn identity_and_self_gauge() {
        let s = SpinConfiguration::from_index(5, 0b01101);
        let plus = vec![Spin::Up; 5];
        assert_eq!(gauge_transform(&s, &plus).unwrap(), s);
        let g = gauge_transform(&s, s.spins()).unwrap();
        assert_eq!(g, SpinConfiguration::uniform(5, Spin::Up));
        assert_eq!(gauge_transform(&g, s.spins()).unwrap(), s);
        assert!(gauge_transform(&s, &plus[..3]).is_err());
    }

    #[test]
    fn brute_force_gauge_identity_n4() {
        let v = Volume::interval(4).unwrap();
        for kernel in [Kernel::NearestNeighbour, Kernel::PowerLaw { alpha: 1.7 }] {
            let spec = ModelSpec::mattis(kernel, 1.0).unwrap().with_window(6);
            for seed in 0..8u64 {
                let eta = DisorderRealization::seeded(seed);
                let b = BoundaryCondition::random(seed + 100);
                for idx in 0..16 {
                    let s = SpinConfiguration::from_index(4, idx);
                    let e = finite_volume_energy(&spec, &v, &s, &b, Some(&eta))
                        .unwrap()
                        .value;
                    let g = gauge_to_ferromagnet(&spec, &v, &s, &b, &eta).unwrap();
                    let f = finite_volume_energy(&g.spec, &v, &g.sigma, &g.boundary, None)
                        .unwrap()
                        .value;
                    assert!((e - f).abs() <= 1e-12 * e.abs().max(1.0));
                }
            }
        }
    }
}
