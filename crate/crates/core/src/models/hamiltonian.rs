use serde::{Deserialize, Serialize};

use super::boundary::BoundaryCondition;
use super::disorder::DisorderRealization;
use super::family::{Family, Kernel, ModelSpec};
use super::spin::{Spin, SpinConfiguration};
use super::volume::{Reach, Site, Volume, VolumeKind};
use crate::error::{Error, Result};

/// A coupled pair. For interior bonds both ends index the volume; for
/// boundary bonds `a` indexes the volume and `b` the exterior list.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bond {
    pub a: usize,
    pub b: usize,
    pub coupling: f64,
}

/// Energy together with the certified bound on what the boundary window
/// left out (zero for short-range kernels and free boundaries).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Energy {
    pub value: f64,
    pub tail_bound: f64,
}

/// Interior bonds with nonzero coupling, ordered by `(a, b)`, `a < b`.
pub fn interior_bonds(volume: &Volume, kernel: Kernel) -> Vec<Bond> {
    let n = volume.site_count();
    let mut out = Vec::new();
    match kernel {
        Kernel::NearestNeighbour => {
            for a in 0..n {
                let s = volume.site(a);
                let forward = match volume.kind() {
                    VolumeKind::Interval => vec![Site::line(s.x + 1)],
                    VolumeKind::Square => {
                        vec![Site::plane(s.x, s.y + 1), Site::plane(s.x + 1, s.y)]
                    }
                };
                let mut ends: Vec<usize> = forward
                    .into_iter()
                    .filter_map(|t| volume.index_of(t))
                    .collect();
                ends.sort_unstable();
                out.extend(ends.into_iter().map(|b| Bond {
                    a,
                    b,
                    coupling: 1.0,
                }));
            }
        }
        Kernel::PowerLaw { .. } => {
            for a in 0..n {
                for b in a + 1..n {
                    let coupling = kernel.coupling(volume.site(a), volume.site(b));
                    out.push(Bond { a, b, coupling });
                }
            }
        }
    }
    out
}

/// Interior-to-exterior bonds, ordered by interior index then exterior index.
/// `exterior` must be sorted (as returned by [`Volume::exterior`]).
pub fn boundary_bonds(volume: &Volume, kernel: Kernel, exterior: &[Site]) -> Vec<Bond> {
    let mut out = Vec::new();
    for a in 0..volume.site_count() {
        let s = volume.site(a);
        match kernel {
            Kernel::NearestNeighbour => {
                let mut around = vec![Site::plane(s.x - 1, s.y), Site::plane(s.x + 1, s.y)];
                if volume.kind() == VolumeKind::Square {
                    around.push(Site::plane(s.x, s.y - 1));
                    around.push(Site::plane(s.x, s.y + 1));
                }
                let mut ends: Vec<usize> = around
                    .into_iter()
                    .filter_map(|t| exterior.binary_search(&t).ok())
                    .collect();
                ends.sort_unstable();
                out.extend(ends.into_iter().map(|b| Bond {
                    a,
                    b,
                    coupling: 1.0,
                }));
            }
            Kernel::PowerLaw { .. } => {
                for (b, t) in exterior.iter().enumerate() {
                    out.push(Bond {
                        a,
                        b,
                        coupling: kernel.coupling(s, *t),
                    });
                }
            }
        }
    }
    out
}

/// Worst-case size of the exterior interaction beyond window `m` for `n`
/// unit spins: `2 Σ_{i<n} (m + i)^{1−α} / (α − 1)`.
pub(crate) fn window_tail_bound(alpha: f64, n: usize, m: usize) -> f64 {
    2.0 * (0..n)
        .map(|i| ((m + i) as f64).powf(1.0 - alpha))
        .sum::<f64>()
        / (alpha - 1.0)
}

struct Setup {
    exterior: Vec<Site>,
    boundary: Option<Vec<Spin>>,
    tail_bound: f64,
}

fn setup(
    spec: &ModelSpec,
    volume: &Volume,
    b: &BoundaryCondition,
    eta: Option<&DisorderRealization>,
) -> Result<Setup> {
    spec.validate_for(volume)?;
    if spec.family.needs_disorder() && eta.is_none() {
        return Err(Error::MissingDisorder {
            family: spec.family.name(),
        });
    }
    let reach = spec.reach(volume);
    let exterior = volume.exterior(reach)?;
    let boundary = b.resolve(&exterior)?;
    let tail_bound = match (spec.kernel(), reach, &boundary) {
        (Kernel::PowerLaw { alpha }, Reach::Window(m), Some(_)) => {
            window_tail_bound(alpha, volume.site_count(), m)
        }
        _ => 0.0,
    };
    Ok(Setup {
        exterior,
        boundary,
        tail_bound,
    })
}

fn check_len(sigma: &SpinConfiguration, volume: &Volume) -> Result<()> {
    if sigma.len() != volume.site_count() {
        return Err(Error::DimensionMismatch {
            what: "spin configuration",
            expected: volume.site_count(),
            got: sigma.len(),
        });
    }
    Ok(())
}

/// `H_Λ(σ_Λ b_{Λᶜ})` evaluated term by term from the family's formula.
///
/// Pairs are unordered: each interior bond and each interior-exterior bond
/// contributes once. For long-range kernels the exterior sum stops at the
/// window and `tail_bound` certifies the omitted part.
pub fn finite_volume_energy(
    spec: &ModelSpec,
    volume: &Volume,
    sigma: &SpinConfiguration,
    b: &BoundaryCondition,
    eta: Option<&DisorderRealization>,
) -> Result<Energy> {
    check_len(sigma, volume)?;
    let setup = setup(spec, volume, b, eta)?;
    let kernel = spec.kernel();
    let s = sigma.spins();
    let site = |i: usize| volume.site(i);
    // Disorder is only dereferenced by families that require it.
    let eta_site = |t: Site| eta.map_or(1.0, |d| d.site(t).value());
    let eta_bond = |p: Site, q: Site| eta.map_or(1.0, |d| d.bond(p, q).value());

    let mut value = 0.0;
    for bond in interior_bonds(volume, kernel) {
        let (p, q) = (site(bond.a), site(bond.b));
        let ss = s[bond.a].value() * s[bond.b].value();
        let j = bond.coupling;
        value -= match spec.family {
            Family::NnIsing | Family::Dyson { .. } | Family::Rfim { .. } => j * ss,
            Family::Mattis { .. } => j * eta_site(p) * eta_site(q) * ss,
            Family::EdwardsAnderson { .. } => eta_bond(p, q) * j * ss,
        };
    }
    if let Some(bvals) = &setup.boundary {
        for bond in boundary_bonds(volume, kernel, &setup.exterior) {
            let (p, q) = (site(bond.a), setup.exterior[bond.b]);
            let sb = s[bond.a].value() * bvals[bond.b].value();
            let j = bond.coupling;
            value -= match spec.family {
                Family::NnIsing | Family::Dyson { .. } | Family::Rfim { .. } => j * sb,
                Family::Mattis { .. } => j * eta_site(p) * eta_site(q) * sb,
                Family::EdwardsAnderson { .. } => eta_bond(p, q) * j * sb,
            };
        }
    }
    if let Family::Rfim { field, .. } = spec.family {
        value -= field
            * (0..s.len())
                .map(|i| eta_site(site(i)) * s[i].value())
                .sum::<f64>();
    }
    Ok(Energy {
        value,
        tail_bound: setup.tail_bound,
    })
}

/// The Hamiltonian folded into `H(σ) = −Σ_{i<j} J_ij σ_i σ_j − Σ_i h_i σ_i`.
///
/// Disorder signs are absorbed into `J_ij`, and boundary spins together with
/// any random field into `h_i`. This is the form the exact enumerator and
/// the Metropolis sampler work with.
#[derive(Debug, Clone)]
pub struct CompiledHamiltonian {
    neighbours: Vec<Vec<(usize, f64)>>,
    field: Vec<f64>,
    tail_bound: f64,
}

impl CompiledHamiltonian {
    pub fn compile(
        spec: &ModelSpec,
        volume: &Volume,
        b: &BoundaryCondition,
        eta: Option<&DisorderRealization>,
    ) -> Result<Self> {
        let setup = setup(spec, volume, b, eta)?;
        let kernel = spec.kernel();
        let n = volume.site_count();
        let site = |i: usize| volume.site(i);
        let eta = eta
            .cloned()
            .unwrap_or_else(|| DisorderRealization::seeded(0));
        let sign = |p: Site, q: Site| match spec.family {
            Family::Mattis { .. } => (eta.site(p) * eta.site(q)).value(),
            Family::EdwardsAnderson { .. } => eta.bond(p, q).value(),
            _ => 1.0,
        };

        let mut neighbours = vec![Vec::new(); n];
        for bond in interior_bonds(volume, kernel) {
            let j = bond.coupling * sign(site(bond.a), site(bond.b));
            neighbours[bond.a].push((bond.b, j));
            neighbours[bond.b].push((bond.a, j));
        }
        let mut field = vec![0.0; n];
        if let Some(bvals) = &setup.boundary {
            for bond in boundary_bonds(volume, kernel, &setup.exterior) {
                let q = setup.exterior[bond.b];
                field[bond.a] += bond.coupling * sign(site(bond.a), q) * bvals[bond.b].value();
            }
        }
        if let Family::Rfim { field: h, .. } = spec.family {
            for (i, f) in field.iter_mut().enumerate() {
                *f += h * eta.site(site(i)).value();
            }
        }
        Ok(CompiledHamiltonian {
            neighbours,
            field,
            tail_bound: setup.tail_bound,
        })
    }

    pub fn site_count(&self) -> usize {
        self.field.len()
    }

    pub fn neighbours(&self, i: usize) -> &[(usize, f64)] {
        &self.neighbours[i]
    }

    /// Effective external field `h_i`.
    pub fn field(&self, i: usize) -> f64 {
        self.field[i]
    }

    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    pub fn energy(&self, sigma: &[Spin]) -> f64 {
        let mut e = 0.0;
        for (i, nb) in self.neighbours.iter().enumerate() {
            let si = sigma[i].value();
            let pair: f64 = nb
                .iter()
                .filter(|(j, _)| *j > i)
                .map(|(j, c)| c * sigma[*j].value())
                .sum();
            e -= si * (pair + self.field[i]);
        }
        e
    }

    /// `Σ_j J_ij σ_j + h_i`; flipping `σ_i` changes the energy by
    /// `2 σ_i · local_field(i)`.
    pub fn local_field(&self, i: usize, sigma: &[Spin]) -> f64 {
        self.neighbours[i]
            .iter()
            .map(|(j, c)| c * sigma[*j].value())
            .sum::<f64>()
            + self.field[i]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cfg(v: &[i8]) -> SpinConfiguration {
        SpinConfiguration::new(v.iter().map(|x| Spin::from_i8(*x).unwrap()).collect())
    }

    #[test]
    fn energy_examples() {
        let v2 = Volume::interval(2).unwrap();
        let nn = ModelSpec::nn_ising(1.0).unwrap();
        let e =
            finite_volume_energy(&nn, &v2, &cfg(&[1, 1]), &BoundaryCondition::Free, None).unwrap();
        assert_eq!(e.value, -1.0);

        let dy = ModelSpec::dyson(2.0, 1.0).unwrap();
        let e =
            finite_volume_energy(&dy, &v2, &cfg(&[1, -1]), &BoundaryCondition::Free, None).unwrap();
        assert_eq!(e.value, 1.0);
        assert_eq!(e.tail_bound, 0.0);

        let v3 = Volume::interval(3).unwrap();
        let eta = DisorderRealization::from_site_values(&v3, cfg(&[1, -1, 1]).spins()).unwrap();
        let mattis = ModelSpec::mattis(Kernel::NearestNeighbour, 1.0).unwrap();
        let e = finite_volume_energy(
            &mattis,
            &v3,
            &cfg(&[1, -1, 1]),
            &BoundaryCondition::Free,
            Some(&eta),
        )
        .unwrap();
        assert_eq!(e.value, -2.0);
    }

    #[test]
    fn errors() {
        let v = Volume::interval(3).unwrap();
        let nn = ModelSpec::nn_ising(1.0).unwrap();
        assert!(matches!(
            finite_volume_energy(&nn, &v, &cfg(&[1, 1]), &BoundaryCondition::Plus, None),
            Err(Error::DimensionMismatch { .. })
        ));
        let ea = ModelSpec::edwards_anderson(Kernel::NearestNeighbour, 1.0).unwrap();
        assert!(matches!(
            finite_volume_energy(&ea, &v, &cfg(&[1, 1, 1]), &BoundaryCondition::Plus, None),
            Err(Error::MissingDisorder { .. })
        ));
    }

    #[test]
    fn nn_plus_boundary_single_site() {
        let v = Volume::interval(1).unwrap();
        let nn = ModelSpec::nn_ising(1.0).unwrap();
        let e = finite_volume_energy(&nn, &v, &cfg(&[1]), &BoundaryCondition::Plus, None).unwrap();
        assert_eq!(e.value, -2.0);
        let sq = Volume::square(2).unwrap();
        let e = finite_volume_energy(
            &nn,
            &sq,
            &cfg(&[1, 1, 1, 1]),
            &BoundaryCondition::Plus,
            None,
        )
        .unwrap();
        // four interior bonds, eight boundary bonds
        assert_eq!(e.value, -12.0);
    }

    fn all_specs() -> Vec<ModelSpec> {
        let pl = Kernel::PowerLaw { alpha: 1.6 };
        let nn = Kernel::NearestNeighbour;
        vec![
            ModelSpec::nn_ising(0.7).unwrap(),
            ModelSpec::dyson(1.4, 0.7).unwrap().with_window(7),
            ModelSpec::mattis(nn, 0.7).unwrap(),
            ModelSpec::mattis(pl, 0.7).unwrap().with_window(5),
            ModelSpec::rfim(nn, 0.8, 0.7).unwrap(),
            ModelSpec::rfim(pl, 0.3, 0.7).unwrap().with_window(4),
            ModelSpec::edwards_anderson(nn, 0.7).unwrap(),
            ModelSpec::edwards_anderson(pl, 0.7).unwrap().with_window(6),
        ]
    }

    proptest! {
        #[test]
        fn compiled_matches_direct(n in 1usize..7, idx in 0u64..64, seed in 0u64..1000, bseed in 0u64..1000) {
            let v = Volume::interval(n).unwrap();
            let sigma = SpinConfiguration::from_index(n, idx % (1 << n));
            let eta = DisorderRealization::seeded(seed);
            for b in [BoundaryCondition::Free, BoundaryCondition::Plus, BoundaryCondition::random(bseed)] {
                for spec in all_specs() {
                    let direct = finite_volume_energy(&spec, &v, &sigma, &b, Some(&eta)).unwrap();
                    let comp = CompiledHamiltonian::compile(&spec, &v, &b, Some(&eta)).unwrap();
                    prop_assert!((direct.value - comp.energy(sigma.spins())).abs() < 1e-10);
                    prop_assert_eq!(direct.tail_bound, comp.tail_bound());
                }
            }
        }

        #[test]
        fn global_flip_symmetry(n in 1usize..6, idx in 0u64..32, seed in 0u64..1000) {
            let v = Volume::interval(n).unwrap();
            let sigma = SpinConfiguration::from_index(n, idx % (1 << n));
            let eta = DisorderRealization::seeded(seed);
            let b = BoundaryCondition::random(seed ^ 0xabc);
            for spec in all_specs().into_iter().filter(|s| s.family.is_flip_symmetric()) {
                let e1 = finite_volume_energy(&spec, &v, &sigma, &b, Some(&eta)).unwrap().value;
                let e2 = finite_volume_energy(&spec, &v, &sigma.flipped(), &b.negated(), Some(&eta)).unwrap().value;
                prop_assert!((e1 - e2).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn square_compiled_matches_direct() {
        let v = Volume::square(3).unwrap();
        let eta = DisorderRealization::seeded(8);
        let nn = Kernel::NearestNeighbour;
        for spec in [
            ModelSpec::nn_ising(1.0).unwrap(),
            ModelSpec::mattis(nn, 1.0).unwrap(),
            ModelSpec::rfim(nn, 0.5, 1.0).unwrap(),
            ModelSpec::edwards_anderson(nn, 1.0).unwrap(),
        ] {
            for idx in [0u64, 5, 77, 300, 511] {
                let sigma = SpinConfiguration::from_index(9, idx);
                let b = BoundaryCondition::random(3);
                let d = finite_volume_energy(&spec, &v, &sigma, &b, Some(&eta))
                    .unwrap()
                    .value;
                let c = CompiledHamiltonian::compile(&spec, &v, &b, Some(&eta)).unwrap();
                assert!((d - c.energy(sigma.spins())).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn window_truncation_within_tail_bound() {
        for alpha in [1.1, 1.5, 2.0] {
            let v = Volume::interval(5).unwrap();
            let sigma = SpinConfiguration::uniform(5, Spin::Up);
            let b = BoundaryCondition::Plus;
            for m in [5usize, 20, 50] {
                let spec = ModelSpec::dyson(alpha, 1.0).unwrap().with_window(m);
                let coarse = finite_volume_energy(&spec, &v, &sigma, &b, None).unwrap();
                for wider in [m + 1, 2 * m, 10 * m] {
                    let fine = finite_volume_energy(&spec.with_window(wider), &v, &sigma, &b, None)
                        .unwrap();
                    assert!((coarse.value - fine.value).abs() <= coarse.tail_bound);
                    assert!(fine.tail_bound <= coarse.tail_bound);
                }
            }
        }
    }
}
