use rayon::prelude::*;

use crate::error::Result;
use crate::models::{DisorderRealization, Reach, Volume};
use crate::rng::realization_seed;

/// `E(plus) − E(minus)` on the `N × N` nearest-neighbour box whose adjacent
/// exterior layer carries `η`: `−2 Σ_j η_j` over the `4N` boundary bonds.
pub fn nn2d_boundary_gap(n: usize, eta: &DisorderRealization) -> Result<f64> {
    let volume = Volume::square(n)?;
    let layer = volume.exterior(Reach::Adjacent)?;
    Ok(-2.0 * layer.iter().map(|s| eta.site(*s).value()).sum::<f64>())
}

/// Exact `(mean, variance)` of the gap for ±1 disorder: `(0, 16N)`.
pub fn nn2d_gap_moments(n: usize) -> (f64, f64) {
    (0.0, 16.0 * n as f64)
}

/// Gaps for realizations `0..n_seeds` of `master`.
pub fn sample_nn2d_gaps(n: usize, n_seeds: usize, master: u64) -> Result<Vec<f64>> {
    Volume::square(n)?;
    Ok((0..n_seeds as u64)
        .into_par_iter()
        .map(|r| {
            let eta = DisorderRealization::seeded(realization_seed(master, r));
            nn2d_boundary_gap(n, &eta).expect("volume checked")
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{
        finite_volume_energy, BoundaryCondition, ModelSpec, Spin, SpinConfiguration,
    };
    use crate::stats::{mean, variance};

    #[test]
    fn all_plus_boundary() {
        let n = 5;
        let layer = Volume::square(n)
            .unwrap()
            .exterior(Reach::Adjacent)
            .unwrap();
        let eta = layer.iter().fold(DisorderRealization::seeded(0), |e, s| {
            e.with_site(*s, Spin::Up)
        });
        assert_eq!(nn2d_boundary_gap(n, &eta).unwrap(), -2.0 * (4 * n) as f64);
    }

    #[test]
    fn matches_hamiltonian_difference() {
        let n = 4;
        let v = Volume::square(n).unwrap();
        let spec = ModelSpec::nn_ising(1.0).unwrap();
        let b = BoundaryCondition::random(31);
        let plus = SpinConfiguration::uniform(n * n, Spin::Up);
        let ep = finite_volume_energy(&spec, &v, &plus, &b, None)
            .unwrap()
            .value;
        let em = finite_volume_energy(&spec, &v, &plus.flipped(), &b, None)
            .unwrap()
            .value;
        let gap = nn2d_boundary_gap(n, &DisorderRealization::seeded(31)).unwrap();
        assert_eq!(ep - em, gap);
    }

    #[test]
    fn sampled_moments() {
        let gaps = sample_nn2d_gaps(32, 10_000, 5).unwrap();
        let (_, var) = nn2d_gap_moments(32);
        let se = (var / gaps.len() as f64).sqrt();
        assert!(mean(&gaps).abs() < 4.0 * se);
        assert!((variance(&gaps) / var - 1.0).abs() < 0.06);
    }
}
