use rayon::prelude::*;
use serde::Serialize;

use super::sequence::VolumeSequence;
use crate::boundary_energy::IntervalProfile;
use crate::error::{Error, Result};
use crate::models::{BoundaryCondition, DisorderRealization, DEFAULT_WINDOW_FACTOR};
use crate::rng::realization_seed;
use crate::stats::compensated_sum;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FlipRecord {
    pub terms: Vec<usize>,
    pub energies: Vec<f64>,
    /// Sign of `W_{N_k}`; zero only for an exactly vanishing energy.
    pub signs: Vec<i8>,
    pub flips: usize,
    pub longest_run: usize,
}

fn profiles(alpha: f64, sequence: &VolumeSequence) -> Result<Vec<IntervalProfile>> {
    sequence
        .terms
        .iter()
        .map(|&n| IntervalProfile::new(alpha, n, DEFAULT_WINDOW_FACTOR * n))
        .collect()
}

/// `W_{N_k}` along the sequence, all read from the same boundary.
fn energies(profiles: &[IntervalProfile], b: &BoundaryCondition) -> Result<Vec<f64>> {
    let uniform = |sign: f64| -> Vec<f64> {
        profiles
            .iter()
            .map(|p| sign * 2.0 * compensated_sum(p.coefficients().iter().copied()))
            .collect()
    };
    match b {
        BoundaryCondition::Plus => Ok(uniform(1.0)),
        BoundaryCondition::Minus => Ok(uniform(-1.0)),
        BoundaryCondition::Random { seed, flipped } => {
            let eta = DisorderRealization::seeded(*seed);
            let eta = if *flipped { eta.flipped() } else { eta };
            Ok(profiles
                .iter()
                .map(|p| p.energy(&eta, &eta).total)
                .collect())
        }
        _ => Err(Error::Unsupported(
            "sign statistics need a plus, minus or random boundary".into(),
        )),
    }
}

fn record(terms: &[usize], energies: Vec<f64>) -> FlipRecord {
    let signs: Vec<i8> = energies
        .iter()
        .map(|w| {
            if *w > 0.0 {
                1
            } else if *w < 0.0 {
                -1
            } else {
                0
            }
        })
        .collect();
    let flips = signs.windows(2).filter(|s| s[0] != s[1]).count();
    let mut longest = 0;
    let mut run = 0;
    for (k, s) in signs.iter().enumerate() {
        run = if k > 0 && signs[k - 1] == *s {
            run + 1
        } else {
            1
        };
        longest = longest.max(run);
    }
    FlipRecord {
        terms: terms.to_vec(),
        energies,
        signs,
        flips,
        longest_run: longest,
    }
}

pub fn csd_flip_statistics(
    alpha: f64,
    sequence: &VolumeSequence,
    b: &BoundaryCondition,
) -> Result<FlipRecord> {
    let p = profiles(alpha, sequence)?;
    Ok(record(&sequence.terms, energies(&p, b)?))
}

/// Flip records for the random boundaries of realizations `0..n_seeds`.
pub fn csd_over_seeds(
    alpha: f64,
    sequence: &VolumeSequence,
    n_seeds: usize,
    master: u64,
) -> Result<Vec<FlipRecord>> {
    let p = profiles(alpha, sequence)?;
    (0..n_seeds as u64)
        .into_par_iter()
        .map(|r| {
            let b = BoundaryCondition::random(realization_seed(master, r));
            Ok(record(&sequence.terms, energies(&p, &b)?))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NullRecurrence {
    pub terms: Vec<usize>,
    pub c: f64,
    pub n_seeds: usize,
    /// `p̂_k = P̂(|W_{N_k}| ≤ c)`.
    pub frequencies: Vec<f64>,
    pub partial_sums: Vec<f64>,
}

impl NullRecurrence {
    /// `p̂_K / S_{K−1}`: relative change of the running sum at the last term.
    pub fn final_term_change(&self) -> f64 {
        let k = self.partial_sums.len();
        self.frequencies[k - 1] / self.partial_sums[k - 2]
    }

    /// `(S_K − S_{⌊K/2⌋}) / S_{⌊K/2⌋}`.
    pub fn late_half_growth(&self) -> f64 {
        let k = self.partial_sums.len();
        let half = self.partial_sums[k / 2 - 1];
        (self.partial_sums[k - 1] - half) / half
    }
}

pub fn null_recurrence_frequency(
    alpha: f64,
    sequence: &VolumeSequence,
    c: f64,
    n_seeds: usize,
    master: u64,
) -> Result<NullRecurrence> {
    if !(c > 0.0) {
        return Err(Error::invalid("c", c, "c > 0"));
    }
    if sequence.len() < 2 || n_seeds == 0 {
        return Err(Error::InsufficientData(
            "need at least two terms and one seed".into(),
        ));
    }
    let p = profiles(alpha, sequence)?;
    let hits: Vec<Vec<bool>> = (0..n_seeds as u64)
        .into_par_iter()
        .map(|r| {
            let eta = DisorderRealization::seeded(realization_seed(master, r));
            p.iter()
                .map(|q| q.energy(&eta, &eta).total.abs() <= c)
                .collect()
        })
        .collect();
    let frequencies: Vec<f64> = (0..sequence.len())
        .map(|k| hits.iter().filter(|h| h[k]).count() as f64 / n_seeds as f64)
        .collect();
    let partial_sums = frequencies
        .iter()
        .scan(0.0, |s, p| {
            *s += p;
            Some(*s)
        })
        .collect();
    Ok(NullRecurrence {
        terms: sequence.terms.clone(),
        c,
        n_seeds,
        frequencies,
        partial_sums,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundary_energy::interval_boundary_energy;
    use crate::metastate::{make_volume_sequence, SequenceKind};

    #[test]
    fn deterministic_boundaries_never_flip() {
        let seq = make_volume_sequence(
            SequenceKind::Geometric {
                start: 4,
                ratio: 2.0,
            },
            4096,
        )
        .unwrap();
        for b in [BoundaryCondition::Plus, BoundaryCondition::Minus] {
            let r = csd_flip_statistics(1.25, &seq, &b).unwrap();
            assert_eq!(r.flips, 0);
            assert_eq!(r.longest_run, seq.len());
        }
        assert!(csd_flip_statistics(1.25, &seq, &BoundaryCondition::Free).is_err());
    }

    #[test]
    fn diverging_regime_flips() {
        let seq = make_volume_sequence(
            SequenceKind::Geometric {
                start: 1,
                ratio: 2.0,
            },
            1 << 19,
        )
        .unwrap();
        assert_eq!(seq.len(), 20);
        let records = csd_over_seeds(1.25, &seq, 100, 11).unwrap();
        let mean = records.iter().map(|r| r.flips as f64).sum::<f64>() / 100.0;
        assert!(mean >= 3.0, "mean flips {mean}");
        let again = csd_over_seeds(1.25, &seq, 100, 11).unwrap();
        assert_eq!(records, again);
    }

    #[test]
    fn nested_values_match_standalone() {
        let seq = make_volume_sequence(SequenceKind::Sparse, 100_000).unwrap();
        let seed = realization_seed(2, 5);
        let r = csd_flip_statistics(1.25, &seq, &BoundaryCondition::random(seed)).unwrap();
        let eta = DisorderRealization::seeded(seed);
        for (k, &n) in seq.terms.iter().enumerate() {
            let w = interval_boundary_energy(1.25, n, 10 * n, &eta, &eta).unwrap();
            assert_eq!(w.total.to_bits(), r.energies[k].to_bits());
        }
    }

    #[test]
    fn run_statistics() {
        let r = record(&[1, 2, 3, 4, 5], vec![1.0, 2.0, -1.0, -3.0, -0.5]);
        assert_eq!(r.signs, vec![1, 1, -1, -1, -1]);
        assert_eq!(r.flips, 1);
        assert_eq!(r.longest_run, 3);
    }

    #[test]
    fn wide_threshold_always_hits() {
        let seq = make_volume_sequence(SequenceKind::Linear { step: 50 }, 200).unwrap();
        let nr = null_recurrence_frequency(1.25, &seq, 1e9, 100, 1).unwrap();
        assert!(nr.frequencies.iter().all(|p| *p == 1.0));
        assert_eq!(nr.partial_sums, vec![1.0, 2.0, 3.0, 4.0]);
        assert!(null_recurrence_frequency(1.25, &seq, 0.0, 100, 1).is_err());
    }
}
