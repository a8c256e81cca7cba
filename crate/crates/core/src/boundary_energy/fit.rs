use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::stats::{linear_regression, mean, variance};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Statistic {
    MeanAbsW,
    SqrtVarW,
}

impl Statistic {
    pub fn evaluate(&self, samples: &[f64]) -> f64 {
        match self {
            Statistic::MeanAbsW => mean(&samples.iter().map(|w| w.abs()).collect::<Vec<_>>()),
            Statistic::SqrtVarW => variance(samples).sqrt(),
        }
    }
}

/// Least-squares power law `statistic ≈ e^{intercept} N^{exponent}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingFit {
    pub exponent: f64,
    pub stderr: f64,
    pub intercept: f64,
    pub sizes: Vec<usize>,
    pub values: Vec<f64>,
    pub statistic: Statistic,
}

impl ScalingFit {
    /// Exponent within `z` standard errors of zero.
    pub fn is_saturated(&self, z: f64) -> bool {
        self.exponent.abs() <= z * self.stderr
    }
}

/// Data requirements checked before fitting samples.
#[derive(Debug, Clone, Copy)]
pub struct FitPolicy {
    pub min_sizes: usize,
    pub min_decades: f64,
    pub min_samples: usize,
}

impl Default for FitPolicy {
    fn default() -> Self {
        FitPolicy {
            min_sizes: 4,
            min_decades: 2.0,
            min_samples: 1000,
        }
    }
}

pub fn scaling_fit(
    samples: &BTreeMap<usize, Vec<f64>>,
    statistic: Statistic,
) -> Result<ScalingFit> {
    scaling_fit_with(samples, statistic, &FitPolicy::default())
}

pub fn scaling_fit_with(
    samples: &BTreeMap<usize, Vec<f64>>,
    statistic: Statistic,
    policy: &FitPolicy,
) -> Result<ScalingFit> {
    if samples.len() < policy.min_sizes {
        return Err(Error::InsufficientData(format!(
            "{} sizes, need at least {}",
            samples.len(),
            policy.min_sizes
        )));
    }
    let (lo, hi) = (
        *samples.keys().next().unwrap_or(&1),
        *samples.keys().next_back().unwrap_or(&1),
    );
    let decades = (hi as f64 / lo.max(1) as f64).log10();
    if decades + 1e-12 < policy.min_decades {
        return Err(Error::InsufficientData(format!(
            "sizes span {decades:.2} decades, need {}",
            policy.min_decades
        )));
    }
    if let Some((n, s)) = samples.iter().find(|(_, s)| s.len() < policy.min_samples) {
        return Err(Error::InsufficientData(format!(
            "{} samples at N = {n}, need {}",
            s.len(),
            policy.min_samples
        )));
    }
    let sizes: Vec<usize> = samples.keys().copied().collect();
    let values: Vec<f64> = samples.values().map(|s| statistic.evaluate(s)).collect();
    fit_power_law(&sizes, &values, statistic)
}

/// Fits already-computed statistic values (for example exact moments).
pub fn fit_power_law(sizes: &[usize], values: &[f64], statistic: Statistic) -> Result<ScalingFit> {
    if sizes.len() != values.len() || sizes.len() < 3 {
        return Err(Error::InsufficientData(
            "a power-law fit needs at least three (N, value) pairs".into(),
        ));
    }
    if values.iter().any(|v| !(*v > 0.0)) {
        return Err(Error::InsufficientData(
            "statistic must be positive to fit on log axes".into(),
        ));
    }
    let x: Vec<f64> = sizes.iter().map(|n| (*n as f64).ln()).collect();
    let y: Vec<f64> = values.iter().map(|v| v.ln()).collect();
    let (exponent, stderr, intercept) = linear_regression(&x, &y);
    Ok(ScalingFit {
        exponent,
        stderr,
        intercept,
        sizes: sizes.to_vec(),
        values: values.to_vec(),
        statistic,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn synthetic(p: f64, noise: f64, rng: &mut ChaCha8Rng) -> (Vec<usize>, Vec<f64>) {
        let sizes: Vec<usize> = (0..12)
            .map(|k| (100.0 * 10f64.powf(k as f64 / 4.0)) as usize)
            .collect();
        let values = sizes
            .iter()
            .map(|n| 2.0 * (*n as f64).powf(p) * (1.0 + noise * (rng.random::<f64>() - 0.5)))
            .collect();
        (sizes, values)
    }

    #[test]
    fn recovers_planted_exponents() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for p in [0.0, 0.1, 0.25, 0.5] {
            let mut covered = 0;
            for _ in 0..200 {
                let (sizes, values) = synthetic(p, 0.1, &mut rng);
                let fit = fit_power_law(&sizes, &values, Statistic::SqrtVarW).unwrap();
                if (fit.exponent - p).abs() <= 2.0 * fit.stderr {
                    covered += 1;
                }
            }
            // Nominal coverage of ±2 stderr with 10 residual dof is 92.7%.
            assert!(covered >= 170, "p = {p}: {covered}/200");
        }
    }

    #[test]
    fn sampled_fit_and_requirements() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut samples = BTreeMap::new();
        for n in [10usize, 100, 1000, 10_000] {
            let scale = (n as f64).powf(0.25);
            let s: Vec<f64> = (0..2000)
                .map(|_| if rng.random::<bool>() { scale } else { -scale })
                .collect();
            samples.insert(n, s);
        }
        for stat in [Statistic::SqrtVarW, Statistic::MeanAbsW] {
            let fit = scaling_fit(&samples, stat).unwrap();
            assert!((fit.exponent - 0.25).abs() < 1e-3);
        }
        let mut few = samples.clone();
        few.remove(&10);
        assert!(scaling_fit(&few, Statistic::SqrtVarW).is_err());
        let mut thin = samples.clone();
        thin.insert(20, vec![1.0; 10]);
        assert!(scaling_fit(&thin, Statistic::SqrtVarW).is_err());
        let narrow: BTreeMap<usize, Vec<f64>> = [10usize, 20, 40, 80]
            .iter()
            .map(|n| (*n, samples[&10].clone()))
            .collect();
        assert!(scaling_fit(&narrow, Statistic::SqrtVarW).is_err());
    }

    #[test]
    fn saturation_flag() {
        let fit = fit_power_law(
            &[1000, 2000, 5000, 10_000],
            &[3.0, 3.01, 2.99, 3.0],
            Statistic::SqrtVarW,
        )
        .unwrap();
        assert!(fit.exponent.abs() < 0.05);
        assert!(fit.is_saturated(2.0));
    }
}
