use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::boundary_energy::{lambda_bin, metastate_weight, weight_bin, IntervalProfile};
use crate::error::{Error, Result};
use crate::gibbs::{fit_mixture_weight, ExactGibbs};
use crate::models::{
    BoundaryCondition, DisorderRealization, Family, ModelSpec, Site, Volume, DEFAULT_WINDOW_FACTOR,
};
use crate::rng::realization_seed;
use crate::stats::{mean, variance};

pub const DEFAULT_BINS: usize = 101;
pub const ENDPOINT_EPSILON: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightMode {
    /// `λ = metastate_weight(W, β)` from the interval boundary energy.
    T0Weight,
    /// TV-optimal mixture coefficient of the exact random-b.c. table.
    ExactGibbsFit,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetastateConfig {
    pub n: usize,
    pub n_disorder: usize,
    pub mode: WeightMode,
    pub master_seed: u64,
    /// Use `−η` for every realization.
    #[serde(default)]
    pub flip_disorder: bool,
    pub bins: usize,
}

impl MetastateConfig {
    pub fn new(n: usize, n_disorder: usize, mode: WeightMode, master_seed: u64) -> Self {
        MetastateConfig {
            n,
            n_disorder,
            mode,
            master_seed,
            flip_disorder: false,
            bins: DEFAULT_BINS,
        }
    }

    pub fn flipped(mut self) -> Self {
        self.flip_disorder = !self.flip_disorder;
        self
    }
}

/// Counts of `λ` over uniform bins on `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetastateHistogram {
    pub axis: &'static str,
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
    pub n_disorder: usize,
    pub n: usize,
    pub beta: f64,
    pub alpha: Option<f64>,
}

impl MetastateHistogram {
    pub fn empty(bins: usize, n: usize, beta: f64, alpha: Option<f64>) -> Self {
        MetastateHistogram {
            axis: "lambda",
            edges: (0..=bins).map(|i| i as f64 / bins as f64).collect(),
            counts: vec![0; bins],
            n_disorder: 0,
            n,
            beta,
            alpha,
        }
    }

    pub fn bins(&self) -> usize {
        self.counts.len()
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn merge(&mut self, other: &MetastateHistogram) -> Result<()> {
        if self.edges != other.edges {
            return Err(Error::InsufficientData(
                "histograms with different bin edges".into(),
            ));
        }
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        self.n_disorder += other.n_disorder;
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmpiricalMetastate {
    pub histogram: MetastateHistogram,
    pub mode: WeightMode,
    /// `λ` per realization, in realization order.
    pub lambdas: Vec<f64>,
    /// Boundary energy `W` per realization (zero-temperature mode).
    pub energies: Option<Vec<f64>>,
    /// TV residual per realization (exact mode).
    pub residuals: Option<Vec<f64>>,
    pub mean: f64,
    pub variance: f64,
    /// Fraction with `λ < ε` or `λ > 1 − ε`.
    pub endpoint_mass: f64,
    /// Fraction with `ε < λ < 1 − ε`.
    pub interior_mass: f64,
}

fn realization(config: &MetastateConfig, r: u64) -> (u64, DisorderRealization) {
    let seed = realization_seed(config.master_seed, r);
    let eta = DisorderRealization::seeded(seed);
    (
        seed,
        if config.flip_disorder {
            eta.flipped()
        } else {
            eta
        },
    )
}

pub fn empirical_metastate(
    spec: &ModelSpec,
    config: &MetastateConfig,
) -> Result<EmpiricalMetastate> {
    spec.validate()?;
    if config.bins < 2 {
        return Err(Error::invalid("bins", config.bins, "at least 2 bins"));
    }
    if config.n_disorder == 0 {
        return Err(Error::invalid("n_disorder", 0, "at least one realization"));
    }
    let beta = spec.beta;
    let bins = config.bins;
    let mut histogram = MetastateHistogram::empty(bins, config.n, beta, spec.family.alpha());
    let (lambdas, bin_of, energies, residuals) = match config.mode {
        WeightMode::T0Weight => {
            let w = t0_energies(spec, config)?;
            let lambdas: Vec<f64> = w.iter().map(|w| metastate_weight(*w, beta)).collect();
            let bin_of: Vec<usize> = w.iter().map(|w| weight_bin(*w, beta, bins)).collect();
            (lambdas, bin_of, Some(w), None)
        }
        WeightMode::ExactGibbsFit => {
            let fits = exact_fits(spec, config)?;
            let lambdas: Vec<f64> = fits.iter().map(|f| f.0).collect();
            let bin_of = lambdas.iter().map(|l| lambda_bin(*l, bins)).collect();
            (
                lambdas,
                bin_of,
                None,
                Some(fits.iter().map(|f| f.1).collect()),
            )
        }
    };
    for b in bin_of {
        histogram.counts[b] += 1;
    }
    histogram.n_disorder = config.n_disorder;
    let n = lambdas.len() as f64;
    let minority = |l: f64| l.min(1.0 - l);
    let endpoint = lambdas
        .iter()
        .filter(|l| minority(**l) < ENDPOINT_EPSILON)
        .count() as f64
        / n;
    let interior = lambdas
        .iter()
        .filter(|l| minority(**l) > ENDPOINT_EPSILON)
        .count() as f64
        / n;
    Ok(EmpiricalMetastate {
        histogram,
        mode: config.mode,
        mean: mean(&lambdas),
        variance: if lambdas.len() > 1 {
            variance(&lambdas)
        } else {
            0.0
        },
        endpoint_mass: endpoint,
        interior_mass: interior,
        lambdas,
        energies,
        residuals,
    })
}

fn t0_energies(spec: &ModelSpec, config: &MetastateConfig) -> Result<Vec<f64>> {
    let n = config.n;
    let draws = 0..config.n_disorder as u64;
    match spec.family {
        Family::Dyson { alpha } => {
            let window = spec.window.unwrap_or(DEFAULT_WINDOW_FACTOR * n);
            let profile = IntervalProfile::new(alpha, n, window)?;
            Ok(draws
                .into_par_iter()
                .map(|r| {
                    let (_, eta) = realization(config, r);
                    profile.energy(&eta, &eta).total
                })
                .collect())
        }
        Family::NnIsing => {
            Volume::interval(n)?;
            Ok(draws
                .into_par_iter()
                .map(|r| {
                    let (_, eta) = realization(config, r);
                    eta.site(Site::line(-1)).value() + eta.site(Site::line(n as i64)).value()
                })
                .collect())
        }
        _ => Err(Error::Unsupported(format!(
            "zero-temperature weights need a disorder-free 1D chain, got {}",
            spec.family.name()
        ))),
    }
}

fn exact_fits(spec: &ModelSpec, config: &MetastateConfig) -> Result<Vec<(f64, f64)>> {
    let volume = Volume::interval(config.n)?;
    let oracle = ExactGibbs::default();
    if config.n > oracle.max_sites {
        return Err(Error::EnumerationBound {
            sites: config.n,
            bound: oracle.max_sites,
        });
    }
    (0..config.n_disorder as u64)
        .into_par_iter()
        .map(|r| {
            let (seed, eta) = realization(config, r);
            let disorder = spec.family.needs_disorder().then_some(&eta);
            let b = BoundaryCondition::Random {
                seed,
                flipped: config.flip_disorder,
            };
            let t = oracle.table(spec, &volume, &b, disorder)?;
            let tp = oracle.table(spec, &volume, &BoundaryCondition::Plus, disorder)?;
            let tm = oracle.table(spec, &volume, &BoundaryCondition::Minus, disorder)?;
            let fit = fit_mixture_weight(&t, &tp, &tm)?;
            Ok((fit.lambda, fit.residual))
        })
        .collect()
}
