//! Exact finite-volume Gibbs measures by enumeration.
//!
//! Configurations are visited in Gray-code order so each step flips one spin
//! and costs one local-field update; log-weights are normalised with
//! log-sum-exp. The table is indexed by the configuration bit pattern of
//! [`SpinConfiguration::from_index`].

use crate::error::{Error, Result};
use crate::models::{
    BoundaryCondition, CompiledHamiltonian, DisorderRealization, ModelSpec, Spin,
    SpinConfiguration, Volume,
};

pub const DEFAULT_ENUMERATION_BOUND: usize = 24;

/// Energies are recomputed from scratch at this Gray-code period.
const RESYNC_PERIOD: u64 = 1 << 12;

/// `μ^b_{Λ,β}` as an explicit probability table.
#[derive(Debug, Clone)]
pub struct GibbsTable {
    pub volume: Volume,
    pub beta: f64,
    pub boundary: BoundaryCondition,
    pub model: ModelSpec,
    probabilities: Vec<f64>,
    log_z: f64,
}

impl GibbsTable {
    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn log_partition(&self) -> f64 {
        self.log_z
    }

    pub fn probability(&self, sigma: &SpinConfiguration) -> f64 {
        self.probabilities[sigma.index() as usize]
    }

    pub fn site_count(&self) -> usize {
        self.volume.site_count()
    }
}

/// Enumeration oracle with a configurable size bound.
#[derive(Debug, Clone, Copy)]
pub struct ExactGibbs {
    pub max_sites: usize,
}

impl Default for ExactGibbs {
    fn default() -> Self {
        ExactGibbs {
            max_sites: DEFAULT_ENUMERATION_BOUND,
        }
    }
}

impl ExactGibbs {
    pub fn with_bound(max_sites: usize) -> Self {
        ExactGibbs { max_sites }
    }

    fn check(&self, volume: &Volume) -> Result<()> {
        let sites = volume.site_count();
        if sites > self.max_sites || sites >= 63 {
            return Err(Error::EnumerationBound {
                sites,
                bound: self.max_sites,
            });
        }
        Ok(())
    }

    /// `log Z` without storing the table.
    pub fn partition_function(
        &self,
        spec: &ModelSpec,
        volume: &Volume,
        b: &BoundaryCondition,
        eta: Option<&DisorderRealization>,
    ) -> Result<f64> {
        self.check(volume)?;
        let h = CompiledHamiltonian::compile(spec, volume, b, eta)?;
        let beta = spec.beta;
        // Two passes keep memory flat: first the max log-weight, then the sum.
        let mut max = f64::NEG_INFINITY;
        gray_code_energies(&h, |_, e| max = max.max(-beta * e));
        let mut sum = 0.0;
        gray_code_energies(&h, |_, e| sum += (-beta * e - max).exp());
        Ok(max + sum.ln())
    }

    pub fn table(
        &self,
        spec: &ModelSpec,
        volume: &Volume,
        b: &BoundaryCondition,
        eta: Option<&DisorderRealization>,
    ) -> Result<GibbsTable> {
        self.check(volume)?;
        let h = CompiledHamiltonian::compile(spec, volume, b, eta)?;
        let n = volume.site_count();
        let mut probabilities = vec![0.0; 1usize << n];
        gray_code_energies(&h, |idx, e| probabilities[idx as usize] = -spec.beta * e);
        let max = probabilities
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max);
        let mut sum = 0.0;
        for p in probabilities.iter_mut() {
            *p = (*p - max).exp();
            sum += *p;
        }
        for p in probabilities.iter_mut() {
            *p /= sum;
        }
        Ok(GibbsTable {
            volume: *volume,
            beta: spec.beta,
            boundary: b.clone(),
            model: *spec,
            probabilities,
            log_z: max + sum.ln(),
        })
    }
}

/// Calls `visit(index, energy)` for all `2^n` configurations.
fn gray_code_energies(h: &CompiledHamiltonian, mut visit: impl FnMut(u64, f64)) {
    let n = h.site_count();
    let mut sigma = vec![Spin::Down; n];
    let mut local: Vec<f64> = (0..n).map(|i| h.local_field(i, &sigma)).collect();
    let mut energy = h.energy(&sigma);
    visit(0, energy);
    for step in 1u64..(1u64 << n) {
        let k = step.trailing_zeros() as usize;
        let old = sigma[k].value();
        energy += 2.0 * old * local[k];
        sigma[k] = -sigma[k];
        for &(j, c) in h.neighbours(k) {
            local[j] -= 2.0 * c * old;
        }
        if step % RESYNC_PERIOD == 0 {
            energy = h.energy(&sigma);
        }
        visit(step ^ (step >> 1), energy);
    }
}

/// `log Z^b_{Λ,β}` with the default enumeration bound.
pub fn partition_function(
    spec: &ModelSpec,
    volume: &Volume,
    b: &BoundaryCondition,
    eta: Option<&DisorderRealization>,
) -> Result<f64> {
    ExactGibbs::default().partition_function(spec, volume, b, eta)
}

/// Full table with the default enumeration bound.
pub fn gibbs_table(
    spec: &ModelSpec,
    volume: &Volume,
    b: &BoundaryCondition,
    eta: Option<&DisorderRealization>,
) -> Result<GibbsTable> {
    ExactGibbs::default().table(spec, volume, b, eta)
}

#[derive(Debug, Clone, PartialEq)]
pub enum Observable {
    /// `(1/|Λ|) Σ_i σ_i`
    Magnetization,
    SingleSite(usize),
    /// `(1/|Λ|) Σ_i σ_i τ_i`
    OverlapWith(SpinConfiguration),
}

pub fn expectation(table: &GibbsTable, observable: &Observable) -> Result<f64> {
    let n = table.site_count();
    match observable {
        Observable::Magnetization => Ok(expectation_with(table, |s| {
            s.iter().map(|v| v.value()).sum::<f64>() / n as f64
        })),
        Observable::SingleSite(i) => {
            if *i >= n {
                return Err(Error::invalid("site", i, "an index inside the volume"));
            }
            // Marginal of bit i.
            let bit = 1usize << i;
            Ok(table
                .probabilities
                .iter()
                .enumerate()
                .map(|(idx, p)| if idx & bit != 0 { *p } else { -*p })
                .sum())
        }
        Observable::OverlapWith(tau) => {
            if tau.len() != n {
                return Err(Error::DimensionMismatch {
                    what: "overlap reference",
                    expected: n,
                    got: tau.len(),
                });
            }
            Ok(expectation_with(table, |s| {
                s.iter()
                    .zip(tau.spins())
                    .map(|(a, b)| (*a * *b).value())
                    .sum::<f64>()
                    / n as f64
            }))
        }
    }
}

/// `Σ_σ μ(σ) f(σ)` for an arbitrary observable.
pub fn expectation_with(table: &GibbsTable, f: impl Fn(&[Spin]) -> f64) -> f64 {
    let n = table.site_count();
    table
        .probabilities
        .iter()
        .enumerate()
        .filter(|(_, p)| **p > 0.0)
        .map(|(idx, p)| p * f(SpinConfiguration::from_index(n, idx as u64).spins()))
        .sum()
}

pub fn total_variation(t1: &GibbsTable, t2: &GibbsTable) -> Result<f64> {
    if t1.volume != t2.volume {
        return Err(Error::VolumeMismatch(format!(
            "{:?} vs {:?}",
            t1.volume, t2.volume
        )));
    }
    Ok(total_variation_probabilities(
        &t1.probabilities,
        &t2.probabilities,
    ))
}

pub fn total_variation_probabilities(p: &[f64], q: &[f64]) -> f64 {
    0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>()
}

/// Best mixture coefficient and the total-variation residual there.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct MixtureFit {
    pub lambda: f64,
    pub residual: f64,
}

/// λ minimising `TV(t, λ t₊ + (1 − λ) t₋)`.
pub fn fit_mixture_weight(
    t: &GibbsTable,
    t_plus: &GibbsTable,
    t_minus: &GibbsTable,
) -> Result<MixtureFit> {
    if t.volume != t_plus.volume || t.volume != t_minus.volume {
        return Err(Error::VolumeMismatch(
            "mixture fit needs three tables on one volume".into(),
        ));
    }
    Ok(fit_mixture_probabilities(
        &t.probabilities,
        &t_plus.probabilities,
        &t_minus.probabilities,
    ))
}

const GRID_STEPS: u64 = 10_000;
const PLATEAU_TOLERANCE: f64 = 1e-13;

/// First index in `lo..hi` where `pred` turns false (`pred` monotone true→false).
fn partition_point(mut lo: u64, mut hi: u64, pred: impl Fn(u64) -> bool) -> u64 {
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if pred(mid) {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Grid search at step 10⁻⁴ followed by golden-section refinement.
///
/// The objective is convex in λ (a sum of absolute values of affine maps),
/// so the grid minimum is located by ternary search over grid indices.
pub fn fit_mixture_probabilities(t: &[f64], plus: &[f64], minus: &[f64]) -> MixtureFit {
    let objective = |lambda: f64| {
        0.5 * t
            .iter()
            .zip(plus.iter().zip(minus))
            .map(|(a, (p, m))| (a - lambda * p - (1.0 - lambda) * m).abs())
            .sum::<f64>()
    };
    let at = |k: u64| objective(k as f64 / GRID_STEPS as f64);

    let (mut lo, mut hi) = (0u64, GRID_STEPS);
    while hi - lo > 2 {
        let m1 = lo + (hi - lo) / 3;
        let m2 = hi - (hi - lo) / 3;
        let (f1, f2) = (at(m1), at(m2));
        if f1 < f2 {
            hi = m2;
        } else if f1 > f2 {
            lo = m1;
        } else {
            lo = m1;
            hi = m2;
        }
    }
    let best = (lo..=hi)
        .min_by(|a, b| at(*a).total_cmp(&at(*b)))
        .unwrap_or(lo);
    let f_best = at(best);

    // A piecewise-linear objective can be flat at its minimum; the sublevel
    // set is then an interval of grid points and its midpoint is reported.
    let flat = |k: u64| at(k) <= f_best + PLATEAU_TOLERANCE;
    let left = partition_point(0, best, |k| !flat(k));
    let right = partition_point(best, GRID_STEPS + 1, flat) - 1;
    if right > left {
        let lambda = (left + right) as f64 / (2 * GRID_STEPS) as f64;
        return MixtureFit {
            lambda,
            residual: objective(lambda),
        };
    }

    let step = 1.0 / GRID_STEPS as f64;
    let mut a = (best as f64 * step - step).max(0.0);
    let mut b = (best as f64 * step + step).min(1.0);
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (objective(c), objective(d));
    for _ in 0..60 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = objective(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = objective(d);
        }
    }
    let mut lambda = 0.5 * (a + b);
    let mut residual = objective(lambda);
    // Keep the grid point (or an endpoint) when refinement does not improve.
    for cand in [best as f64 * step, 0.0, 1.0] {
        let r = objective(cand);
        if r < residual {
            lambda = cand;
            residual = r;
        }
    }
    MixtureFit { lambda, residual }
}
