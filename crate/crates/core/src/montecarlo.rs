//! Single-spin-flip Metropolis sampling.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gibbs::{expectation, gibbs_table, Observable};
use crate::models::{
    BoundaryCondition, CompiledHamiltonian, DisorderRealization, ModelSpec, Spin, Volume,
};
use crate::rng::chain_rng;
use crate::stats::{mean, variance};

/// Sweeps between full recomputations of the energy and local fields.
pub const GUARD_PERIOD: usize = 1000;
pub const DRIFT_TOLERANCE: f64 = 1e-6;

/// Initial configuration of a chain.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Start {
    /// Uniformly random, drawn from the chain's own stream.
    #[default]
    Random,
    /// The lower-energy of the all-plus and all-minus configurations.
    Ground,
}

pub struct MetropolisChain {
    hamiltonian: CompiledHamiltonian,
    beta: f64,
    sigma: Vec<Spin>,
    local: Vec<f64>,
    energy: f64,
    rng: ChaCha8Rng,
    proposed: u64,
    accepted: u64,
}

impl MetropolisChain {
    pub fn new(hamiltonian: CompiledHamiltonian, beta: f64, seed: u64, start: Start) -> Self {
        let mut rng = chain_rng(seed);
        let n = hamiltonian.site_count();
        let sigma: Vec<Spin> = match start {
            Start::Random => (0..n)
                .map(|_| Spin::from_minus_bit(rng.random::<bool>()))
                .collect(),
            Start::Ground => {
                let plus = vec![Spin::Up; n];
                let minus = vec![Spin::Down; n];
                if hamiltonian.energy(&minus) < hamiltonian.energy(&plus) {
                    minus
                } else {
                    plus
                }
            }
        };
        Self::from_state(hamiltonian, beta, sigma, rng)
    }

    fn from_state(
        hamiltonian: CompiledHamiltonian,
        beta: f64,
        sigma: Vec<Spin>,
        rng: ChaCha8Rng,
    ) -> Self {
        let mut chain = MetropolisChain {
            local: vec![0.0; sigma.len()],
            energy: 0.0,
            hamiltonian,
            beta,
            sigma,
            rng,
            proposed: 0,
            accepted: 0,
        };
        chain.refresh();
        chain
    }

    /// Recomputes energy and local fields from scratch; returns the largest
    /// deviation from the incrementally maintained values.
    pub fn refresh(&mut self) -> f64 {
        let energy = self.hamiltonian.energy(&self.sigma);
        let mut drift = (energy - self.energy).abs();
        for i in 0..self.sigma.len() {
            let h = self.hamiltonian.local_field(i, &self.sigma);
            drift = drift.max((h - self.local[i]).abs());
            self.local[i] = h;
        }
        self.energy = energy;
        drift
    }

    pub fn step(&mut self) {
        let n = self.sigma.len();
        if n == 0 {
            return;
        }
        let i = self.rng.random_range(0..n);
        let s = self.sigma[i].value();
        let delta = 2.0 * s * self.local[i];
        self.proposed += 1;
        if delta <= 0.0 || self.rng.random::<f64>() < (-self.beta * delta).exp() {
            self.accepted += 1;
            self.sigma[i] = -self.sigma[i];
            self.energy += delta;
            for &(j, c) in self.hamiltonian.neighbours(i) {
                self.local[j] -= 2.0 * c * s;
            }
        }
    }

    /// `N` single-site steps.
    pub fn sweep(&mut self) {
        for _ in 0..self.sigma.len() {
            self.step();
        }
    }

    pub fn spins(&self) -> &[Spin] {
        &self.sigma
    }

    pub fn energy(&self) -> f64 {
        self.energy
    }

    pub fn magnetization(&self) -> f64 {
        self.sigma.iter().map(|s| s.value()).sum::<f64>() / self.sigma.len() as f64
    }

    /// Index with bit `i` set when `σ_i = +1`.
    pub fn state_index(&self) -> u64 {
        self.sigma
            .iter()
            .enumerate()
            .filter(|(_, s)| **s == Spin::Up)
            .fold(0, |acc, (i, _)| acc | 1 << i)
    }

    pub fn acceptance_rate(&self) -> f64 {
        if self.proposed == 0 {
            0.0
        } else {
            self.accepted as f64 / self.proposed as f64
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct McRun {
    pub spec: ModelSpec,
    pub volume: Volume,
    pub boundary: BoundaryCondition,
    pub disorder_seed: Option<u64>,
    pub seed: u64,
    pub sweeps: usize,
    pub burn_in: usize,
    pub thin: usize,
    pub start: Start,
    /// Magnetization per recorded sweep.
    pub magnetization: Vec<f64>,
    /// Energy per recorded sweep.
    pub energy: Vec<f64>,
    pub acceptance_rate: f64,
    /// Largest incremental-vs-full discrepancy seen at a guard check.
    pub max_drift: f64,
    pub guard_checks: usize,
}

impl McRun {
    pub fn mean_magnetization(&self) -> f64 {
        mean(&self.magnetization)
    }

    pub fn magnetization_stderr(&self) -> Result<f64> {
        batch_means_stderr(&self.magnetization)
    }
}

#[allow(clippy::too_many_arguments)]
pub fn metropolis_run(
    spec: &ModelSpec,
    volume: &Volume,
    b: &BoundaryCondition,
    eta: Option<&DisorderRealization>,
    seed: u64,
    sweeps: usize,
    burn_in: usize,
    thin: usize,
) -> Result<McRun> {
    metropolis_run_from(
        spec,
        volume,
        b,
        eta,
        seed,
        Schedule {
            sweeps,
            burn_in,
            thin,
        },
        Start::Random,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Schedule {
    pub sweeps: usize,
    pub burn_in: usize,
    pub thin: usize,
}

pub fn metropolis_run_from(
    spec: &ModelSpec,
    volume: &Volume,
    b: &BoundaryCondition,
    eta: Option<&DisorderRealization>,
    seed: u64,
    schedule: Schedule,
    start: Start,
) -> Result<McRun> {
    let Schedule {
        sweeps,
        burn_in,
        thin,
    } = schedule;
    if burn_in >= sweeps {
        return Err(Error::invalid("burn_in", burn_in, "burn_in < sweeps"));
    }
    if thin == 0 {
        return Err(Error::invalid("thin", thin, "thin >= 1"));
    }
    let h = CompiledHamiltonian::compile(spec, volume, b, eta)?;
    let mut chain = MetropolisChain::new(h, spec.beta, seed, start);
    let kept = (sweeps - burn_in).div_ceil(thin);
    let mut magnetization = Vec::with_capacity(kept);
    let mut energy = Vec::with_capacity(kept);
    let mut max_drift = 0.0f64;
    let mut guard_checks = 0;
    for t in 0..sweeps {
        chain.sweep();
        if (t + 1) % GUARD_PERIOD == 0 {
            max_drift = max_drift.max(chain.refresh());
            guard_checks += 1;
        }
        if t >= burn_in && (t - burn_in) % thin == 0 {
            magnetization.push(chain.magnetization());
            energy.push(chain.energy());
        }
    }
    Ok(McRun {
        spec: *spec,
        volume: *volume,
        boundary: b.clone(),
        disorder_seed: eta.map(|e| e.seed()),
        seed,
        sweeps,
        burn_in,
        thin,
        start,
        magnetization,
        energy,
        acceptance_rate: chain.acceptance_rate(),
        max_drift,
        guard_checks,
    })
}

/// One Metropolis run checked against the exact magnetization.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleTrial {
    pub exact: f64,
    pub mc_mean: f64,
    pub mc_stderr: f64,
    pub acceptance_rate: f64,
    pub max_drift: f64,
}

impl OracleTrial {
    /// `|mc − exact| ≤ z · stderr`.
    pub fn within(&self, z: f64) -> bool {
        (self.mc_mean - self.exact).abs() <= z * self.mc_stderr
    }
}

pub fn oracle_trial(
    spec: &ModelSpec,
    volume: &Volume,
    b: &BoundaryCondition,
    eta: Option<&DisorderRealization>,
    seed: u64,
    schedule: Schedule,
) -> Result<OracleTrial> {
    let table = gibbs_table(spec, volume, b, eta)?;
    let exact = expectation(&table, &Observable::Magnetization)?;
    let run = metropolis_run_from(spec, volume, b, eta, seed, schedule, Start::Random)?;
    Ok(OracleTrial {
        exact,
        mc_mean: run.mean_magnetization(),
        mc_stderr: run.magnetization_stderr()?,
        acceptance_rate: run.acceptance_rate,
        max_drift: run.max_drift,
    })
}

/// Standard error of the mean from `⌊√n⌋` non-overlapping batches.
pub fn batch_means_stderr(samples: &[f64]) -> Result<f64> {
    if samples.len() < 100 {
        return Err(Error::InsufficientData(format!(
            "{} samples, batch means need at least 100",
            samples.len()
        )));
    }
    let batches = (samples.len() as f64).sqrt() as usize;
    let size = samples.len() / batches;
    let means: Vec<f64> = samples.chunks_exact(size).take(batches).map(mean).collect();
    Ok((variance(&means) / batches as f64).sqrt())
}
