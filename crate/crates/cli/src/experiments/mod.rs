//! The six experiments. Each returns its tables, a JSON result block and
//! fitted exponents; nothing here touches the filesystem.

mod csd;
mod gauge;
mod metastate;
mod oracle;
mod scaling;
mod window;

use crate::config::{Experiment, ExperimentConfig, DEFAULT_SWEEPS};
use crate::output::{NamedFit, Table};

pub use oracle::trial_seed;

#[derive(Debug, Clone)]
pub struct Outcome {
    pub tables: Vec<Table>,
    pub results: serde_json::Value,
    pub fits: Vec<NamedFit>,
}

/// Pre-run cost estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Cost {
    /// Largest number of sites read by one realization.
    pub sites: usize,
    /// Total site visits.
    pub work: u64,
}

fn header(c: &ExperimentConfig) -> Vec<String> {
    vec![
        format!("experiment: {}", c.experiment().name()),
        format!("model: {}", c.family_name()),
        format!("master_seed: {}", c.master_seed()),
        "seeds: realization r uses mix(master_seed, REALIZATION, r) (SplitMix64 counter hash)"
            .to_string(),
    ]
}

pub fn estimate(c: &ExperimentConfig) -> Cost {
    let seeds = c.n_seeds() as u64;
    let wf = c.window_factor();
    let dyson = c.family_name() == "dyson";
    let line = |n: usize| if dyson { 2 * wf * n } else { 2 };
    let plane = |n: usize| n * n;
    let exact = |n: usize| (1u64 << n.min(62)).saturating_mul(n as u64);
    let fold = |it: &mut dyn Iterator<Item = (usize, u64)>| {
        it.fold(Cost { sites: 0, work: 0 }, |acc, (s, w)| Cost {
            sites: acc.sites.max(s),
            work: acc.work.saturating_add(w),
        })
    };
    let sizes = c.sizes().to_vec();
    match c.experiment() {
        Experiment::Scaling | Experiment::Window => {
            let reps = match c.experiment() {
                Experiment::Window => c.window.as_ref().map_or(1, |w| w.deltas.len()) as u64,
                _ => 1,
            };
            fold(&mut sizes.iter().map(|&n| {
                let s = if c.dimension() == 2 {
                    plane(n)
                } else {
                    line(n)
                };
                let per = if c.dimension() == 2 { 4 * n } else { s };
                (s, (per as u64).saturating_mul(seeds * reps))
            }))
        }
        Experiment::Metastate => {
            let exact_mode = c.metastate.mode.as_deref() == Some("exact_gibbs_fit");
            let double = c.metastate.compare_double.unwrap_or(false);
            let mut all = sizes.clone();
            if double {
                all.extend(sizes.iter().map(|n| 2 * n));
            }
            fold(&mut all.iter().map(|&n| {
                if exact_mode {
                    (n, exact(n).saturating_mul(3 * seeds))
                } else {
                    (line(n), line(n) as u64 * seeds)
                }
            }))
        }
        Experiment::Csd => {
            let terms = sequence(c).map(|s| s.terms).unwrap_or_default();
            let mut per: Vec<(usize, u64)> = terms
                .iter()
                .map(|&n| (2 * wf * n, (2 * wf * n) as u64 * seeds))
                .collect();
            if c.csd.null_recurrence_c.is_some() {
                per.extend(
                    terms
                        .iter()
                        .map(|&n| (2 * wf * n, (2 * wf * n) as u64 * seeds)),
                );
            }
            fold(&mut per.into_iter())
        }
        Experiment::GaugeCheck => fold(
            &mut sizes
                .iter()
                .map(|&n| (n, exact(n).saturating_mul(2 * seeds))),
        ),
        Experiment::OracleVsMc => {
            let o = c.oracle();
            let sweeps = o.sweeps.unwrap_or(DEFAULT_SWEEPS) as u64;
            let betas = o.betas.len() as u64;
            fold(&mut sizes.iter().map(|&n| {
                let mc = sweeps.saturating_mul(n as u64 * if dyson { n as u64 } else { 2 });
                (
                    n,
                    (mc.saturating_add(exact(n))).saturating_mul(seeds * betas),
                )
            }))
        }
    }
}

pub(crate) fn sequence(c: &ExperimentConfig) -> anyhow::Result<spinbc::VolumeSequence> {
    let s = c
        .sequence
        .as_ref()
        .ok_or_else(|| anyhow::anyhow!("missing [sequence]"))?;
    let kind = c
        .sequence_kind()
        .ok_or_else(|| anyhow::anyhow!("missing sequence kind"))?;
    let seq = spinbc::metastate::make_volume_sequence(kind, s.budget.unwrap_or(0))?;
    Ok(match s.terms {
        Some(t) => seq.truncated(t)?,
        None => seq,
    })
}

/// Runs `c` on the current rayon pool.
pub fn run(c: &ExperimentConfig) -> anyhow::Result<Outcome> {
    let head = header(c);
    match c.experiment() {
        Experiment::Scaling => scaling::run(c, head),
        Experiment::Window => window::run(c, head),
        Experiment::Metastate => metastate::run(c, head),
        Experiment::Csd => csd::run(c, head),
        Experiment::GaugeCheck => gauge::run(c, head),
        Experiment::OracleVsMc => oracle::run(c, head),
    }
}
