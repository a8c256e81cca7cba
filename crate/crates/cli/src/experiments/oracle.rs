use rayon::prelude::*;
use serde_json::json;
use spinbc::montecarlo::{oracle_trial, Schedule};
use spinbc::rng::{mix, realization_seed, stream};
use spinbc::{BoundaryCondition, DisorderRealization, Volume};

use super::Outcome;
use crate::config::{ExperimentConfig, DEFAULT_SWEEPS};
use crate::output::{num, Table};

pub const DEFAULT_Z: f64 = 3.0;

const COLUMNS: [(&str, &str); 11] = [
    ("beta", "inverse temperature, units of 1/J"),
    ("N", "linear size of the volume, lattice sites"),
    ("trial", "trial index r, 0-based"),
    ("seed", "trial seed t"),
    ("exact", "exact mean magnetization per site, dimensionless"),
    (
        "mc_mean",
        "Metropolis mean magnetization per site, dimensionless",
    ),
    (
        "mc_stderr",
        "batch-means standard error of mc_mean, floor(sqrt(n)) batches",
    ),
    ("z", "(mc_mean - exact) / mc_stderr, standard errors"),
    ("within", "1 when |z| <= the configured threshold, else 0"),
    ("acceptance", "fraction of accepted single-spin proposals"),
    (
        "max_drift",
        "largest incremental-vs-recomputed energy gap seen by the guard, units of J",
    ),
];

/// Seed of trial `r` at the `beta_index`-th temperature and size `n`:
/// `mix(realization_seed(master, r), CHAIN, (beta_index << 32) | n)`.
pub fn trial_seed(master: u64, beta_index: usize, n: usize, r: usize) -> u64 {
    mix(
        realization_seed(master, r as u64),
        stream::CHAIN,
        ((beta_index as u64) << 32) | n as u64,
    )
}

pub fn run(c: &ExperimentConfig, head: Vec<String>) -> anyhow::Result<Outcome> {
    let o = c.oracle();
    let sweeps = o.sweeps.unwrap_or(DEFAULT_SWEEPS);
    let schedule = Schedule {
        sweeps,
        burn_in: o.burn_in.unwrap_or(sweeps / 10),
        thin: o.thin.unwrap_or(1),
    };
    let z = o.z.unwrap_or(DEFAULT_Z);
    let needs_disorder = c.family().needs_disorder();
    let mut table = Table::new("", &COLUMNS);
    table.notes = head;
    table.notes.push(format!(
        "trial t: boundary = random(t), eta = seeded(mix(t, REALIZATION, 1)), chain seed = mix(t, CHAIN, 1); sweeps {}, burn-in {}, thin {}",
        schedule.sweeps, schedule.burn_in, schedule.thin
    ));
    let mut cells = Vec::new();
    for (bi, &beta) in o.betas.iter().enumerate() {
        let spec = c.spec_at(beta);
        for &n in c.sizes() {
            let volume = if c.dimension() == 2 {
                Volume::square(n)?
            } else {
                Volume::interval(n)?
            };
            let trials: Vec<_> = (0..c.n_seeds())
                .into_par_iter()
                .map(|r| {
                    let t = trial_seed(c.master_seed(), bi, n, r);
                    let b = BoundaryCondition::random(t);
                    let eta = DisorderRealization::seeded(mix(t, stream::REALIZATION, 1));
                    let eta = needs_disorder.then_some(&eta);
                    oracle_trial(&spec, &volume, &b, eta, mix(t, stream::CHAIN, 1), schedule)
                        .map(|x| (t, x))
                })
                .collect::<spinbc::Result<_>>()?;
            let mut hits = 0;
            for (r, (t, x)) in trials.iter().enumerate() {
                let score = (x.mc_mean - x.exact) / x.mc_stderr;
                let ok = x.within(z);
                hits += usize::from(ok);
                table.push(vec![
                    num(beta),
                    n.to_string(),
                    r.to_string(),
                    t.to_string(),
                    num(x.exact),
                    num(x.mc_mean),
                    num(x.mc_stderr),
                    num(score),
                    u8::from(ok).to_string(),
                    num(x.acceptance_rate),
                    num(x.max_drift),
                ]);
            }
            cells.push(json!({
                "beta": beta,
                "N": n,
                "within": hits,
                "trials": trials.len(),
                "fraction": hits as f64 / trials.len() as f64,
                "max_drift": trials.iter().map(|t| t.1.max_drift).fold(0.0, f64::max),
            }));
        }
    }
    let worst = cells
        .iter()
        .map(|c| c["fraction"].as_f64().unwrap_or(0.0))
        .fold(1.0, f64::min);
    Ok(Outcome {
        tables: vec![table],
        results: json!({
            "family": c.family_name(),
            "z": z,
            "schedule": schedule,
            "cells": cells,
            "worst_fraction": worst,
        }),
        fits: Vec::new(),
    })
}
