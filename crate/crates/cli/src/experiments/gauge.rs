use rayon::prelude::*;
use serde_json::json;
use spinbc::gibbs::partition_function;
use spinbc::models::{finite_volume_energy, gauge_to_ferromagnet};
use spinbc::rng::{mix, realization_seed, stream};
use spinbc::{BoundaryCondition, DisorderRealization, Spin, SpinConfiguration, Volume};

use super::Outcome;
use crate::config::ExperimentConfig;
use crate::output::{num, Table};

pub const TOLERANCE: f64 = 1e-10;

const COLUMNS: [(&str, &str); 10] = [
    ("N", "linear size of the volume, lattice sites"),
    ("realization", "realization index r, 0-based"),
    ("seed", "seed of realization r; eta = seeded(seed)"),
    (
        "energy_mattis",
        "H of the Mattis system at (sigma, b), units of J",
    ),
    (
        "energy_gauged",
        "H of the gauged ferromagnet at (eta sigma, eta b), units of J",
    ),
    (
        "energy_rel_diff",
        "|difference| / max(|a|, |b|, 1), dimensionless",
    ),
    (
        "log_z_mattis",
        "log partition function of the Mattis system, natural log",
    ),
    (
        "log_z_gauged",
        "log partition function of the gauged ferromagnet, natural log",
    ),
    (
        "log_z_rel_diff",
        "|difference| / max(|a|, |b|, 1), dimensionless",
    ),
    ("pass", "1 when both differences are <= 1e-10, else 0"),
];

pub fn rel_diff(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1.0)
}

/// `σ_i` from bit 0 of `mix(seed, CHAIN, i)`.
fn random_sigma(seed: u64, n: usize) -> SpinConfiguration {
    SpinConfiguration::new(
        (0..n as u64)
            .map(|i| Spin::from_minus_bit(mix(seed, stream::CHAIN, i) & 1 == 1))
            .collect(),
    )
}

pub fn run(c: &ExperimentConfig, head: Vec<String>) -> anyhow::Result<Outcome> {
    let spec = c.spec();
    let mut table = Table::new("", &COLUMNS);
    table.notes = head;
    table.notes.push("b: random boundary with seed mix(seed, REALIZATION, 1); sigma: bits of mix(seed, CHAIN, i)".into());
    let mut per_size = Vec::new();
    let mut all = 0usize;
    let mut passed = 0usize;
    for &n in c.sizes() {
        let volume = if c.dimension() == 2 {
            Volume::square(n)?
        } else {
            Volume::interval(n)?
        };
        let rows: Vec<anyhow::Result<(Vec<String>, bool)>> = (0..c.n_seeds())
            .into_par_iter()
            .map(|r| {
                let seed = realization_seed(c.master_seed(), r as u64);
                let eta = DisorderRealization::seeded(seed);
                let b = BoundaryCondition::random(mix(seed, stream::REALIZATION, 1));
                let sigma = random_sigma(seed, volume.site_count());
                let g = gauge_to_ferromagnet(&spec, &volume, &sigma, &b, &eta)?;
                let e1 = finite_volume_energy(&spec, &volume, &sigma, &b, Some(&eta))?.value;
                let e2 = finite_volume_energy(&g.spec, &volume, &g.sigma, &g.boundary, None)?.value;
                let z1 = partition_function(&spec, &volume, &b, Some(&eta))?;
                let z2 = partition_function(&g.spec, &volume, &g.boundary, None)?;
                let (de, dz) = (rel_diff(e1, e2), rel_diff(z1, z2));
                let ok = de <= TOLERANCE && dz <= TOLERANCE;
                Ok((
                    vec![
                        n.to_string(),
                        r.to_string(),
                        seed.to_string(),
                        num(e1),
                        num(e2),
                        num(de),
                        num(z1),
                        num(z2),
                        num(dz),
                        u8::from(ok).to_string(),
                    ],
                    ok,
                ))
            })
            .collect();
        let mut ok_here = 0;
        for row in rows {
            let (row, ok) = row?;
            ok_here += usize::from(ok);
            table.push(row);
        }
        all += c.n_seeds();
        passed += ok_here;
        per_size.push(json!({ "N": n, "passed": ok_here, "trials": c.n_seeds() }));
    }
    Ok(Outcome {
        tables: vec![table],
        results: json!({ "tolerance": TOLERANCE, "passed": passed, "trials": all, "sizes": per_size }),
        fits: Vec::new(),
    })
}
