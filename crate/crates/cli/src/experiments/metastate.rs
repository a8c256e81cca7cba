use serde_json::json;
use spinbc::metastate::{
    empirical_metastate, EmpiricalMetastate, MetastateConfig, WeightMode, DEFAULT_BINS,
    ENDPOINT_EPSILON,
};
use spinbc::rng::realization_seed;
use spinbc::stats::wasserstein1;

use super::Outcome;
use crate::config::ExperimentConfig;
use crate::output::{num, Table};

const COLUMNS: [(&str, &str); 6] = [
    ("N", "linear size of the volume, lattice sites"),
    ("realization", "realization index r, 0-based"),
    ("seed", "disorder seed of realization r"),
    (
        "W",
        "boundary energy, units of J; empty in exact_gibbs_fit mode",
    ),
    ("lambda", "weight of the plus state, in [0, 1]"),
    (
        "residual",
        "total-variation residual of the mixture fit; empty in t0_weight mode",
    ),
];

const HIST_COLUMNS: [(&str, &str); 5] = [
    ("N", "linear size of the volume, lattice sites"),
    ("bin", "bin index, 0-based"),
    ("lambda_low", "lower bin edge, lambda units"),
    ("lambda_high", "upper bin edge, lambda units"),
    ("count", "realizations in the bin, count"),
];

fn sample(c: &ExperimentConfig, n: usize) -> anyhow::Result<EmpiricalMetastate> {
    let spec = c.spec().with_window(c.window_factor() * n);
    let mut cfg = MetastateConfig::new(n, c.n_seeds(), c.weight_mode(), c.master_seed());
    cfg.bins = c.metastate.bins.unwrap_or(DEFAULT_BINS);
    Ok(empirical_metastate(&spec, &cfg)?)
}

pub fn run(c: &ExperimentConfig, head: Vec<String>) -> anyhow::Result<Outcome> {
    let mode = c.weight_mode();
    let mut table = Table::new("", &COLUMNS);
    table.notes = head.clone();
    table.notes.push(format!(
        "lambda: {} at beta = {}",
        match mode {
            WeightMode::T0Weight => "logistic(2 beta W) from the zero-temperature boundary energy",
            WeightMode::ExactGibbsFit =>
                "TV-optimal mixture weight of the exact random-b.c. state over plus/minus",
        },
        c.beta()
    ));
    let mut hist = Table::new("histogram", &HIST_COLUMNS);
    hist.notes = head;
    hist.notes.push(
        "bins: t0_weight places each realization by its minority weight so bins are flip-symmetric"
            .into(),
    );
    let mut per_size = Vec::new();
    for &n in c.sizes() {
        let m = sample(c, n)?;
        for (r, lambda) in m.lambdas.iter().enumerate() {
            table.push(vec![
                n.to_string(),
                r.to_string(),
                realization_seed(c.master_seed(), r as u64).to_string(),
                m.energies.as_ref().map(|e| num(e[r])).unwrap_or_default(),
                num(*lambda),
                m.residuals.as_ref().map(|e| num(e[r])).unwrap_or_default(),
            ]);
        }
        for (b, count) in m.histogram.counts.iter().enumerate() {
            hist.push(vec![
                n.to_string(),
                b.to_string(),
                num(m.histogram.edges[b]),
                num(m.histogram.edges[b + 1]),
                count.to_string(),
            ]);
        }
        let w1 = if c.metastate.compare_double.unwrap_or(false) {
            let d = sample(c, 2 * n)?;
            Some(wasserstein1(&m.lambdas, &d.lambdas))
        } else {
            None
        };
        per_size.push(json!({
            "N": n,
            "mean": m.mean,
            "variance": m.variance,
            "endpoint_mass": m.endpoint_mass,
            "interior_mass": m.interior_mass,
            "wasserstein1_vs_2n": w1,
            "max_residual": m.residuals.as_ref().map(|r| r.iter().cloned().fold(0.0, f64::max)),
        }));
    }
    Ok(Outcome {
        tables: vec![table, hist],
        results: json!({
            "mode": mode,
            "beta": c.beta(),
            "endpoint_epsilon": ENDPOINT_EPSILON,
            "n_seeds": c.n_seeds(),
            "sizes": per_size,
        }),
        fits: Vec::new(),
    })
}
