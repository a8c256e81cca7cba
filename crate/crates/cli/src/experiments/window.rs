use serde_json::json;
use spinbc::boundary_energy::{window_probability, WindowTarget};
use spinbc::stats::linear_regression;

use super::Outcome;
use crate::config::ExperimentConfig;
use crate::output::{num, NamedFit, Table};

const COLUMNS: [(&str, &str); 9] = [
    ("N", "linear size of the volume, lattice sites"),
    ("delta", "window exponent, dimensionless"),
    ("width", "window half-width N^delta, units of J"),
    ("hits", "realizations with |W| <= width, count"),
    ("trials", "realizations, count"),
    ("estimate", "hits / trials, probability"),
    ("ci_low", "95% Wilson lower bound, probability"),
    ("ci_high", "95% Wilson upper bound, probability"),
    ("outside_regime", "1 when delta >= 1/2, else 0"),
];

pub fn run(c: &ExperimentConfig, head: Vec<String>) -> anyhow::Result<Outcome> {
    let target = if c.dimension() == 2 {
        WindowTarget::Nn2d
    } else {
        WindowTarget::Dyson {
            alpha: c.model.alpha.expect("validated alpha"),
        }
    };
    let deltas = c
        .window
        .as_ref()
        .map(|w| w.deltas.clone())
        .unwrap_or_default();
    let mut table = Table::new("", &COLUMNS);
    table.notes = head;
    table.notes.push(
        "W: interval boundary energy (Dyson, window 10 N) or nearest-neighbour gap (2D)".into(),
    );
    let mut fits = Vec::new();
    let mut skipped = Vec::new();
    for &delta in &deltas {
        let mut est = Vec::new();
        for &n in c.sizes() {
            let e = window_probability(target, n, delta, c.n_seeds(), c.master_seed())?;
            table.push(vec![
                n.to_string(),
                num(e.delta),
                num(e.width),
                e.hits.to_string(),
                e.trials.to_string(),
                num(e.estimate),
                num(e.ci_low),
                num(e.ci_high),
                u8::from(e.outside_regime).to_string(),
            ]);
            est.push(e);
        }
        let name = format!("rate_delta_{delta}");
        if est.len() >= 3 && est.iter().all(|e| e.hits > 0) {
            let x: Vec<f64> = est.iter().map(|e| (e.n as f64).ln()).collect();
            let y: Vec<f64> = est.iter().map(|e| e.estimate.ln()).collect();
            let (exponent, stderr, intercept) = linear_regression(&x, &y);
            fits.push(NamedFit {
                name,
                exponent,
                stderr,
                intercept,
                sizes: est.iter().map(|e| e.n).collect(),
                values: est.iter().map(|e| e.estimate).collect(),
            });
        } else {
            skipped.push(name);
        }
    }
    Ok(Outcome {
        tables: vec![table],
        results: json!({ "deltas": deltas, "n_seeds": c.n_seeds(), "fits_skipped": skipped }),
        fits,
    })
}
