use serde_json::json;
use spinbc::metastate::{csd_over_seeds, null_recurrence_frequency};
use spinbc::rng::realization_seed;
use spinbc::stats::mean;

use super::{sequence, Outcome};
use crate::config::ExperimentConfig;
use crate::output::{num, Table};

const COLUMNS: [(&str, &str); 6] = [
    ("realization", "realization index r, 0-based"),
    ("seed", "disorder seed of realization r"),
    ("k", "position in the volume sequence, 0-based"),
    ("N", "k-th volume size, lattice sites"),
    (
        "W",
        "interval boundary energy at N, units of J, one boundary per realization",
    ),
    ("sign", "sign of W: -1, 0 or 1"),
];

const NULL_COLUMNS: [(&str, &str); 4] = [
    ("k", "position in the volume sequence, 0-based"),
    ("N", "k-th volume size, lattice sites"),
    (
        "p_hat",
        "fraction of realizations with |W| <= c, probability",
    ),
    (
        "partial_sum",
        "sum of p_hat over positions 0..=k, dimensionless",
    ),
];

pub fn run(c: &ExperimentConfig, head: Vec<String>) -> anyhow::Result<Outcome> {
    let alpha = c.model.alpha.expect("validated alpha");
    let seq = sequence(c)?;
    let records = csd_over_seeds(alpha, &seq, c.n_seeds(), c.master_seed())?;
    let mut table = Table::new("", &COLUMNS);
    table.notes = head.clone();
    table.notes.push(format!("sequence: {:?}", seq.terms));
    for (r, rec) in records.iter().enumerate() {
        let seed = realization_seed(c.master_seed(), r as u64).to_string();
        for k in 0..rec.terms.len() {
            table.push(vec![
                r.to_string(),
                seed.clone(),
                k.to_string(),
                rec.terms[k].to_string(),
                num(rec.energies[k]),
                rec.signs[k].to_string(),
            ]);
        }
    }
    let flips: Vec<f64> = records.iter().map(|r| r.flips as f64).collect();
    let runs: Vec<f64> = records.iter().map(|r| r.longest_run as f64).collect();
    let mut tables = vec![table];
    let mut null_block = serde_json::Value::Null;
    if let Some(threshold) = c.csd.null_recurrence_c {
        let nr = null_recurrence_frequency(alpha, &seq, threshold, c.n_seeds(), c.master_seed())?;
        let mut t = Table::new("null_recurrence", &NULL_COLUMNS);
        t.notes = head;
        t.notes.push(format!("c: {threshold}"));
        for k in 0..nr.terms.len() {
            t.push(vec![
                k.to_string(),
                nr.terms[k].to_string(),
                num(nr.frequencies[k]),
                num(nr.partial_sums[k]),
            ]);
        }
        tables.push(t);
        null_block = json!({
            "c": threshold,
            "final_term_change": nr.final_term_change(),
            "late_half_growth": nr.late_half_growth(),
            "partial_sum": nr.partial_sums.last(),
        });
    }
    Ok(Outcome {
        tables,
        results: json!({
            "terms": seq.terms,
            "is_squaring": seq.is_squaring(),
            "n_seeds": c.n_seeds(),
            "mean_flips": mean(&flips),
            "max_flips": flips.iter().cloned().fold(0.0, f64::max),
            "mean_longest_run": mean(&runs),
            "null_recurrence": null_block,
        }),
        fits: Vec::new(),
    })
}
