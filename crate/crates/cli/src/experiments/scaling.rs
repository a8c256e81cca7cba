use std::collections::BTreeMap;

use serde_json::json;
use spinbc::boundary_energy::{
    fit_power_law, nn2d_gap_moments, sample_nn2d_gaps, scaling_fit_with, FitPolicy,
    IntervalProfile, Statistic,
};
use spinbc::models::boundary_bonds;
use spinbc::rng::realization_seed;
use spinbc::{Kernel, Reach, Volume};

use super::Outcome;
use crate::config::ExperimentConfig;
use crate::output::{num, NamedFit, Table};

/// Relative tolerance of the exact-variance cross-check.
pub const VARIANCE_TOLERANCE: f64 = 1e-6;

const COLUMNS: [(&str, &str); 6] = [
    (
        "alpha",
        "coupling exponent, dimensionless; empty for nearest-neighbour",
    ),
    ("N", "linear size of the volume, lattice sites"),
    ("realization", "realization index r, 0-based"),
    ("seed", "disorder seed of realization r"),
    (
        "W",
        "boundary energy of the all-plus state against the random boundary, units of J",
    ),
    (
        "error_bound",
        "certified bound on the omitted long-range tail of W, units of J; 0 when exact",
    ),
];

/// `4 Σ_j k_j²` where `k_j` counts the bonds from exterior site `j` into the
/// box: the exact variance of the ±1 gap, read off the bond list.
fn gap_variance_from_bonds(n: usize) -> anyhow::Result<f64> {
    let volume = Volume::square(n)?;
    let exterior = volume.exterior(Reach::Adjacent)?;
    let mut degree = vec![0u64; exterior.len()];
    for b in boundary_bonds(&volume, Kernel::NearestNeighbour, &exterior) {
        degree[b.b] += 1;
    }
    Ok(4.0 * degree.iter().map(|k| (k * k) as f64).sum::<f64>())
}

fn policy(c: &ExperimentConfig) -> FitPolicy {
    let d = FitPolicy::default();
    FitPolicy {
        min_sizes: d.min_sizes.min(c.sizes().len()).max(3),
        min_decades: c.scaling.min_decades.unwrap_or(d.min_decades),
        min_samples: c.scaling.min_samples.unwrap_or(d.min_samples),
    }
}

pub fn run(c: &ExperimentConfig, head: Vec<String>) -> anyhow::Result<Outcome> {
    let master = c.master_seed();
    let seeds = c.n_seeds();
    let two_d = c.dimension() == 2;
    let alpha = c.model.alpha;
    let mut table = Table::new("", &COLUMNS);
    table.notes = head;
    if two_d {
        table.notes.push("W: nearest-neighbour gap E(minus) - E(plus) on the N x N box, -2 x (sum of the 4N layer spins)".into());
    } else {
        table.notes.push(format!(
            "W: Dyson interval energy, both half-lines, window M = {} N",
            c.window_factor()
        ));
    }
    let mut samples: BTreeMap<usize, Vec<f64>> = BTreeMap::new();
    let mut per_size = Vec::new();
    let mut exact_sd = Vec::new();
    for &n in c.sizes() {
        let (values, bounds, exact, check) = if two_d {
            let w = sample_nn2d_gaps(n, seeds, master)?;
            let closed = nn2d_gap_moments(n).1;
            let bonds = gap_variance_from_bonds(n)?;
            let b = vec![0.0; w.len()];
            (w, b, closed, bonds)
        } else {
            let a = alpha.expect("validated alpha");
            let window = c.window_factor() * n;
            let profile = IntervalProfile::new(a, n, window)?;
            let e = profile.sample(seeds, master);
            let exact = profile.exact_variance();
            let check = IntervalProfile::from_tail_sums(a, n, window)?.exact_variance();
            (
                e.iter().map(|x| x.total).collect(),
                e.iter().map(|x| x.truncation_bound).collect(),
                exact,
                check,
            )
        };
        for r in 0..seeds {
            table.push(vec![
                alpha.filter(|_| !two_d).map(num).unwrap_or_default(),
                n.to_string(),
                r.to_string(),
                realization_seed(master, r as u64).to_string(),
                num(values[r]),
                num(bounds[r]),
            ]);
        }
        let rel = (exact - check).abs() / exact;
        exact_sd.push(exact.sqrt());
        per_size.push(json!({
            "N": n,
            "sqrt_var_sample": Statistic::SqrtVarW.evaluate(&values),
            "mean_abs_sample": Statistic::MeanAbsW.evaluate(&values),
            "sqrt_var_exact": exact.sqrt(),
            "var_exact": exact,
            "var_crosscheck": check,
            "crosscheck_relative_error": rel,
            "crosscheck_ok": rel <= if two_d { 1e-10 } else { VARIANCE_TOLERANCE },
            "max_error_bound": bounds.iter().cloned().fold(0.0, f64::max),
        }));
        samples.insert(n, values);
    }

    let sizes: Vec<usize> = c.sizes().to_vec();
    let p = policy(c);
    let mut fits = Vec::new();
    let mut notes = Vec::new();
    for (name, stat) in [
        ("sqrt_var_sample", Statistic::SqrtVarW),
        ("mean_abs_sample", Statistic::MeanAbsW),
    ] {
        match scaling_fit_with(&samples, stat, &p) {
            Ok(f) => fits.push(NamedFit::from_fit(name, &f)),
            Err(e) => notes.push(format!("{name}: {e}")),
        }
    }
    if let Ok(f) = fit_power_law(&sizes, &exact_sd, Statistic::SqrtVarW) {
        fits.push(NamedFit::from_fit("sqrt_var_exact", &f));
    }
    let top_from = c
        .scaling
        .top_decade_from
        .unwrap_or_else(|| sizes.last().map_or(0, |n| n / 10));
    let top: Vec<usize> = (0..sizes.len()).filter(|&i| sizes[i] >= top_from).collect();
    if top.len() >= 3 {
        let ts: Vec<usize> = top.iter().map(|&i| sizes[i]).collect();
        let tv: Vec<f64> = top.iter().map(|&i| exact_sd[i]).collect();
        if let Ok(f) = fit_power_law(&ts, &tv, Statistic::SqrtVarW) {
            fits.push(NamedFit::from_fit("sqrt_var_exact_top_decade", &f));
        }
        let tv: Vec<f64> = top
            .iter()
            .map(|&i| Statistic::SqrtVarW.evaluate(&samples[&sizes[i]]))
            .collect();
        if let Ok(f) = fit_power_law(&ts, &tv, Statistic::SqrtVarW) {
            fits.push(NamedFit::from_fit("sqrt_var_sample_top_decade", &f));
        }
    } else {
        notes.push(format!(
            "top-decade fit skipped: {} sizes >= {top_from}, need 3",
            top.len()
        ));
    }
    let growth = |v: &[f64]| match v {
        [.., a, b] => Some(b / a - 1.0),
        _ => None,
    };
    let sampled_sd: Vec<f64> = samples
        .values()
        .map(|s| Statistic::SqrtVarW.evaluate(s))
        .collect();
    let theory = alpha
        .filter(|_| !two_d)
        .map(|a| (1.5 - a).max(0.0))
        .unwrap_or(0.5);
    let results = json!({
        "sizes": per_size,
        "n_seeds": seeds,
        "predicted_exponent": theory,
        "last_step_growth_exact": growth(&exact_sd),
        "last_step_growth_sample": growth(&sampled_sd),
        "crosscheck_all_ok": per_size.iter().all(|s| s["crosscheck_ok"] == true),
        "notes": notes,
    });
    Ok(Outcome {
        tables: vec![table],
        results,
        fits,
    })
}
