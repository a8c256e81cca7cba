//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Run with `cargo test -p spinbc-cli --test acceptance`.

use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use serde_json::Value;
use spinbc::gibbs::{fit_mixture_probabilities, gibbs_table};
use spinbc::{BoundaryCondition, DisorderRealization, Kernel, ModelSpec, Volume};
use spinbc_cli::{run_experiment, ExperimentConfig, Overrides, Summary};

type Outcome = Result<(bool, String), String>;
type Criterion<'a> = (&'a str, &'a dyn Fn(&Path) -> Outcome);

fn run(dir: &Path, toml: &str) -> Result<Summary, String> {
    let config = ExperimentConfig::parse(toml).map_err(|e| e.to_string())?;
    let overrides = Overrides {
        output: Some(dir.to_path_buf()),
        ..Overrides::default()
    };
    run_experiment(config, &overrides)
        .map(|r| r.summary)
        .map_err(|e| e.to_string())
}

fn fit<'a>(s: &'a Summary, name: &str) -> Result<&'a spinbc_cli::output::NamedFit, String> {
    s.fits
        .iter()
        .find(|f| f.name == name)
        .ok_or_else(|| format!("fit {name} missing: {}", s.results["notes"]))
}

fn f(v: &Value) -> f64 {
    v.as_f64().unwrap_or(f64::NAN)
}

fn c1(dir: &Path) -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for alpha in [1.2, 1.25, 1.4] {
        let s = run(
            dir,
            &format!(
                r#"
experiment = "scaling"
name = "c1_{alpha}"
master_seed = 101
n_seeds = 2000
[model]
family = "dyson"
alpha = {alpha}
[sizes]
values = [100, 1000, 10000, 100000]
"#
            ),
        )?;
        let e = fit(&s, "sqrt_var_sample")?.exponent;
        let target = 1.5 - alpha;
        let worst = s.results["sizes"]
            .as_array()
            .unwrap()
            .iter()
            .map(|x| f(&x["crosscheck_relative_error"]))
            .fold(0.0, f64::max);
        ok &= (e - target).abs() <= 0.05 && worst <= 1e-6;
        parts.push(format!(
            "alpha {alpha}: exponent {e:.4} (target {target:.2}), variance cross-check {worst:.1e}"
        ));
    }
    Ok((ok, parts.join("; ")))
}

fn c2(dir: &Path) -> Outcome {
    let s = run(
        dir,
        r#"
experiment = "scaling"
name = "c2"
master_seed = 202
n_seeds = 2000
[model]
family = "dyson"
alpha = 1.8
[sizes]
values = [10000, 20000, 50000, 100000]
[scaling]
min_decades = 1.0
top_decade_from = 10000
"#,
    )?;
    let growth = f(&s.results["last_step_growth_exact"]);
    let sizes = s.results["sizes"].as_array().unwrap();
    let sd = |i: usize, k: &str| f(&sizes[i][k]);
    let decade = sd(3, "sqrt_var_exact") / sd(0, "sqrt_var_exact") - 1.0;
    let sampled = sd(3, "sqrt_var_sample") / sd(0, "sqrt_var_sample") - 1.0;
    let top = fit(&s, "sqrt_var_exact_top_decade")?.exponent;
    let top_sample = fit(&s, "sqrt_var_sample_top_decade")?.exponent;
    Ok((
        decade.abs() < 0.02 && top.abs() <= 0.05,
        format!(
            "exact sqrt Var growth 1e4 -> 1e5 {:.3}% (last step {:.3}%), top-decade exponent {top:.4}; sampled: growth {:.2}%, exponent {top_sample:.4}",
            100.0 * decade,
            100.0 * growth,
            100.0 * sampled
        ),
    ))
}

fn c3(dir: &Path) -> Outcome {
    let s = run(
        dir,
        r#"
experiment = "scaling"
name = "c3"
master_seed = 303
n_seeds = 10000
[model]
family = "nn_ising"
dimension = 2
[sizes]
values = [16, 32, 64, 128, 256, 512, 1024]
[scaling]
min_decades = 1.5
"#,
    )?;
    let e = fit(&s, "sqrt_var_sample")?.exponent;
    let mut worst: f64 = 0.0;
    for x in s.results["sizes"].as_array().unwrap() {
        let n = f(&x["N"]);
        let closed = 2.0 * (4.0 * n).sqrt();
        worst = worst.max((f(&x["sqrt_var_exact"]) - closed).abs() / closed);
        worst = worst.max((f(&x["var_crosscheck"]).sqrt() - closed).abs() / closed);
    }
    Ok((
        (e - 0.5).abs() <= 0.05 && worst <= 1e-10,
        format!(
            "sampled exponent {e:.4}; exact sqrt Var vs 2 sqrt(4N) worst rel. diff {worst:.1e}"
        ),
    ))
}

fn c4(dir: &Path) -> Outcome {
    let mut passed = 0;
    let mut trials = 0;
    for (name, kernel) in [("nn", "nearest_neighbour"), ("pl", "power_law")] {
        let s = run(
            dir,
            &format!(
                r#"
experiment = "gauge-check"
name = "c4_{name}"
master_seed = 404
n_seeds = 100
[model]
family = "mattis"
kernel = "{kernel}"
alpha = 1.5
beta = 0.7
[sizes]
values = [1, 2, 3, 4, 5, 6]
"#
            ),
        )?;
        passed += s.results["passed"].as_u64().unwrap();
        trials += s.results["trials"].as_u64().unwrap();
    }
    Ok((
        passed == trials,
        format!("{passed}/{trials} exact equalities (100 per N, N = 1..6, two kernels)"),
    ))
}

fn c5(dir: &Path) -> Outcome {
    let families = [
        ("nn_ising", "", 12, 400_000),
        ("dyson", "alpha = 1.8", 4, 1_000_000),
        ("mattis", "", 12, 400_000),
        ("rfim", "field = 0.5", 12, 400_000),
        ("ea", "", 12, 400_000),
    ];
    let mut ok = true;
    let mut parts = Vec::new();
    for (family, extra, n, sweeps) in families {
        let s = run(
            dir,
            &format!(
                r#"
experiment = "oracle-vs-mc"
name = "c5_{family}"
master_seed = 505
n_seeds = 100
[model]
family = "{family}"
{extra}
[sizes]
values = [{n}]
[oracle]
betas = [0.5, 1.0, 2.0]
sweeps = {sweeps}
z = 3.0
"#
            ),
        )?;
        let cells: Vec<String> = s.results["cells"]
            .as_array()
            .unwrap()
            .iter()
            .map(|c| {
                ok &= f(&c["fraction"]) >= 0.95;
                format!("{}", c["within"])
            })
            .collect();
        parts.push(format!("{family} N={n}: {}/100", cells.join(",")));
    }
    Ok((ok, format!("{} (beta 0.5, 1, 2)", parts.join("; "))))
}

fn metastate(dir: &Path, name: &str, alpha: f64, beta: f64, double: bool) -> Result<Value, String> {
    let s = run(
        dir,
        &format!(
            r#"
experiment = "metastate"
name = "{name}"
master_seed = 606
n_seeds = 2000
[model]
family = "dyson"
alpha = {alpha}
beta = {beta}
[sizes]
values = [10000]
[metastate]
mode = "t0_weight"
compare_double = {double}
"#
        ),
    )?;
    Ok(s.results["sizes"][0].clone())
}

fn c6(dir: &Path) -> Outcome {
    let m = metastate(dir, "c6", 1.25, 2.0, false)?;
    let e = f(&m["endpoint_mass"]);
    Ok((e >= 0.95, format!("endpoint mass {e:.4}")))
}

fn c7(dir: &Path) -> Outcome {
    let m = metastate(dir, "c7", 1.8, 1.0, true)?;
    let (v, i, w) = (
        f(&m["variance"]),
        f(&m["interior_mass"]),
        f(&m["wasserstein1_vs_2n"]),
    );
    Ok((
        v > 0.01 && i > 0.2 && w < 0.05,
        format!("variance {v:.4}, interior mass {i:.4}, W1(N, 2N) {w:.4}"),
    ))
}

fn c8(dir: &Path) -> Outcome {
    let csd = |name: &str, seq: &str| {
        run(
            dir,
            &format!(
                r#"
experiment = "csd"
name = "{name}"
master_seed = 808
n_seeds = 2000
[model]
family = "dyson"
alpha = 1.25
[sequence]
{seq}
[csd]
null_recurrence_c = 1.0
"#
            ),
        )
    };
    let sparse = csd("c8_sparse", "kind = \"sparse\"\nbudget = 100000")?;
    let k = sparse.results["terms"].as_array().unwrap().len();
    let linear = csd(
        "c8_linear",
        &format!("kind = \"linear\"\nstep = 100\nbudget = {}", 100 * k),
    )?;
    let change = f(&sparse.results["null_recurrence"]["final_term_change"]);
    let growth = f(&linear.results["null_recurrence"]["late_half_growth"]);
    Ok((
        change < 0.05 && growth >= 0.2,
        format!(
            "sparse {} final-term change {:.2}%; linear {} late-half growth {:.1}%",
            sparse.results["terms"],
            100.0 * change,
            linear.results["terms"],
            100.0 * growth
        ),
    ))
}

fn c9() -> Outcome {
    let planted = [0.0, 0.25, 0.5, 0.9, 1.0];
    let models = [
        (ModelSpec::dyson(1.8, 1.0).unwrap(), 10),
        (ModelSpec::nn_ising(0.8).unwrap(), 8),
        (ModelSpec::mattis(Kernel::NearestNeighbour, 1.2).unwrap(), 6),
    ];
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for (spec, n) in models {
        let volume = Volume::interval(n).map_err(|e| e.to_string())?;
        let eta = DisorderRealization::seeded(9);
        let eta = spec.family.needs_disorder().then_some(&eta);
        let plus = gibbs_table(&spec, &volume, &BoundaryCondition::Plus, eta)
            .map_err(|e| e.to_string())?;
        let minus = gibbs_table(&spec, &volume, &BoundaryCondition::Minus, eta)
            .map_err(|e| e.to_string())?;
        for lambda in planted {
            let t: Vec<f64> = plus
                .probabilities()
                .iter()
                .zip(minus.probabilities())
                .map(|(p, m)| lambda * p + (1.0 - lambda) * m)
                .collect();
            let fit = fit_mixture_probabilities(&t, plus.probabilities(), minus.probabilities());
            worst = worst.max((fit.lambda - lambda).abs());
            count += 1;
        }
    }
    Ok((
        worst <= 1e-3,
        format!("{count} planted mixtures, worst |error| {worst:.2e}"),
    ))
}

const DETERMINISM: [(&str, &str); 6] = [
    (
        "scaling",
        "experiment = \"scaling\"\nn_seeds = 1000\n[model]\nfamily = \"dyson\"\nalpha = 1.3\n[sizes]\nvalues = [10, 100, 1000, 5000]\n",
    ),
    (
        "window",
        "experiment = \"window\"\nn_seeds = 1000\n[model]\nfamily = \"nn_ising\"\ndimension = 2\n[sizes]\nvalues = [8, 32, 128]\n[window]\ndeltas = [0.0, 0.25]\n",
    ),
    (
        "metastate",
        "experiment = \"metastate\"\nn_seeds = 40\n[model]\nfamily = \"dyson\"\nalpha = 1.6\nbeta = 2.0\n[sizes]\nvalues = [6]\n[metastate]\nmode = \"exact_gibbs_fit\"\n",
    ),
    (
        "csd",
        "experiment = \"csd\"\nn_seeds = 200\n[model]\nfamily = \"dyson\"\nalpha = 1.25\n[sequence]\nkind = \"geometric\"\nstart = 4\nratio = 2.0\nbudget = 4096\n[csd]\nnull_recurrence_c = 1.0\n",
    ),
    (
        "gauge",
        "experiment = \"gauge-check\"\nn_seeds = 50\n[model]\nfamily = \"mattis\"\n[sizes]\nvalues = [3, 6]\n",
    ),
    (
        "oracle",
        "experiment = \"oracle-vs-mc\"\nn_seeds = 16\n[model]\nfamily = \"ea\"\n[sizes]\nvalues = [6]\n[oracle]\nbetas = [0.5, 2.0]\nsweeps = 2000\n",
    ),
];

fn csv_bytes(dir: &Path) -> Result<Vec<(String, Vec<u8>)>, String> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| e.to_string())?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "csv"))
        .collect();
    files.sort();
    files
        .into_iter()
        .map(|p| {
            let bytes = std::fs::read(&p).map_err(|e| e.to_string())?;
            Ok((p.file_name().unwrap().to_string_lossy().into_owned(), bytes))
        })
        .collect()
}

fn c10(dir: &Path) -> Outcome {
    let exe = env!("CARGO_BIN_EXE_spinbc");
    let mut checked = 0;
    let mut bad = Vec::new();
    for (name, toml) in DETERMINISM {
        let config = dir.join(format!("{name}.toml"));
        std::fs::write(&config, toml).map_err(|e| e.to_string())?;
        let mut outputs = Vec::new();
        for (pass, workers) in [(0, 1), (1, 8), (2, 1), (3, 8)] {
            let out = dir.join(format!("{name}_{pass}"));
            let status = Command::new(exe)
                .args([
                    "run",
                    config.to_str().unwrap(),
                    "--workers",
                    &workers.to_string(),
                    "--master-seed",
                    "1010",
                    "--output",
                ])
                .arg(&out)
                .output()
                .map_err(|e| e.to_string())?;
            if !status.status.success() {
                return Err(format!(
                    "{name}: {}",
                    String::from_utf8_lossy(&status.stderr)
                ));
            }
            outputs.push(csv_bytes(&out)?);
        }
        checked += outputs[0].len();
        if outputs.iter().any(|o| o != &outputs[0]) || outputs[0].is_empty() {
            bad.push(name);
        }
    }
    Ok((
        bad.is_empty(),
        if bad.is_empty() {
            format!("6 experiments, {checked} CSV files identical over 4 runs (workers 1, 8, 1, 8)")
        } else {
            format!("differing outputs: {bad:?}")
        },
    ))
}

fn main() {
    let root = tempfile::tempdir().expect("temp dir");
    let criteria: [Criterion; 10] = [
        ("C1 Dyson scaling exponent", &c1),
        ("C2 bounded regime", &c2),
        ("C3 2D short-range scaling", &c3),
        ("C4 gauge identity", &c4),
        ("C5 oracle agreement", &c5),
        ("C6 endpoint concentration", &c6),
        ("C7 nontrivial weight distribution", &c7),
        ("C8 sparse vs dense null recurrence", &c8),
        ("C9 mixture-weight recovery", &|_| c9()),
        ("C10 determinism", &c10),
    ];
    let mut failed = 0;
    for (i, (label, check)) in criteria.iter().enumerate() {
        let dir = root.path().join(format!("c{}", i + 1));
        std::fs::create_dir_all(&dir).expect("criterion dir");
        let start = Instant::now();
        let (ok, detail) = match check(&dir) {
            Ok(x) => x,
            Err(e) => (false, format!("error: {e}")),
        };
        failed += usize::from(!ok);
        println!(
            "{} {label}: {detail} [{:.1}s]",
            if ok { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64()
        );
    }
    println!("{} of 10 criteria passed", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
