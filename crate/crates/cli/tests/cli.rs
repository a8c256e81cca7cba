use std::path::Path;
use std::process::{Command, Output};

fn spinbc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spinbc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

const GAUGE: &str = r#"experiment = "gauge-check"
master_seed = 11
n_seeds = 100

[model]
family = "mattis"
beta = 0.9

[sizes]
values = [6]
"#;

#[test]
fn validate_reports_key_line_and_range() {
    let dir = tempfile::tempdir().unwrap();
    let bad = GAUGE.replace("beta = 0.9", "beta = 0.9\nalpha = 2.5");
    let p = write(dir.path(), "bad.toml", &bad);
    let out = spinbc(&["validate", &p]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 8: model.alpha"), "{err}");
    assert!(err.contains("(1, 2]"), "{err}");

    let p = write(
        dir.path(),
        "neg.toml",
        &GAUGE.replace("beta = 0.9", "beta = -1"),
    );
    let err = String::from_utf8_lossy(&spinbc(&["validate", &p]).stderr).to_string();
    assert!(
        err.contains("model.beta") && err.contains("[0, inf)"),
        "{err}"
    );

    let p = write(
        dir.path(),
        "none.toml",
        &GAUGE.replace("experiment = \"gauge-check\"", ""),
    );
    let out = spinbc(&["run", &p]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(
        err.contains("scaling, window, metastate, csd, gauge-check, oracle-vs-mc"),
        "{err}"
    );

    let p = write(dir.path(), "ok.toml", GAUGE);
    assert!(spinbc(&["validate", &p]).status.success());
}

#[test]
fn budget_overrun_exits_before_running() {
    let dir = tempfile::tempdir().unwrap();
    let text = format!("{GAUGE}\n[budget]\nmax_work = 1000\n");
    let p = write(dir.path(), "b.toml", &text);
    let out_dir = dir.path().join("out");
    let out = spinbc(&["run", &p, "--output", out_dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("budget"));
    assert!(!out_dir.exists());
}

#[test]
fn gauge_run_writes_documented_csv_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "g.toml", GAUGE);
    let out_dir = dir.path().join("out");
    let out = spinbc(&[
        "run",
        &p,
        "--output",
        out_dir.to_str().unwrap(),
        "--workers",
        "2",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );

    let csv = std::fs::read_to_string(out_dir.join("gauge-check.csv")).unwrap();
    let header = csv.lines().find(|l| !l.starts_with('#')).unwrap();
    for col in header.split(',') {
        assert!(
            csv.lines().any(|l| l.starts_with(&format!("# {col}: "))),
            "column {col} undocumented"
        );
    }
    assert_eq!(csv.lines().filter(|l| !l.starts_with('#')).count(), 101);

    let summary: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(out_dir.join("gauge-check.summary.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(summary["schema_version"], 1);
    assert_eq!(summary["workers"], 2);
    assert_eq!(summary["results"]["passed"], 100);
    assert_eq!(summary["config"]["model"]["family"], "mattis");
    assert!(summary["wall_time_seconds"].as_f64().unwrap() >= 0.0);
}

#[test]
fn master_seed_override_changes_data() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "g.toml", GAUGE);
    let read = |seed: &str| {
        let out_dir = dir.path().join(seed);
        let o = spinbc(&[
            "run",
            &p,
            "--output",
            out_dir.to_str().unwrap(),
            "--master-seed",
            seed,
        ]);
        assert!(o.status.success());
        std::fs::read(out_dir.join("gauge-check.csv")).unwrap()
    };
    assert_ne!(read("1"), read("2"));
}

#[test]
fn shipped_configs_validate() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let mut seen = 0;
    for entry in std::fs::read_dir(dir).unwrap() {
        let p = entry.unwrap().path();
        let out = spinbc(&["validate", p.to_str().unwrap()]);
        assert!(
            out.status.success(),
            "{}: {}",
            p.display(),
            String::from_utf8_lossy(&out.stderr)
        );
        seen += 1;
    }
    assert_eq!(seen, 6);
}
