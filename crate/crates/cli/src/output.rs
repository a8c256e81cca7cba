//! CSV tables and the JSON run summary.

use std::path::{Path, PathBuf};

use serde::Serialize;

pub const SCHEMA_VERSION: u32 = 1;

/// A CSV table. `notes` become `# ` comment lines above the header and must
/// document the unit and convention of every column.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    /// File suffix; the primary table has an empty suffix.
    pub suffix: String,
    pub notes: Vec<String>,
    pub columns: Vec<(String, String)>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(suffix: &str, columns: &[(&str, &str)]) -> Self {
        Table {
            suffix: suffix.to_string(),
            notes: Vec::new(),
            columns: columns
                .iter()
                .map(|(c, d)| (c.to_string(), d.to_string()))
                .collect(),
            rows: Vec::new(),
        }
    }

    pub fn note(mut self, line: impl Into<String>) -> Self {
        self.notes.push(line.into());
        self
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn file_name(&self, stem: &str) -> String {
        if self.suffix.is_empty() {
            format!("{stem}.csv")
        } else {
            format!("{stem}_{}.csv", self.suffix)
        }
    }

    pub fn to_bytes(&self) -> anyhow::Result<Vec<u8>> {
        let mut out = Vec::new();
        for n in &self.notes {
            out.extend_from_slice(format!("# {n}\n").as_bytes());
        }
        for (c, d) in &self.columns {
            out.extend_from_slice(format!("# {c}: {d}\n").as_bytes());
        }
        let mut w = csv::Writer::from_writer(out);
        w.write_record(self.columns.iter().map(|c| &c.0))?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        w.into_inner().map_err(|e| anyhow::anyhow!("{e}"))
    }
}

/// Shortest round-trip decimal form; stable across platforms.
pub fn num(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else {
        format!("{x:?}")
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub schema_version: u32,
    pub experiment: String,
    pub name: String,
    pub cli_version: String,
    pub core_version: String,
    pub master_seed: u64,
    pub workers: usize,
    pub wall_time_seconds: f64,
    pub config: serde_json::Value,
    pub files: Vec<String>,
    pub results: serde_json::Value,
    pub fits: Vec<NamedFit>,
}

/// A fitted exponent with its standard error.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NamedFit {
    pub name: String,
    pub exponent: f64,
    pub stderr: f64,
    pub intercept: f64,
    pub sizes: Vec<usize>,
    pub values: Vec<f64>,
}

impl NamedFit {
    pub fn from_fit(name: &str, f: &spinbc::ScalingFit) -> Self {
        NamedFit {
            name: name.to_string(),
            exponent: f.exponent,
            stderr: f.stderr,
            intercept: f.intercept,
            sizes: f.sizes.clone(),
            values: f.values.clone(),
        }
    }
}

/// Writes every table and the summary into `dir`; returns the paths.
pub fn write_all(
    dir: &Path,
    stem: &str,
    tables: &[Table],
    summary: &Summary,
) -> anyhow::Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let mut paths = Vec::new();
    for t in tables {
        let p = dir.join(t.file_name(stem));
        std::fs::write(&p, t.to_bytes()?)?;
        paths.push(p);
    }
    let p = dir.join(format!("{stem}.summary.json"));
    let mut text = serde_json::to_string_pretty(summary)?;
    text.push('\n');
    std::fs::write(&p, text)?;
    paths.push(p);
    Ok(paths)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_layout() {
        let mut t = Table::new(
            "",
            &[
                ("N", "volume size, sites"),
                ("W", "boundary energy, units of J"),
            ],
        )
        .note("experiment: scaling");
        t.push(vec!["10".into(), num(-0.5)]);
        let text = String::from_utf8(t.to_bytes().unwrap()).unwrap();
        assert_eq!(
            text,
            "# experiment: scaling\n# N: volume size, sites\n# W: boundary energy, units of J\nN,W\n10,-0.5\n"
        );
        assert_eq!(t.file_name("run"), "run.csv");
        assert_eq!(Table::new("hist", &[]).file_name("run"), "run_hist.csv");
    }

    #[test]
    fn numbers_round_trip() {
        for x in [0.1, 1.0 / 3.0, -2.5e-17, 1e300, 0.0] {
            assert_eq!(num(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(num(f64::NAN), "nan");
    }
}
