//! Experiment configuration files (TOML).
//!
//! ```toml
//! experiment = "scaling"
//! master_seed = 7
//! n_seeds = 2000
//!
//! [model]
//! family = "dyson"
//! alpha = 1.25
//!
//! [sizes]
//! values = [100, 1000, 10000, 100000]
//! ```
//!
//! Per-experiment sections (`[scaling]`, `[window]`, `[metastate]`, `[csd]`,
//! `[oracle]`, `[budget]`) are optional and fall back to documented defaults.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use spinbc::metastate::{SequenceKind, WeightMode};
use spinbc::{Family, Kernel, ModelSpec};

pub const EXPERIMENTS: [&str; 6] = [
    "scaling",
    "window",
    "metastate",
    "csd",
    "gauge-check",
    "oracle-vs-mc",
];
pub const ENUMERATION_BOUND: usize = spinbc::gibbs::DEFAULT_ENUMERATION_BOUND;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    Scaling,
    Window,
    Metastate,
    Csd,
    GaugeCheck,
    OracleVsMc,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::Scaling => "scaling",
            Experiment::Window => "window",
            Experiment::Metastate => "metastate",
            Experiment::Csd => "csd",
            Experiment::GaugeCheck => "gauge-check",
            Experiment::OracleVsMc => "oracle-vs-mc",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        EXPERIMENTS.iter().position(|e| *e == s).map(|i| {
            [
                Self::Scaling,
                Self::Window,
                Self::Metastate,
                Self::Csd,
                Self::GaugeCheck,
                Self::OracleVsMc,
            ][i]
        })
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSection {
    /// `nn_ising`, `dyson`, `mattis`, `rfim` or `ea`.
    pub family: Option<String>,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    /// 1 or 2; only `nn_ising` supports 2.
    pub dimension: Option<usize>,
    /// `nearest_neighbour` or `power_law` (uses `alpha`).
    pub kernel: Option<String>,
    /// Random-field strength for `rfim`.
    pub field: Option<f64>,
    /// Long-range boundary window as a multiple of N.
    pub window_factor: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SizesSection {
    pub values: Vec<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SequenceSection {
    /// `linear`, `geometric` or `sparse`.
    pub kind: Option<String>,
    pub step: Option<usize>,
    pub start: Option<usize>,
    pub ratio: Option<f64>,
    /// Largest admissible single-volume size.
    pub budget: Option<usize>,
    /// Keep only the first `terms` sizes.
    pub terms: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScalingSection {
    pub min_decades: Option<f64>,
    pub min_samples: Option<usize>,
    /// Sizes `≥ this` form the top-decade fit.
    pub top_decade_from: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindowSection {
    pub deltas: Vec<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetastateSection {
    /// `t0_weight` or `exact_gibbs_fit`.
    pub mode: Option<String>,
    pub bins: Option<usize>,
    /// Also sample at 2N and report the Wasserstein-1 distance.
    pub compare_double: Option<bool>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CsdSection {
    /// Threshold `c` for `P(|W| ≤ c)`; omit to skip.
    pub null_recurrence_c: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleSection {
    pub betas: Vec<f64>,
    pub sweeps: Option<usize>,
    pub burn_in: Option<usize>,
    pub thin: Option<usize>,
    /// Pass threshold in batch-means standard errors.
    pub z: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BudgetSection {
    /// Largest site count touched by one realization, window included.
    pub max_sites: Option<usize>,
    /// Largest total of site visits over all realizations.
    pub max_work: Option<u64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: Option<String>,
    /// Stem of the output files; defaults to the experiment name.
    pub name: Option<String>,
    pub master_seed: Option<u64>,
    pub n_seeds: Option<usize>,
    pub workers: Option<usize>,
    pub output_dir: Option<String>,
    #[serde(default)]
    pub model: ModelSection,
    pub sizes: Option<SizesSection>,
    pub sequence: Option<SequenceSection>,
    #[serde(default)]
    pub scaling: ScalingSection,
    pub window: Option<WindowSection>,
    #[serde(default)]
    pub metastate: MetastateSection,
    #[serde(default)]
    pub csd: CsdSection,
    pub oracle: Option<OracleSection>,
    #[serde(default)]
    pub budget: BudgetSection,
}

pub const DEFAULT_MAX_SITES: usize = 50_000_000;
pub const DEFAULT_MAX_WORK: u64 = 200_000_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostic {
    pub line: Option<usize>,
    pub key: String,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(l) => write!(f, "line {l}: {}: {}", self.key, self.message),
            None => write!(f, "{}: {}", self.key, self.message),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{}", .0.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("\n"))]
    Invalid(Vec<Diagnostic>),
}

impl ConfigError {
    pub fn diagnostics(&self) -> &[Diagnostic] {
        match self {
            ConfigError::Invalid(d) => d,
            ConfigError::Io { .. } => &[],
        }
    }
}

/// Line of `key` inside `[section]` (or the root table when `section` is
/// empty), 1-based.
fn locate(source: &str, section: &str, key: &str) -> Option<usize> {
    let mut current = String::new();
    for (i, raw) in source.lines().enumerate() {
        let line = raw.trim();
        if line.starts_with('[') {
            current = line
                .trim_matches(|c| c == '[' || c == ']')
                .trim()
                .to_string();
            if key.is_empty() && current == section {
                return Some(i + 1);
            }
            continue;
        }
        if current == section && !key.is_empty() {
            if let Some((k, _)) = line.split_once('=') {
                if k.trim() == key {
                    return Some(i + 1);
                }
            }
        }
    }
    None
}

struct Checker<'a> {
    source: &'a str,
    found: Vec<Diagnostic>,
}

impl Checker<'_> {
    fn report(&mut self, section: &str, key: &str, message: impl Into<String>) {
        let path = if section.is_empty() {
            key.to_string()
        } else {
            format!("{section}.{key}")
        };
        self.found.push(Diagnostic {
            line: locate(self.source, section, key),
            key: path,
            message: message.into(),
        });
    }
}

impl ExperimentConfig {
    pub fn parse(source: &str) -> Result<Self, ConfigError> {
        let config: ExperimentConfig = toml::from_str(source).map_err(|e| {
            let line = e
                .span()
                .map(|s| source[..s.start].matches('\n').count() + 1);
            ConfigError::Invalid(vec![Diagnostic {
                line,
                key: "syntax".into(),
                message: e.message().trim().to_string(),
            }])
        })?;
        let diagnostics = config.check(source);
        if diagnostics.is_empty() {
            Ok(config)
        } else {
            Err(ConfigError::Invalid(diagnostics))
        }
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let source = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&source)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config is always serializable")
    }

    pub fn experiment(&self) -> Experiment {
        self.experiment
            .as_deref()
            .and_then(Experiment::parse)
            .expect("validated config")
    }

    pub fn stem(&self) -> String {
        self.name
            .clone()
            .unwrap_or_else(|| self.experiment().name().to_string())
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed.unwrap_or(0)
    }

    pub fn n_seeds(&self) -> usize {
        self.n_seeds.unwrap_or(1000)
    }

    pub fn workers(&self) -> usize {
        self.workers.unwrap_or(1)
    }

    pub fn sizes(&self) -> &[usize] {
        self.sizes
            .as_ref()
            .map(|s| s.values.as_slice())
            .unwrap_or(&[])
    }

    pub fn beta(&self) -> f64 {
        self.model.beta.unwrap_or(1.0)
    }

    pub fn dimension(&self) -> usize {
        self.model.dimension.unwrap_or(1)
    }

    pub fn window_factor(&self) -> usize {
        self.model
            .window_factor
            .unwrap_or(spinbc::models::DEFAULT_WINDOW_FACTOR)
    }

    pub fn family_name(&self) -> &str {
        self.model.family.as_deref().unwrap_or("")
    }

    pub fn kernel(&self) -> Kernel {
        match self.model.kernel.as_deref() {
            Some("power_law") => Kernel::PowerLaw {
                alpha: self.model.alpha.unwrap_or(f64::NAN),
            },
            _ => Kernel::NearestNeighbour,
        }
    }

    pub fn family(&self) -> Family {
        let alpha = self.model.alpha.unwrap_or(f64::NAN);
        match self.family_name() {
            "nn_ising" => Family::NnIsing,
            "dyson" => Family::Dyson { alpha },
            "mattis" => Family::Mattis {
                kernel: self.kernel(),
            },
            "rfim" => Family::Rfim {
                kernel: self.kernel(),
                field: self.model.field.unwrap_or(1.0),
            },
            "ea" => Family::EdwardsAnderson {
                kernel: self.kernel(),
            },
            other => panic!("unvalidated family {other}"),
        }
    }

    pub fn spec_at(&self, beta: f64) -> ModelSpec {
        ModelSpec::new(self.family(), beta).expect("validated model")
    }

    pub fn spec(&self) -> ModelSpec {
        self.spec_at(self.beta())
    }

    pub fn sequence_kind(&self) -> Option<SequenceKind> {
        let s = self.sequence.as_ref()?;
        Some(match s.kind.as_deref()? {
            "linear" => SequenceKind::Linear {
                step: s.step.unwrap_or(100),
            },
            "geometric" => SequenceKind::Geometric {
                start: s.start.unwrap_or(1),
                ratio: s.ratio.unwrap_or(2.0),
            },
            "sparse" => SequenceKind::Sparse,
            _ => return None,
        })
    }

    pub fn weight_mode(&self) -> WeightMode {
        match self.metastate.mode.as_deref() {
            Some("exact_gibbs_fit") => WeightMode::ExactGibbsFit,
            _ => WeightMode::T0Weight,
        }
    }

    pub fn oracle(&self) -> OracleSection {
        self.oracle.clone().unwrap_or_default()
    }

    pub fn max_sites(&self) -> usize {
        self.budget.max_sites.unwrap_or(DEFAULT_MAX_SITES)
    }

    pub fn max_work(&self) -> u64 {
        self.budget.max_work.unwrap_or(DEFAULT_MAX_WORK)
    }

    /// Schema and range checks; empty when the file is runnable.
    pub fn check(&self, source: &str) -> Vec<Diagnostic> {
        let mut c = Checker {
            source,
            found: Vec::new(),
        };
        let valid = EXPERIMENTS.join(", ");
        let experiment = match self.experiment.as_deref() {
            None => {
                c.report(
                    "",
                    "experiment",
                    format!("missing; valid experiments: {valid}"),
                );
                None
            }
            Some(e) => match Experiment::parse(e) {
                Some(x) => Some(x),
                None => {
                    c.report(
                        "",
                        "experiment",
                        format!("unknown experiment {e:?}; valid experiments: {valid}"),
                    );
                    None
                }
            },
        };
        if let Some(n) = self.n_seeds {
            if n == 0 {
                c.report("", "n_seeds", "must be at least 1");
            }
        }
        if self.workers == Some(0) {
            c.report("", "workers", "must be at least 1");
        }
        if let Some(name) = &self.name {
            if name.is_empty() || name.contains(['/', '\\']) {
                c.report(
                    "",
                    "name",
                    "must be a non-empty file stem without path separators",
                );
            }
        }
        self.check_model(&mut c, experiment);
        if let Some(e) = experiment {
            self.check_experiment(&mut c, e);
        }
        c.found
    }

    fn check_model(&self, c: &mut Checker, experiment: Option<Experiment>) {
        let m = &self.model;
        let families = "nn_ising, dyson, mattis, rfim, ea";
        match m.family.as_deref() {
            None => c.report(
                "model",
                "family",
                format!("missing; valid families: {families}"),
            ),
            Some("nn_ising" | "dyson" | "mattis" | "rfim" | "ea") => {}
            Some(f) => c.report(
                "model",
                "family",
                format!("unknown family {f:?}; valid families: {families}"),
            ),
        }
        if let Some(beta) = m.beta {
            if !(beta >= 0.0) || !beta.is_finite() {
                c.report(
                    "model",
                    "beta",
                    format!("{beta} out of range; accepted range [0, inf)"),
                );
            }
        }
        let needs_alpha =
            m.family.as_deref() == Some("dyson") || m.kernel.as_deref() == Some("power_law");
        match m.alpha {
            Some(a) if !(a > 1.0 && a <= 2.0) => c.report(
                "model",
                "alpha",
                format!("{a} out of range; accepted range (1, 2]"),
            ),
            None if needs_alpha => c.report(
                "model",
                "alpha",
                "missing; required in (1, 2] for power-law couplings",
            ),
            _ => {}
        }
        match m.kernel.as_deref() {
            None | Some("nearest_neighbour" | "power_law") => {}
            Some(k) => c.report(
                "model",
                "kernel",
                format!("unknown kernel {k:?}; valid kernels: nearest_neighbour, power_law"),
            ),
        }
        if let Some(d) = m.dimension {
            if d != 1 && d != 2 {
                c.report(
                    "model",
                    "dimension",
                    format!("{d} out of range; accepted values 1 or 2"),
                );
            } else if d == 2 && (needs_alpha || m.family.as_deref() == Some("dyson")) {
                c.report(
                    "model",
                    "dimension",
                    "power-law couplings are supported in 1D only",
                );
            }
        }
        if let Some(h) = m.field {
            if !h.is_finite() {
                c.report("model", "field", "must be finite");
            }
        }
        if m.window_factor == Some(0) {
            c.report("model", "window_factor", "must be at least 1");
        }
        let family = m.family.as_deref().unwrap_or("");
        let allowed: &[&str] = match experiment {
            Some(Experiment::Scaling | Experiment::Window) => &["dyson", "nn_ising"],
            Some(Experiment::Metastate) => &["dyson", "nn_ising"],
            Some(Experiment::Csd) => &["dyson"],
            Some(Experiment::GaugeCheck) => &["mattis"],
            _ => &[],
        };
        if !allowed.is_empty() && !family.is_empty() && !allowed.contains(&family) {
            c.report(
                "model",
                "family",
                format!(
                    "{family} is not supported by this experiment; accepted: {}",
                    allowed.join(", ")
                ),
            );
        }
        let wants_2d = matches!(experiment, Some(Experiment::Scaling | Experiment::Window));
        if family == "nn_ising" && wants_2d && self.dimension() != 2 {
            c.report(
                "model",
                "dimension",
                "this experiment runs nn_ising on the 2D box; set dimension = 2",
            );
        }
        if family == "nn_ising"
            && !wants_2d
            && self.dimension() == 2
            && experiment == Some(Experiment::Metastate)
        {
            c.report(
                "model",
                "dimension",
                "metastate runs on 1D chains; accepted value 1",
            );
        }
    }

    fn check_sizes(&self, c: &mut Checker, bound: Option<usize>) {
        let sizes = self.sizes();
        if sizes.is_empty() {
            c.report(
                "sizes",
                "values",
                "missing or empty; give at least one volume size N >= 1",
            );
        }
        if sizes.contains(&0) {
            c.report("sizes", "values", "sizes must be >= 1");
        }
        if sizes.windows(2).any(|w| w[1] <= w[0]) {
            c.report("sizes", "values", "sizes must be strictly increasing");
        }
        if let Some(b) = bound {
            let sites_per = if self.dimension() == 2 { 2 } else { 1 };
            if let Some(n) = sizes.iter().find(|n| n.pow(sites_per) > b) {
                c.report(
                    "sizes",
                    "values",
                    format!(
                        "N = {n} exceeds the exact-enumeration bound; accepted range 1..={b} sites"
                    ),
                );
            }
        }
    }

    fn check_experiment(&self, c: &mut Checker, e: Experiment) {
        match e {
            Experiment::Scaling => {
                self.check_sizes(c, None);
                if let Some(d) = self.scaling.min_decades {
                    if !(d >= 0.0) {
                        c.report(
                            "scaling",
                            "min_decades",
                            format!("{d} out of range; accepted range [0, inf)"),
                        );
                    }
                }
            }
            Experiment::Window => {
                self.check_sizes(c, None);
                if self.n_seeds() < 1000 {
                    c.report(
                        "",
                        "n_seeds",
                        format!(
                            "{} out of range; window probabilities need >= 1000",
                            self.n_seeds()
                        ),
                    );
                }
                match &self.window {
                    Some(w) if !w.deltas.is_empty() => {
                        if let Some(d) = w.deltas.iter().find(|d| !(**d >= 0.0) || !d.is_finite()) {
                            c.report(
                                "window",
                                "deltas",
                                format!("{d} out of range; accepted range [0, 1/2)"),
                            );
                        }
                    }
                    _ => c.report(
                        "window",
                        "deltas",
                        "missing; give at least one exponent in [0, 1/2)",
                    ),
                }
            }
            Experiment::Metastate => {
                let exact = self.metastate.mode.as_deref() == Some("exact_gibbs_fit");
                self.check_sizes(c, exact.then_some(ENUMERATION_BOUND));
                match self.metastate.mode.as_deref() {
                    None | Some("t0_weight" | "exact_gibbs_fit") => {}
                    Some(m) => c.report(
                        "metastate",
                        "mode",
                        format!("unknown mode {m:?}; valid modes: t0_weight, exact_gibbs_fit"),
                    ),
                }
                if let Some(b) = self.metastate.bins {
                    if b < 2 {
                        c.report(
                            "metastate",
                            "bins",
                            format!("{b} out of range; accepted range [2, inf)"),
                        );
                    }
                }
            }
            Experiment::Csd => {
                match &self.sequence {
                    None => c.report(
                        "sequence",
                        "kind",
                        "missing [sequence] section; kinds: linear, geometric, sparse",
                    ),
                    Some(s) => {
                        match s.kind.as_deref() {
                            Some("linear" | "geometric" | "sparse") => {}
                            Some(k) => c.report(
                                "sequence",
                                "kind",
                                format!(
                                    "unknown kind {k:?}; valid kinds: linear, geometric, sparse"
                                ),
                            ),
                            None => c.report(
                                "sequence",
                                "kind",
                                "missing; valid kinds: linear, geometric, sparse",
                            ),
                        }
                        if s.budget.is_none() {
                            c.report("sequence", "budget", "missing; largest admissible N");
                        }
                        if let Some(r) = s.ratio {
                            if !(r > 1.0) {
                                c.report(
                                    "sequence",
                                    "ratio",
                                    format!("{r} out of range; accepted range (1, inf)"),
                                );
                            }
                        }
                        if s.step == Some(0) || s.start == Some(0) {
                            c.report("sequence", "step", "step and start must be >= 1");
                        }
                        if let Some(t) = s.terms {
                            if t < 4 {
                                c.report(
                                    "sequence",
                                    "terms",
                                    format!("{t} out of range; accepted range [4, inf)"),
                                );
                            }
                        }
                    }
                }
                if let Some(v) = self.csd.null_recurrence_c {
                    if !(v > 0.0) {
                        c.report(
                            "csd",
                            "null_recurrence_c",
                            format!("{v} out of range; accepted range (0, inf)"),
                        );
                    }
                }
            }
            Experiment::GaugeCheck => self.check_sizes(c, Some(ENUMERATION_BOUND)),
            Experiment::OracleVsMc => {
                self.check_sizes(c, Some(ENUMERATION_BOUND));
                let o = self.oracle();
                if o.betas.is_empty() {
                    c.report(
                        "oracle",
                        "betas",
                        "missing; give at least one inverse temperature >= 0",
                    );
                }
                if let Some(b) = o.betas.iter().find(|b| !(**b >= 0.0) || !b.is_finite()) {
                    c.report(
                        "oracle",
                        "betas",
                        format!("{b} out of range; accepted range [0, inf)"),
                    );
                }
                let sweeps = o.sweeps.unwrap_or(DEFAULT_SWEEPS);
                let burn = o.burn_in.unwrap_or(sweeps / 10);
                if burn >= sweeps {
                    c.report(
                        "oracle",
                        "burn_in",
                        format!("{burn} out of range; accepted range [0, sweeps = {sweeps})"),
                    );
                }
                if o.thin == Some(0) {
                    c.report("oracle", "thin", "must be at least 1");
                }
                if (sweeps - burn.min(sweeps)).div_ceil(o.thin.unwrap_or(1).max(1)) < 100 {
                    c.report(
                        "oracle",
                        "sweeps",
                        "fewer than 100 recorded samples; batch means need at least 100",
                    );
                }
                if let Some(z) = o.z {
                    if !(z > 0.0) {
                        c.report(
                            "oracle",
                            "z",
                            format!("{z} out of range; accepted range (0, inf)"),
                        );
                    }
                }
            }
        }
    }
}

pub const DEFAULT_SWEEPS: usize = 100_000;
