//! Experiment configuration: a TOML file checked against a strict schema.
//! Unknown keys are errors so typos cannot silently change an experiment.

use crate::CliError;
use lavarnet::models::ModelKind;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub data: DataConfig,
    #[serde(default)]
    pub preprocess: PreprocessConfig,
    pub window: WindowConfig,
    #[serde(default)]
    pub split: SplitConfig,
    pub train: TrainSection,
    #[serde(default)]
    pub interpret: InterpretConfig,
    #[serde(default)]
    pub bench: BenchConfig,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct DataConfig {
    /// "henon", "var" or "csv".
    pub source: String,
    /// Variable count for generators.
    #[serde(default)]
    pub k: Option<usize>,
    /// Series length for generators.
    #[serde(default)]
    pub length: Option<usize>,
    /// Chain coupling strength (henon).
    #[serde(default = "default_coupling")]
    pub coupling: f64,
    /// Model order (var).
    #[serde(default)]
    pub p: Option<usize>,
    /// Network density (var).
    #[serde(default = "default_density")]
    pub density: f64,
    #[serde(default = "default_burn_in")]
    pub burn_in: usize,
    /// Input file for the csv source.
    #[serde(default)]
    pub path: Option<String>,
    /// Monte-Carlo repetitions.
    #[serde(default = "default_reps")]
    pub reps: usize,
}

fn default_coupling() -> f64 {
    0.3
}
fn default_density() -> f64 {
    0.4
}
fn default_burn_in() -> usize {
    1000
}
fn default_reps() -> usize {
    1
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Default)]
#[serde(deny_unknown_fields)]
pub struct PreprocessConfig {
    /// Fill missing cells by linear interpolation.
    #[serde(default)]
    pub interpolate: bool,
    /// Drop input columns with more zeros than this, and constant columns.
    #[serde(default)]
    pub drop_sparse_or_constant: Option<usize>,
    /// Causal moving-average order; absent = off.
    #[serde(default)]
    pub moving_average: Option<usize>,
    /// Z-score with training-split statistics.
    #[serde(default)]
    pub zscore: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct WindowConfig {
    pub t_steps: usize,
    /// "all" or a list of column names.
    #[serde(default)]
    pub targets: Targets,
}

/// Either every column or an explicit list of column names.
#[derive(Debug, Clone, PartialEq, Default)]
pub enum Targets {
    #[default]
    All,
    Names(Vec<String>),
}

impl Targets {
    pub fn is_all(&self) -> bool {
        matches!(self, Targets::All)
    }
}

impl Serialize for Targets {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Targets::All => s.serialize_str("all"),
            Targets::Names(names) => names.serialize(s),
        }
    }
}

impl<'de> serde::de::Deserialize<'de> for Targets {
    fn deserialize<D: serde::de::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl<'de> serde::de::Visitor<'de> for V {
            type Value = Targets;
            fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
                f.write_str("\"all\" or a list of column names")
            }
            fn visit_str<E: serde::de::Error>(self, s: &str) -> Result<Self::Value, E> {
                if s == "all" {
                    Ok(Targets::All)
                } else {
                    Err(E::custom(format!("unknown targets value '{s}'")))
                }
            }
            fn visit_seq<A: serde::de::SeqAccess<'de>>(self, mut seq: A) -> Result<Self::Value, A::Error> {
                let mut names = Vec::new();
                while let Some(n) = seq.next_element::<String>()? {
                    names.push(n);
                }
                Ok(Targets::Names(names))
            }
        }
        d.deserialize_any(V)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SplitConfig {
    /// Train/validation/test fractions; ignored when counts are given.
    #[serde(default = "default_fractions")]
    pub fractions: [f64; 3],
    /// Explicit row counts.
    #[serde(default)]
    pub counts: Option<[usize; 3]>,
}

fn default_fractions() -> [f64; 3] {
    [0.6, 0.2, 0.2]
}

impl Default for SplitConfig {
    fn default() -> Self {
        SplitConfig {
            fractions: default_fractions(),
            counts: None,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct TrainSection {
    /// Model kinds to run: lavarnet, rlavarnet, frlavarnet, rnn, lstm, knn.
    pub models: Vec<String>,
    #[serde(default = "default_epochs")]
    pub epochs: usize,
    #[serde(default = "default_batch")]
    pub batch_size: usize,
    #[serde(default = "default_eta_max")]
    pub eta_max: f64,
    #[serde(default = "default_eta_min")]
    pub eta_min: f64,
    /// Neuron-count grid-search candidates.
    #[serde(default = "default_grid")]
    pub grid: Vec<usize>,
    #[serde(default = "default_neighbors")]
    pub knn_neighbors: usize,
}

fn default_epochs() -> usize {
    70
}
fn default_batch() -> usize {
    64
}
fn default_eta_max() -> f64 {
    0.01
}
fn default_eta_min() -> f64 {
    0.0001
}
fn default_grid() -> Vec<usize> {
    vec![20]
}
fn default_neighbors() -> usize {
    5
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Default)]
#[serde(deny_unknown_fields)]
pub struct InterpretConfig {
    /// Also dump each scored lag-weight matrix as CSV heatmap data.
    #[serde(default)]
    pub dump_weights: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct BenchConfig {
    #[serde(default = "default_realizations")]
    pub realizations: usize,
}

fn default_realizations() -> usize {
    10
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            realizations: default_realizations(),
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        let cfg: ExperimentConfig =
            toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &std::path::Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |msg: String| Err(CliError::Config(msg));
        match self.data.source.as_str() {
            "henon" | "var" => {
                if self.data.k.is_none() || self.data.length.is_none() {
                    return bad(format!(
                        "source '{}' needs data.k and data.length",
                        self.data.source
                    ));
                }
                if self.data.source == "var" && self.data.p.is_none() {
                    return bad("source 'var' needs data.p".into());
                }
            }
            "csv" => {
                if self.data.path.is_none() {
                    return bad("source 'csv' needs data.path".into());
                }
            }
            other => return bad(format!("unknown data.source '{other}'")),
        }
        if self.data.reps == 0 {
            return bad("data.reps must be >= 1".into());
        }
        if self.window.t_steps == 0 {
            return bad("window.t_steps must be >= 1".into());
        }
        if self.train.models.is_empty() {
            return bad("train.models must not be empty".into());
        }
        for m in &self.train.models {
            ModelKind::parse(m).map_err(|_| CliError::Config(format!("unknown model '{m}'")))?;
        }
        if self.train.grid.is_empty() {
            return bad("train.grid must not be empty".into());
        }
        if self.train.epochs == 0 || self.train.batch_size == 0 {
            return bad("train.epochs and train.batch_size must be >= 1".into());
        }
        if !(0.0 < self.train.eta_min && self.train.eta_min <= self.train.eta_max) {
            return bad("need 0 < eta_min <= eta_max".into());
        }
        if self.preprocess.drop_sparse_or_constant.is_some() && self.window.targets.is_all() {
            return bad("column dropping requires an explicit target list".into());
        }
        if self.bench.realizations == 0 {
            return bad("bench.realizations must be >= 1".into());
        }
        Ok(())
    }

    pub fn model_kinds(&self) -> Vec<ModelKind> {
        self.train
            .models
            .iter()
            .map(|m| ModelKind::parse(m).expect("validated"))
            .collect()
    }
}

/// Built-in configurations.
///
/// "desk" is a single fast scenario for acceptance-scale runs; "full" is the
/// long-running simulation grid over variable counts, window lengths and
/// series lengths.
pub fn preset(name: &str) -> Result<Vec<(String, ExperimentConfig)>, CliError> {
    match name {
        "desk" => {
            let cfg = ExperimentConfig::from_toml(DESK_TOML)?;
            Ok(vec![(String::new(), cfg)])
        }
        "full" => {
            let mut scenarios = Vec::new();
            for &k in &[5usize, 10, 15] {
                for &t in &[3usize, 5, 10, 15] {
                    for &len in &[
                        200usize, 500, 1000, 2000, 3000, 4000, 5000, 6000, 7000, 8000, 9000, 10000,
                    ] {
                        let mut cfg = ExperimentConfig::from_toml(DESK_TOML)?;
                        cfg.data.k = Some(k);
                        cfg.data.length = Some(len);
                        cfg.window.t_steps = t;
                        cfg.train.models = vec![
                            "lavarnet".into(),
                            "rlavarnet".into(),
                            "frlavarnet".into(),
                            "rnn".into(),
                            "lstm".into(),
                            "knn".into(),
                        ];
                        cfg.validate()?;
                        scenarios.push((format!("k{k}-t{t}-l{len}"), cfg));
                    }
                }
            }
            Ok(scenarios)
        }
        other => Err(CliError::Config(format!("unknown preset '{other}'"))),
    }
}

pub const DESK_TOML: &str = r#"
[data]
source = "henon"
k = 5
length = 2000
coupling = 0.3
reps = 5

[preprocess]
zscore = true

[window]
t_steps = 5
targets = "all"

[train]
models = ["lavarnet", "rnn", "knn"]
epochs = 70
batch_size = 64
grid = [20]
"#;
