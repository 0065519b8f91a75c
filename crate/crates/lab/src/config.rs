//! Experiment configuration (YAML) and its command-line overrides.

use std::path::{Path, PathBuf};

use clap::Args;
use llp_core::oracle::TrainConfig;
use llp_core::synth::BagKind;
use llp_core::union::DEFAULT_C0;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::tabular::DatasetSchema;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Synthetic,
    Tabular,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum BagsArg {
    Random,
    Hard,
}

impl From<BagsArg> for BagKind {
    fn from(b: BagsArg) -> Self {
        match b {
            BagsArg::Random => BagKind::Random,
            BagsArg::Hard => BagKind::Hard,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DataSection {
    pub source: Source,
    #[serde(default)]
    pub bags: Option<BagsArg>,
    #[serde(default)]
    pub n_bags: Option<usize>,
    #[serde(default)]
    pub d: Option<usize>,
    #[serde(default)]
    pub eta: Option<f64>,
    #[serde(default)]
    pub n_test: Option<usize>,
    #[serde(default)]
    pub path: Option<PathBuf>,
    #[serde(default)]
    pub schema: Option<DatasetSchema>,
    #[serde(default)]
    pub test_fraction: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UnionSection {
    #[serde(default)]
    pub t: Option<usize>,
    #[serde(default)]
    pub epsilon: Option<f64>,
    /// Oracle accuracy target; used to derive `t` and `s` and to report
    /// whether the oracle met it.
    #[serde(default)]
    pub alpha: Option<f64>,
    #[serde(default)]
    pub c0: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampleSection {
    #[serde(default)]
    pub s: Option<usize>,
    #[serde(default)]
    pub delta: Option<f64>,
    #[serde(default)]
    pub vc: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrainSection {
    #[serde(default)]
    pub learning_rate: Option<f64>,
    #[serde(default)]
    pub batch_size: Option<usize>,
    #[serde(default)]
    pub epochs: Option<usize>,
    #[serde(default)]
    pub threshold: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub data: DataSection,
    pub q: Option<usize>,
    #[serde(default)]
    pub union: UnionSection,
    #[serde(default)]
    pub sample: SampleSection,
    #[serde(default)]
    pub train: TrainSection,
    #[serde(default)]
    pub runs: Option<usize>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub parallel: Option<bool>,
}

impl ExperimentConfig {
    pub fn from_yaml(text: &str) -> Result<Self> {
        serde_yaml::from_str(text).map_err(|e| LabError::Config(e.to_string()))
    }

    /// Reads a config file. A relative `data.path` is resolved against the
    /// directory of the config file.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| LabError::io(path, e))?;
        let mut cfg = Self::from_yaml(&text)?;
        if let (Some(p), Some(dir)) = (&cfg.data.path, path.parent()) {
            if p.is_relative() {
                cfg.data.path = Some(dir.join(p));
            }
        }
        Ok(cfg)
    }

    /// A bare synthetic config, everything else at defaults.
    pub fn synthetic(bags: BagsArg) -> Self {
        Self {
            data: DataSection {
                source: Source::Synthetic,
                bags: Some(bags),
                n_bags: None,
                d: None,
                eta: None,
                n_test: None,
                path: None,
                schema: None,
                test_fraction: None,
            },
            q: None,
            union: UnionSection::default(),
            sample: SampleSection::default(),
            train: TrainSection::default(),
            runs: None,
            seed: None,
            output: None,
            parallel: None,
        }
    }
}

/// Same-named flags for every scalar config key.
#[derive(Debug, Clone, Default, Args)]
pub struct Overrides {
    #[arg(long, value_enum)]
    pub source: Option<Source>,
    #[arg(long, value_enum)]
    pub bags: Option<BagsArg>,
    #[arg(long)]
    pub n_bags: Option<usize>,
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long)]
    pub eta: Option<f64>,
    #[arg(long)]
    pub n_test: Option<usize>,
    #[arg(long)]
    pub path: Option<PathBuf>,
    #[arg(long)]
    pub test_fraction: Option<f64>,
    #[arg(long)]
    pub q: Option<usize>,
    /// Clears `epsilon` from the config.
    #[arg(long)]
    pub t: Option<usize>,
    /// Clears `t` from the config.
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub c0: Option<f64>,
    /// Clears `delta` and `vc` from the config.
    #[arg(long)]
    pub s: Option<usize>,
    /// Clears `s` from the config.
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long)]
    pub vc: Option<usize>,
    #[arg(long)]
    pub learning_rate: Option<f64>,
    #[arg(long)]
    pub batch_size: Option<usize>,
    #[arg(long)]
    pub epochs: Option<usize>,
    #[arg(long)]
    pub threshold: Option<f64>,
    #[arg(long)]
    pub runs: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long)]
    pub parallel: bool,
}

macro_rules! set {
    ($($target:expr => $value:expr),* $(,)?) => {
        $(if let Some(v) = $value.clone() { $target = Some(v); })*
    };
}

impl Overrides {
    pub fn apply(&self, cfg: &mut ExperimentConfig) {
        if let Some(s) = self.source {
            cfg.data.source = s;
        }
        if self.t.is_some() {
            cfg.union.epsilon = None;
        }
        if self.epsilon.is_some() {
            cfg.union.t = None;
        }
        if self.s.is_some() {
            cfg.sample.delta = None;
            cfg.sample.vc = None;
        }
        if self.delta.is_some() {
            cfg.sample.s = None;
        }
        set! {
            cfg.data.bags => self.bags,
            cfg.data.n_bags => self.n_bags,
            cfg.data.d => self.d,
            cfg.data.eta => self.eta,
            cfg.data.n_test => self.n_test,
            cfg.data.path => self.path,
            cfg.data.test_fraction => self.test_fraction,
            cfg.q => self.q,
            cfg.union.t => self.t,
            cfg.union.epsilon => self.epsilon,
            cfg.union.alpha => self.alpha,
            cfg.union.c0 => self.c0,
            cfg.sample.s => self.s,
            cfg.sample.delta => self.delta,
            cfg.sample.vc => self.vc,
            cfg.train.learning_rate => self.learning_rate,
            cfg.train.batch_size => self.batch_size,
            cfg.train.epochs => self.epochs,
            cfg.train.threshold => self.threshold,
            cfg.runs => self.runs,
            cfg.seed => self.seed,
            cfg.output => self.output,
        }
        if self.parallel {
            cfg.parallel = Some(true);
        }
    }
}

/// Where the small bags come from.
#[derive(Debug, Clone, PartialEq)]
pub enum DataSpec {
    Synthetic {
        kind: BagKind,
        n_bags: usize,
        d: usize,
        eta: f64,
        n_test: usize,
    },
    Tabular {
        path: PathBuf,
        schema: DatasetSchema,
        test_fraction: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SampleSpec {
    Fixed(usize),
    Derived { delta: f64, vc: Option<usize> },
}

/// A validated config with defaults filled in.
#[derive(Debug, Clone, PartialEq)]
pub struct Experiment {
    pub data: DataSpec,
    pub q: usize,
    pub t: usize,
    pub epsilon: Option<f64>,
    pub alpha: Option<f64>,
    pub c0: f64,
    pub sample: SampleSpec,
    pub train: TrainConfig,
    pub runs: usize,
    pub seed: u64,
    pub output: Option<PathBuf>,
    pub parallel: bool,
}

fn cfg_err(msg: impl Into<String>) -> LabError {
    LabError::Config(msg.into())
}

impl ExperimentConfig {
    /// The data section alone, defaults filled in.
    pub fn resolve_data(&self) -> Result<DataSpec> {
        let d = &self.data;
        Ok(match d.source {
            Source::Synthetic => {
                if d.path.is_some() || d.schema.is_some() {
                    return Err(cfg_err("synthetic data takes no path or schema"));
                }
                DataSpec::Synthetic {
                    kind: d.bags.unwrap_or(BagsArg::Random).into(),
                    n_bags: d.n_bags.unwrap_or(1000),
                    d: d.d.unwrap_or(10),
                    eta: d.eta.unwrap_or(0.1),
                    n_test: d.n_test.unwrap_or(1500),
                }
            }
            Source::Tabular => DataSpec::Tabular {
                path: d.path.clone().ok_or_else(|| cfg_err("tabular data needs `path`"))?,
                schema: d.schema.clone().ok_or_else(|| cfg_err("tabular data needs `schema`"))?,
                test_fraction: d.test_fraction.unwrap_or(0.15),
            },
        })
    }

    pub fn resolve(&self) -> Result<Experiment> {
        let data = self.resolve_data()?;
        let u = &self.union;
        let c0 = u.c0.unwrap_or(DEFAULT_C0);
        let t = match (u.t, u.epsilon) {
            (Some(_), Some(_)) => return Err(cfg_err("give either `t` or `epsilon` (with `alpha`), not both")),
            (None, None) => return Err(cfg_err("one of `t` or `epsilon` (with `alpha`) is required")),
            (Some(t), None) => {
                if t == 0 {
                    return Err(cfg_err("t must be at least 1"));
                }
                t
            }
            (None, Some(eps)) => {
                let alpha = u.alpha.ok_or_else(|| cfg_err("deriving t needs `alpha`"))?;
                llp_core::union::compute_t(eps, alpha, c0)?
            }
        };
        if let Some(a) = u.alpha {
            if !(a > 0.0 && a <= 1.0) {
                return Err(cfg_err(format!("alpha must be in (0,1], got {a}")));
            }
        }
        let sp = &self.sample;
        let sample = match (sp.s, sp.delta) {
            (Some(_), Some(_)) => return Err(cfg_err("give either `s` or `delta`, not both")),
            (None, None) => return Err(cfg_err("one of `s` or `delta` is required")),
            (Some(0), None) => return Err(cfg_err("s must be at least 1")),
            (Some(s), None) => {
                if sp.vc.is_some() {
                    return Err(cfg_err("`vc` only applies when s is derived from `delta`"));
                }
                SampleSpec::Fixed(s)
            }
            (None, Some(delta)) => {
                if u.alpha.is_none() {
                    return Err(cfg_err("deriving s needs `alpha`"));
                }
                SampleSpec::Derived { delta, vc: sp.vc }
            }
        };
        let defaults = TrainConfig::default();
        let train = TrainConfig {
            learning_rate: self.train.learning_rate.unwrap_or(defaults.learning_rate),
            batch_size: self.train.batch_size.unwrap_or(defaults.batch_size),
            epochs: self.train.epochs.unwrap_or(defaults.epochs),
            threshold: self.train.threshold.unwrap_or(defaults.threshold),
            ..defaults
        };
        let runs = self.runs.unwrap_or(1);
        if runs == 0 {
            return Err(cfg_err("runs must be at least 1"));
        }
        Ok(Experiment {
            data,
            q: self.q.ok_or_else(|| cfg_err("`q` is required"))?,
            t,
            epsilon: u.epsilon,
            alpha: u.alpha,
            c0,
            sample,
            train,
            runs,
            seed: self.seed.unwrap_or(0),
            output: self.output.clone(),
            parallel: self.parallel.unwrap_or(false),
        })
    }
}
