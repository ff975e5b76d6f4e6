//! Key-value experiment configuration. Every key can come from a TOML file and be overridden by
//! a same-named `--key value` flag.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use toml::{Table, Value};

use crate::dataset::{SynthConfig, DEFAULT_NOISE_SIGMA};
use crate::error::{Error, Result};
use crate::models::arch::{INIT_STD, NUM_CLASSES};
use crate::tensor::{AdamConfig, LEAKY_SLOPE};
use crate::trainer::{ModelKind, TrainConfig};

pub const DEFAULT_BUDGETS: [usize; 7] = [16, 32, 64, 128, 1600, 3200, 6400];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields, default)]
pub struct ExperimentConfig {
    pub out_dir: PathBuf,

    /// Load samples from this CSV instead of synthesizing them.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub data_path: Option<PathBuf>,
    pub classes: usize,
    pub train_per_class: usize,
    pub test_per_class: usize,
    pub data_seed: u64,
    pub noise_sigma: f64,

    pub model: ModelKind,
    pub epochs: usize,
    pub batch_size: usize,
    pub labeled_per_class: usize,
    pub seed: u64,
    pub steps_per_epoch: usize,
    pub phase_wise: bool,
    pub eval_every: usize,
    pub lr_g: f64,
    pub beta1_g: f64,
    pub lr_d: f64,
    pub beta1_d: f64,
    pub lr_c: f64,
    pub beta1_c: f64,
    pub beta2: f64,
    pub epsilon: f64,
    pub leaky_slope: f64,
    pub init_std: f64,

    /// Classifier checkpoint read by `evaluate`; defaults to `<out-dir>/disc.ckpt`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub checkpoint: Option<PathBuf>,

    /// Total labeled samples per sweep cell.
    pub budgets: Vec<usize>,
    pub seeds: Vec<u64>,
    pub models: Vec<ModelKind>,

    pub dump_epochs: Vec<usize>,
    pub dump_samples: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        let synth = SynthConfig::default();
        let train = TrainConfig::default();
        ExperimentConfig {
            out_dir: PathBuf::from("out"),
            data_path: None,
            classes: NUM_CLASSES,
            train_per_class: synth.train_per_class,
            test_per_class: synth.test_per_class,
            data_seed: 1,
            noise_sigma: DEFAULT_NOISE_SIGMA,
            model: ModelKind::Dcgan,
            epochs: train.epochs,
            batch_size: train.batch_size,
            labeled_per_class: train.labeled_per_class,
            seed: train.seed,
            steps_per_epoch: train.steps_per_epoch,
            phase_wise: false,
            eval_every: train.eval_every,
            lr_g: AdamConfig::ADVERSARIAL.lr,
            beta1_g: AdamConfig::ADVERSARIAL.beta1,
            lr_d: AdamConfig::ADVERSARIAL.lr,
            beta1_d: AdamConfig::ADVERSARIAL.beta1,
            lr_c: AdamConfig::CLASSIFIER.lr,
            beta1_c: AdamConfig::CLASSIFIER.beta1,
            beta2: AdamConfig::ADVERSARIAL.beta2,
            epsilon: AdamConfig::ADVERSARIAL.epsilon,
            leaky_slope: LEAKY_SLOPE,
            init_std: INIT_STD,
            checkpoint: None,
            budgets: DEFAULT_BUDGETS.to_vec(),
            seeds: vec![1, 2, 3, 4, 5],
            models: vec![ModelKind::Dcgan, ModelKind::Cnn],
            dump_epochs: vec![0, 1, 10, 100],
            dump_samples: 64,
        }
    }
}

impl ExperimentConfig {
    /// Read `path` (if any), apply `--key value` overrides and validate.
    pub fn resolve(path: Option<&Path>, overrides: &[String]) -> Result<Self> {
        let mut table = match path {
            Some(p) => {
                let text = fs::read_to_string(p)
                    .map_err(|e| Error::Config(format!("cannot read config file {}: {e}", p.display())))?;
                text.parse::<Table>()
                    .map_err(|e| Error::Config(format!("{}: {e}", p.display())))?
            }
            None => Table::new(),
        };
        for (key, value) in parse_overrides(overrides)? {
            table.insert(key, value);
        }
        let config: ExperimentConfig = Value::Table(table)
            .try_into()
            .map_err(|e: toml::de::Error| Error::Config(e.message().to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |m: String| Err(Error::Config(m));
        if self.classes < 2 {
            return fail(format!("classes must be >= 2 (got {})", self.classes));
        }
        if self.data_path.is_none() && self.classes != NUM_CLASSES {
            return fail(format!("classes must be {NUM_CLASSES} to match the classifier output"));
        }
        if self.train_per_class == 0 || self.test_per_class == 0 {
            return fail("train-per-class and test-per-class must be >= 1".into());
        }
        if !(self.noise_sigma.is_finite() && self.noise_sigma >= 0.0) {
            return fail(format!("noise-sigma must be finite and >= 0 (got {})", self.noise_sigma));
        }
        if self.seeds.is_empty() {
            return fail("seeds must list at least one seed".into());
        }
        if self.models.is_empty() {
            return fail("models must list at least one model".into());
        }
        if self.data_path.is_none() && self.labeled_per_class > self.train_per_class {
            return fail(format!(
                "labeled-per-class {} exceeds train-per-class {}",
                self.labeled_per_class, self.train_per_class
            ));
        }
        self.train_config().validate()
    }

    /// Checks that only matter to the label-budget sweep.
    pub fn validate_sweep(&self) -> Result<()> {
        let fail = |m: String| Err(Error::Config(m));
        if self.budgets.is_empty() {
            return fail("budgets must list at least one budget".into());
        }
        for &b in &self.budgets {
            if b == 0 || b % self.classes != 0 {
                return fail(format!("budget {b} is not a positive multiple of the {} classes", self.classes));
            }
            if self.data_path.is_none() && b / self.classes > self.train_per_class {
                return fail(format!(
                    "budget {b} needs {} labeled samples per class but only {} exist",
                    b / self.classes,
                    self.train_per_class
                ));
            }
        }
        Ok(())
    }

    pub fn synth_config(&self) -> SynthConfig {
        SynthConfig {
            classes: self.classes,
            train_per_class: self.train_per_class,
            test_per_class: self.test_per_class,
            seed: self.data_seed,
            noise_sigma: self.noise_sigma,
        }
    }

    pub fn train_config(&self) -> TrainConfig {
        let adam = |lr, beta1| AdamConfig {
            lr,
            beta1,
            beta2: self.beta2,
            epsilon: self.epsilon,
        };
        TrainConfig {
            epochs: self.epochs,
            batch_size: self.batch_size,
            labeled_per_class: self.labeled_per_class,
            seed: self.seed,
            steps_per_epoch: self.steps_per_epoch,
            simplified_g: false,
            cnn_only: false,
            phase_wise: self.phase_wise,
            adam_g: adam(self.lr_g, self.beta1_g),
            adam_d: adam(self.lr_d, self.beta1_d),
            adam_c: adam(self.lr_c, self.beta1_c),
            leaky_slope: self.leaky_slope,
            init_std: self.init_std,
            eval_every: self.eval_every,
            snapshot_epochs: Vec::new(),
            snapshot_samples: 0,
        }
        .with_model(self.model)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn checkpoint_path(&self) -> PathBuf {
        self.checkpoint.clone().unwrap_or_else(|| self.out_dir.join("disc.ckpt"))
    }
}

fn parse_value(raw: &str) -> Value {
    let parse = |s: &str| s.parse::<Table>().ok().and_then(|mut t| t.remove("v"));
    if let Some(v) = parse(&format!("v = {raw}")) {
        return v;
    }
    if raw.contains(',') {
        let items: Vec<Value> = raw.split(',').map(|s| parse_value(s.trim())).collect();
        return Value::Array(items);
    }
    Value::String(raw.to_string())
}

/// Turn `--key value` pairs into TOML values. A flag followed by another flag (or nothing) is
/// read as `true`. Comma-separated values become arrays.
pub fn parse_overrides(args: &[String]) -> Result<Vec<(String, Value)>> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < args.len() {
        let key = args[i]
            .strip_prefix("--")
            .filter(|k| !k.is_empty())
            .ok_or_else(|| Error::Config(format!("expected a --key flag, found {:?}", args[i])))?;
        let (key, value) = match key.split_once('=') {
            Some((k, v)) => (k, parse_value(v)),
            None => match args.get(i + 1).filter(|v| !v.starts_with("--")) {
                Some(v) => {
                    i += 1;
                    (key, parse_value(v))
                }
                None => (key, Value::Boolean(true)),
            },
        };
        // Single-value list flags such as `--budgets 16`.
        let value = match (key, value) {
            ("budgets" | "seeds" | "models" | "dump-epochs", v @ (Value::Integer(_) | Value::String(_))) => {
                Value::Array(vec![v])
            }
            (_, v) => v,
        };
        out.push((key.to_string(), value));
        i += 1;
    }
    Ok(out)
}
