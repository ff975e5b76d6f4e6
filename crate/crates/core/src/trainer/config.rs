use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::arch::INIT_STD;
use crate::tensor::{AdamConfig, LEAKY_SLOPE};

/// Which of the three compared systems to train.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelKind {
    /// Semi-supervised DCGAN with the full deconvolutional generator.
    Dcgan,
    /// Supervised CNN: the classifier alone, labeled data only.
    Cnn,
    /// Semi-supervised DCGAN with the single-layer generator.
    DcganSimplifiedG,
}

impl ModelKind {
    pub const ALL: [ModelKind; 3] = [ModelKind::Dcgan, ModelKind::Cnn, ModelKind::DcganSimplifiedG];

    pub fn tag(self) -> &'static str {
        match self {
            ModelKind::Dcgan => "dcgan",
            ModelKind::Cnn => "cnn",
            ModelKind::DcganSimplifiedG => "dcgan-simplified-g",
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ModelKind::ALL
            .into_iter()
            .find(|m| m.tag() == s)
            .ok_or_else(|| Error::Config(format!("unknown model {s:?} (expected dcgan, cnn or dcgan-simplified-g)")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub epochs: usize,
    pub batch_size: usize,
    pub labeled_per_class: usize,
    pub seed: u64,
    /// Iterations per epoch; 0 means one pass over the train set (`ceil(N / batch_size)`).
    pub steps_per_epoch: usize,
    pub simplified_g: bool,
    pub cnn_only: bool,
    /// Run all classifier steps of an epoch, then all discriminator steps, then all generator
    /// steps, instead of interleaving per minibatch.
    pub phase_wise: bool,
    pub adam_g: AdamConfig,
    pub adam_d: AdamConfig,
    pub adam_c: AdamConfig,
    pub leaky_slope: f64,
    pub init_std: f64,
    /// Evaluate test accuracy every this many epochs (the last epoch is always evaluated).
    pub eval_every: usize,
    /// Epoch boundaries (0 = before training) at which generated samples are recorded.
    pub snapshot_epochs: Vec<usize>,
    pub snapshot_samples: usize,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            epochs: 100,
            batch_size: 32,
            labeled_per_class: 1,
            seed: 1,
            steps_per_epoch: 0,
            simplified_g: false,
            cnn_only: false,
            phase_wise: false,
            adam_g: AdamConfig::ADVERSARIAL,
            adam_d: AdamConfig::ADVERSARIAL,
            adam_c: AdamConfig::CLASSIFIER,
            leaky_slope: LEAKY_SLOPE,
            init_std: INIT_STD,
            eval_every: 1,
            snapshot_epochs: Vec::new(),
            snapshot_samples: 0,
        }
    }
}

impl TrainConfig {
    pub fn model(&self) -> ModelKind {
        match (self.cnn_only, self.simplified_g) {
            (true, _) => ModelKind::Cnn,
            (false, true) => ModelKind::DcganSimplifiedG,
            (false, false) => ModelKind::Dcgan,
        }
    }

    pub fn set_model(&mut self, model: ModelKind) {
        self.cnn_only = model == ModelKind::Cnn;
        self.simplified_g = model == ModelKind::DcganSimplifiedG;
    }

    pub fn with_model(mut self, model: ModelKind) -> Self {
        self.set_model(model);
        self
    }

    /// Checks that do not depend on the dataset.
    pub fn validate(&self) -> Result<()> {
        let fail = |m: String| Err(Error::Config(m));
        if self.epochs == 0 {
            return fail("epochs must be >= 1".into());
        }
        if self.batch_size == 0 {
            return fail("batch-size must be >= 1".into());
        }
        if self.labeled_per_class == 0 {
            return fail("labeled-per-class must be >= 1".into());
        }
        if self.eval_every == 0 {
            return fail("eval-every must be >= 1".into());
        }
        if self.cnn_only && self.simplified_g {
            return fail("cnn-only and simplified-g are mutually exclusive".into());
        }
        if !(self.leaky_slope.is_finite() && self.leaky_slope >= 0.0) {
            return fail(format!("leaky-slope must be finite and >= 0 (got {})", self.leaky_slope));
        }
        if !(self.init_std.is_finite() && self.init_std >= 0.0) {
            return fail(format!("init-std must be finite and >= 0 (got {})", self.init_std));
        }
        if let Some(e) = self.snapshot_epochs.iter().find(|e| **e > self.epochs) {
            return fail(format!("snapshot epoch {e} is beyond the {} training epochs", self.epochs));
        }
        self.adam_g.validate()?;
        self.adam_d.validate()?;
        self.adam_c.validate()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn model_round_trip() {
        for m in ModelKind::ALL {
            assert_eq!(m.tag().parse::<ModelKind>().unwrap(), m);
            assert_eq!(TrainConfig::default().with_model(m).model(), m);
        }
        assert!("gan".parse::<ModelKind>().is_err());
    }

    #[test]
    fn zero_epochs_rejected() {
        let c = TrainConfig {
            epochs: 0,
            ..Default::default()
        };
        assert!(c.validate().is_err());
    }

    #[test]
    fn snapshot_beyond_training_rejected() {
        let c = TrainConfig {
            epochs: 10,
            snapshot_epochs: vec![0, 11],
            ..Default::default()
        };
        assert!(c.validate().is_err());
    }
}
