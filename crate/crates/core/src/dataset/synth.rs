use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use super::split::{CsiSample, DatasetSplit};
use crate::error::{Error, Result};
use crate::label::ClassLabel;
use crate::models::CSI_WIDTH;
use crate::rng::{stream, tag};

/// Default per-channel noise std, in raw (pre-normalization) units.
pub const DEFAULT_NOISE_SIGMA: f64 = 0.2;

const MAX_TEMPLATE_RETRIES: u64 = 100;
const SINUSOIDS: usize = 3;
/// Minimum template separation, in units of `noise_sigma * sqrt(120)`.
const SEPARATION_FACTOR: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SynthConfig {
    pub classes: usize,
    pub train_per_class: usize,
    pub test_per_class: usize,
    pub seed: u64,
    pub noise_sigma: f64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            classes: 16,
            train_per_class: 400,
            test_per_class: 200,
            seed: 0,
            noise_sigma: DEFAULT_NOISE_SIGMA,
        }
    }
}

/// Parameters of one class template: a sum of sinusoids over the channel index plus a
/// piecewise-constant offset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TemplateParams {
    pub amplitudes: Vec<f64>,
    /// Cycles across the 120 channels.
    pub frequencies: Vec<f64>,
    pub phases: Vec<f64>,
    /// Channel indices where a new offset segment starts (the first segment starts at 0).
    pub breakpoints: Vec<usize>,
    pub levels: Vec<f64>,
}

impl TemplateParams {
    fn draw<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let amplitudes = (0..SINUSOIDS).map(|_| rng.random_range(0.5..1.5)).collect();
        let frequencies = (0..SINUSOIDS).map(|_| rng.random_range(0.5..6.0)).collect();
        let phases = (0..SINUSOIDS).map(|_| rng.random_range(0.0..2.0 * PI)).collect();
        let segments = rng.random_range(2..=4usize);
        let mut breakpoints: Vec<usize> = (1..segments).map(|_| rng.random_range(10..CSI_WIDTH - 10)).collect();
        breakpoints.sort_unstable();
        let levels = (0..segments).map(|_| rng.random_range(-1.0..1.0)).collect();
        TemplateParams {
            amplitudes,
            frequencies,
            phases,
            breakpoints,
            levels,
        }
    }

    pub fn curve(&self) -> Vec<f64> {
        (0..CSI_WIDTH)
            .map(|c| {
                let x = c as f64 / CSI_WIDTH as f64;
                let wave: f64 = self
                    .amplitudes
                    .iter()
                    .zip(&self.frequencies)
                    .zip(&self.phases)
                    .map(|((a, f), p)| a * (2.0 * PI * f * x + p).sin())
                    .sum();
                let segment = self.breakpoints.iter().filter(|b| c >= **b).count();
                wave + self.levels[segment]
            })
            .collect()
    }
}

/// Generator parameters recorded next to the CSV for reproducibility.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthMetadata {
    pub config: SynthConfig,
    /// Template draws rejected before one passed the separation check.
    pub template_retries: u64,
    pub min_template_distance: f64,
    pub required_distance: f64,
    pub templates: Vec<TemplateParams>,
}

#[derive(Debug, Clone)]
pub struct SyntheticDataset {
    pub split: DatasetSplit,
    /// One raw template curve per class.
    pub templates: Vec<Vec<f64>>,
    pub metadata: SynthMetadata,
}

fn l2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

fn min_pairwise_distance(curves: &[Vec<f64>]) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..curves.len() {
        for j in i + 1..curves.len() {
            best = best.min(l2(&curves[i], &curves[j]));
        }
    }
    best
}

/// Draw class templates, then noisy train and test samples around them.
///
/// Train and test share templates and differ only in their noise draws. Templates are redrawn
/// until every pair is more than `5 * noise_sigma * sqrt(120)` apart.
pub fn synth_generate(config: &SynthConfig) -> Result<SyntheticDataset> {
    if config.classes < 2 {
        return Err(Error::Config(format!("classes must be >= 2 (got {})", config.classes)));
    }
    if config.classes > u16::MAX as usize {
        return Err(Error::Config("too many classes".into()));
    }
    if config.train_per_class == 0 || config.test_per_class == 0 {
        return Err(Error::Config("train-per-class and test-per-class must be >= 1".into()));
    }
    if !(config.noise_sigma >= 0.0 && config.noise_sigma.is_finite()) {
        return Err(Error::Config(format!("noise-sigma must be finite and >= 0 (got {})", config.noise_sigma)));
    }

    let required = SEPARATION_FACTOR * config.noise_sigma * (CSI_WIDTH as f64).sqrt();
    let mut accepted = None;
    let mut closest = 0.0;
    for retry in 0..MAX_TEMPLATE_RETRIES {
        let params: Vec<TemplateParams> = (0..config.classes)
            .map(|m| TemplateParams::draw(&mut stream(config.seed, &[tag::TEMPLATE, retry, m as u64])))
            .collect();
        let curves: Vec<Vec<f64>> = params.iter().map(TemplateParams::curve).collect();
        let d = min_pairwise_distance(&curves);
        closest = d;
        if d > required {
            accepted = Some((retry, params, curves, d));
            break;
        }
    }
    let (retries, params, templates, min_distance) = accepted.ok_or_else(|| {
        Error::Dataset(format!(
            "no template draw reached separation {required:.4} after {MAX_TEMPLATE_RETRIES} attempts \
             (last minimum pairwise distance {closest:.4}); lower noise-sigma or the class count"
        ))
    })?;

    let noise = Normal::new(0.0, config.noise_sigma).expect("validated sigma");
    let draw = |template: &[f64], label: ClassLabel, rng: &mut crate::rng::Rng| CsiSample {
        values: template.iter().map(|t| t + noise.sample(rng)).collect(),
        label: Some(label),
    };
    let mut train = Vec::with_capacity(config.classes * config.train_per_class);
    let mut test = Vec::with_capacity(config.classes * config.test_per_class);
    for (m, template) in templates.iter().enumerate() {
        let label = ClassLabel::from_index(m);
        let mut rng = stream(config.seed, &[tag::TRAIN_NOISE, m as u64]);
        train.extend((0..config.train_per_class).map(|_| draw(template, label, &mut rng)));
        let mut rng = stream(config.seed, &[tag::TEST_NOISE, m as u64]);
        test.extend((0..config.test_per_class).map(|_| draw(template, label, &mut rng)));
    }

    Ok(SyntheticDataset {
        split: DatasetSplit {
            classes: config.classes,
            train,
            test,
            labeled_subset: Vec::new(),
            normalization: None,
        },
        templates,
        metadata: SynthMetadata {
            config: *config,
            template_retries: retries,
            min_template_distance: min_distance,
            required_distance: required,
            templates: params,
        },
    })
}

/// Label of the closest template in L2.
pub fn nearest_template(templates: &[Vec<f64>], x: &[f64]) -> ClassLabel {
    let mut best = (0, f64::INFINITY);
    for (m, t) in templates.iter().enumerate() {
        let d = l2(t, x);
        if d < best.1 {
            best = (m, d);
        }
    }
    ClassLabel::from_index(best.0)
}

/// Accuracy (in `[0, 1]`) of the nearest-template rule on labeled samples.
pub fn nearest_template_accuracy(templates: &[Vec<f64>], samples: &[CsiSample]) -> f64 {
    let labeled: Vec<_> = samples.iter().filter(|s| s.label.is_some()).collect();
    if labeled.is_empty() {
        return 0.0;
    }
    let hits = labeled
        .iter()
        .filter(|s| Some(nearest_template(templates, &s.values)) == s.label)
        .count();
    hits as f64 / labeled.len() as f64
}
