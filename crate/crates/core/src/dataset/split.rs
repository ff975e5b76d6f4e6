use rand::seq::index::sample;

use crate::error::{Error, Result};
use crate::label::ClassLabel;
use crate::models::CSI_WIDTH;
use crate::rng::{stream, tag};

use super::normalize::Normalization;

/// One CSI measurement: 120 channel amplitudes and, when known, its location.
#[derive(Debug, Clone, PartialEq)]
pub struct CsiSample {
    pub values: Vec<f64>,
    pub label: Option<ClassLabel>,
}

impl CsiSample {
    pub fn new(values: Vec<f64>, label: Option<ClassLabel>) -> Result<Self> {
        if values.len() != CSI_WIDTH {
            return Err(Error::Dataset(format!("sample has {} values, expected {CSI_WIDTH}", values.len())));
        }
        Ok(CsiSample { values, label })
    }
}

/// A labeled sample as seen by classifier updates.
#[derive(Debug, Clone, Copy)]
pub struct LabeledRef<'a> {
    pub values: &'a [f64],
    pub label: ClassLabel,
}

/// Train/test sets plus the indices of the train samples whose labels may be used.
#[derive(Debug, Clone, PartialEq)]
pub struct DatasetSplit {
    pub classes: usize,
    pub train: Vec<CsiSample>,
    pub test: Vec<CsiSample>,
    /// Sorted indices into `train`.
    pub labeled_subset: Vec<usize>,
    pub normalization: Option<Normalization>,
}

impl DatasetSplit {
    /// Every train sample with its label removed.
    pub fn unlabeled_pool(&self) -> Vec<&[f64]> {
        self.train.iter().map(|s| s.values.as_slice()).collect()
    }

    /// The labeled subset.
    pub fn labeled(&self) -> Result<Vec<LabeledRef<'_>>> {
        self.labeled_subset
            .iter()
            .map(|&i| {
                let s = self
                    .train
                    .get(i)
                    .ok_or_else(|| Error::Dataset(format!("labeled index {i} out of range")))?;
                let label = s
                    .label
                    .ok_or_else(|| Error::Dataset(format!("train sample {i} in labeled subset has no label")))?;
                Ok(LabeledRef {
                    values: &s.values,
                    label,
                })
            })
            .collect()
    }

    /// Test samples that carry a label.
    pub fn labeled_test(&self) -> Vec<LabeledRef<'_>> {
        self.test
            .iter()
            .filter_map(|s| {
                s.label.map(|label| LabeledRef {
                    values: &s.values,
                    label,
                })
            })
            .collect()
    }

    /// Train indices per class (index `m` holds class `m + 1`).
    pub fn train_indices_by_class(&self) -> Vec<Vec<usize>> {
        let mut by_class = vec![Vec::new(); self.classes];
        for (i, s) in self.train.iter().enumerate() {
            if let Some(l) = s.label {
                if l.index() < self.classes {
                    by_class[l.index()].push(i);
                }
            }
        }
        by_class
    }

    pub fn validate(&self) -> Result<()> {
        for (i, s) in self.train.iter().chain(&self.test).enumerate() {
            if s.values.len() != CSI_WIDTH {
                return Err(Error::Dataset(format!("sample {i}: {} values, expected {CSI_WIDTH}", s.values.len())));
            }
            if let Some(l) = s.label {
                if l.index() >= self.classes {
                    return Err(Error::Dataset(format!("sample {i}: label {l} outside 1..={}", self.classes)));
                }
            }
        }
        Ok(())
    }
}

/// Pick `n_per_class` labeled train samples from every class, uniformly without replacement.
pub fn select_labeled_subset(split: &DatasetSplit, n_per_class: usize, seed: u64) -> Result<DatasetSplit> {
    if n_per_class == 0 {
        return Err(Error::Config("labeled-per-class must be at least 1".into()));
    }
    let by_class = split.train_indices_by_class();
    let mut subset = Vec::with_capacity(n_per_class * split.classes);
    for (m, members) in by_class.iter().enumerate() {
        if members.len() < n_per_class {
            return Err(Error::Config(format!(
                "labeled-per-class {n_per_class} exceeds the {} train samples of class {}",
                members.len(),
                m + 1
            )));
        }
        let mut rng = stream(seed, &[tag::SUBSET, m as u64]);
        subset.extend(sample(&mut rng, members.len(), n_per_class).into_iter().map(|k| members[k]));
    }
    subset.sort_unstable();
    Ok(DatasetSplit {
        labeled_subset: subset,
        ..split.clone()
    })
}
