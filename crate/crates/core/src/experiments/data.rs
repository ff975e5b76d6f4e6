use crate::dataset::{load_csv, normalize, select_labeled_subset, synth_generate, DatasetSplit};
use crate::error::{Error, Result};

use super::config::ExperimentConfig;

/// The normalized dataset described by `config`, without a labeled subset.
pub fn load_dataset(config: &ExperimentConfig) -> Result<DatasetSplit> {
    let raw = match &config.data_path {
        Some(path) => {
            let split = load_csv(path)?;
            if split.classes != config.classes {
                return Err(Error::Config(format!(
                    "{} holds {} classes but classes = {}",
                    path.display(),
                    split.classes,
                    config.classes
                )));
            }
            split
        }
        None => synth_generate(&config.synth_config())?.split,
    };
    let mut split = normalize(&raw)?;
    split.labeled_subset.clear();
    Ok(split)
}

/// `split` with `labeled_per_class` labeled samples per class drawn from `seed`.
pub fn with_labels(split: &DatasetSplit, labeled_per_class: usize, seed: u64) -> Result<DatasetSplit> {
    select_labeled_subset(split, labeled_per_class, seed)
}
