//! Synthetic CSI fingerprints standing in for a measured site survey, plus normalization,
//! labeled-subset selection and CSV persistence.

mod csv_io;
mod normalize;
mod split;
mod synth;

pub use csv_io::{load_csv, save_csv, SPLIT_TEST, SPLIT_TRAIN, SPLIT_TRAIN_LABELED};
pub use normalize::{normalize, Normalization};
pub use split::{select_labeled_subset, CsiSample, DatasetSplit, LabeledRef};
pub use synth::{
    nearest_template, nearest_template_accuracy, synth_generate, SynthConfig, SynthMetadata, SyntheticDataset,
    TemplateParams, DEFAULT_NOISE_SIGMA,
};
