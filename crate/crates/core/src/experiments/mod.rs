//! Experiment driver: configuration, data loading, the label-budget sweep and generated-sample
//! dumps, each backing one command of the `csi-sgan` binary.

mod commands;
mod config;
mod data;
mod fakes;
mod sweep;

pub use commands::{cmd_dump_fakes, cmd_evaluate, cmd_generate_data, cmd_sweep, cmd_train, evaluate, RESOLVED_CONFIG};
pub use config::{parse_overrides, ExperimentConfig, DEFAULT_BUDGETS};
pub use data::{load_dataset, with_labels};
pub use fakes::{class_means, fake_class_distances, lag1_autocorrelation, mean_distance, FakeDump, ProgressionReport};
pub use sweep::{mean_std, run_sweep, SweepCell, SweepResult, SweepRow};
