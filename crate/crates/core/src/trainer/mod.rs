//! Alternating semi-supervised training (classifier on labeled data, discriminator on real
//! versus generated samples, then the generator against the fixed discriminator) and the
//! supervised-only baseline.

mod batches;
mod config;
mod history;
mod steps;
mod train;

pub use batches::CyclicBatches;
pub use config::{ModelKind, TrainConfig};
pub use history::{EpochRecord, FakeSnapshot, TrainHistory};
pub use steps::{accuracy_percent, sample_latents, train_classifier_step, train_discriminator_step, train_generator_step};
pub use train::{train, train_with_observer, TrainOutput};
