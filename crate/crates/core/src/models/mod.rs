//! The generator, the shared-weight discriminator/classifier, and the simplified generator
//! used for the ablation.

pub mod arch;
mod checkpoint;
mod discriminator;
mod generator;
mod tape;

pub use arch::{verify_architecture, CSI_WIDTH, LATENT_DIM, NUM_CLASSES};
pub use checkpoint::{Checkpoint, NamedTensor, CHECKPOINT_VERSION};
pub use discriminator::{build_discriminator, classify_logits, log_partition, Classification, DiscCache, DiscClassNet};
pub use generator::{
    build_generator, build_simplified_generator, GenCache, Generator, GeneratorCache, GeneratorNet, SimplifiedCache,
    SimplifiedGeneratorNet,
};
pub use tape::Tape;
