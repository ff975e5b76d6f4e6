//! Accuracy across label budgets for the semi-supervised model and the supervised baseline.
//!
//!     cargo run --release --example label_sweep -- 3

use csi_sgan::dataset::{normalize, synth_generate, SynthConfig};
use csi_sgan::experiments::{run_sweep, SweepResult};
use csi_sgan::trainer::{ModelKind, TrainConfig};

pub fn run_example(seeds: u64, steps_per_epoch: usize, budgets: &[usize]) -> csi_sgan::Result<SweepResult> {
    let data = synth_generate(&SynthConfig {
        train_per_class: 40,
        test_per_class: 20,
        seed: 5,
        ..Default::default()
    })?;
    let split = normalize(&data.split)?;
    let base = TrainConfig {
        epochs: 2,
        steps_per_epoch,
        eval_every: 2,
        ..Default::default()
    };
    let seeds: Vec<u64> = (1..=seeds).collect();
    let result = run_sweep(&base, &split, budgets, &[ModelKind::Dcgan, ModelKind::Cnn], &seeds)?;
    print!("{}", result.table());
    Ok(result)
}

#[allow(dead_code)]
fn main() {
    let seeds = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(2);
    run_example(seeds, 10, &[16, 32, 64, 640]).expect("sweep");
}
