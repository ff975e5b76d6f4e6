//! Semi-supervised training with one labeled sample per location, next to the supervised
//! baseline on the same labels.
//!
//!     cargo run --release --example train_dcgan -- 10 20

use csi_sgan::dataset::{normalize, select_labeled_subset, synth_generate, SynthConfig};
use csi_sgan::trainer::{train, ModelKind, TrainConfig};

pub fn run_example(epochs: usize, steps_per_epoch: usize, train_per_class: usize) -> csi_sgan::Result<Vec<(ModelKind, f64)>> {
    let data = synth_generate(&SynthConfig {
        train_per_class,
        test_per_class: 50,
        seed: 2,
        ..Default::default()
    })?;
    let split = select_labeled_subset(&normalize(&data.split)?, 1, 1)?;

    let mut results = Vec::new();
    for model in [ModelKind::Dcgan, ModelKind::Cnn] {
        let config = TrainConfig {
            epochs,
            steps_per_epoch,
            ..Default::default()
        }
        .with_model(model);
        let out = train(&config, &split)?;
        println!("{}:", model.tag());
        print!("{}", out.history.to_csv());
        results.push((model, out.history.final_accuracy().unwrap_or(f64::NAN)));
    }
    for (m, acc) in &results {
        println!("{:>6}: {acc:.2}%", m.tag());
    }
    Ok(results)
}

#[allow(dead_code)]
fn main() {
    let arg = |i: usize, default: usize| std::env::args().nth(i).and_then(|a| a.parse().ok()).unwrap_or(default);
    run_example(arg(1, 5), arg(2, 20), 400).expect("training");
}
