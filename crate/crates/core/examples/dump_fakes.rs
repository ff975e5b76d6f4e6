//! Generated samples at several epochs, labeled by the classifier head, and how close each
//! class's fakes get to the real class mean.
//!
//!     cargo run --release --example dump_fakes -- 100 10

use csi_sgan::dataset::{normalize, select_labeled_subset, synth_generate, SynthConfig};
use csi_sgan::experiments::{class_means, lag1_autocorrelation, ProgressionReport};
use csi_sgan::trainer::{train, TrainConfig};

pub fn run_example(epochs: usize, steps_per_epoch: usize) -> csi_sgan::Result<ProgressionReport> {
    let data = synth_generate(&SynthConfig {
        seed: 1,
        ..Default::default()
    })?;
    let split = select_labeled_subset(&normalize(&data.split)?, 1, 1)?;
    let mut checkpoints = vec![0, 1, epochs / 10, epochs];
    checkpoints.dedup();
    let config = TrainConfig {
        epochs,
        steps_per_epoch,
        eval_every: epochs,
        init_std: 0.1,
        snapshot_epochs: checkpoints,
        snapshot_samples: 160,
        ..Default::default()
    };
    let out = train(&config, &split)?;

    for snap in &out.history.snapshots {
        let mut counts = vec![0usize; split.classes];
        for (_, label) in &snap.samples {
            counts[label.index()] += 1;
        }
        let r1: f64 =
            snap.samples.iter().map(|(x, _)| lag1_autocorrelation(x)).sum::<f64>() / snap.samples.len() as f64;
        println!("epoch {:>3}: lag-1 autocorrelation {r1:+.3}, labels {counts:?}", snap.epoch);
    }
    let first = out.history.snapshots.first().expect("epoch 0 snapshot");
    let last = out.history.snapshots.last().expect("final snapshot");
    let report = ProgressionReport::new(first, last, &class_means(&split));
    print!("{}", report.to_csv());
    println!("{} of {} classes closer at epoch {}", report.closer_count(), report.classes.len(), last.epoch);
    Ok(report)
}

#[allow(dead_code)]
fn main() {
    let arg = |i: usize, default: usize| std::env::args().nth(i).and_then(|a| a.parse().ok()).unwrap_or(default);
    run_example(arg(1, 100), arg(2, 10)).expect("dump fakes");
}
