//! One set of logits read two ways, and a single optimizer step by hand.
//!
//!     cargo run --example heads_and_adam

use csi_sgan::models::{classify_logits, log_partition};
use csi_sgan::tensor::{lambda_real_prob, softmax, AdamConfig, AdamState};

pub fn run_example() -> csi_sgan::Result<f64> {
    let logits: Vec<f64> = (0..16).map(|m| (m as f64 * 0.7).sin() * 2.0).collect();
    let class = classify_logits(&logits);
    let q = lambda_real_prob(&logits);
    let z = log_partition(&logits).exp();
    println!("predicted location {} with p = {:.4}", class.predicted, class.probabilities[class.predicted.index()]);
    println!("lambda = {q:.6}, Z / (Z + 1) = {:.6}", z / (z + 1.0));
    println!("softmax sums to {:.15}", softmax(&logits).iter().sum::<f64>());

    let mut param = vec![0.0];
    let mut adam = AdamState::new(AdamConfig::CLASSIFIER, &[1])?;
    adam.step(&mut [&mut param], &[&[1.0]])?;
    println!("one Adam step on gradient 1: {:.10e}", param[0]);
    Ok(param[0])
}

#[allow(dead_code)]
fn main() {
    run_example().expect("heads example");
}
