//! Synthetic CSI fingerprints: 16 location templates plus per-channel noise.
//!
//!     cargo run --example generate_dataset -- out/dataset.csv

use std::path::PathBuf;

use csi_sgan::dataset::{
    load_csv, nearest_template_accuracy, normalize, save_csv, select_labeled_subset, synth_generate, SynthConfig,
};

pub fn run_example(path: Option<PathBuf>) -> csi_sgan::Result<f64> {
    let data = synth_generate(&SynthConfig {
        seed: 3,
        ..Default::default()
    })?;
    let meta = &data.metadata;
    println!(
        "{} train / {} test samples, noise sigma {}, closest templates {:.2} apart (need > {:.2})",
        data.split.train.len(),
        data.split.test.len(),
        meta.config.noise_sigma,
        meta.min_template_distance,
        meta.required_distance
    );
    let acc = nearest_template_accuracy(&data.templates, &data.split.test);
    println!("nearest-template accuracy on test: {:.2}%", 100.0 * acc);

    let split = select_labeled_subset(&normalize(&data.split)?, 1, 1)?;
    let norm = split.normalization.expect("normalized");
    println!("normalized from [{:.3}, {:.3}] to [-1, 1]; {} labeled", norm.min, norm.max, split.labeled_subset.len());

    if let Some(path) = path {
        save_csv(&split, &path)?;
        let back = load_csv(&path)?;
        assert_eq!(back.train.len(), split.train.len());
        println!("wrote {}", path.display());
    }
    Ok(acc)
}

#[allow(dead_code)]
fn main() {
    run_example(std::env::args().nth(1).map(PathBuf::from)).expect("generate dataset");
}
