//! A convolution layer is a block matrix of banded Toeplitz matrices, and the transposed
//! convolution applies the transposed bands.
//!
//!     cargo run --example toeplitz_equivalence

use csi_sgan::tensor::toeplitz::{conv_layer_matrix, conv_toeplitz, deconv_layer_matrix};
use csi_sgan::tensor::{conv1d_forward, deconv1d_forward, ConvKernelBank, FeatureMap};

pub fn run_example() -> csi_sgan::Result<f64> {
    let bank = ConvKernelBank::new(1, 3, 1, vec![1.0, 0.0, -1.0], vec![0.0])?;
    println!("W for kernel [1, 0, -1] on width 6:");
    let w = conv_toeplitz(&bank, 0, 0, 6);
    for r in 0..w.rows {
        let row: Vec<String> = (0..w.cols).map(|c| format!("{:>3}", w.get(r, c))).collect();
        println!("  {}", row.join(""));
    }

    let weights: Vec<f64> = (0..2 * 5 * 3).map(|i| ((i * 7 % 11) as f64 - 5.0) / 5.0).collect();
    let bank = ConvKernelBank::new(2, 5, 3, weights, vec![0.0; 2])?;
    let x: Vec<f64> = (0..3 * 12).map(|i| (i as f64 * 0.37).sin()).collect();
    let fast = conv1d_forward(&FeatureMap::new(12, 3, x.clone())?, &bank)?;
    let dense = conv_layer_matrix(&bank, 12).matvec(&x);
    let conv_err = fast.data().iter().zip(&dense).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);

    let v: Vec<f64> = (0..3 * 8).map(|i| (i as f64 * 0.11).cos()).collect();
    let fast = deconv1d_forward(&FeatureMap::new(8, 3, v.clone())?, &bank, 2)?;
    let dense = deconv_layer_matrix(&bank, 8, 2).matvec(&v);
    let deconv_err = fast.data().iter().zip(&dense).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);

    println!("conv vs matrix: {conv_err:.1e}, deconv vs matrix: {deconv_err:.1e}");
    Ok(conv_err.max(deconv_err))
}

#[allow(dead_code)]
fn main() {
    run_example().expect("toeplitz example");
}
