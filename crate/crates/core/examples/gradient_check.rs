//! Finite-difference check of the full generator and discriminator.
//!
//!     cargo run --release --example gradient_check

use csi_sgan::models::{DiscClassNet, GeneratorNet, CSI_WIDTH, LATENT_DIM};
use csi_sgan::tensor::{grad_check, lambda_bce_with_grad, binary_ce, lambda_real_prob, GradCheckOptions, Parameters};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn run_example() -> csi_sgan::Result<(f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut normal = |n: usize, std: f64| -> Vec<f64> { (0..n).map(|_| std * rng.sample::<f64, _>(StandardNormal)).collect() };

    // A wider init than training uses, so every layer carries signal.
    let mut g = GeneratorNet::zeros();
    g.load_flat(&normal(g.num_parameters(), 0.05));
    let z = normal(LATENT_DIM, 1.0);
    let w = normal(CSI_WIDTH, 1.0);
    let cache = g.forward_cached(&z)?;
    let mut grads = GeneratorNet::zeros();
    g.backward(&cache, &w, Some(&mut grads))?;
    let mut probe = g.clone();
    let g_err = grad_check(
        |p| {
            probe.load_flat(p);
            let out = probe.generate(&z).unwrap();
            out.iter().zip(&w).map(|(a, b)| a * b).sum()
        },
        &g.to_flat(),
        &grads.to_flat(),
        GradCheckOptions::default(),
    );
    println!("generator: {} parameters, worst relative error {g_err:.2e}", g.num_parameters());

    let mut d = DiscClassNet::zeros();
    d.load_flat(&normal(d.num_parameters(), 0.1));
    let x = normal(CSI_WIDTH, 0.5);
    let cache = d.forward_cached(&x)?;
    let (_, dc) = lambda_bce_with_grad(cache.logits(), true);
    let mut grads = DiscClassNet::zeros();
    d.backward(&cache, &dc, Some(&mut grads))?;
    let mut probe = d.clone();
    let d_err = grad_check(
        |p| {
            probe.load_flat(p);
            binary_ce(lambda_real_prob(&probe.logits(&x).unwrap()), true)
        },
        &d.to_flat(),
        &grads.to_flat(),
        GradCheckOptions::default(),
    );
    println!("discriminator: {} parameters, worst relative error {d_err:.2e}", d.num_parameters());
    Ok((g_err, d_err))
}

#[allow(dead_code)]
fn main() {
    run_example().expect("gradient check");
}
