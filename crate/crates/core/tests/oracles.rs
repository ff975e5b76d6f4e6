use csi_sgan::tensor::toeplitz::{conv_layer_matrix, conv_toeplitz, deconv_layer_matrix, deconv_toeplitz};
use csi_sgan::tensor::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

fn normal_vec(r: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| r.sample::<f64, _>(StandardNormal)).collect()
}

fn random_bank(r: &mut ChaCha8Rng, k: usize, f: usize, d: usize, with_bias: bool) -> ConvKernelBank {
    let weights = normal_vec(r, k * f * d);
    let biases = if with_bias { normal_vec(r, k) } else { vec![0.0; k] };
    ConvKernelBank::new(k, f, d, weights, biases).unwrap()
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Plain nested-loop cross-correlation with bias.
fn naive_conv(x: &[f64], w: usize, bank: &ConvKernelBank) -> Vec<f64> {
    let (k_n, f, d_n) = (bank.kernels(), bank.size(), bank.depth());
    let w_out = w - f + 1;
    let mut out = vec![0.0; k_n * w_out];
    for k in 0..k_n {
        for i in 0..w_out {
            let mut s = bank.biases()[k];
            for j in 0..f {
                for d in 0..d_n {
                    s += bank.weight(k, j, d) * x[d * w + i + j];
                }
            }
            out[k * w_out + i] = s;
        }
    }
    out
}

/// Scatter form of the transposed convolution, then crop and bias.
fn naive_deconv(v: &[f64], w: usize, bank: &ConvKernelBank, crop: usize) -> Vec<f64> {
    let (k_n, f, d_n) = (bank.kernels(), bank.size(), bank.depth());
    let full = w + f - 1;
    let w_out = full - 2 * crop;
    let mut out = vec![0.0; k_n * w_out];
    for k in 0..k_n {
        let mut acc = vec![0.0; full];
        for d in 0..d_n {
            for i in 0..w {
                for j in 0..f {
                    acc[i + j] += bank.weight(k, j, d) * v[d * w + i];
                }
            }
        }
        for o in 0..w_out {
            out[k * w_out + o] = acc[o + crop] + bank.biases()[k];
        }
    }
    out
}

const SHAPES: [(usize, usize, usize, usize); 5] = [(1, 1, 1, 1), (2, 3, 1, 6), (3, 5, 2, 9), (4, 5, 3, 12), (1, 2, 4, 5)];

#[test]
fn conv_matches_naive_loops_and_toeplitz() {
    let mut r = ChaCha8Rng::seed_from_u64(1);
    for &(k, f, d, w) in &SHAPES {
        for _ in 0..5 {
            let bank = random_bank(&mut r, k, f, d, true);
            let x = normal_vec(&mut r, d * w);
            let fast = conv1d_forward(&FeatureMap::new(w, d, x.clone()).unwrap(), &bank).unwrap();
            assert!(max_abs_diff(fast.data(), &naive_conv(&x, w, &bank)) <= 1e-12);

            let nobias = ConvKernelBank::new(k, f, d, bank.weights().to_vec(), vec![0.0; k]).unwrap();
            let fast = conv1d_forward(&FeatureMap::new(w, d, x.clone()).unwrap(), &nobias).unwrap();
            let m = conv_layer_matrix(&nobias, w);
            assert!(max_abs_diff(fast.data(), &m.matvec(&x)) <= 1e-12, "conv {k} {f} {d} {w}");
        }
    }
}

#[test]
fn deconv_matches_naive_loops_and_toeplitz() {
    let mut r = ChaCha8Rng::seed_from_u64(2);
    for &(k, f, d, w) in &SHAPES {
        for crop in 0..=(f - 1) / 2 {
            let bank = random_bank(&mut r, k, f, d, true);
            let v = normal_vec(&mut r, d * w);
            let fast = deconv1d_forward(&FeatureMap::new(w, d, v.clone()).unwrap(), &bank, crop).unwrap();
            assert!(max_abs_diff(fast.data(), &naive_deconv(&v, w, &bank, crop)) <= 1e-12);

            let nobias = ConvKernelBank::new(k, f, d, bank.weights().to_vec(), vec![0.0; k]).unwrap();
            let fast = deconv1d_forward(&FeatureMap::new(w, d, v.clone()).unwrap(), &nobias, crop).unwrap();
            let m = deconv_layer_matrix(&nobias, w, crop);
            assert!(max_abs_diff(fast.data(), &m.matvec(&v)) <= 1e-12, "deconv {k} {f} {d} {w} {crop}");
        }
    }
}

#[test]
fn band_matrices_are_toeplitz_with_kernel_rows() {
    let mut r = ChaCha8Rng::seed_from_u64(3);
    let bank = random_bank(&mut r, 2, 5, 3, false);
    for k in 0..2 {
        for d in 0..3 {
            let w = conv_toeplitz(&bank, k, d, 10);
            assert_eq!((w.rows, w.cols), (6, 10));
            assert!(w.is_toeplitz());
            for i in 0..6 {
                for c in 0..10 {
                    let expect = if (i..i + 5).contains(&c) { bank.weight(k, c - i, d) } else { 0.0 };
                    assert_eq!(w.get(i, c), expect);
                }
            }
            let t = deconv_toeplitz(&bank, k, d, 6);
            assert_eq!((t.rows, t.cols), (6, 10));
            assert!(t.is_toeplitz());
            assert_eq!(t, w, "T and W share the band for the same kernel");
        }
    }
}

#[test]
fn deconv_is_adjoint_of_conv() {
    let mut r = ChaCha8Rng::seed_from_u64(4);
    for &(k, f, d, w) in &SHAPES {
        for _ in 0..5 {
            let bank = random_bank(&mut r, k, f, d, false);
            let w_out = w - f + 1;
            let a = normal_vec(&mut r, d * w);
            let v = normal_vec(&mut r, k * w_out);
            let conv = conv1d_forward(&FeatureMap::new(w, d, a.clone()).unwrap(), &bank).unwrap();
            let back = deconv1d_forward(&FeatureMap::new(w_out, k, v.clone()).unwrap(), &bank.transposed(), 0).unwrap();
            let lhs = dot(conv.data(), &v);
            let rhs = dot(&a, back.data());
            assert!((lhs - rhs).abs() <= 1e-10, "{lhs} vs {rhs}");
        }
    }
}

#[test]
fn published_layer_shapes_match_toeplitz() {
    let mut r = ChaCha8Rng::seed_from_u64(5);
    let bank = random_bank(&mut r, 2, 5, 3, false);
    let v = normal_vec(&mut r, 3 * 116);
    let fast = deconv1d_forward(&FeatureMap::new(116, 3, v.clone()).unwrap(), &bank, 2).unwrap();
    assert_eq!(fast.width(), 116);
    assert!(max_abs_diff(fast.data(), &deconv_layer_matrix(&bank, 116, 2).matvec(&v)) <= 1e-12);
}

fn logits() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-50.0f64..50.0, 1..=32)
}

proptest! {
    #[test]
    fn softmax_is_a_probability_vector(c in logits()) {
        let y = softmax(&c);
        prop_assert!(y.iter().all(|p| *p >= 0.0));
        prop_assert!((y.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn lambda_is_partition_ratio(c in logits()) {
        let q = lambda_real_prob(&c);
        prop_assert!(q > 0.0 && q < 1.0 || c.iter().any(|v| *v > 36.0));
        // Z / (Z + 1) with Z the softmax normalizer, evaluated in shifted form.
        let m = c.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let zs: f64 = c.iter().map(|v| (v - m).exp()).sum();
        let expect = zs / (zs + (-m).exp());
        prop_assert!((q - expect).abs() <= 1e-12, "{q} vs {expect}");
        prop_assert!((q - (1.0 - 1.0 / (c.iter().map(|v| v.exp()).sum::<f64>() + 1.0))).abs() <= 1e-12);
    }

    #[test]
    fn heads_agree_on_shared_logits(c in prop::collection::vec(-10.0f64..10.0, 16)) {
        // q (1 + Z) = Z
        let z: f64 = c.iter().map(|v| v.exp()).sum();
        let q = lambda_real_prob(&c);
        prop_assert!((q * (1.0 + z) - z).abs() <= 1e-12 * z.max(1.0));
        let y = softmax(&c);
        for (yi, ci) in y.iter().zip(&c) {
            prop_assert!((yi - ci.exp() / z).abs() <= 1e-12);
        }
    }

    #[test]
    fn argmax_is_preserved(c in logits(), shift in -100.0f64..100.0, scale in 0.01f64..100.0) {
        let y = softmax(&c);
        prop_assert_eq!(argmax(&y), argmax(&c));
        let moved: Vec<f64> = c.iter().map(|v| v * scale + shift).collect();
        prop_assert_eq!(argmax(&moved), argmax(&c));
    }

    #[test]
    fn clamped_losses_are_finite(q in 0.0f64..=1.0, t in any::<bool>()) {
        let l = binary_ce(q, t);
        prop_assert!(l.is_finite() && l >= 0.0);
        prop_assert!(l <= -PROB_CLAMP.ln() + 1e-12);
    }

    #[test]
    fn conv_width_algebra(w in 1usize..300, f in 1usize..9) {
        match conv_output_width(w, f, 1) {
            Some(o) => { prop_assert!(w >= f); prop_assert_eq!(o, w - f + 1); }
            None => prop_assert!(w < f),
        }
        prop_assert_eq!(deconv_output_width(w, f, 1, 0), Some(w + f - 1));
    }
}
