//! Cross-entropy losses with probability clamping, plus their fused gradients with respect to
//! the logits.

use super::activation::{lambda_real_prob, softmax};

/// Probabilities are clamped to `[PROB_CLAMP, 1 - PROB_CLAMP]` before any logarithm.
pub const PROB_CLAMP: f64 = 1e-7;

pub fn clamp_prob(p: f64) -> f64 {
    p.clamp(PROB_CLAMP, 1.0 - PROB_CLAMP)
}

/// True when `p`, the probability assigned to the correct outcome, is past the upper clamp: the
/// loss sits at its floor and the gradient is dropped. Past the lower clamp the unclamped
/// gradient is kept so a confidently wrong prediction can still be corrected.
fn saturated_correct(p: f64) -> bool {
    p > 1.0 - PROB_CLAMP
}

/// `-log y[label]`.
pub fn categorical_ce(y_pred: &[f64], label: usize) -> f64 {
    -clamp_prob(y_pred[label]).ln()
}

/// `-[t log q + (1 - t) log(1 - q)]` for a target in `{0, 1}`.
pub fn binary_ce(q: f64, target: bool) -> f64 {
    let q = clamp_prob(q);
    if target {
        -q.ln()
    } else {
        -(1.0 - q).ln()
    }
}

/// Softmax head + categorical cross-entropy on logits `c`.
///
/// Returns `(loss, dL/dc)`; the gradient is `softmax(c) - onehot(label)`, zero once the correct
/// class is predicted with probability above `1 - PROB_CLAMP`.
pub fn softmax_ce_with_grad(c: &[f64], label: usize) -> (f64, Vec<f64>) {
    let mut y = softmax(c);
    let loss = categorical_ce(&y, label);
    if saturated_correct(y[label]) {
        y.fill(0.0);
    } else {
        y[label] -= 1.0;
    }
    (loss, y)
}

/// Lambda head + binary cross-entropy on logits `c`.
///
/// With `s = lse(c)` the head is `q = sigmoid(s)`, so `dL/dc = (q - t) softmax(c)`; zero once the
/// target is matched within the clamp.
pub fn lambda_bce_with_grad(c: &[f64], target: bool) -> (f64, Vec<f64>) {
    let q = lambda_real_prob(c);
    let loss = binary_ce(q, target);
    let p_correct = if target { q } else { 1.0 - q };
    if saturated_correct(p_correct) {
        return (loss, vec![0.0; c.len()]);
    }
    let t = if target { 1.0 } else { 0.0 };
    let mut g = softmax(c);
    g.iter_mut().for_each(|v| *v *= q - t);
    (loss, g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_hot_prediction_has_zero_loss() {
        let mut y = vec![0.0; 16];
        y[4] = 1.0;
        // clamped at 1 - 1e-7
        assert!(categorical_ce(&y, 4) < 1.1e-7);
    }

    #[test]
    fn uniform_prediction_costs_ln16() {
        let y = vec![1.0 / 16.0; 16];
        for label in [0, 7, 15] {
            assert!((categorical_ce(&y, label) - 16f64.ln()).abs() < 1e-12);
        }
        assert!((16f64.ln() - 2.7726).abs() < 1e-4);
    }

    #[test]
    fn binary_half_costs_ln2() {
        assert!((binary_ce(0.5, true) - 2f64.ln()).abs() < 1e-15);
        assert!((binary_ce(0.5, false) - 2f64.ln()).abs() < 1e-15);
        assert!((binary_ce(0.5, true) - 0.693147).abs() < 1e-6);
    }

    #[test]
    fn clamping_keeps_losses_finite() {
        assert!(binary_ce(0.0, true).is_finite());
        assert!(binary_ce(1.0, false).is_finite());
        assert!(categorical_ce(&[0.0, 1.0], 0).is_finite());
    }

    #[test]
    fn fused_softmax_gradient_is_residual() {
        let c = [0.3, -1.2, 2.0, 0.1];
        let (_, g) = softmax_ce_with_grad(&c, 2);
        let y = softmax(&c);
        for (i, gi) in g.iter().enumerate() {
            let expect = y[i] - if i == 2 { 1.0 } else { 0.0 };
            assert!((gi - expect).abs() < 1e-15);
        }
    }

    #[test]
    fn saturated_lambda_has_zero_gradient() {
        let (_, g) = lambda_bce_with_grad(&[60.0, 0.0], true);
        assert!(g.iter().all(|v| *v == 0.0));
        let (_, g) = lambda_bce_with_grad(&[-60.0, -60.0], false);
        assert!(g.iter().all(|v| *v == 0.0));
    }

    #[test]
    fn confidently_wrong_keeps_gradient() {
        let (loss, g) = lambda_bce_with_grad(&[60.0, 0.0], false);
        assert!((loss + PROB_CLAMP.ln()).abs() < 1e-9);
        assert!((g[0] - 1.0).abs() < 1e-12);
        let (_, g) = softmax_ce_with_grad(&[0.0, 40.0], 0);
        assert!((g[0] + 1.0).abs() < 1e-12 && (g[1] - 1.0).abs() < 1e-12);
    }
}
