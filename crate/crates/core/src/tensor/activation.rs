//! Element-wise activations and the two output heads over a logit vector.

/// Default LeakyReLU negative slope.
pub const LEAKY_SLOPE: f64 = 0.2;

pub fn relu(x: f64) -> f64 {
    x.max(0.0)
}

pub fn leaky_relu(x: f64, alpha: f64) -> f64 {
    if x > 0.0 {
        x
    } else {
        alpha * x
    }
}

pub fn tanh_act(x: f64) -> f64 {
    x.tanh()
}

pub fn relu_inplace(xs: &mut [f64]) {
    xs.iter_mut().for_each(|v| *v = relu(*v));
}

pub fn leaky_relu_inplace(xs: &mut [f64], alpha: f64) {
    xs.iter_mut().for_each(|v| *v = leaky_relu(*v, alpha));
}

pub fn tanh_inplace(xs: &mut [f64]) {
    xs.iter_mut().for_each(|v| *v = v.tanh());
}

/// Multiply `grad` by ReLU'(pre).
pub fn relu_backward(pre: &[f64], grad: &mut [f64]) {
    for (g, z) in grad.iter_mut().zip(pre) {
        if *z <= 0.0 {
            *g = 0.0;
        }
    }
}

pub fn leaky_relu_backward(pre: &[f64], grad: &mut [f64], alpha: f64) {
    for (g, z) in grad.iter_mut().zip(pre) {
        if *z <= 0.0 {
            *g *= alpha;
        }
    }
}

/// Multiply `grad` by tanh'(z) given the activation output `y = tanh(z)`.
pub fn tanh_backward(out: &[f64], grad: &mut [f64]) {
    for (g, y) in grad.iter_mut().zip(out) {
        *g *= 1.0 - y * y;
    }
}

/// `log(sum_m exp(c_m))`, shifted by the maximum.
pub fn log_sum_exp(c: &[f64]) -> f64 {
    let max = c.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    max + c.iter().map(|v| (v - max).exp()).sum::<f64>().ln()
}

pub fn softmax(c: &[f64]) -> Vec<f64> {
    let max = c.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut e: Vec<f64> = c.iter().map(|v| (v - max).exp()).collect();
    let sum: f64 = e.iter().sum();
    e.iter_mut().for_each(|v| *v /= sum);
    e
}

/// Logistic function, evaluated without overflow on either tail.
pub fn sigmoid(s: f64) -> f64 {
    if s >= 0.0 {
        1.0 / (1.0 + (-s).exp())
    } else {
        let e = s.exp();
        e / (1.0 + e)
    }
}

/// Probability that the input is real: `Z / (Z + 1)` with `Z = sum_m exp(c_m)`.
///
/// Since `Z = exp(lse(c))` this is `sigmoid(lse(c))`.
pub fn lambda_real_prob(c: &[f64]) -> f64 {
    sigmoid(log_sum_exp(c))
}

/// Index of the largest entry (first one on ties).
pub fn argmax(xs: &[f64]) -> usize {
    let mut best = 0;
    for (i, v) in xs.iter().enumerate() {
        if *v > xs[best] {
            best = i;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_activations() {
        assert!((leaky_relu(-2.0, 0.2) + 0.4).abs() < 1e-15);
        assert_eq!(relu(-2.0), 0.0);
        assert_eq!(tanh_act(0.0), 0.0);
        assert_eq!(leaky_relu(3.0, 0.2), 3.0);
    }

    #[test]
    fn softmax_of_zeros_is_uniform() {
        let p = softmax(&[0.0; 16]);
        assert!(p.iter().all(|v| (v - 1.0 / 16.0).abs() < 1e-15));
    }

    #[test]
    fn lambda_closed_forms() {
        assert!((lambda_real_prob(&[0.0]) - 0.5).abs() < 1e-15);
        assert!((lambda_real_prob(&[0.0; 16]) - 16.0 / 17.0).abs() < 1e-15);
        assert!((lambda_real_prob(&[0.0; 16]) - 0.941176).abs() < 1e-6);
    }

    #[test]
    fn extreme_logits_do_not_overflow() {
        let p = softmax(&[1000.0, 0.0, -1000.0]);
        assert_eq!(p[0], 1.0);
        assert!(lambda_real_prob(&[1000.0, 999.0]).is_finite());
        assert!(lambda_real_prob(&[-1000.0]) >= 0.0);
    }

    #[test]
    fn backward_masks() {
        let pre = [-1.0, 2.0];
        let mut g = [1.0, 1.0];
        leaky_relu_backward(&pre, &mut g, 0.2);
        assert_eq!(g, [0.2, 1.0]);
        let mut g = [1.0, 1.0];
        relu_backward(&pre, &mut g);
        assert_eq!(g, [0.0, 1.0]);
    }
}
