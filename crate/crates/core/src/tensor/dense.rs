use rand::Rng;

use super::params::{gaussian_fill, Parameters};
use crate::error::{Error, Result};

/// Fully connected layer parameters: `y = W x + b` with `W` stored row-major (`out x in`).
#[derive(Debug, Clone, PartialEq)]
pub struct DenseParams {
    out_dim: usize,
    in_dim: usize,
    weights: Vec<f64>,
    bias: Vec<f64>,
}

impl DenseParams {
    pub fn new(out_dim: usize, in_dim: usize, weights: Vec<f64>, bias: Vec<f64>) -> Result<Self> {
        if out_dim == 0 || in_dim == 0 {
            return Err(Error::shape("DenseParams::new", "positive dimensions", format!("{out_dim}x{in_dim}")));
        }
        if weights.len() != out_dim * in_dim {
            return Err(Error::shape("DenseParams::new weights", out_dim * in_dim, weights.len()));
        }
        if bias.len() != out_dim {
            return Err(Error::shape("DenseParams::new bias", out_dim, bias.len()));
        }
        Ok(DenseParams {
            out_dim,
            in_dim,
            weights,
            bias,
        })
    }

    pub fn zeros(out_dim: usize, in_dim: usize) -> Self {
        DenseParams {
            out_dim,
            in_dim,
            weights: vec![0.0; out_dim * in_dim],
            bias: vec![0.0; out_dim],
        }
    }

    /// Gaussian weights with the given std, zero bias.
    pub fn gaussian<R: Rng + ?Sized>(out_dim: usize, in_dim: usize, std: f64, rng: &mut R) -> Self {
        let mut p = Self::zeros(out_dim, in_dim);
        gaussian_fill(&mut p.weights, std, rng);
        p
    }

    pub fn out_dim(&self) -> usize {
        self.out_dim
    }

    pub fn in_dim(&self) -> usize {
        self.in_dim
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weights_mut(&mut self) -> &mut [f64] {
        &mut self.weights
    }

    pub fn bias(&self) -> &[f64] {
        &self.bias
    }

    pub fn bias_mut(&mut self) -> &mut [f64] {
        &mut self.bias
    }
}

impl Parameters for DenseParams {
    fn tensors(&self) -> Vec<&[f64]> {
        vec![&self.weights, &self.bias]
    }

    fn tensors_mut(&mut self) -> Vec<&mut [f64]> {
        vec![&mut self.weights, &mut self.bias]
    }
}

/// Dot product with four independent accumulators (fixed summation order).
fn dot4(a: &[f64], b: &[f64]) -> f64 {
    let mut acc = [0.0; 4];
    let mut ca = a.chunks_exact(4);
    let mut cb = b.chunks_exact(4);
    for (x, y) in (&mut ca).zip(&mut cb) {
        for l in 0..4 {
            acc[l] += x[l] * y[l];
        }
    }
    let tail: f64 = ca.remainder().iter().zip(cb.remainder()).map(|(x, y)| x * y).sum();
    (acc[0] + acc[1]) + (acc[2] + acc[3]) + tail
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

/// Pre-activation output `W x + b`.
pub fn dense_forward(x: &[f64], p: &DenseParams) -> Result<Vec<f64>> {
    if x.len() != p.in_dim {
        return Err(Error::shape("dense_forward", p.in_dim, x.len()));
    }
    Ok(p.weights
        .chunks_exact(p.in_dim)
        .zip(&p.bias)
        .map(|(row, b)| dot4(row, x) + b)
        .collect())
}

/// Gradient of a dense layer.
///
/// Returns `dL/dx`; when `grads` is given, `dL/dW` and `dL/db` are accumulated into it.
pub fn dense_backward(x: &[f64], p: &DenseParams, grad_out: &[f64], grads: Option<&mut DenseParams>) -> Result<Vec<f64>> {
    if x.len() != p.in_dim {
        return Err(Error::shape("dense_backward input", p.in_dim, x.len()));
    }
    if grad_out.len() != p.out_dim {
        return Err(Error::shape("dense_backward grad", p.out_dim, grad_out.len()));
    }
    let mut dx = vec![0.0; p.in_dim];
    for (row, g) in p.weights.chunks_exact(p.in_dim).zip(grad_out) {
        if *g != 0.0 {
            axpy(*g, row, &mut dx);
        }
    }

    if let Some(gr) = grads {
        if gr.out_dim != p.out_dim || gr.in_dim != p.in_dim {
            return Err(Error::shape(
                "dense_backward grads",
                format!("{}x{}", p.out_dim, p.in_dim),
                format!("{}x{}", gr.out_dim, gr.in_dim),
            ));
        }
        for (row, g) in gr.weights.chunks_exact_mut(p.in_dim).zip(grad_out) {
            if *g != 0.0 {
                axpy(*g, x, row);
            }
        }
        for (b, d) in gr.bias.iter_mut().zip(grad_out) {
            *b += d;
        }
    }
    Ok(dx)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_weights() {
        let p = DenseParams::new(2, 2, vec![1.0, 0.0, 0.0, 1.0], vec![0.0, 0.0]).unwrap();
        assert_eq!(dense_forward(&[1.0, 2.0], &p).unwrap(), vec![1.0, 2.0]);
    }

    #[test]
    fn row_with_bias() {
        let p = DenseParams::new(1, 2, vec![2.0, 3.0], vec![-1.0]).unwrap();
        assert_eq!(dense_forward(&[1.0, 1.0], &p).unwrap(), vec![4.0]);
    }

    #[test]
    fn dimension_mismatch_is_error() {
        let p = DenseParams::zeros(3, 4);
        assert!(matches!(dense_forward(&[1.0; 3], &p), Err(Error::Shape { .. })));
    }

    #[test]
    fn identity_backward_passes_gradient_through() {
        let p = DenseParams::new(2, 2, vec![1.0, 0.0, 0.0, 1.0], vec![0.0, 0.0]).unwrap();
        let dx = dense_backward(&[3.0, -1.0], &p, &[0.25, -2.0], None).unwrap();
        assert_eq!(dx, vec![0.25, -2.0]);
    }

    #[test]
    fn parameter_gradients_are_outer_product() {
        let p = DenseParams::new(2, 3, vec![0.0; 6], vec![0.0; 2]).unwrap();
        let mut g = DenseParams::zeros(2, 3);
        dense_backward(&[1.0, 2.0, 3.0], &p, &[1.0, -1.0], Some(&mut g)).unwrap();
        assert_eq!(g.weights(), &[1.0, 2.0, 3.0, -1.0, -2.0, -3.0]);
        assert_eq!(g.bias(), &[1.0, -1.0]);
    }
}
