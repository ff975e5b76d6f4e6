//! Explicit banded Toeplitz matrices for the convolution layers.
//!
//! These are dense reference constructions used for checking and inspection; the layers
//! themselves never build them.

use super::conv::{conv_output_width, ConvKernelBank};

/// Dense row-major matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: f64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    /// Naive `M x`, summed left to right.
    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                let mut acc = 0.0;
                for c in 0..self.cols {
                    acc += self.get(r, c) * x[c];
                }
                acc
            })
            .collect()
    }

    /// Every entry on each diagonal equal.
    pub fn is_toeplitz(&self) -> bool {
        (1..self.rows).all(|r| (1..self.cols).all(|c| self.get(r, c) == self.get(r - 1, c - 1)))
    }
}

/// `W_{k,d}`: the `(W - F + 1) x W` band mapping input slice `d` to output slice `k` of a
/// convolution; row `i` holds the kernel taps in columns `i..i + F`.
pub fn conv_toeplitz(bank: &ConvKernelBank, k: usize, d: usize, width_in: usize) -> Matrix {
    let f = bank.size();
    let w_out = conv_output_width(width_in, f, 1).expect("kernel wider than input");
    let mut m = Matrix::zeros(w_out, width_in);
    for i in 0..w_out {
        for j in 0..f {
            m.set(i, i + j, bank.weight(k, j, d));
        }
    }
    m
}

/// `T_{k,d}`: the `W x (W + F - 1)` band of a transposed convolution; row `i` (input neuron)
/// spreads into output columns `i..i + F`. The layer applies its transpose.
pub fn deconv_toeplitz(bank: &ConvKernelBank, k: usize, d: usize, width_in: usize) -> Matrix {
    let f = bank.size();
    let w_full = width_in + f - 1;
    let mut m = Matrix::zeros(width_in, w_full);
    for i in 0..width_in {
        for j in 0..f {
            m.set(i, i + j, bank.weight(k, j, d));
        }
    }
    m
}

/// Whole convolution layer as one `(K w_out) x (D w_in)` block matrix of `W_{k,d}` blocks,
/// acting on the stacked slice vector. Biases are not included.
pub fn conv_layer_matrix(bank: &ConvKernelBank, width_in: usize) -> Matrix {
    let w_out = conv_output_width(width_in, bank.size(), 1).expect("kernel wider than input");
    let mut m = Matrix::zeros(bank.kernels() * w_out, bank.depth() * width_in);
    for k in 0..bank.kernels() {
        for d in 0..bank.depth() {
            let block = conv_toeplitz(bank, k, d, width_in);
            for r in 0..w_out {
                for c in 0..width_in {
                    m.set(k * w_out + r, d * width_in + c, block.get(r, c));
                }
            }
        }
    }
    m
}

/// Whole transposed-convolution layer: blocks `T_{k,d}^T` with `crop` rows dropped from each
/// end of every output slice. Biases are not included.
pub fn deconv_layer_matrix(bank: &ConvKernelBank, width_in: usize, crop: usize) -> Matrix {
    let w_full = width_in + bank.size() - 1;
    assert!(w_full > 2 * crop, "crop too large");
    let w_out = w_full - 2 * crop;
    let mut m = Matrix::zeros(bank.kernels() * w_out, bank.depth() * width_in);
    for k in 0..bank.kernels() {
        for d in 0..bank.depth() {
            let block = deconv_toeplitz(bank, k, d, width_in).transpose();
            for r in 0..w_out {
                for c in 0..width_in {
                    m.set(k * w_out + r, d * width_in + c, block.get(r + crop, c));
                }
            }
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conv_band_layout() {
        let bank = ConvKernelBank::new(1, 3, 1, vec![1.0, 2.0, 3.0], vec![0.0]).unwrap();
        let m = conv_toeplitz(&bank, 0, 0, 5);
        assert_eq!((m.rows, m.cols), (3, 5));
        assert_eq!(&m.data[0..5], &[1.0, 2.0, 3.0, 0.0, 0.0]);
        assert_eq!(&m.data[10..15], &[0.0, 0.0, 1.0, 2.0, 3.0]);
        assert!(m.is_toeplitz());
    }

    #[test]
    fn deconv_band_layout() {
        let bank = ConvKernelBank::new(1, 3, 1, vec![1.0, 2.0, 3.0], vec![0.0]).unwrap();
        let m = deconv_toeplitz(&bank, 0, 0, 2);
        assert_eq!((m.rows, m.cols), (2, 4));
        assert_eq!(m.data, vec![1.0, 2.0, 3.0, 0.0, 0.0, 1.0, 2.0, 3.0]);
        assert!(m.is_toeplitz());
    }
}
