//! 1-D cross-correlation and its transpose over slice-major feature maps.
//!
//! Both operations are evaluated tap by tap: for kernel tap `j` the contribution is a
//! `K x D` by `D x W` matrix product against the input shifted by `j`. This is the banded
//! Toeplitz product written without materializing the band.

use rand::Rng;

use super::feature_map::FeatureMap;
use super::gemm::{gemm, View};
use super::params::{gaussian_fill, Parameters};
use crate::error::{Error, Result};

/// `K` kernels of size `F x D` plus one bias per kernel.
///
/// Weights are stored as `[k][j][d]`: kernel `k`, tap `j`, input slice `d`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvKernelBank {
    kernels: usize,
    size: usize,
    depth: usize,
    stride: usize,
    weights: Vec<f64>,
    biases: Vec<f64>,
}

impl ConvKernelBank {
    pub fn new(kernels: usize, size: usize, depth: usize, weights: Vec<f64>, biases: Vec<f64>) -> Result<Self> {
        if kernels == 0 || size == 0 || depth == 0 {
            return Err(Error::shape(
                "ConvKernelBank::new",
                "K, F, D >= 1",
                format!("K={kernels} F={size} D={depth}"),
            ));
        }
        if weights.len() != kernels * size * depth {
            return Err(Error::shape("ConvKernelBank::new weights", kernels * size * depth, weights.len()));
        }
        if biases.len() != kernels {
            return Err(Error::shape("ConvKernelBank::new biases", kernels, biases.len()));
        }
        Ok(ConvKernelBank {
            kernels,
            size,
            depth,
            stride: 1,
            weights,
            biases,
        })
    }

    pub fn zeros(kernels: usize, size: usize, depth: usize) -> Self {
        Self::new(
            kernels,
            size,
            depth,
            vec![0.0; kernels * size * depth],
            vec![0.0; kernels],
        )
        .expect("zero bank with positive dimensions")
    }

    pub fn gaussian<R: Rng + ?Sized>(kernels: usize, size: usize, depth: usize, std: f64, rng: &mut R) -> Self {
        let mut bank = Self::zeros(kernels, size, depth);
        gaussian_fill(&mut bank.weights, std, rng);
        bank
    }

    /// Number of kernels `K` (output slices).
    pub fn kernels(&self) -> usize {
        self.kernels
    }

    /// Kernel length `F`.
    pub fn size(&self) -> usize {
        self.size
    }

    /// Kernel depth `D` (input slices).
    pub fn depth(&self) -> usize {
        self.depth
    }

    /// Always 1 here.
    pub fn stride(&self) -> usize {
        self.stride
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weights_mut(&mut self) -> &mut [f64] {
        &mut self.weights
    }

    pub fn biases(&self) -> &[f64] {
        &self.biases
    }

    pub fn biases_mut(&mut self) -> &mut [f64] {
        &mut self.biases
    }

    pub fn weight(&self, k: usize, j: usize, d: usize) -> f64 {
        self.weights[(k * self.size + j) * self.depth + d]
    }

    /// Bank with the roles of `K` and `D` exchanged and zero biases; the deconvolution with the
    /// result is the adjoint of the convolution with `self`.
    pub fn transposed(&self) -> Self {
        let mut t = Self::zeros(self.depth, self.size, self.kernels);
        for k in 0..self.kernels {
            for j in 0..self.size {
                for d in 0..self.depth {
                    t.weights[(d * self.size + j) * self.kernels + k] = self.weight(k, j, d);
                }
            }
        }
        t
    }

    /// Tap `j` as a `K x D` matrix view.
    fn tap(&self, j: usize) -> View<'_> {
        View::new(&self.weights[j * self.depth..], self.kernels, self.depth, self.size * self.depth, 1)
    }
}

impl Parameters for ConvKernelBank {
    fn tensors(&self) -> Vec<&[f64]> {
        vec![&self.weights, &self.biases]
    }

    fn tensors_mut(&mut self) -> Vec<&mut [f64]> {
        vec![&mut self.weights, &mut self.biases]
    }
}

/// `(W - F) / S + 1`, or `None` when the kernel does not fit.
pub fn conv_output_width(width: usize, size: usize, stride: usize) -> Option<usize> {
    if width < size || stride == 0 {
        None
    } else {
        Some((width - size) / stride + 1)
    }
}

/// `S (W - 1) + F - 2 crop`, or `None` when the crop leaves nothing.
pub fn deconv_output_width(width: usize, size: usize, stride: usize, crop: usize) -> Option<usize> {
    if width == 0 || stride == 0 {
        return None;
    }
    let full = stride * (width - 1) + size;
    full.checked_sub(2 * crop).filter(|w| *w >= 1)
}

fn add_bias(out: &mut [f64], biases: &[f64], width: usize) {
    for (row, b) in out.chunks_exact_mut(width).zip(biases) {
        row.iter_mut().for_each(|v| *v += b);
    }
}

fn check_depth(op: &'static str, k: &ConvKernelBank, input: &FeatureMap) -> Result<()> {
    if k.depth != input.slices() {
        return Err(Error::shape(op, format!("{} input slices", k.depth), input.slices()));
    }
    Ok(())
}

/// Cross-correlation (no kernel flip):
/// `out[k][i] = sum_d sum_j w[k][j][d] * a[d][i + j] + b[k]`.
pub fn conv1d_forward(a: &FeatureMap, k: &ConvKernelBank) -> Result<FeatureMap> {
    check_depth("conv1d_forward", k, a)?;
    let w_in = a.width();
    let w_out = conv_output_width(w_in, k.size, k.stride)
        .ok_or_else(|| Error::shape("conv1d_forward", format!("width >= {}", k.size), w_in))?;
    let mut out = vec![0.0; k.kernels * w_out];
    for j in 0..k.size {
        let shifted = View::new(&a.data()[j..], k.depth, w_out, w_in, 1);
        gemm(k.tap(j), shifted, if j == 0 { 0.0 } else { 1.0 }, &mut out, w_out, 1);
    }
    add_bias(&mut out, &k.biases, w_out);
    FeatureMap::new(w_out, k.kernels, out)
}

/// Gradient of [`conv1d_forward`] with respect to its input; parameter gradients are
/// accumulated into `grads` when given.
pub fn conv1d_backward(
    a: &FeatureMap,
    k: &ConvKernelBank,
    grad_out: &FeatureMap,
    grads: Option<&mut ConvKernelBank>,
) -> Result<FeatureMap> {
    check_depth("conv1d_backward", k, a)?;
    let w_in = a.width();
    let w_out = conv_output_width(w_in, k.size, k.stride)
        .ok_or_else(|| Error::shape("conv1d_backward", format!("width >= {}", k.size), w_in))?;
    if grad_out.width() != w_out || grad_out.slices() != k.kernels {
        return Err(Error::shape(
            "conv1d_backward grad",
            format!("{w_out}x{}", k.kernels),
            format!("{}x{}", grad_out.width(), grad_out.slices()),
        ));
    }
    let dy = View::new(grad_out.data(), k.kernels, w_out, w_out, 1);

    let mut dx = vec![0.0; k.depth * w_in];
    for j in 0..k.size {
        gemm(k.tap(j).t(), dy, 1.0, &mut dx[j..], w_in, 1);
    }

    if let Some(g) = grads {
        check_same_bank("conv1d_backward grads", k, g)?;
        for j in 0..k.size {
            let shifted_t = View::new(&a.data()[j..], k.depth, w_out, w_in, 1).t();
            gemm(dy, shifted_t, 1.0, &mut g.weights[j * k.depth..], k.size * k.depth, 1);
        }
        for (b, row) in g.biases.iter_mut().zip(grad_out.data().chunks_exact(w_out)) {
            *b += row.iter().sum::<f64>();
        }
    }
    FeatureMap::new(w_in, k.depth, dx)
}

/// Transposed convolution: `full[k][i + j] += w[k][j][d] * v[d][i]`, then `crop` positions are
/// removed from each end and the bias is added to the survivors.
pub fn deconv1d_forward(v: &FeatureMap, k: &ConvKernelBank, crop: usize) -> Result<FeatureMap> {
    check_depth("deconv1d_forward", k, v)?;
    let w_in = v.width();
    let w_out = deconv_output_width(w_in, k.size, k.stride, crop)
        .ok_or_else(|| Error::shape("deconv1d_forward", "crop leaving width >= 1", format!("crop {crop}")))?;
    let w_full = w_out + 2 * crop;
    let vin = View::new(v.data(), k.depth, w_in, w_in, 1);
    let mut full = vec![0.0; k.kernels * w_full];
    for j in 0..k.size {
        gemm(k.tap(j), vin, 1.0, &mut full[j..], w_full, 1);
    }
    let mut out = if crop == 0 {
        full
    } else {
        full.chunks_exact(w_full)
            .flat_map(|row| row[crop..crop + w_out].iter().copied())
            .collect()
    };
    add_bias(&mut out, &k.biases, w_out);
    FeatureMap::new(w_out, k.kernels, out)
}

/// Gradient of [`deconv1d_forward`] with respect to its input; parameter gradients are
/// accumulated into `grads` when given.
pub fn deconv1d_backward(
    v: &FeatureMap,
    k: &ConvKernelBank,
    crop: usize,
    grad_out: &FeatureMap,
    grads: Option<&mut ConvKernelBank>,
) -> Result<FeatureMap> {
    check_depth("deconv1d_backward", k, v)?;
    let w_in = v.width();
    let w_out = deconv_output_width(w_in, k.size, k.stride, crop)
        .ok_or_else(|| Error::shape("deconv1d_backward", "crop leaving width >= 1", format!("crop {crop}")))?;
    if grad_out.width() != w_out || grad_out.slices() != k.kernels {
        return Err(Error::shape(
            "deconv1d_backward grad",
            format!("{w_out}x{}", k.kernels),
            format!("{}x{}", grad_out.width(), grad_out.slices()),
        ));
    }
    let w_full = w_out + 2 * crop;
    // Cropped positions receive zero gradient.
    let padded;
    let dy_full: &[f64] = if crop == 0 {
        grad_out.data()
    } else {
        let mut p = vec![0.0; k.kernels * w_full];
        for (dst, src) in p.chunks_exact_mut(w_full).zip(grad_out.data().chunks_exact(w_out)) {
            dst[crop..crop + w_out].copy_from_slice(src);
        }
        padded = p;
        &padded
    };

    let mut dv = vec![0.0; k.depth * w_in];
    for j in 0..k.size {
        let dy_j = View::new(&dy_full[j..], k.kernels, w_in, w_full, 1);
        gemm(k.tap(j).t(), dy_j, 1.0, &mut dv, w_in, 1);
    }

    if let Some(g) = grads {
        check_same_bank("deconv1d_backward grads", k, g)?;
        let vt = View::new(v.data(), k.depth, w_in, w_in, 1).t();
        for j in 0..k.size {
            let dy_j = View::new(&dy_full[j..], k.kernels, w_in, w_full, 1);
            gemm(dy_j, vt, 1.0, &mut g.weights[j * k.depth..], k.size * k.depth, 1);
        }
        for (b, row) in g.biases.iter_mut().zip(grad_out.data().chunks_exact(w_out)) {
            *b += row.iter().sum::<f64>();
        }
    }
    FeatureMap::new(w_in, k.depth, dv)
}

fn check_same_bank(op: &'static str, k: &ConvKernelBank, g: &ConvKernelBank) -> Result<()> {
    if (k.kernels, k.size, k.depth) != (g.kernels, g.size, g.depth) {
        return Err(Error::shape(
            op,
            format!("K={} F={} D={}", k.kernels, k.size, k.depth),
            format!("K={} F={} D={}", g.kernels, g.size, g.depth),
        ));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single(values: &[f64]) -> FeatureMap {
        FeatureMap::from_vec(values.to_vec()).unwrap()
    }

    #[test]
    fn conv_hand_expansion() {
        let k = ConvKernelBank::new(1, 3, 1, vec![1.0, 0.0, -1.0], vec![0.0]).unwrap();
        let out = conv1d_forward(&single(&[1.0, 2.0, 3.0, 4.0]), &k).unwrap();
        assert_eq!(out.data(), &[-2.0, -2.0]);
    }

    #[test]
    fn deconv_hand_expansion() {
        let k = ConvKernelBank::new(1, 3, 1, vec![1.0, 1.0, 1.0], vec![0.0]).unwrap();
        let out = deconv1d_forward(&single(&[1.0, 2.0]), &k, 0).unwrap();
        assert_eq!(out.data(), &[1.0, 3.0, 3.0, 2.0]);
    }

    #[test]
    fn deconv_crop_and_bias() {
        let k = ConvKernelBank::new(1, 3, 1, vec![1.0, 1.0, 1.0], vec![0.5]).unwrap();
        let out = deconv1d_forward(&single(&[1.0, 2.0]), &k, 1).unwrap();
        assert_eq!(out.data(), &[3.5, 3.5]);
    }

    #[test]
    fn paper_widths() {
        assert_eq!(conv_output_width(120, 5, 1), Some(116));
        assert_eq!(deconv_output_width(108, 5, 1, 0), Some(112));
        assert_eq!(deconv_output_width(120, 5, 1, 2), Some(120));
    }

    #[test]
    fn width_smaller_than_kernel_is_error() {
        let k = ConvKernelBank::zeros(1, 5, 1);
        assert!(conv1d_forward(&single(&[1.0; 4]), &k).is_err());
    }

    #[test]
    fn depth_mismatch_is_error() {
        let k = ConvKernelBank::zeros(2, 3, 2);
        assert!(conv1d_forward(&single(&[1.0; 8]), &k).is_err());
        assert!(deconv1d_forward(&single(&[1.0; 8]), &k, 0).is_err());
    }

    #[test]
    fn oversized_crop_is_error() {
        let k = ConvKernelBank::zeros(1, 3, 1);
        // full width 4, crop 2 per side leaves 0
        assert!(deconv1d_forward(&single(&[1.0, 2.0]), &k, 2).is_err());
        assert!(deconv1d_forward(&single(&[1.0, 2.0]), &k, 1).is_ok());
    }

    #[test]
    fn transposed_swaps_roles() {
        let k = ConvKernelBank::new(2, 2, 3, (0..12).map(f64::from).collect(), vec![0.0; 2]).unwrap();
        let t = k.transposed();
        assert_eq!((t.kernels(), t.size(), t.depth()), (3, 2, 2));
        for kk in 0..2 {
            for j in 0..2 {
                for d in 0..3 {
                    assert_eq!(t.weight(d, j, kk), k.weight(kk, j, d));
                }
            }
        }
    }
}
