use rand::Rng;
use rand_distr::{Distribution, Normal};

/// Anything that owns trainable parameter tensors.
///
/// `tensors` and `tensors_mut` must list the same buffers in the same order; optimizers and
/// gradient buffers rely on that ordering.
pub trait Parameters {
    fn tensors(&self) -> Vec<&[f64]>;
    fn tensors_mut(&mut self) -> Vec<&mut [f64]>;

    fn num_parameters(&self) -> usize {
        self.tensors().iter().map(|t| t.len()).sum()
    }

    fn shapes(&self) -> Vec<usize> {
        self.tensors().iter().map(|t| t.len()).collect()
    }

    fn zero(&mut self) {
        for t in self.tensors_mut() {
            t.fill(0.0);
        }
    }

    /// Flat copy of every parameter, in tensor order.
    fn to_flat(&self) -> Vec<f64> {
        self.tensors().concat()
    }

    fn load_flat(&mut self, flat: &[f64]) {
        assert_eq!(flat.len(), self.num_parameters(), "flat parameter length");
        let mut offset = 0;
        for t in self.tensors_mut() {
            t.copy_from_slice(&flat[offset..offset + t.len()]);
            offset += t.len();
        }
    }

    fn scale(&mut self, factor: f64) {
        for t in self.tensors_mut() {
            t.iter_mut().for_each(|v| *v *= factor);
        }
    }
}

/// Zero-mean Gaussian fill.
pub(crate) fn gaussian_fill<R: Rng + ?Sized>(buf: &mut [f64], std: f64, rng: &mut R) {
    if std == 0.0 {
        buf.fill(0.0);
        return;
    }
    let normal = Normal::new(0.0, std).expect("init std must be finite and non-negative");
    for v in buf.iter_mut() {
        *v = normal.sample(rng);
    }
}
