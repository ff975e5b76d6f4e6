use crate::error::{Error, Result};

/// A `width x slices` activation volume.
///
/// Storage is slice-major: slice `h` occupies `data[h * width..(h + 1) * width]`, so the flat
/// buffer is the stacked column vector `[v_1; v_2; ...; v_H]`.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMap {
    width: usize,
    slices: usize,
    data: Vec<f64>,
}

impl FeatureMap {
    pub fn new(width: usize, slices: usize, data: Vec<f64>) -> Result<Self> {
        if width == 0 || slices == 0 {
            return Err(Error::shape("FeatureMap::new", "positive width and slices", format!("{width}x{slices}")));
        }
        if data.len() != width * slices {
            return Err(Error::shape("FeatureMap::new", width * slices, data.len()));
        }
        Ok(FeatureMap { width, slices, data })
    }

    pub fn zeros(width: usize, slices: usize) -> Self {
        assert!(width > 0 && slices > 0, "FeatureMap dimensions must be positive");
        FeatureMap {
            width,
            slices,
            data: vec![0.0; width * slices],
        }
    }

    /// A single-slice map wrapping a plain vector.
    pub fn from_vec(values: Vec<f64>) -> Result<Self> {
        let w = values.len();
        Self::new(w, 1, values)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn slices(&self) -> usize {
        self.slices
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    pub fn slice(&self, h: usize) -> &[f64] {
        &self.data[h * self.width..(h + 1) * self.width]
    }

    pub fn get(&self, h: usize, i: usize) -> f64 {
        self.data[h * self.width + i]
    }

    /// Reinterpret the buffer with a new shape of the same total size.
    pub fn reshape(self, width: usize, slices: usize) -> Result<Self> {
        Self::new(width, slices, self.data)
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }
}

/// Inner product of two equally sized buffers.
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slice_major_layout() {
        let fm = FeatureMap::new(3, 2, vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0]).unwrap();
        assert_eq!(fm.slice(1), &[4.0, 5.0, 6.0]);
        assert_eq!(fm.get(0, 2), 3.0);
    }

    #[test]
    fn rejects_bad_length() {
        assert!(FeatureMap::new(3, 2, vec![0.0; 5]).is_err());
        assert!(FeatureMap::new(0, 2, vec![]).is_err());
    }

    #[test]
    fn reshape_keeps_order() {
        let fm = FeatureMap::from_vec((0..6).map(f64::from).collect()).unwrap();
        let r = fm.reshape(3, 2).unwrap();
        assert_eq!(r.slice(1), &[3.0, 4.0, 5.0]);
    }
}
