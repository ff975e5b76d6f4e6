use serde::{Deserialize, Serialize};

use super::split::DatasetSplit;
use crate::error::{Error, Result};

/// Affine map sending the train-set range `[min, max]` onto `[-1, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Normalization {
    pub min: f64,
    pub max: f64,
}

impl Normalization {
    pub fn apply(&self, x: f64) -> f64 {
        2.0 * ((x - self.min) / (self.max - self.min)) - 1.0
    }

    pub fn invert(&self, y: f64) -> f64 {
        (y + 1.0) / 2.0 * (self.max - self.min) + self.min
    }

    pub fn denormalize(&self, values: &[f64]) -> Vec<f64> {
        values.iter().map(|v| self.invert(*v)).collect()
    }
}

/// Normalize with the train set's global min/max. Train values land in `[-1, 1]` with both
/// ends attained; test values use the same map and are clamped.
pub fn normalize(split: &DatasetSplit) -> Result<DatasetSplit> {
    if split.train.is_empty() {
        return Err(Error::Dataset("cannot normalize an empty train set".into()));
    }
    let (min, max) = split
        .train
        .iter()
        .flat_map(|s| s.values.iter().copied())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if !(min.is_finite() && max.is_finite()) || min >= max {
        return Err(Error::Dataset(format!("degenerate train range [{min}, {max}]")));
    }
    let norm = Normalization { min, max };
    let mut out = split.clone();
    for s in &mut out.train {
        s.values.iter_mut().for_each(|v| *v = norm.apply(*v));
    }
    for s in &mut out.test {
        s.values.iter_mut().for_each(|v| *v = norm.apply(*v).clamp(-1.0, 1.0));
    }
    out.normalization = Some(norm);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::CsiSample;
    use crate::label::ClassLabel;

    fn split_with(train: Vec<Vec<f64>>, test: Vec<Vec<f64>>) -> DatasetSplit {
        let mk = |v: Vec<f64>| CsiSample {
            values: v,
            label: ClassLabel::new(1),
        };
        DatasetSplit {
            classes: 1,
            train: train.into_iter().map(mk).collect(),
            test: test.into_iter().map(mk).collect(),
            labeled_subset: vec![],
            normalization: None,
        }
    }

    #[test]
    fn midpoint_maps_to_zero() {
        let s = split_with(vec![vec![0.0, 5.0, 10.0]], vec![vec![5.0, 12.0, -3.0]]);
        let n = normalize(&s).unwrap();
        assert_eq!(n.train[0].values, vec![-1.0, 0.0, 1.0]);
        assert_eq!(n.test[0].values, vec![0.0, 1.0, -1.0]);
    }

    #[test]
    fn round_trip_and_extremes() {
        let raw = vec![vec![0.3, -2.7, 9.125, 4.0], vec![1.0 / 3.0, 7.7, -0.1, 2.2]];
        let s = split_with(raw.clone(), vec![]);
        let n = normalize(&s).unwrap();
        let norm = n.normalization.unwrap();
        let max_abs = n.train.iter().flat_map(|s| s.values.iter()).fold(0.0f64, |a, v| a.max(v.abs()));
        assert_eq!(max_abs, 1.0);
        for (orig, s) in raw.iter().zip(&n.train) {
            for (o, v) in orig.iter().zip(norm.denormalize(&s.values)) {
                assert!((o - v).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn degenerate_range_is_error() {
        let s = split_with(vec![vec![2.0, 2.0]], vec![]);
        assert!(normalize(&s).is_err());
        let empty = split_with(vec![], vec![]);
        assert!(normalize(&empty).is_err());
    }
}
