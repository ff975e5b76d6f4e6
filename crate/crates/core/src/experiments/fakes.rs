use std::fmt::Write as _;

use crate::dataset::DatasetSplit;
use crate::label::ClassLabel;
use crate::models::CSI_WIDTH;
use crate::trainer::FakeSnapshot;

/// Generated samples of one epoch with the labels the classifier assigned to them, and one real
/// train sample of the same label per fake.
#[derive(Debug, Clone, PartialEq)]
pub struct FakeDump {
    pub epoch: usize,
    pub fakes: Vec<(Vec<f64>, ClassLabel)>,
    pub reals: Vec<(Vec<f64>, ClassLabel)>,
}

impl FakeDump {
    /// Pair each fake with the next unused real train sample of its predicted class.
    pub fn from_snapshot(snapshot: &FakeSnapshot, split: &DatasetSplit) -> Self {
        let by_class = split.train_indices_by_class();
        let mut used = vec![0usize; split.classes];
        let reals = snapshot
            .samples
            .iter()
            .filter_map(|(_, label)| {
                let members = by_class.get(label.index())?;
                if members.is_empty() {
                    return None;
                }
                let k = used[label.index()];
                used[label.index()] += 1;
                Some((split.train[members[k % members.len()]].values.clone(), *label))
            })
            .collect();
        FakeDump {
            epoch: snapshot.epoch,
            fakes: snapshot.samples.clone(),
            reals,
        }
    }

    pub fn fakes_csv(&self) -> String {
        samples_csv(&self.fakes)
    }

    pub fn reals_csv(&self) -> String {
        samples_csv(&self.reals)
    }
}

fn samples_csv(samples: &[(Vec<f64>, ClassLabel)]) -> String {
    let mut h: Vec<String> = (1..=CSI_WIDTH).map(|c| format!("ch{c}")).collect();
    h.push("label".into());
    let mut out = h.join(",");
    out.push('\n');
    for (values, label) in samples {
        for v in values {
            write!(out, "{v},").expect("write to String");
        }
        writeln!(out, "{label}").expect("write to String");
    }
    out
}

/// Lag-1 autocorrelation of a sequence around its own mean; 0 for a constant sequence.
pub fn lag1_autocorrelation(x: &[f64]) -> f64 {
    if x.len() < 2 {
        return 0.0;
    }
    let mean = x.iter().sum::<f64>() / x.len() as f64;
    let var: f64 = x.iter().map(|v| (v - mean).powi(2)).sum();
    if var == 0.0 {
        return 0.0;
    }
    let cov: f64 = x.windows(2).map(|w| (w[0] - mean) * (w[1] - mean)).sum();
    cov / var
}

/// Per-class mean of the train samples (true labels), in the split's current units.
pub fn class_means(split: &DatasetSplit) -> Vec<Vec<f64>> {
    split
        .train_indices_by_class()
        .iter()
        .map(|members| {
            let mut mean = vec![0.0; CSI_WIDTH];
            for &i in members {
                for (m, v) in mean.iter_mut().zip(&split.train[i].values) {
                    *m += v;
                }
            }
            let n = members.len().max(1) as f64;
            mean.iter_mut().for_each(|m| *m /= n);
            mean
        })
        .collect()
}

fn l2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// For every class, the mean L2 distance from the fakes predicted as that class to the class's
/// real mean. `None` for classes no fake was assigned to.
pub fn fake_class_distances(samples: &[(Vec<f64>, ClassLabel)], means: &[Vec<f64>]) -> Vec<Option<f64>> {
    let mut sum = vec![0.0; means.len()];
    let mut count = vec![0usize; means.len()];
    for (x, label) in samples {
        if let Some(mean) = means.get(label.index()) {
            sum[label.index()] += l2(x, mean);
            count[label.index()] += 1;
        }
    }
    sum.iter().zip(&count).map(|(s, &n)| (n > 0).then(|| s / n as f64)).collect()
}

/// Mean L2 distance from all `samples` to `mean`, ignoring their labels.
pub fn mean_distance(samples: &[(Vec<f64>, ClassLabel)], mean: &[f64]) -> Option<f64> {
    (!samples.is_empty()).then(|| samples.iter().map(|(x, _)| l2(x, mean)).sum::<f64>() / samples.len() as f64)
}

/// Per-class comparison of early and late fakes against the real class means.
#[derive(Debug, Clone, PartialEq)]
pub struct ProgressionReport {
    pub early_epoch: usize,
    pub late_epoch: usize,
    /// `(class, early distance, late distance)`; late is `None` when no late fake got that label.
    pub classes: Vec<(ClassLabel, f64, Option<f64>)>,
}

impl ProgressionReport {
    /// Early fakes are scored per predicted class; a class the early fakes never received is
    /// scored with all early fakes.
    pub fn new(early: &FakeSnapshot, late: &FakeSnapshot, means: &[Vec<f64>]) -> Self {
        let e = fake_class_distances(&early.samples, means);
        let l = fake_class_distances(&late.samples, means);
        let classes = means
            .iter()
            .enumerate()
            .map(|(m, mean)| {
                let early_d = e[m].or_else(|| mean_distance(&early.samples, mean)).unwrap_or(f64::INFINITY);
                (ClassLabel::from_index(m), early_d, l[m])
            })
            .collect();
        ProgressionReport {
            early_epoch: early.epoch,
            late_epoch: late.epoch,
            classes,
        }
    }

    pub fn closer_count(&self) -> usize {
        self.classes.iter().filter(|(_, e, l)| l.is_some_and(|l| l < *e)).count()
    }

    pub fn to_csv(&self) -> String {
        let mut out = format!("class,epoch_{}_distance,epoch_{}_distance,closer\n", self.early_epoch, self.late_epoch);
        for (c, e, l) in &self.classes {
            let late = l.map(|v| v.to_string()).unwrap_or_default();
            let closer = l.is_some_and(|l| l < *e);
            writeln!(out, "{c},{e},{late},{closer}").expect("write to String");
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lag1_of_alternating_and_smooth_sequences() {
        let alt: Vec<f64> = (0..100).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 }).collect();
        assert!(lag1_autocorrelation(&alt) < -0.95);
        let ramp: Vec<f64> = (0..100).map(|i| i as f64).collect();
        assert!(lag1_autocorrelation(&ramp) > 0.95);
        assert_eq!(lag1_autocorrelation(&[3.0; 10]), 0.0);
    }

    #[test]
    fn distances_per_predicted_class() {
        let means = vec![vec![0.0; CSI_WIDTH], vec![1.0; CSI_WIDTH]];
        let l = |i| ClassLabel::from_index(i);
        let samples = vec![(vec![0.0; CSI_WIDTH], l(0)), (vec![2.0; CSI_WIDTH], l(0))];
        let d = fake_class_distances(&samples, &means);
        let w = (CSI_WIDTH as f64).sqrt();
        assert!((d[0].unwrap() - w).abs() < 1e-12);
        assert_eq!(d[1], None);

        let early = FakeSnapshot { epoch: 0, samples };
        let late = FakeSnapshot {
            epoch: 5,
            samples: vec![(vec![0.1; CSI_WIDTH], l(0)), (vec![1.0; CSI_WIDTH], l(1))],
        };
        let report = ProgressionReport::new(&early, &late, &means);
        assert_eq!(report.closer_count(), 2);
        assert!(report.to_csv().starts_with("class,epoch_0_distance,epoch_5_distance"));
    }
}
