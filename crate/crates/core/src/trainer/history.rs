use std::fmt::Write as _;

use crate::label::ClassLabel;

/// Per-epoch means of the step losses, plus test accuracy when it was evaluated.
#[derive(Debug, Clone, PartialEq)]
pub struct EpochRecord {
    pub epoch: usize,
    pub c_loss: f64,
    pub d_loss: Option<f64>,
    pub g_loss: Option<f64>,
    /// Percent.
    pub test_accuracy: Option<f64>,
}

/// Generated samples at one epoch boundary, each labeled by the classifier head.
#[derive(Debug, Clone, PartialEq)]
pub struct FakeSnapshot {
    pub epoch: usize,
    pub samples: Vec<(Vec<f64>, ClassLabel)>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct TrainHistory {
    pub records: Vec<EpochRecord>,
    pub snapshots: Vec<FakeSnapshot>,
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

impl TrainHistory {
    pub fn final_accuracy(&self) -> Option<f64> {
        self.records.iter().rev().find_map(|r| r.test_accuracy)
    }

    pub fn snapshot(&self, epoch: usize) -> Option<&FakeSnapshot> {
        self.snapshots.iter().find(|s| s.epoch == epoch)
    }

    /// `epoch,c_loss,d_loss,g_loss,test_accuracy`; missing values are empty fields.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("epoch,c_loss,d_loss,g_loss,test_accuracy\n");
        for r in &self.records {
            writeln!(
                out,
                "{},{},{},{},{}",
                r.epoch,
                r.c_loss,
                opt(r.d_loss),
                opt(r.g_loss),
                opt(r.test_accuracy)
            )
            .expect("write to String");
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let h = TrainHistory {
            records: vec![EpochRecord {
                epoch: 1,
                c_loss: 2.5,
                d_loss: None,
                g_loss: Some(0.75),
                test_accuracy: Some(50.0),
            }],
            snapshots: vec![],
        };
        assert_eq!(h.to_csv(), "epoch,c_loss,d_loss,g_loss,test_accuracy\n1,2.5,,0.75,50\n");
        assert_eq!(h.final_accuracy(), Some(50.0));
    }
}
