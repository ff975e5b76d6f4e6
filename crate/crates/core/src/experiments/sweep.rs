use std::fmt::Write as _;

use crate::dataset::DatasetSplit;
use crate::error::Result;
use crate::trainer::{train, ModelKind, TrainConfig};

use super::data::with_labels;

/// One training run of the sweep. `accuracy` is `None` when the run failed.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepCell {
    pub budget: usize,
    pub model: ModelKind,
    pub seed: u64,
    pub accuracy: Option<f64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub budget: usize,
    pub model: ModelKind,
    pub mean: Option<f64>,
    pub std: Option<f64>,
    pub accuracies: Vec<f64>,
    pub failed: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    /// Sorted by (budget, model, seed).
    pub cells: Vec<SweepCell>,
    pub seeds: Vec<u64>,
}

/// Sample mean and standard deviation (n - 1 denominator; 0 for a single value).
pub fn mean_std(xs: &[f64]) -> Option<(f64, f64)> {
    if xs.is_empty() {
        return None;
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = if xs.len() > 1 {
        xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    Some((mean, var.sqrt()))
}

/// Train and evaluate every (budget, model, seed) combination on `split`.
///
/// Within one (budget, seed) pair all models see the same labeled subset. Failed runs are
/// recorded and the sweep moves on.
pub fn run_sweep(
    base: &TrainConfig,
    split: &DatasetSplit,
    budgets: &[usize],
    models: &[ModelKind],
    seeds: &[u64],
) -> Result<SweepResult> {
    let mut budgets = budgets.to_vec();
    budgets.sort_unstable();
    budgets.dedup();
    let mut models = models.to_vec();
    models.sort_unstable();
    models.dedup();
    let mut seeds = seeds.to_vec();
    seeds.sort_unstable();
    seeds.dedup();

    let mut cells = Vec::new();
    for &budget in &budgets {
        let per_class = budget / split.classes;
        for &model in &models {
            for &seed in &seeds {
                let config = TrainConfig {
                    labeled_per_class: per_class,
                    seed,
                    ..base.clone()
                }
                .with_model(model);
                let outcome = with_labels(split, per_class, seed).and_then(|s| train(&config, &s));
                let cell = match outcome {
                    Ok(out) => {
                        let acc = out.history.final_accuracy();
                        log::info!("budget {budget} {} seed {seed}: {acc:?}", model.tag());
                        SweepCell {
                            budget,
                            model,
                            seed,
                            accuracy: acc,
                            error: acc.is_none().then(|| "no accuracy recorded".to_string()),
                        }
                    }
                    Err(e) => {
                        log::error!("budget {budget} {} seed {seed} failed: {e}", model.tag());
                        SweepCell {
                            budget,
                            model,
                            seed,
                            accuracy: None,
                            error: Some(e.to_string()),
                        }
                    }
                };
                cells.push(cell);
            }
        }
    }
    Ok(SweepResult { cells, seeds })
}

impl SweepResult {
    pub fn budgets(&self) -> Vec<usize> {
        let mut b: Vec<usize> = self.cells.iter().map(|c| c.budget).collect();
        b.dedup();
        b
    }

    pub fn models(&self) -> Vec<ModelKind> {
        let mut m: Vec<ModelKind> = self.cells.iter().map(|c| c.model).collect();
        m.sort_unstable();
        m.dedup();
        m
    }

    pub fn row(&self, budget: usize, model: ModelKind) -> Option<SweepRow> {
        let cells: Vec<&SweepCell> = self.cells.iter().filter(|c| c.budget == budget && c.model == model).collect();
        if cells.is_empty() {
            return None;
        }
        let accuracies: Vec<f64> = cells.iter().filter_map(|c| c.accuracy).collect();
        let stats = mean_std(&accuracies);
        Some(SweepRow {
            budget,
            model,
            mean: stats.map(|s| s.0),
            std: stats.map(|s| s.1),
            failed: cells.len() - accuracies.len(),
            accuracies,
        })
    }

    pub fn rows(&self) -> Vec<SweepRow> {
        let mut rows = Vec::new();
        for b in self.budgets() {
            for m in self.models() {
                rows.extend(self.row(b, m));
            }
        }
        rows
    }

    pub fn mean(&self, budget: usize, model: ModelKind) -> Option<f64> {
        self.row(budget, model).and_then(|r| r.mean)
    }

    /// Per-run CSV: `budget,model,seed,accuracy,status`.
    pub fn cells_csv(&self) -> String {
        let mut out = String::from("budget,model,seed,accuracy,status\n");
        for c in &self.cells {
            let acc = c.accuracy.map(|a| a.to_string()).unwrap_or_default();
            let status = if c.accuracy.is_some() { "ok" } else { "failed" };
            writeln!(out, "{},{},{},{acc},{status}", c.budget, c.model.tag(), c.seed).expect("write to String");
        }
        out
    }

    /// Aggregate CSV: `budget,model,mean,std,seeds,failed,per_seed` with per-seed values
    /// separated by `;`.
    pub fn summary_csv(&self) -> String {
        let mut out = String::from("budget,model,mean,std,seeds,failed,per_seed\n");
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        for r in self.rows() {
            let per_seed: Vec<String> = r.accuracies.iter().map(|a| a.to_string()).collect();
            writeln!(
                out,
                "{},{},{},{},{},{},{}",
                r.budget,
                r.model.tag(),
                opt(r.mean),
                opt(r.std),
                r.accuracies.len() + r.failed,
                r.failed,
                per_seed.join(";")
            )
            .expect("write to String");
        }
        out
    }

    /// Plain-text table, one row per budget and one column per model.
    pub fn table(&self) -> String {
        let models = self.models();
        let mut out = String::new();
        write!(out, "{:>8}", "Labeled").expect("write to String");
        for m in &models {
            write!(out, " | {:>20}", m.tag()).expect("write to String");
        }
        out.push('\n');
        out.push_str(&"-".repeat(8 + 23 * models.len()));
        out.push('\n');
        for b in self.budgets() {
            write!(out, "{b:>8}").expect("write to String");
            for &m in &models {
                let cell = match self.row(b, m) {
                    Some(SweepRow {
                        mean: Some(mean),
                        std: Some(std),
                        failed,
                        ..
                    }) => {
                        let mark = if failed > 0 { "*" } else { "" };
                        format!("{mean:.2}% ± {std:.2}{mark}")
                    }
                    Some(_) => "failed".to_string(),
                    None => "-".to_string(),
                };
                write!(out, " | {cell:>20}").expect("write to String");
            }
            out.push('\n');
        }
        writeln!(out, "mean ± std over {} seed(s); * = some runs failed", self.seeds.len()).expect("write to String");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cell(budget: usize, model: ModelKind, seed: u64, accuracy: Option<f64>) -> SweepCell {
        SweepCell {
            budget,
            model,
            seed,
            accuracy,
            error: accuracy.is_none().then(|| "boom".into()),
        }
    }

    #[test]
    fn mean_std_matches_hand_values() {
        let (m, s) = mean_std(&[1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(m, 2.5);
        assert!((s - (5.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert_eq!(mean_std(&[7.0]), Some((7.0, 0.0)));
        assert_eq!(mean_std(&[]), None);
    }

    #[test]
    fn rows_skip_failed_cells() {
        let r = SweepResult {
            cells: vec![
                cell(16, ModelKind::Dcgan, 1, Some(80.0)),
                cell(16, ModelKind::Dcgan, 2, None),
                cell(16, ModelKind::Cnn, 1, Some(50.0)),
                cell(16, ModelKind::Cnn, 2, Some(60.0)),
            ],
            seeds: vec![1, 2],
        };
        let row = r.row(16, ModelKind::Dcgan).unwrap();
        assert_eq!(row.mean, Some(80.0));
        assert_eq!(row.failed, 1);
        assert_eq!(r.mean(16, ModelKind::Cnn), Some(55.0));
        assert!(r.cells_csv().contains("16,dcgan,2,,failed"));
        assert!(r.summary_csv().contains("16,cnn,55,"));
        let t = r.table();
        assert!(t.contains("80.00% ± 0.00*"), "{t}");
        assert!(t.contains("dcgan") && t.contains("cnn"));
    }
}
