//! The five commands. Each writes its outputs plus the resolved configuration into `out-dir`.

use std::fs;
use std::path::{Path, PathBuf};

use crate::dataset::{save_csv, synth_generate, DatasetSplit};
use crate::error::{Error, Result};
use crate::models::{Checkpoint, DiscClassNet};
use crate::trainer::{accuracy_percent, train, ModelKind, TrainOutput};

use super::config::ExperimentConfig;
use super::data::{load_dataset, with_labels};
use super::fakes::{class_means, FakeDump, ProgressionReport};
use super::sweep::{run_sweep, SweepResult};

pub const RESOLVED_CONFIG: &str = "resolved-config.toml";

fn prepare_out_dir(config: &ExperimentConfig) -> Result<()> {
    fs::create_dir_all(&config.out_dir)?;
    let echo = config.to_toml();
    log::info!("resolved configuration:\n{echo}");
    fs::write(config.out_dir.join(RESOLVED_CONFIG), echo)?;
    Ok(())
}

fn write(dir: &Path, name: &str, contents: impl AsRef<[u8]>) -> Result<PathBuf> {
    let path = dir.join(name);
    fs::write(&path, contents)?;
    Ok(path)
}

/// Synthesize the dataset and save it as `dataset.csv` (raw values, labeled subset tagged) with
/// generator parameters in `dataset.meta.toml`.
pub fn cmd_generate_data(config: &ExperimentConfig) -> Result<PathBuf> {
    if config.data_path.is_some() {
        return Err(Error::Config("generate-data synthesizes data; unset data-path".into()));
    }
    prepare_out_dir(config)?;
    let data = synth_generate(&config.synth_config())?;
    let split = with_labels(&data.split, config.labeled_per_class, config.seed)?;
    let path = config.out_dir.join("dataset.csv");
    save_csv(&split, &path)?;
    let meta = toml::to_string(&data.metadata).map_err(|e| Error::Dataset(e.to_string()))?;
    write(&config.out_dir, "dataset.meta.toml", meta)?;
    println!(
        "wrote {} ({} train, {} test, {} labeled; min template distance {:.4}, required {:.4})",
        path.display(),
        split.train.len(),
        split.test.len(),
        split.labeled_subset.len(),
        data.metadata.min_template_distance,
        data.metadata.required_distance
    );
    Ok(path)
}

/// Train one model, saving `history.csv`, `disc.ckpt`, `generator.ckpt` (when there is a
/// generator) and `summary.txt`.
pub fn cmd_train(config: &ExperimentConfig) -> Result<TrainOutput> {
    let split = with_labels(&load_dataset(config)?, config.labeled_per_class, config.seed)?;
    prepare_out_dir(config)?;
    let out = train(&config.train_config(), &split)?;
    let dir = &config.out_dir;
    write(dir, "history.csv", out.history.to_csv())?;
    Checkpoint::from(&out.disc).save(&dir.join("disc.ckpt"))?;
    if let Some(g) = &out.generator {
        Checkpoint::from(g).save(&dir.join("generator.ckpt"))?;
    }
    let acc = out.history.final_accuracy().unwrap_or(f64::NAN);
    let summary = format!(
        "model {}\nlabeled {} ({} per class)\nepochs {}\nseed {}\ntest accuracy {acc:.2}%\n",
        config.model.tag(),
        split.labeled_subset.len(),
        config.labeled_per_class,
        config.epochs,
        config.seed
    );
    write(dir, "summary.txt", &summary)?;
    print!("{summary}");
    Ok(out)
}

/// Test accuracy (percent) of `net` on the split's test set.
pub fn evaluate(net: &DiscClassNet, split: &DatasetSplit) -> Result<f64> {
    accuracy_percent(net, &split.labeled_test())
}

/// Score the classifier checkpoint on the configured dataset's test set.
pub fn cmd_evaluate(config: &ExperimentConfig) -> Result<f64> {
    let path = config.checkpoint_path();
    let net = DiscClassNet::try_from(Checkpoint::load(&path)?)?;
    let split = load_dataset(config)?;
    let acc = evaluate(&net, &split)?;
    prepare_out_dir(config)?;
    write(
        &config.out_dir,
        "evaluation.csv",
        format!("checkpoint,test_samples,accuracy\n{},{},{acc}\n", path.display(), split.test.len()),
    )?;
    println!("{} -> {acc:.2}% on {} test samples", path.display(), split.test.len());
    Ok(acc)
}

/// Label-budget sweep. Writes `sweep.csv` (one row per run), `sweep_summary.csv` and
/// `sweep_table.txt`.
pub fn cmd_sweep(config: &ExperimentConfig) -> Result<SweepResult> {
    config.validate_sweep()?;
    let split = load_dataset(config)?;
    prepare_out_dir(config)?;
    let result = run_sweep(&config.train_config(), &split, &config.budgets, &config.models, &config.seeds)?;
    let dir = &config.out_dir;
    write(dir, "sweep.csv", result.cells_csv())?;
    write(dir, "sweep_summary.csv", result.summary_csv())?;
    let table = result.table();
    write(dir, "sweep_table.txt", &table)?;
    print!("{table}");
    Ok(result)
}

/// Train with generated-sample snapshots at `dump-epochs`. Writes `fakes_epoch<E>.csv`,
/// `reals_epoch<E>.csv`, `history.csv` and `fake_progression.csv` comparing the first and last
/// dumped epochs.
pub fn cmd_dump_fakes(config: &ExperimentConfig) -> Result<Vec<FakeDump>> {
    if config.model == ModelKind::Cnn {
        return Err(Error::Config("dump-fakes needs a generator; model cnn has none".into()));
    }
    if config.dump_samples == 0 || config.dump_epochs.is_empty() {
        return Err(Error::Config("dump-fakes needs dump-samples >= 1 and at least one dump epoch".into()));
    }
    let mut train_config = config.train_config();
    train_config.snapshot_epochs = config.dump_epochs.clone();
    train_config.snapshot_samples = config.dump_samples;
    train_config.validate()?;
    let split = with_labels(&load_dataset(config)?, config.labeled_per_class, config.seed)?;
    prepare_out_dir(config)?;
    let out = train(&train_config, &split)?;

    let dir = &config.out_dir;
    write(dir, "history.csv", out.history.to_csv())?;
    let dumps: Vec<FakeDump> = out.history.snapshots.iter().map(|s| FakeDump::from_snapshot(s, &split)).collect();
    for d in &dumps {
        write(dir, &format!("fakes_epoch{}.csv", d.epoch), d.fakes_csv())?;
        write(dir, &format!("reals_epoch{}.csv", d.epoch), d.reals_csv())?;
    }
    if let (Some(first), Some(last)) = (out.history.snapshots.first(), out.history.snapshots.last()) {
        if first.epoch != last.epoch {
            let report = ProgressionReport::new(first, last, &class_means(&split));
            write(dir, "fake_progression.csv", report.to_csv())?;
            println!(
                "epoch {} fakes closer to their class mean than epoch {} fakes for {} of {} classes",
                last.epoch,
                first.epoch,
                report.closer_count(),
                report.classes.len()
            );
        }
    }
    println!("wrote {} dumps to {}", dumps.len(), dir.display());
    Ok(dumps)
}
