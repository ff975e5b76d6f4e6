use super::batches::CyclicBatches;
use super::config::TrainConfig;
use super::history::{EpochRecord, FakeSnapshot, TrainHistory};
use super::steps::{accuracy_percent, sample_latents, train_classifier_step, train_discriminator_step, train_generator_step};
use crate::dataset::{DatasetSplit, LabeledRef};
use crate::error::{Error, Result};
use crate::models::{DiscClassNet, Generator};
use crate::rng::{stream, tag};
use crate::tensor::AdamState;

#[derive(Debug, Clone)]
pub struct TrainOutput {
    /// `None` for the supervised baseline.
    pub generator: Option<Generator>,
    pub disc: DiscClassNet,
    pub history: TrainHistory,
}

const LABELED_STREAM: u64 = 0;
const UNLABELED_STREAM: u64 = 1;

fn mean(xs: &[f64]) -> Option<f64> {
    (!xs.is_empty()).then(|| xs.iter().sum::<f64>() / xs.len() as f64)
}

fn check_dataset(config: &TrainConfig, split: &DatasetSplit) -> Result<()> {
    split.validate()?;
    if split.train.is_empty() {
        return Err(Error::Config("train set is empty".into()));
    }
    if split.test.is_empty() {
        return Err(Error::Config("test set is empty".into()));
    }
    let wanted = config.labeled_per_class * split.classes;
    if wanted > split.train.len() {
        return Err(Error::Config(format!(
            "labeled-per-class {} x {} classes exceeds the {} train samples",
            config.labeled_per_class,
            split.classes,
            split.train.len()
        )));
    }
    if split.labeled_subset.len() != wanted {
        return Err(Error::Config(format!(
            "labeled subset has {} samples, expected {wanted} (labeled-per-class x classes)",
            split.labeled_subset.len()
        )));
    }
    Ok(())
}

/// Train with the given configuration on a prepared split (normalized, labeled subset chosen).
pub fn train(config: &TrainConfig, split: &DatasetSplit) -> Result<TrainOutput> {
    train_with_observer(config, split, |_, _, _| {})
}

/// Like [`train`], calling `observer(epoch, disc, generator)` at every epoch boundary,
/// starting with epoch 0 before any update.
pub fn train_with_observer<F>(config: &TrainConfig, split: &DatasetSplit, mut observer: F) -> Result<TrainOutput>
where
    F: FnMut(usize, &DiscClassNet, Option<&Generator>),
{
    config.validate()?;
    check_dataset(config, split)?;

    let mut disc = DiscClassNet::with_init(config.seed, config.init_std, config.leaky_slope);
    if disc.num_classes() != split.classes {
        return Err(Error::Config(format!(
            "the classifier has {} outputs but the dataset has {} classes",
            disc.num_classes(),
            split.classes
        )));
    }
    let mut gen = (!config.cnn_only).then(|| Generator::with_init_std(config.seed, config.simplified_g, config.init_std));

    let mut opt_c = AdamState::for_params(config.adam_c, &disc)?;
    let mut opt_d = AdamState::for_params(config.adam_d, &disc)?;
    let mut opt_g = match &gen {
        Some(g) => Some(AdamState::for_params(config.adam_g, g)?),
        None => None,
    };

    let labeled: Vec<LabeledRef<'_>> = split.labeled()?;
    let unlabeled: Vec<&[f64]> = split.unlabeled_pool();
    let test = split.labeled_test();
    let steps = if config.steps_per_epoch > 0 {
        config.steps_per_epoch
    } else {
        unlabeled.len().div_ceil(config.batch_size)
    };
    let labeled_batch = config.batch_size.min(labeled.len());
    let mut labeled_stream = CyclicBatches::new(labeled.len(), config.seed, LABELED_STREAM);
    let mut unlabeled_stream = CyclicBatches::new(unlabeled.len(), config.seed, UNLABELED_STREAM);
    let mut latent_rng = stream(config.seed, &[tag::LATENT]);

    let mut history = TrainHistory::default();
    let mut boundary = |epoch: usize, disc: &DiscClassNet, gen: Option<&Generator>, history: &mut TrainHistory| -> Result<()> {
        observer(epoch, disc, gen);
        if let Some(g) = gen {
            if config.snapshot_epochs.contains(&epoch) {
                history.snapshots.push(snapshot(epoch, config, disc, g)?);
            }
        }
        Ok(())
    };
    boundary(0, &disc, gen.as_ref(), &mut history)?;

    for epoch in 1..=config.epochs {
        let mut c_losses = Vec::with_capacity(steps);
        let mut d_losses = Vec::new();
        let mut g_losses = Vec::new();

        let mut c_step = |disc: &mut DiscClassNet, c_losses: &mut Vec<f64>| -> Result<()> {
            let idx = labeled_stream.next_batch(labeled_batch);
            let batch: Vec<LabeledRef<'_>> = idx.iter().map(|&i| labeled[i]).collect();
            if let Some(l) = train_classifier_step(disc, &mut opt_c, &batch)? {
                c_losses.push(l);
            }
            Ok(())
        };

        match (&mut gen, &mut opt_g) {
            (Some(g), Some(og)) => {
                let mut d_step =
                    |disc: &mut DiscClassNet, g: &Generator, rng: &mut crate::rng::Rng, d_losses: &mut Vec<f64>| -> Result<()> {
                        let idx = unlabeled_stream.next_batch(config.batch_size);
                        let real: Vec<&[f64]> = idx.iter().map(|&i| unlabeled[i]).collect();
                        d_losses.push(train_discriminator_step(disc, &mut opt_d, &real, g, rng)?);
                        Ok(())
                    };
                if config.phase_wise {
                    for _ in 0..steps {
                        c_step(&mut disc, &mut c_losses)?;
                    }
                    for _ in 0..steps {
                        d_step(&mut disc, g, &mut latent_rng, &mut d_losses)?;
                    }
                    for _ in 0..steps {
                        g_losses.push(train_generator_step(g, og, &disc, config.batch_size, &mut latent_rng)?);
                    }
                } else {
                    for _ in 0..steps {
                        c_step(&mut disc, &mut c_losses)?;
                        d_step(&mut disc, g, &mut latent_rng, &mut d_losses)?;
                        g_losses.push(train_generator_step(g, og, &disc, config.batch_size, &mut latent_rng)?);
                    }
                }
            }
            _ => {
                for _ in 0..steps {
                    c_step(&mut disc, &mut c_losses)?;
                }
            }
        }

        let test_accuracy = if epoch % config.eval_every == 0 || epoch == config.epochs {
            Some(accuracy_percent(&disc, &test)?)
        } else {
            None
        };
        let record = EpochRecord {
            epoch,
            c_loss: mean(&c_losses).unwrap_or(f64::NAN),
            d_loss: mean(&d_losses),
            g_loss: mean(&g_losses),
            test_accuracy,
        };
        let finite = record.c_loss.is_finite()
            && record.d_loss.is_none_or(f64::is_finite)
            && record.g_loss.is_none_or(f64::is_finite);
        if !finite {
            return Err(Error::Config(format!("non-finite loss at epoch {epoch}: {record:?}")));
        }
        log::debug!(
            "epoch {epoch}: c {:.4} d {:?} g {:?} acc {:?}",
            record.c_loss,
            record.d_loss,
            record.g_loss,
            record.test_accuracy
        );
        history.records.push(record);
        boundary(epoch, &disc, gen.as_ref(), &mut history)?;
    }

    Ok(TrainOutput {
        generator: gen,
        disc,
        history,
    })
}

fn snapshot(epoch: usize, config: &TrainConfig, disc: &DiscClassNet, gen: &Generator) -> Result<FakeSnapshot> {
    let mut rng = stream(config.seed, &[tag::DUMP, epoch as u64]);
    let samples = sample_latents(&mut rng, config.snapshot_samples)
        .iter()
        .map(|z| {
            let x = gen.generate(z)?;
            let label = disc.classify(&x)?.predicted;
            Ok((x, label))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FakeSnapshot { epoch, samples })
}
