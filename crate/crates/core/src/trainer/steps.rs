use rand_distr::{Distribution, StandardNormal};

use crate::dataset::LabeledRef;
use crate::error::{Error, Result};
use crate::models::{DiscClassNet, Generator, Tape, LATENT_DIM};
use crate::rng::Rng;
use crate::tensor::{lambda_bce_with_grad, softmax_ce_with_grad, AdamState, Parameters};

pub fn sample_latents(rng: &mut Rng, n: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|_| (0..LATENT_DIM).map(|_| StandardNormal.sample(rng)).collect())
        .collect()
}

/// One classifier update: mean categorical cross-entropy of the softmax head over a labeled
/// batch. Returns `None` (and changes nothing) for an empty batch.
pub fn train_classifier_step(net: &mut DiscClassNet, opt: &mut AdamState, batch: &[LabeledRef<'_>]) -> Result<Option<f64>> {
    if batch.is_empty() {
        log::warn!("classifier step skipped: empty labeled batch");
        return Ok(None);
    }
    let classes = net.num_classes();
    let mut grads = DiscClassNet::zeros();
    let mut loss = 0.0;
    for s in batch {
        if s.label.index() >= classes {
            return Err(Error::Dataset(format!("label {} outside 1..={classes}", s.label)));
        }
        let cache = net.forward_cached(s.values)?;
        let (l, dc) = softmax_ce_with_grad(cache.logits(), s.label.index());
        loss += l;
        net.backward(&cache, &dc, Some(&mut grads))?;
    }
    let n = batch.len() as f64;
    grads.scale(1.0 / n);
    opt.step_params(net, &grads)?;
    Ok(Some(loss / n))
}

/// One discriminator update on `real` plus as many fresh fakes from `gen` (1:1), minimizing the
/// mean binary cross-entropy of the lambda head (real = 1, fake = 0). `gen` is only read.
pub fn train_discriminator_step(
    net: &mut DiscClassNet,
    opt: &mut AdamState,
    real: &[&[f64]],
    gen: &Generator,
    rng: &mut Rng,
) -> Result<f64> {
    if real.is_empty() {
        return Err(Error::Config("discriminator step needs a non-empty real batch".into()));
    }
    let latents = sample_latents(rng, real.len());
    let fakes = latents.iter().map(|z| gen.generate(z)).collect::<Result<Vec<_>>>()?;

    let mut grads = DiscClassNet::zeros();
    let mut loss = 0.0;
    let inputs = real.iter().map(|x| (*x, true)).chain(fakes.iter().map(|x| (x.as_slice(), false)));
    for (x, is_real) in inputs {
        let cache = net.forward_cached(x)?;
        let (l, dc) = lambda_bce_with_grad(cache.logits(), is_real);
        loss += l;
        net.backward(&cache, &dc, Some(&mut grads))?;
    }
    let n = (2 * real.len()) as f64;
    grads.scale(1.0 / n);
    opt.step_params(net, &grads)?;
    Ok(loss / n)
}

/// One generator update with `net` held fixed: `batch` fresh fakes are pushed towards the
/// "real" side of the lambda head (target 1).
pub fn train_generator_step(
    gen: &mut Generator,
    opt: &mut AdamState,
    net: &DiscClassNet,
    batch: usize,
    rng: &mut Rng,
) -> Result<f64> {
    if batch == 0 {
        return Err(Error::Config("generator step needs batch >= 1".into()));
    }
    let latents = sample_latents(rng, batch);
    let mut tape = Tape::new();
    let fakes = gen.forward_batch(&latents, &mut tape)?;
    let n = batch as f64;
    let mut loss = 0.0;
    let mut grad_outs = Vec::with_capacity(batch);
    for x in &fakes {
        let cache = net.forward_cached(x)?;
        let (l, dc) = lambda_bce_with_grad(cache.logits(), true);
        loss += l;
        let mut dx = net.backward(&cache, &dc, None)?;
        dx.iter_mut().for_each(|v| *v /= n);
        grad_outs.push(dx);
    }
    let mut grads = gen.zeros_like();
    gen.backward_batch(&mut tape, &grad_outs, &mut grads)?;
    opt.step_params(gen, &grads)?;
    Ok(loss / n)
}

/// Percentage of samples whose classifier arg-max equals the label.
pub fn accuracy_percent(net: &DiscClassNet, samples: &[LabeledRef<'_>]) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::Dataset("cannot evaluate on an empty test set".into()));
    }
    let mut hits = 0usize;
    for s in samples {
        if net.classify(s.values)?.predicted == s.label {
            hits += 1;
        }
    }
    Ok(100.0 * hits as f64 / samples.len() as f64)
}
