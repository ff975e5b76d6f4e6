use super::arch::*;
use super::tape::Tape;
use crate::error::{Error, Result};
use crate::label::ClassLabel;
use crate::rng::{stream, tag};
use crate::tensor::{
    argmax, conv1d_backward, conv1d_forward, dense_backward, dense_forward, lambda_real_prob, leaky_relu_backward,
    leaky_relu_inplace, log_sum_exp, softmax, ConvKernelBank, DenseParams, FeatureMap, Parameters, LEAKY_SLOPE,
};

/// Convolutional discriminator/classifier: 120 -> three LeakyReLU convolutions (116, 112,
/// 108 x 32) -> dense 3456 -> 16 logits.
///
/// The discriminator head `lambda` and the classifier head `softmax` both read the same logit
/// vector, so every parameter is shared between D and C.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscClassNet {
    pub(crate) conv: [ConvKernelBank; HIDDEN_LAYERS],
    pub(crate) fc: DenseParams,
    leaky_slope: f64,
    seed: u64,
}

#[derive(Debug, Clone)]
pub struct DiscCache {
    /// Inputs to each convolution (the sample itself, then each hidden activation) and the
    /// final activation that is flattened into the output layer.
    acts: Vec<FeatureMap>,
    pres: Vec<FeatureMap>,
    logits: Vec<f64>,
}

impl DiscCache {
    pub fn logits(&self) -> &[f64] {
        &self.logits
    }
}

/// Output of the classifier head.
#[derive(Debug, Clone, PartialEq)]
pub struct Classification {
    pub probabilities: Vec<f64>,
    pub predicted: ClassLabel,
}

pub fn build_discriminator(seed: u64) -> DiscClassNet {
    DiscClassNet::with_init(seed, INIT_STD, LEAKY_SLOPE)
}

impl DiscClassNet {
    pub fn with_init(seed: u64, std: f64, leaky_slope: f64) -> Self {
        verify_architecture().expect("architecture constants");
        let mut rng = stream(seed, &[tag::INIT_D]);
        let depths = [1, FILTERS, FILTERS];
        let conv = std::array::from_fn(|l| ConvKernelBank::gaussian(FILTERS, KERNEL_SIZE, depths[l], std, &mut rng));
        let flat = discriminator_flat_len().expect("architecture constants");
        let fc = DenseParams::gaussian(NUM_CLASSES, flat, std, &mut rng);
        DiscClassNet {
            conv,
            fc,
            leaky_slope,
            seed,
        }
    }

    pub fn zeros() -> Self {
        let depths = [1, FILTERS, FILTERS];
        DiscClassNet {
            conv: std::array::from_fn(|l| ConvKernelBank::zeros(FILTERS, KERNEL_SIZE, depths[l])),
            fc: DenseParams::zeros(NUM_CLASSES, FILTERS * (CSI_WIDTH - HIDDEN_LAYERS * (KERNEL_SIZE - 1))),
            leaky_slope: LEAKY_SLOPE,
            seed: 0,
        }
    }

    pub(crate) fn from_parts(conv: [ConvKernelBank; HIDDEN_LAYERS], fc: DenseParams, leaky_slope: f64, seed: u64) -> Self {
        DiscClassNet {
            conv,
            fc,
            leaky_slope,
            seed,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn leaky_slope(&self) -> f64 {
        self.leaky_slope
    }

    pub fn conv_layers(&self) -> &[ConvKernelBank; HIDDEN_LAYERS] {
        &self.conv
    }

    pub fn conv_layers_mut(&mut self) -> &mut [ConvKernelBank; HIDDEN_LAYERS] {
        &mut self.conv
    }

    pub fn output_layer(&self) -> &DenseParams {
        &self.fc
    }

    pub fn num_classes(&self) -> usize {
        self.fc.out_dim()
    }

    pub fn forward_cached(&self, x: &[f64]) -> Result<DiscCache> {
        if x.len() != CSI_WIDTH {
            return Err(Error::shape("discriminator input", CSI_WIDTH, x.len()));
        }
        if let Some(bad) = x.iter().position(|v| !v.is_finite()) {
            return Err(Error::Dataset(format!("non-finite input value at channel {bad}")));
        }
        let mut act = FeatureMap::from_vec(x.to_vec())?;
        let mut acts = Vec::with_capacity(HIDDEN_LAYERS + 1);
        let mut pres = Vec::with_capacity(HIDDEN_LAYERS);
        for bank in &self.conv {
            let pre = conv1d_forward(&act, bank)?;
            let mut next = pre.clone();
            leaky_relu_inplace(next.data_mut(), self.leaky_slope);
            acts.push(act);
            pres.push(pre);
            act = next;
        }
        let logits = dense_forward(act.data(), &self.fc)?;
        acts.push(act);
        Ok(DiscCache { acts, pres, logits })
    }

    /// Shared pre-activation logits `c`.
    pub fn logits(&self, x: &[f64]) -> Result<Vec<f64>> {
        Ok(self.forward_cached(x)?.logits)
    }

    pub fn logits_batch(&self, xs: &[&[f64]]) -> Result<Vec<Vec<f64>>> {
        xs.iter().map(|x| self.logits(x)).collect()
    }

    /// Widths of every intermediate volume for the given input, as actually computed.
    pub fn trace_widths(&self, x: &[f64]) -> Result<Vec<usize>> {
        let cache = self.forward_cached(x)?;
        Ok(cache.acts.iter().map(FeatureMap::width).collect())
    }

    /// Discriminator head: probability that `x` is a real sample.
    pub fn discriminate(&self, x: &[f64]) -> Result<f64> {
        Ok(lambda_real_prob(&self.logits(x)?))
    }

    /// Classifier head.
    pub fn classify(&self, x: &[f64]) -> Result<Classification> {
        Ok(classify_logits(&self.logits(x)?))
    }

    /// Backpropagate `dL/dc` through one cached pass; returns `dL/dx`.
    pub fn backward(&self, cache: &DiscCache, grad_logits: &[f64], mut grads: Option<&mut DiscClassNet>) -> Result<Vec<f64>> {
        let mut d_act = dense_backward(
            cache.acts[HIDDEN_LAYERS].data(),
            &self.fc,
            grad_logits,
            grads.as_deref_mut().map(|g| &mut g.fc),
        )?;
        for l in (0..HIDDEN_LAYERS).rev() {
            leaky_relu_backward(cache.pres[l].data(), &mut d_act, self.leaky_slope);
            let g = FeatureMap::new(cache.pres[l].width(), cache.pres[l].slices(), d_act)?;
            d_act = conv1d_backward(&cache.acts[l], &self.conv[l], &g, grads.as_deref_mut().map(|gr| &mut gr.conv[l]))?
                .into_vec();
        }
        Ok(d_act)
    }

    pub fn forward_batch(&self, xs: &[&[f64]], tape: &mut Tape<DiscCache>) -> Result<Vec<Vec<f64>>> {
        let mut out = Vec::with_capacity(xs.len());
        for x in xs {
            let cache = self.forward_cached(x)?;
            out.push(cache.logits.clone());
            tape.push(cache);
        }
        Ok(out)
    }

    /// Returns input gradients per sample; parameter gradients accumulate into `grads` when
    /// given.
    pub fn backward_batch(
        &self,
        tape: &mut Tape<DiscCache>,
        grad_logits: &[Vec<f64>],
        mut grads: Option<&mut DiscClassNet>,
    ) -> Result<Vec<Vec<f64>>> {
        let caches = tape.drain("discriminator backward", grad_logits.len())?;
        caches
            .iter()
            .zip(grad_logits)
            .map(|(c, g)| self.backward(c, g, grads.as_deref_mut()))
            .collect()
    }
}

/// Softmax probabilities and the arg-max label.
pub fn classify_logits(c: &[f64]) -> Classification {
    let probabilities = softmax(c);
    let predicted = ClassLabel::from_index(argmax(c));
    Classification {
        probabilities,
        predicted,
    }
}

/// Softmax normalizer `Z = sum_m exp(c_m)`, in log space.
pub fn log_partition(c: &[f64]) -> f64 {
    log_sum_exp(c)
}

impl Parameters for DiscClassNet {
    fn tensors(&self) -> Vec<&[f64]> {
        let mut t = Vec::new();
        for c in &self.conv {
            t.extend(c.tensors());
        }
        t.extend(self.fc.tensors());
        t
    }

    fn tensors_mut(&mut self) -> Vec<&mut [f64]> {
        let mut t = Vec::new();
        for c in &mut self.conv {
            t.extend(c.tensors_mut());
        }
        t.extend(self.fc.tensors_mut());
        t
    }
}
