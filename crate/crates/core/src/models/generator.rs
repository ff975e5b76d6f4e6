use rand::Rng;

use super::arch::*;
use super::tape::Tape;
use crate::error::{Error, Result};
use crate::rng::{stream, tag};
use crate::tensor::{
    deconv1d_backward, deconv1d_forward, dense_backward, dense_forward, relu_backward, relu_inplace, tanh_backward,
    tanh_inplace, ConvKernelBank, DenseParams, FeatureMap, Parameters,
};

/// Deconvolutional generator: latent (100) -> FC+ReLU (3456 = 32 x 108) -> three
/// deconvolutions with ReLU (112, 116, 120) -> single-kernel deconvolution, cropped back to
/// 120, with tanh.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorNet {
    pub(crate) fc: DenseParams,
    pub(crate) deconv: [ConvKernelBank; HIDDEN_LAYERS],
    pub(crate) out: ConvKernelBank,
    seed: u64,
}

/// Intermediate values of one generator forward pass.
#[derive(Debug, Clone)]
pub struct GeneratorCache {
    z: Vec<f64>,
    fc_pre: Vec<f64>,
    /// Post-activation inputs to each deconvolution: reshaped FC output, then each hidden layer.
    acts: Vec<FeatureMap>,
    /// Pre-activations of the hidden deconvolutions.
    pres: Vec<FeatureMap>,
    out: Vec<f64>,
}

impl GeneratorCache {
    pub fn output(&self) -> &[f64] {
        &self.out
    }
}

pub fn build_generator(seed: u64) -> GeneratorNet {
    GeneratorNet::with_init_std(seed, INIT_STD)
}

impl GeneratorNet {
    pub fn with_init_std(seed: u64, std: f64) -> Self {
        verify_architecture().expect("architecture constants");
        let mut rng = stream(seed, &[tag::INIT_G]);
        Self::init(&mut rng, std, seed)
    }

    fn init<R: Rng + ?Sized>(rng: &mut R, std: f64, seed: u64) -> Self {
        let fc = DenseParams::gaussian(FC_UNITS, LATENT_DIM, std, rng);
        let deconv = std::array::from_fn(|_| ConvKernelBank::gaussian(FILTERS, KERNEL_SIZE, FILTERS, std, rng));
        let out = ConvKernelBank::gaussian(1, KERNEL_SIZE, FILTERS, std, rng);
        GeneratorNet { fc, deconv, out, seed }
    }

    /// All-zero parameters; also the gradient container for this network.
    pub fn zeros() -> Self {
        GeneratorNet {
            fc: DenseParams::zeros(FC_UNITS, LATENT_DIM),
            deconv: std::array::from_fn(|_| ConvKernelBank::zeros(FILTERS, KERNEL_SIZE, FILTERS)),
            out: ConvKernelBank::zeros(1, KERNEL_SIZE, FILTERS),
            seed: 0,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn latent_dim(&self) -> usize {
        LATENT_DIM
    }

    pub fn fc(&self) -> &DenseParams {
        &self.fc
    }

    pub fn deconv_layers(&self) -> &[ConvKernelBank; HIDDEN_LAYERS] {
        &self.deconv
    }

    pub fn output_layer(&self) -> &ConvKernelBank {
        &self.out
    }

    pub(crate) fn from_parts(fc: DenseParams, deconv: [ConvKernelBank; HIDDEN_LAYERS], out: ConvKernelBank, seed: u64) -> Self {
        GeneratorNet { fc, deconv, out, seed }
    }

    /// Produce one fake CSI sample in `[-1, 1]^120`.
    pub fn generate(&self, z: &[f64]) -> Result<Vec<f64>> {
        Ok(self.forward_cached(z)?.out)
    }

    /// Widths of every intermediate volume for the given latent, as actually computed.
    pub fn trace_widths(&self, z: &[f64]) -> Result<Vec<usize>> {
        let cache = self.forward_cached(z)?;
        let mut w: Vec<usize> = cache.acts.iter().map(FeatureMap::width).collect();
        w.push(cache.out.len());
        Ok(w)
    }

    pub fn forward_cached(&self, z: &[f64]) -> Result<GeneratorCache> {
        if z.len() != LATENT_DIM {
            return Err(Error::shape("generate latent", LATENT_DIM, z.len()));
        }
        let fc_pre = dense_forward(z, &self.fc)?;
        let mut v = fc_pre.clone();
        relu_inplace(&mut v);
        // Index i maps to slice i / 108, position i % 108.
        let mut act = FeatureMap::new(RESHAPE_WIDTH, RESHAPE_SLICES, v)?;
        let mut acts = Vec::with_capacity(HIDDEN_LAYERS + 1);
        let mut pres = Vec::with_capacity(HIDDEN_LAYERS);
        for bank in &self.deconv {
            let pre = deconv1d_forward(&act, bank, 0)?;
            let mut next = pre.clone();
            relu_inplace(next.data_mut());
            acts.push(act);
            pres.push(pre);
            act = next;
        }
        let mut out = deconv1d_forward(&act, &self.out, OUTPUT_CROP)?.into_vec();
        tanh_inplace(&mut out);
        acts.push(act);
        Ok(GeneratorCache {
            z: z.to_vec(),
            fc_pre,
            acts,
            pres,
            out,
        })
    }

    /// Backpropagate `dL/dx_g` through one cached pass; returns `dL/dz` and accumulates
    /// parameter gradients into `grads` when given.
    pub fn backward(&self, cache: &GeneratorCache, grad_out: &[f64], mut grads: Option<&mut GeneratorNet>) -> Result<Vec<f64>> {
        if grad_out.len() != CSI_WIDTH {
            return Err(Error::shape("generator backward", CSI_WIDTH, grad_out.len()));
        }
        let mut g = grad_out.to_vec();
        tanh_backward(&cache.out, &mut g);
        let g = FeatureMap::new(CSI_WIDTH, 1, g)?;
        let mut d_act = deconv1d_backward(
            &cache.acts[HIDDEN_LAYERS],
            &self.out,
            OUTPUT_CROP,
            &g,
            grads.as_deref_mut().map(|gr| &mut gr.out),
        )?;
        for l in (0..HIDDEN_LAYERS).rev() {
            relu_backward(cache.pres[l].data(), d_act.data_mut());
            d_act = deconv1d_backward(
                &cache.acts[l],
                &self.deconv[l],
                0,
                &d_act,
                grads.as_deref_mut().map(|gr| &mut gr.deconv[l]),
            )?;
        }
        let mut d_fc = d_act.into_vec();
        relu_backward(&cache.fc_pre, &mut d_fc);
        dense_backward(&cache.z, &self.fc, &d_fc, grads.map(|gr| &mut gr.fc))
    }

    pub fn forward_batch(&self, latents: &[Vec<f64>], tape: &mut Tape<GeneratorCache>) -> Result<Vec<Vec<f64>>> {
        let mut outs = Vec::with_capacity(latents.len());
        for z in latents {
            let cache = self.forward_cached(z)?;
            outs.push(cache.out.clone());
            tape.push(cache);
        }
        Ok(outs)
    }

    pub fn backward_batch(
        &self,
        tape: &mut Tape<GeneratorCache>,
        grad_outs: &[Vec<f64>],
        mut grads: Option<&mut GeneratorNet>,
    ) -> Result<Vec<Vec<f64>>> {
        let caches = tape.drain("generator backward", grad_outs.len())?;
        caches
            .iter()
            .zip(grad_outs)
            .map(|(c, g)| self.backward(c, g, grads.as_deref_mut()))
            .collect()
    }
}

impl Parameters for GeneratorNet {
    fn tensors(&self) -> Vec<&[f64]> {
        let mut t = self.fc.tensors();
        for d in &self.deconv {
            t.extend(d.tensors());
        }
        t.extend(self.out.tensors());
        t
    }

    fn tensors_mut(&mut self) -> Vec<&mut [f64]> {
        let mut t = self.fc.tensors_mut();
        for d in &mut self.deconv {
            t.extend(d.tensors_mut());
        }
        t.extend(self.out.tensors_mut());
        t
    }
}

/// Ablation generator: one dense layer from the latent straight to 120 outputs, with tanh.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplifiedGeneratorNet {
    pub(crate) fc: DenseParams,
    seed: u64,
}

#[derive(Debug, Clone)]
pub struct SimplifiedCache {
    z: Vec<f64>,
    out: Vec<f64>,
}

pub fn build_simplified_generator(seed: u64) -> SimplifiedGeneratorNet {
    SimplifiedGeneratorNet::with_init_std(seed, INIT_STD)
}

impl SimplifiedGeneratorNet {
    pub fn with_init_std(seed: u64, std: f64) -> Self {
        let mut rng = stream(seed, &[tag::INIT_G]);
        SimplifiedGeneratorNet {
            fc: DenseParams::gaussian(CSI_WIDTH, LATENT_DIM, std, &mut rng),
            seed,
        }
    }

    pub fn zeros() -> Self {
        SimplifiedGeneratorNet {
            fc: DenseParams::zeros(CSI_WIDTH, LATENT_DIM),
            seed: 0,
        }
    }

    pub(crate) fn from_parts(fc: DenseParams, seed: u64) -> Self {
        SimplifiedGeneratorNet { fc, seed }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn fc(&self) -> &DenseParams {
        &self.fc
    }

    pub fn generate(&self, z: &[f64]) -> Result<Vec<f64>> {
        Ok(self.forward_cached(z)?.out)
    }

    pub fn forward_cached(&self, z: &[f64]) -> Result<SimplifiedCache> {
        if z.len() != LATENT_DIM {
            return Err(Error::shape("generate latent", LATENT_DIM, z.len()));
        }
        let mut out = dense_forward(z, &self.fc)?;
        tanh_inplace(&mut out);
        Ok(SimplifiedCache { z: z.to_vec(), out })
    }

    pub fn backward(&self, cache: &SimplifiedCache, grad_out: &[f64], grads: Option<&mut SimplifiedGeneratorNet>) -> Result<Vec<f64>> {
        if grad_out.len() != CSI_WIDTH {
            return Err(Error::shape("generator backward", CSI_WIDTH, grad_out.len()));
        }
        let mut g = grad_out.to_vec();
        tanh_backward(&cache.out, &mut g);
        dense_backward(&cache.z, &self.fc, &g, grads.map(|gr| &mut gr.fc))
    }
}

impl Parameters for SimplifiedGeneratorNet {
    fn tensors(&self) -> Vec<&[f64]> {
        self.fc.tensors()
    }

    fn tensors_mut(&mut self) -> Vec<&mut [f64]> {
        self.fc.tensors_mut()
    }
}

/// Either generator variant, so training code can treat them uniformly.
#[derive(Debug, Clone, PartialEq)]
pub enum Generator {
    Full(GeneratorNet),
    Simplified(SimplifiedGeneratorNet),
}

#[derive(Debug, Clone)]
pub enum GenCache {
    Full(GeneratorCache),
    Simplified(SimplifiedCache),
}

impl Generator {
    pub fn build(seed: u64, simplified: bool) -> Self {
        if simplified {
            Generator::Simplified(build_simplified_generator(seed))
        } else {
            Generator::Full(build_generator(seed))
        }
    }

    pub fn with_init_std(seed: u64, simplified: bool, std: f64) -> Self {
        if simplified {
            Generator::Simplified(SimplifiedGeneratorNet::with_init_std(seed, std))
        } else {
            Generator::Full(GeneratorNet::with_init_std(seed, std))
        }
    }

    pub fn zeros_like(&self) -> Self {
        match self {
            Generator::Full(_) => Generator::Full(GeneratorNet::zeros()),
            Generator::Simplified(_) => Generator::Simplified(SimplifiedGeneratorNet::zeros()),
        }
    }

    pub fn is_simplified(&self) -> bool {
        matches!(self, Generator::Simplified(_))
    }

    pub fn seed(&self) -> u64 {
        match self {
            Generator::Full(g) => g.seed(),
            Generator::Simplified(g) => g.seed(),
        }
    }

    pub fn generate(&self, z: &[f64]) -> Result<Vec<f64>> {
        match self {
            Generator::Full(g) => g.generate(z),
            Generator::Simplified(g) => g.generate(z),
        }
    }

    pub fn forward_batch(&self, latents: &[Vec<f64>], tape: &mut Tape<GenCache>) -> Result<Vec<Vec<f64>>> {
        let mut outs = Vec::with_capacity(latents.len());
        for z in latents {
            let cache = match self {
                Generator::Full(g) => GenCache::Full(g.forward_cached(z)?),
                Generator::Simplified(g) => GenCache::Simplified(g.forward_cached(z)?),
            };
            outs.push(match &cache {
                GenCache::Full(c) => c.out.clone(),
                GenCache::Simplified(c) => c.out.clone(),
            });
            tape.push(cache);
        }
        Ok(outs)
    }

    /// Accumulates parameter gradients into `grads` (which must be the same variant).
    pub fn backward_batch(&self, tape: &mut Tape<GenCache>, grad_outs: &[Vec<f64>], grads: &mut Generator) -> Result<()> {
        let caches = tape.drain("generator backward", grad_outs.len())?;
        for (cache, g) in caches.iter().zip(grad_outs) {
            match (self, cache, &mut *grads) {
                (Generator::Full(net), GenCache::Full(c), Generator::Full(gr)) => {
                    net.backward(c, g, Some(gr))?;
                }
                (Generator::Simplified(net), GenCache::Simplified(c), Generator::Simplified(gr)) => {
                    net.backward(c, g, Some(gr))?;
                }
                _ => return Err(Error::Config("generator variant mismatch in backward".into())),
            }
        }
        Ok(())
    }
}

impl Parameters for Generator {
    fn tensors(&self) -> Vec<&[f64]> {
        match self {
            Generator::Full(g) => g.tensors(),
            Generator::Simplified(g) => g.tensors(),
        }
    }

    fn tensors_mut(&mut self) -> Vec<&mut [f64]> {
        match self {
            Generator::Full(g) => g.tensors_mut(),
            Generator::Simplified(g) => g.tensors_mut(),
        }
    }
}
