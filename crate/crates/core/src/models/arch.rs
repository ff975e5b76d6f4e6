//! Fixed architecture constants and the build-time width check.

use crate::error::{Error, Result};
use crate::tensor::{conv_output_width, deconv_output_width};

/// Dimension of the Gaussian latent vector fed to the generator.
pub const LATENT_DIM: usize = 100;
/// Spatial width of the reshaped generator FC output.
pub const RESHAPE_WIDTH: usize = 108;
/// Slices of the reshaped generator FC output.
pub const RESHAPE_SLICES: usize = 32;
/// Generator FC output length, `RESHAPE_WIDTH * RESHAPE_SLICES`.
pub const FC_UNITS: usize = RESHAPE_WIDTH * RESHAPE_SLICES;
/// Length of a CSI sample (30 subcarriers x 2x2 MIMO).
pub const CSI_WIDTH: usize = 120;
/// Number of target locations / logits.
pub const NUM_CLASSES: usize = 16;
/// Kernels per hidden (de)convolutional layer.
pub const FILTERS: usize = 32;
/// Kernel length of every (de)convolutional layer.
pub const KERNEL_SIZE: usize = 5;
pub const STRIDE: usize = 1;
/// Hidden (de)convolutional layers in each network.
pub const HIDDEN_LAYERS: usize = 3;
/// Positions trimmed from each end of the generator's full-width output deconvolution.
pub const OUTPUT_CROP: usize = 2;
/// Default std of the Gaussian weight init.
pub const INIT_STD: f64 = 0.02;

/// Widths through the generator: reshape, three deconvolutions, output layer.
pub fn generator_widths() -> Option<[usize; 5]> {
    let w1 = deconv_output_width(RESHAPE_WIDTH, KERNEL_SIZE, STRIDE, 0)?;
    let w2 = deconv_output_width(w1, KERNEL_SIZE, STRIDE, 0)?;
    let w3 = deconv_output_width(w2, KERNEL_SIZE, STRIDE, 0)?;
    let out = deconv_output_width(w3, KERNEL_SIZE, STRIDE, OUTPUT_CROP)?;
    Some([RESHAPE_WIDTH, w1, w2, w3, out])
}

/// Widths through the discriminator: input, three convolutions.
pub fn discriminator_widths() -> Option<[usize; 4]> {
    let w1 = conv_output_width(CSI_WIDTH, KERNEL_SIZE, STRIDE)?;
    let w2 = conv_output_width(w1, KERNEL_SIZE, STRIDE)?;
    let w3 = conv_output_width(w2, KERNEL_SIZE, STRIDE)?;
    Some([CSI_WIDTH, w1, w2, w3])
}

/// Flattened length entering the discriminator's output layer.
pub fn discriminator_flat_len() -> Option<usize> {
    discriminator_widths().map(|w| w[3] * FILTERS)
}

/// Checks every layer width against the published architecture.
pub fn verify_architecture() -> Result<()> {
    let g = generator_widths();
    if g != Some([108, 112, 116, 120, 120]) {
        return Err(Error::Config(format!("generator widths {g:?} != [108, 112, 116, 120, 120]")));
    }
    if FC_UNITS != 3456 {
        return Err(Error::Config(format!("generator FC units {FC_UNITS} != 3456")));
    }
    let d = discriminator_widths();
    if d != Some([120, 116, 112, 108]) {
        return Err(Error::Config(format!("discriminator widths {d:?} != [120, 116, 112, 108]")));
    }
    if discriminator_flat_len() != Some(3456) {
        return Err(Error::Config("discriminator flatten length != 3456".into()));
    }
    Ok(())
}
