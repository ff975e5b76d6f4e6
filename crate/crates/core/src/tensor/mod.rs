//! Differentiable primitives for the fixed 1-D architectures: dense layers, cross-correlation,
//! transposed convolution, activations, losses, Adam, and a finite-difference checker.

mod activation;
mod adam;
mod conv;
mod dense;
mod feature_map;
mod gemm;
mod gradcheck;
mod loss;
mod params;
pub mod toeplitz;

pub use activation::{
    argmax, lambda_real_prob, leaky_relu, leaky_relu_backward, leaky_relu_inplace, log_sum_exp, relu, relu_backward,
    relu_inplace, sigmoid, softmax, tanh_act, tanh_backward, tanh_inplace, LEAKY_SLOPE,
};
pub use adam::{AdamConfig, AdamState};
pub use conv::{
    conv1d_backward, conv1d_forward, conv_output_width, deconv1d_backward, deconv1d_forward, deconv_output_width,
    ConvKernelBank,
};
pub use dense::{dense_backward, dense_forward, DenseParams};
pub use feature_map::{dot, FeatureMap};
pub use gradcheck::{grad_check, relative_error, GradCheckOptions};
pub use loss::{binary_ce, categorical_ce, clamp_prob, lambda_bce_with_grad, softmax_ce_with_grad, PROB_CLAMP};
pub use params::Parameters;
