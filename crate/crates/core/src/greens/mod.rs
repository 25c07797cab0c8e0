//! Homogeneous 3D problem through the fundamental solution.

mod convolve;
mod field;
mod fourier;
mod kernel;
mod verify;

pub use convolve::{convolve, convolve_lattice, Convolution, SingularRule};
pub use field::{ball_volume, rotate, rotate_c, weighted_norm, Bump, Lattice, SmoothSource, SourceField};
pub use fourier::{default_xi_grid, fourier_multiplier_norm};
pub use kernel::{
    ball_integrals, green_coefficients, green_tensor, green_tensor_split, hessian_radial, kelvin_tensor,
    scalar_kernels, GreenTensorValue, Mat3, Medium, WaveNumbers,
};
pub use verify::{two_grid_difference, verify_fundamental_bound, verify_lattice_batch, FundamentalCheck, TargetSet};
