//! Problem data: coefficients, geometry, impedance, multiplier and the
//! dimensionless groups every bound is written in.

mod admissibility;
pub mod config;
mod domain;
mod groups;
mod material;
mod multiplier;
mod robin;

pub use admissibility::{check_radial_admissibility, RadialAdmissibility};
pub use domain::{BoundaryPart, DomainSpec, Obstacle, Shape};
pub use groups::{derive_groups, DimensionlessGroups};
pub use material::{MaterialField, MaterialKind, Profile, WaveSpeeds};
pub use multiplier::{multiplier_for, MultiplierKind, MultiplierSpec, Perturbation};
pub use robin::RobinSpec;

pub(crate) fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}
