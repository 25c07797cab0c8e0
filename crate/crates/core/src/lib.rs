//! Frequency-explicit stability constants for the time-harmonic elastic
//! Helmholtz problem `-ω²ρu - div σ(u) = ρf`.
//!
//! * [`model`]: materials, domains, Robin data, multipliers, dimensionless groups.
//! * [`bounds`]: closed-form stability bounds.
//! * [`greens`]: homogeneous 3D problem through the fundamental solution.
//! * [`fem`]: 2D annulus finite-element probe of the weak problem.
//! * [`identities`]: numerical audits of the integration-by-parts identities.

pub mod bounds;
pub mod error;
pub mod fem;
pub mod greens;
pub mod identities;
pub mod model;
pub mod quad;

pub use error::{Error, Result};
pub use num_complex::Complex64;
