//! Quadrature audits of the multiplier identities and inequalities, on
//! analytic fields and on finite-element solutions.

mod audits;
mod chain;
pub mod field;
mod samples;

pub use audits::{
    dirichlet_audit, garding_audit, korn_audit, log_derivative, mass_identity_audit, morawetz_audit, rellich_audit,
    rellich_specialization_audit, robin_identity_audit, IdentityReport, ReportKind, Term, GARDING_TOL, KORN_TOL,
    VANISHING_GUARD,
};
pub use chain::{
    chain_coefficients, chain_constant, chain_for_sweep_row, estimate_chain_audit, ChainNorms, ChainReport, CHAIN_TOL,
    TAU_STAR, THETA_STAR,
};
pub use field::{AnalyticField, FieldClass, PlaneWave, Polynomial, RadialBump, Superposition, Vanishing};
pub use samples::{sample_analytic, sample_fem, sphere_rule, Part, Resolution, Samples, SurfacePoint, VolumePoint};
