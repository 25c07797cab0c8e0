//! Two-dimensional finite-element probe on an annulus: inner Dirichlet
//! circle, outer impedance circle.

mod assembly;
pub mod element;
mod mesh;
mod power;
mod solve;
pub mod sparse;
mod sweep;

pub use assembly::{assemble, boundary_load, interpolate, volume_load, AssembledSystem, EDGE_GAUSS};
pub use mesh::{build_annulus_mesh, mesh_for_resolution, BoundaryEdge, EdgeTag, Mesh, ResolutionReport};
pub use power::{empirical_constant, power_iteration, PowerResult, POWER_TOL};
pub use solve::{solve, solve_rhs, Factorization, SolveResult, RESIDUAL_TOL};
pub use sweep::{
    loglog_slope, sweep, DoublingRatio, LambdaSpread, MeshSize, SweepRobin, SweepRow, SweepSpec, SweepTable,
    LOCKING_WARNING,
};
