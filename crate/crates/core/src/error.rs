use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid material: {0}")]
    InvalidMaterial(String),
    #[error("unsupported domain: {0}")]
    UnsupportedDomain(String),
    #[error("invalid domain: {0}")]
    InvalidDomain(String),
    #[error("invalid Robin data: {0}")]
    InvalidRobin(String),
    #[error("inadmissible multiplier: eta + epsilon = {0} >= 2")]
    InadmissibleMultiplier(f64),
    #[error("inadmissible coefficients: {0}")]
    InadmissibleCoefficients(String),
    #[error("domain evaluation failed: {0}")]
    DomainEvaluation(String),
    #[error("argument outside domain: {0}")]
    Domain(String),
    #[error("inadmissible parameters: {0}")]
    Inadmissible(String),
    #[error("kernel singular at r = {0}")]
    Singularity(f64),
    #[error("accuracy target missed for {what}: achieved {achieved:e}, target {target:e}")]
    Accuracy { what: String, achieved: f64, target: f64 },
    #[error("mesh error: {0}")]
    Mesh(String),
    #[error("solver error: {msg} (residual {residual:e})")]
    Solver { msg: String, residual: f64 },
    #[error("power iteration did not converge in {iters} iterations (last {last:e}, previous {previous:e})")]
    Iteration { iters: usize, last: f64, previous: f64 },
    #[error("configuration error: {0}")]
    Config(String),
}
