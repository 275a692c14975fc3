use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    /// The standing assumption λ = γ + d/2 − 1 > 0 fails.
    #[error("lambda = {lambda} must be positive (gamma = {gamma}, dim = {dim})")]
    NonPositiveLambda { lambda: f64, gamma: f64, dim: usize },

    #[error("multiplicity function is not W-invariant: {0}")]
    NotInvariant(String),

    #[error("group closure exceeded {cap} elements")]
    GroupTooLarge { cap: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("unsupported for this root system: {0}")]
    Capability(String),

    #[error("{what} did not converge (partial value {partial})")]
    Accuracy { what: String, partial: f64 },

    #[error("point lies on the reflecting hyperplane of root {root}")]
    Singularity { root: usize },

    #[error("point is {distance:e} from the hyperplane of root {root}, too close for step {step:e}")]
    Proximity {
        root: usize,
        distance: f64,
        step: f64,
    },

    #[error("path {path} did not exit after {steps} steps")]
    NonTermination { path: u64, steps: u64 },

    #[error("boundary data not evaluable at {point:?}")]
    Data { point: Vec<f64> },

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}
