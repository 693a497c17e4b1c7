//! Error type shared by all modules.

use thiserror::Error;

/// Errors produced by parameter validation and channel construction.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("flip probability q = {0} outside [0, 1/2]")]
    FlipProbability(f64),
    #[error("rotation angle epsilon = {0} outside (-pi, pi]")]
    RotationAngle(f64),
    #[error("cycle time tau = {0} must be positive and finite")]
    CycleTime(f64),
    #[error("dephasing rate gamma = {0} must be non-negative")]
    DephasingRate(f64),
    #[error("non-physical reduced block: a^2 + b^2 = {0} exceeds 1")]
    NonPhysicalBlock(f64),
    #[error("code distance {0} must be an odd integer in 3..=61")]
    CodeDistance(u32),
    #[error("overlap coefficient index out of range: d={d}, j={j}, k={k}, n={n}")]
    OverlapIndex { d: u32, j: u32, k: u32, n: u32 },
    #[error("level count {requested} exceeds maximum {max}")]
    LevelCount { requested: u32, max: u32 },
    #[error("qubit count {0} must be an odd integer in 3..={1}")]
    QubitCount(usize, usize),
    #[error("invalid coupling set: {0}")]
    Coupling(String),
    #[error("state normalization off by {0}")]
    StateNorm(f64),
    #[error("tomography block violates rotation-flip form by {0}")]
    TomographyForm(f64),
    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
