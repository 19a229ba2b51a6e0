use thiserror::Error;

use crate::menger::ExtendedRadius;

/// Errors raised by the geometry, classification and energy routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid norm exponent {0}: p must be >= 1 or infinite")]
    InvalidExponent(f64),

    #[error("invalid norm specification: {0}")]
    InvalidNorm(String),

    #[error("matrix is not symmetric positive definite")]
    NotPositiveDefinite,

    #[error("polytope vertex set is not centrally symmetric: -v missing for vertex {index}")]
    AsymmetricPolytope { index: usize },

    #[error("polytope does not contain the origin in its interior")]
    DegeneratePolytope,

    #[error("zero direction vector")]
    ZeroDirection,

    #[error("radius must be positive and finite, got {0}")]
    InvalidRadius(f64),

    #[error("triangle inequality violated: sides ({a}, {b}, {c})")]
    InvalidMetric { a: f64, b: f64, c: f64 },

    #[error("points are not mutually distinct")]
    CoincidentPoints,

    #[error("collinear triple has no circumcenter")]
    Collinear,

    #[error("not embeddable: circumradius {circumradius} exceeds sphere radius {radius}")]
    NotEmbeddable {
        circumradius: ExtendedRadius,
        radius: f64,
    },

    #[error("invalid distance matrix: {0}")]
    InvalidDistanceMatrix(String),

    #[error("operation requires dimension >= 2, got {0}")]
    UnsupportedDimension(usize),

    #[error("need at least {needed} points, got {found}")]
    TooFewPoints { needed: usize, found: usize },

    #[error("invalid energy exponent {0}: p must be positive")]
    InvalidEnergyExponent(f64),

    #[error("invalid weights: {0}")]
    InvalidWeights(String),

    #[error("invalid circumradius target {0}")]
    InvalidTarget(f64),

    #[error("invalid search budget: {0}")]
    InvalidBudget(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
