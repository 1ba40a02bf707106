use thiserror::Error;

use crate::geometry::Point;

/// Errors raised by the toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A kernel was evaluated at its singular point.
    #[error("kernel evaluated at its singularity (|x| = {distance:e})")]
    Singularity { distance: f64 },

    /// An evaluation point is too close to the boundary for the boundary quadrature.
    #[error("point {point:?} is {distance:.3e} from the boundary; at least {min_distance:.3e} required")]
    NearBoundary {
        point: Point,
        distance: f64,
        min_distance: f64,
    },

    /// A volume quadrature node coincides with the evaluation point and exclusion is off.
    #[error("evaluation point coincides with volume node {node} and exclusion is disabled")]
    CoincidentNode { node: usize },

    #[error("mesh refinement level {level} needs {triangles} triangles, above the limit of {limit}")]
    Capacity {
        level: u32,
        triangles: usize,
        limit: usize,
    },

    #[error("mesh topology: {0}")]
    Topology(String),

    #[error("invalid mesh: {0}")]
    InvalidMesh(String),

    /// `1 + k beta` or `1 - k beta` vanishes.
    #[error("chirality resonance: |1 {sign} k*beta| = {magnitude:e} is below tolerance {tolerance:e}")]
    Resonance {
        sign: char,
        magnitude: f64,
        tolerance: f64,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("expected {expected} values, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("i/o: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
