use alloc::vec::Vec;
use core::fmt;

/// Failures of the geometric kernel.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A vertex (or vector) has the wrong number of coordinates.
    DimensionMismatch { expected: usize, found: usize },
    /// A coordinate is NaN or infinite.
    NonFiniteCoordinate { vertex: usize },
    /// A simplex needs at least one vertex, and at most `ambient + 1`.
    VertexCount { count: usize, ambient: usize },
    IndexOutOfRange { index: usize, bound: usize },
    InvalidArgument(&'static str),
    /// The simplex spanned by these vertex indices is degenerate at the configured tolerance.
    Degenerate { vertices: Vec<usize> },
    /// Exhaustive subsimplex enumeration refused above the configured dimension cap.
    DimensionCap { dim: usize, cap: usize },
    /// `random_simplex` ran out of draws before meeting the quality floor.
    RejectionBudgetExhausted { draws: usize },
}

impl Error {
    /// True for errors caused by (near-)degenerate geometry rather than bad input.
    pub fn is_degeneracy(&self) -> bool {
        matches!(self, Error::Degenerate { .. })
    }

    pub(crate) fn degenerate(count: usize) -> Self {
        Error::Degenerate {
            vertices: (0..count).collect(),
        }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected} coordinates, found {found}")
            }
            Error::NonFiniteCoordinate { vertex } => {
                write!(f, "vertex {vertex} has a non-finite coordinate")
            }
            Error::VertexCount { count, ambient } => write!(
                f,
                "{count} vertices cannot form a simplex in R^{ambient} (need 1..={})",
                ambient + 1
            ),
            Error::IndexOutOfRange { index, bound } => {
                write!(f, "index {index} out of range (must be < {bound})")
            }
            Error::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
            Error::Degenerate { vertices } => {
                write!(f, "degenerate simplex on vertices {vertices:?}")
            }
            Error::DimensionCap { dim, cap } => write!(
                f,
                "simplex dimension {dim} exceeds the subsimplex enumeration cap {cap}"
            ),
            Error::RejectionBudgetExhausted { draws } => {
                write!(f, "no simplex met the quality floor after {draws} draws")
            }
        }
    }
}

impl core::error::Error for Error {}
