use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero in Q(q)")]
    DivisionByZero,
    #[error("inexact division in exact q-arithmetic")]
    InexactDivision,
    #[error("circle edges forbidden: loop at vertex {0:?}")]
    CircleEdge(String),
    #[error("unknown vertex {0:?}")]
    UnknownVertex(String),
    #[error("matrix not symmetric: a[{0}][{1}] != a[{1}][{0}]")]
    NotSymmetric(String, String),
    #[error("invalid Cartan matrix: {0}")]
    InvalidCartan(String),
    #[error("input error: {0}")]
    Input(String),
    #[error("type II entries of the sequence do not match the tensor factors")]
    TypeIIMismatch,
    #[error("content {content} lies beyond the depth cutoff {depth}; raise --depth")]
    OutOfDepth { content: String, depth: u32 },
    #[error("spanning failure at content {content}: standard vectors reach rank {rank} of {dim}")]
    SpanningFailure { content: String, rank: usize, dim: usize },
    #[error("triangularization failure at content {0}: bar matrix admits no unitriangular order")]
    TriangularizationFailure(String),
    #[error("correction not in q^-1 Z[q^-1] at content {0}")]
    LatticeMismatch(String),
    #[error("certification failure at content {content}: {condition}")]
    CertificationFailure { content: String, condition: String },
    #[error("oracle bound exhausted at content {content} (degree {degree}, height {height})")]
    BoundExhausted { content: String, degree: u32, height: u32 },
    #[error("oracle refuses weight space of dimension {dim} (cap {cap})")]
    OracleTooLarge { dim: usize, cap: usize },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Errors caused by bad user input rather than a failed computation.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::CircleEdge(_)
                | Error::UnknownVertex(_)
                | Error::NotSymmetric(..)
                | Error::InvalidCartan(_)
                | Error::Input(_)
                | Error::TypeIIMismatch
                | Error::OutOfDepth { .. }
                | Error::Json(_)
                | Error::Io(_)
        )
    }
}
