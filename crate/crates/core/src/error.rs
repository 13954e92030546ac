use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("graph is not admissible: {0}")]
    NotAdmissible(String),

    #[error("unknown internal edge `{0}`")]
    UnknownEdge(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("boundary mismatch: {0}")]
    BoundaryMismatch(String),

    #[error("point lies outside the polytope")]
    Outside,

    #[error("rotation axis vanishes (|sum| = {0:e})")]
    AxisVanishes(f64),

    #[error("degenerate face at internal edge `{0}`")]
    DegenerateFace(String),

    #[error("edge lengths are not realizable as a tetrahedron")]
    NotRealizable,

    #[error("degenerate tetrahedron (coplanar vertices)")]
    DegenerateTetrahedron,

    #[error("inadmissible 6j labels {0:?}")]
    Inadmissible([u32; 6]),

    /// Raised when an identity that holds by construction fails; always a bug.
    #[error("internal invariant breached: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
