use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid binary graph parameters p={p}, r={r}: {reason}")]
    BinaryGraphParams { p: usize, r: u32, reason: &'static str },

    #[error("vertex {vertex} out of range for a graph with {vertex_count} vertices")]
    VertexOutOfRange { vertex: usize, vertex_count: usize },

    #[error("graph has no vertices")]
    EmptyGraph,

    #[error("vertex {vertex} has undirected degree {degree}, expected 4")]
    NotFourRegular { vertex: usize, degree: usize },

    #[error("graph is not connected")]
    Disconnected,

    #[error("graph failed validation: {0}")]
    InvalidGraph(String),

    #[error("bond list is not in canonical (origin, terminus) order")]
    NonCanonicalBondOrder,

    #[error("invalid length interval [{low}, {high})")]
    DegenerateInterval { low: f64, high: f64 },

    #[error("bond lengths invalid: {0}")]
    InvalidLengths(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not unitary (defect {defect:e})")]
    NotUnitary { defect: f64 },

    #[error("Schur decomposition did not converge")]
    NoConvergence,

    #[error("coefficient index {n} out of range 0..={max}")]
    IndexOutOfRange { n: usize, max: usize },

    #[error("Monte Carlo configuration invalid: {0}")]
    InvalidSampling(String),

    #[error("bond walk is not closed or not connected at position {position}")]
    NotClosedWalk { position: usize },

    #[error("bond walk is a repetition of a shorter orbit")]
    NotPrimitive,

    #[error("pseudo orbit contains the same periodic orbit twice")]
    RepeatedOrbit,

    #[error("bond subset is not admissible (unbalanced at some vertex or repeats a bond)")]
    NotAdmissible,

    #[error("enumeration cap of {cap} exceeded")]
    CapExceeded { cap: usize },

    #[error("partner pseudo orbit uses a different bond multiset")]
    PartnerMismatch,

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
