use thiserror::Error;

/// Errors raised by the symbolic kernel.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("chart mismatch: {0}")]
    ChartMismatch(String),
    #[error("unknown coordinate `{0}`")]
    UnknownCoordinate(String),
    #[error("duplicate coordinate `{0}`")]
    DuplicateCoordinate(String),
    #[error("invalid chart: {0}")]
    InvalidChart(String),
    #[error("parity mismatch: {0}")]
    ParityMismatch(String),
    #[error("inhomogeneous input: {0}")]
    Inhomogeneous(String),
    #[error("not invertible: {0}")]
    NotInvertible(String),
    #[error("orientation violated: {0}")]
    Orientation(String),
    #[error("vector field is not homological")]
    NotHomological,
    #[error("not a Q-morphism: {0}")]
    NotQMorphism(String),
    #[error("element is not Q-closed")]
    NotClosed,
    #[error("vector fields do not commute: {0}")]
    NotCommuting(String),
    #[error("invalid structure: {0}")]
    InvalidStructure(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("master equation fails: [[P,P]] != 0")]
    MasterEquation,
    #[error("truncation exceeded: {0}")]
    TruncationExceeded(String),
}

pub type Result<T> = std::result::Result<T, Error>;
