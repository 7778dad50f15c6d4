//! Error type shared by all modules of the crate.

use thiserror::Error;

/// Errors produced by constellation construction, decoding and analysis.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument was outside the mathematical domain of the function.
    #[error("domain error: {0}")]
    Domain(String),

    /// Matrix/vector dimensions do not match.
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// The two leading singular values could not be separated, so the
    /// dominant singular direction is not well defined.  Decoders treat
    /// this as an erasure.
    #[error("degenerate spectrum: leading singular values coincide within tolerance")]
    DegenerateSpectrum,

    /// A point sits on a cell boundary (two components tie in modulus).
    #[error("cell boundary: two components tie in modulus within {0:e}")]
    CellBoundary(f64),

    /// Invalid constellation or channel parameters.
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// A tractability guard was exceeded.
    #[error("guard exceeded: {0}")]
    GuardExceeded(String),

    /// Bit labeling is only defined when the block length is a power of two.
    #[error("labeling requires a power-of-two block length, got T = {0}")]
    LabelingUnsupported(usize),

    /// Adaptive quadrature failed to reach the requested tolerance.
    #[error("quadrature did not converge: {0}")]
    QuadratureNonConvergence(String),

    /// Malformed CSV input.
    #[error("csv parse error: {0}")]
    CsvParse(String),

    /// Underlying I/O failure.
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
