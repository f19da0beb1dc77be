//! Exact construction of off-shell Bethe vectors for `U_q(gl_N)` affine
//! modules by five independent routes, plus the algebraic identities they rest
//! on: Yang–Baxter and RLL relations, Serre relations, Gauss decompositions of
//! L-operators, current relations and q-symmetrization identities.
//!
//! Everything is computed over exact rationals at sample points; an identity
//! of rational functions is checked by exact evaluation at random generic
//! points.

pub mod bethe;
pub mod check;
pub mod exact;
pub mod gauss;
pub mod qsym;
pub mod rep;
pub mod rmatrix;

pub use check::Check;
pub use exact::{BlockGrid, OpMatrix, Scalar, Vector};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("singular matrix")]
    Singular,
    /// A denominator vanished at the sample point; the caller resamples.
    #[error("pole at sample point: {0}")]
    Pole(String),
    #[error("invalid index: {0}")]
    Index(String),
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("operator would have {cells} rows, above the cap of {cap}")]
    TooLarge { cells: usize, cap: usize },
}

impl Error {
    /// Errors caused by an unlucky sample rather than by a bad input.
    pub fn needs_resample(&self) -> bool {
        matches!(self, Error::Singular | Error::Pole(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
