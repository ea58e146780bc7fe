use thiserror::Error;

/// Errors raised by the numerical routines.
///
/// The CLI maps [`Error::Domain`] to exit code 2 and the numerical
/// failures to exit code 3.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An input lies outside the domain where the quantity is defined
    /// (aspect ratio `a <= 1`, Bose gas with `mu >= 0`, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// Adaptive quadrature ran out of subdivisions before reaching the
    /// requested tolerance.
    #[error("quadrature did not converge: estimated error {achieved:e} exceeds target {target:e}")]
    QuadratureNotConverged { achieved: f64, target: f64 },

    /// The implicit QL iteration exceeded its iteration budget.
    #[error("eigensolver did not converge for eigenvalue index {index} after {iterations} iterations")]
    EigenNotConverged { index: usize, iterations: usize },

    /// A quadrature result that must be real carried an imaginary part
    /// above the permitted residual.
    #[error("consistency error: imaginary residual {residual:e} exceeds {limit:e}")]
    ImaginaryResidual { residual: f64, limit: f64 },

    /// Root bracketing failed to reach the target.
    #[error("root finding failed: {0}")]
    RootNotFound(String),

    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("matrix is not symmetric: entry ({row}, {col}) differs from its transpose")]
    NotSymmetric { row: usize, col: usize },

    /// The dense storage for a matrix block could not be allocated.
    #[error("cannot allocate a {dim}x{dim} matrix")]
    Allocation { dim: usize },

    /// No level above the threshold exists within the truncated basis.
    #[error("no crossover within truncation: no level has |<T3>| above {threshold}")]
    NoCrossover { threshold: f64 },
}

impl Error {
    /// True for failures of a numerical procedure, as opposed to bad input.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::QuadratureNotConverged { .. }
                | Error::EigenNotConverged { .. }
                | Error::ImaginaryResidual { .. }
                | Error::RootNotFound(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
