//! Failure modes shared by every module in this crate.
//!
//! The library never panics on user input: anything a caller can get wrong
//! (impossible lattice densities, windows without the symmetry an operation
//! needs, tolerances the decay envelope cannot certify, malformed sample
//! files) surfaces as an [`Error`] value. Iterative kernels also report
//! budget exhaustion instead of spinning forever.

use std::fmt;

/// Everything that can go wrong inside the library.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// The window's decay envelope cannot push the series tail below the
    /// requested tolerance within the planner's half-width cap.
    TailNotSummable {
        /// Label of the offending window.
        window: String,
        /// Tolerance that could not be certified.
        tol: f64,
    },
    /// Input lies outside the mathematical domain of the operation
    /// (for example a density p/q > 1 passed to a scan, or a modulation
    /// parameter below the certificate's validity range).
    Domain(String),
    /// The operation is only meaningful for windows with a declared
    /// symmetry, and the given window has none (or the wrong one).
    ParityRequired {
        /// Label of the offending window.
        window: String,
        /// The symmetry the operation needs, e.g. "odd".
        needed: &'static str,
    },
    /// An iterative spectral kernel exhausted its sweep budget without
    /// converging; this signals pathological input, not a tuning knob.
    ConvergenceFailure {
        /// Number of sweeps performed before giving up.
        sweeps: usize,
    },
    /// A matrix that must be Hermitian deviated from its conjugate
    /// transpose by more than the entrywise tolerance.
    NotHermitian {
        /// Largest entrywise deviation |a_ij - conj(a_ji)| found.
        deviation: f64,
    },
    /// Malformed caller-supplied data: sample files, fractions, grids,
    /// tolerances outside (0, 1), and similar.
    InvalidInput(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::TailNotSummable { window, tol } => write!(
                f,
                "window '{window}': decay envelope cannot certify a series tail below {tol:e}"
            ),
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::ParityRequired { window, needed } => write!(
                f,
                "window '{window}' lacks the declared {needed} symmetry this operation requires"
            ),
            Error::ConvergenceFailure { sweeps } => {
                write!(
                    f,
                    "iterative kernel failed to converge after {sweeps} sweeps"
                )
            }
            Error::NotHermitian { deviation } => write!(
                f,
                "matrix is not Hermitian: worst entrywise deviation {deviation:e}"
            ),
            Error::InvalidInput(msg) => write!(f, "invalid input: {msg}"),
        }
    }
}

impl std::error::Error for Error {}
