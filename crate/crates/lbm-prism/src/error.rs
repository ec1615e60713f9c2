//! Error type shared across the solver library.

use std::fmt;
use std::io;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong while building, stepping, or serializing a
/// lattice field.
#[derive(Debug)]
pub enum Error {
    /// A cell's populations sum to zero density, so macroscopic velocity is
    /// undefined. Carries the flat cell offset when known.
    DegenerateMoments { cell: Option<usize> },
    /// Domain too small for the requested solver (swap-based steppers need at
    /// least 3 cells along each axis).
    DomainTooSmall {
        lx: usize,
        ly: usize,
        lz: usize,
        min: usize,
    },
    /// Two-step solvers advance two time steps per cycle and cannot stop
    /// mid-cycle.
    OddStepCount { steps: usize },
    /// The parallel solver slices the domain into equal X-slabs; `lx` must be
    /// divisible by the worker count and each slab at least 3 layers tall.
    BadWorkerSplit { lx: usize, workers: usize },
    /// Relaxation rate outside the open interval (0, 2).
    InvalidOmega { omega: f64 },
    /// Lid speed beyond the stability guard of 0.3 lattice units.
    LidTooFast { speed: f64 },
    /// Throughput is undefined for a non-positive duration.
    NonPositiveDuration { seconds: f64 },
    /// Field allocation failed.
    Allocation { bytes: usize },
    /// A field dump did not match the expected binary layout. `offset` is the
    /// byte position at which the problem was detected.
    Format { offset: u64, message: String },
    /// Underlying I/O failure.
    Io(io::Error),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DegenerateMoments { cell: Some(c) } => {
                write!(f, "degenerate moments: zero density at cell offset {c}")
            }
            Error::DegenerateMoments { cell: None } => {
                write!(f, "degenerate moments: zero density")
            }
            Error::DomainTooSmall { lx, ly, lz, min } => write!(
                f,
                "domain {lx}x{ly}x{lz} too small: each axis must be at least {min}"
            ),
            Error::OddStepCount { steps } => write!(
                f,
                "two-step solvers require an even step count, got {steps}"
            ),
            Error::BadWorkerSplit { lx, workers } => write!(
                f,
                "cannot split lx={lx} into {workers} slabs: lx must be divisible by the worker \
                 count and each slab at least 3 layers tall"
            ),
            Error::InvalidOmega { omega } => {
                write!(
                    f,
                    "relaxation rate {omega} outside the open interval (0, 2)"
                )
            }
            Error::LidTooFast { speed } => write!(
                f,
                "lid speed {speed} exceeds the 0.3 lattice-unit stability guard"
            ),
            Error::NonPositiveDuration { seconds } => {
                write!(f, "non-positive duration {seconds} s")
            }
            Error::Allocation { bytes } => write!(f, "failed to allocate {bytes} bytes"),
            Error::Format { offset, message } => {
                write!(f, "malformed field dump at byte {offset}: {message}")
            }
            Error::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl std::error::Error for Error {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            Error::Io(e) => Some(e),
            _ => None,
        }
    }
}

impl From<io::Error> for Error {
    fn from(e: io::Error) -> Self {
        Error::Io(e)
    }
}
