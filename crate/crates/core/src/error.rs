use alloc::string::String;
use core::fmt;

/// Failures raised by the numerical routines.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    DimensionMismatch {
        expected: usize,
        found: usize,
    },
    /// Derivatives, lifts and defects are undefined at the origin.
    ZeroVector,
    RankDeficient {
        rank: usize,
        rows: usize,
    },
    MaxIterations {
        iterations: usize,
        residual: f64,
    },
    /// The reduced Newton direction was not a descent direction.
    NonConvexEncountered,
    TangencyViolated {
        defect: f64,
    },
    SingularKilling,
    NotInGroup {
        defect: f64,
    },
    InvalidSpec(String),
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::ZeroVector => f.write_str("operation undefined at the zero vector"),
            Error::RankDeficient { rank, rows } => {
                write!(f, "matrix has rank {rank}, expected full row rank {rows}")
            }
            Error::MaxIterations { iterations, residual } => {
                write!(f, "solver stopped after {iterations} iterations (residual {residual:e})")
            }
            Error::NonConvexEncountered => f.write_str("energy is not strongly convex along the fiber"),
            Error::TangencyViolated { defect } => {
                write!(f, "spray tangency condition violated (defect {defect:e})")
            }
            Error::SingularKilling => f.write_str("Killing form is degenerate"),
            Error::NotInGroup { defect } => {
                write!(f, "matrix is not in the group (defect {defect:e})")
            }
            Error::InvalidSpec(msg) => write!(f, "invalid norm spec: {msg}"),
        }
    }
}

impl core::error::Error for Error {}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
