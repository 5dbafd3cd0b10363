use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

/// Failures raised by the numerical routines.
///
/// The variant names double as the machine-readable error tags printed by the
/// command-line tool.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// `f²(n)` is not positive: the level lies beyond the deformation's range.
    Domain { level: usize, f2: f64 },
    /// A level or basis size exceeds the bound-state truncation.
    Truncation { requested: usize, limit: usize },
    /// `sqrt(γ)·η` reached the tangent branch point `π/2`.
    Branch { argument: f64 },
    /// A ratio or recursion hit a vanishing denominator.
    SingularDenominator { context: &'static str, level: usize },
    /// Inconsistent arguments (dimensions, empty inputs).
    Usage(&'static str),
    /// A parameter is out of its admissible range.
    InvalidParameter { name: &'static str, value: f64 },
}

impl Error {
    /// Short tag naming the error class.
    pub fn name(&self) -> &'static str {
        match self {
            Error::Domain { .. } => "DomainError",
            Error::Truncation { .. } => "TruncationError",
            Error::Branch { .. } => "BranchError",
            Error::SingularDenominator { .. } => "SingularDenominator",
            Error::Usage(_) => "UsageError",
            Error::InvalidParameter { .. } => "InvalidParameter",
        }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain { level, f2 } => {
                write!(f, "deformation f^2({level}) = {f2} is not positive")
            }
            Error::Truncation { requested, limit } => {
                write!(f, "level {requested} exceeds truncation limit {limit}")
            }
            Error::Branch { argument } => {
                write!(f, "sqrt(gamma)*eta = {argument} is at or beyond pi/2")
            }
            Error::SingularDenominator { context, level } => {
                write!(f, "singular denominator in {context} at level {level}")
            }
            Error::Usage(msg) => write!(f, "{msg}"),
            Error::InvalidParameter { name, value } => {
                write!(f, "invalid value {value} for parameter `{name}`")
            }
        }
    }
}

impl core::error::Error for Error {}
