use alloc::string::String;
use core::fmt;

/// Error type shared by the whole crate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    /// A value of zero where a positive integer is required.
    ZeroValue,
    /// A stated precondition does not hold for the given inputs.
    Precondition(&'static str),
    /// An enumeration was asked to exceed the configured guard bound.
    GuardExceeded { bound: u64 },
    /// A variable name not present in the family.
    UnknownVariable(String),
    /// An assignment is missing a parameter the family requires.
    MissingParameter(String),
    /// A parameter record does not have the shape required by (m, n).
    ShapeMismatch(&'static str),
    /// The input system is outside the supported scope.
    UnsupportedScope(String),
    /// Unification of shared-variable formulas did not succeed.
    UnificationFailed(String),
    /// An internal consistency check failed; this indicates a defect, not
    /// bad input.
    Defect(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::ZeroValue => write!(f, "value must be a positive integer"),
            Error::Precondition(msg) => write!(f, "precondition violated: {msg}"),
            Error::GuardExceeded { bound } => {
                write!(f, "enumeration guard exceeded (bound {bound})")
            }
            Error::UnknownVariable(name) => write!(f, "unknown variable `{name}`"),
            Error::MissingParameter(name) => write!(f, "missing parameter `{name}`"),
            Error::ShapeMismatch(msg) => write!(f, "shape mismatch: {msg}"),
            Error::UnsupportedScope(msg) => write!(f, "unsupported scope: {msg}"),
            Error::UnificationFailed(msg) => write!(f, "unification failed: {msg}"),
            Error::Defect(msg) => write!(f, "internal defect: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
