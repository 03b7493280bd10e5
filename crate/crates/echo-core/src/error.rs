use alloc::string::String;
use core::fmt;

/// Error type shared by every kernel in the crate.
///
/// Variants are coarse on purpose: callers mostly need to distinguish bad
/// configuration from numerical trouble, and the message carries the offending
/// field or quantity by name.
#[derive(Debug, Clone, PartialEq)]
pub enum CoreError {
    /// A parameter or sequence invariant is violated (named in the message).
    Invalid(String),
    /// A numerical precondition failed (step too large, non-finite entry, ...).
    Numerical(String),
}

impl fmt::Display for CoreError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoreError::Invalid(msg) => write!(f, "invalid configuration: {msg}"),
            CoreError::Numerical(msg) => write!(f, "numerical error: {msg}"),
        }
    }
}

#[cfg(test)]
impl std::error::Error for CoreError {}

impl CoreError {
    pub fn invalid(msg: impl Into<String>) -> Self {
        CoreError::Invalid(msg.into())
    }

    pub fn numerical(msg: impl Into<String>) -> Self {
        CoreError::Numerical(msg.into())
    }
}
