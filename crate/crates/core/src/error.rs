use std::fmt;

/// Invariants checked when a measure is validated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Invariant {
    FiniteValue,
    PositiveWeight,
    NonNegativeMass,
    NonEmptyArc,
    DistinctAtoms,
    UnitMass,
    NoContinuousPart,
}

impl fmt::Display for Invariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Invariant::FiniteValue => "finite values",
            Invariant::PositiveWeight => "positive atom weight",
            Invariant::NonNegativeMass => "non-negative arc mass",
            Invariant::NonEmptyArc => "non-empty arc",
            Invariant::DistinctAtoms => "distinct atoms (duplicate atom)",
            Invariant::UnitMass => "unit total mass",
            Invariant::NoContinuousPart => "purely discrete measure",
        };
        f.write_str(s)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("validation failed [{invariant}]: {detail}")]
    Validation { invariant: Invariant, detail: String },

    #[error("budget exceeded: {what} needs {requested}, limit is {limit}; {hint}")]
    Budget {
        what: &'static str,
        requested: usize,
        limit: usize,
        hint: &'static str,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn invalid(invariant: Invariant, detail: impl Into<String>) -> Self {
        Error::Validation {
            invariant,
            detail: detail.into(),
        }
    }

    /// Process exit code used by the command line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Budget { .. } => 3,
            _ => 2,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
