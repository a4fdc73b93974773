use std::fmt;

use thiserror::Error;

use crate::monotone::GraphKind;

/// Modeling assumptions that a configuration must satisfy before a run starts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Assumption {
    /// `J >= 0`, `J(x) = J(-x)` and `inf a > 0` for `a = J * 1`.
    KernelPositivity,
    /// Convex/Lipschitz splitting of the potential with `a_- - |Pi'|_inf > 0`.
    PotentialSplitting,
    /// Initial data with finite convex energy and mean strictly inside `(m_-, m_+)`.
    InitialData,
}

impl Assumption {
    pub fn label(self) -> &'static str {
        match self {
            Assumption::KernelPositivity => "H2",
            Assumption::PotentialSplitting => "H3",
            Assumption::InitialData => "H4",
        }
    }
}

impl fmt::Display for Assumption {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.label())
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("resolvent root-finding failed for {kind:?} graph (lambda = {lambda}, x = {x})")]
    Resolvent {
        kind: GraphKind,
        lambda: f64,
        x: f64,
    },

    #[error("grid mismatch: expected {expected} cells, got {found}")]
    GridMismatch { expected: usize, found: usize },

    #[error("non-finite value at cell {index}")]
    NonFinite { index: usize },

    #[error("input must have zero mean, got mean {mean:e}")]
    NonzeroMean { mean: f64 },

    #[error("{what} = {value} out of range (limit {limit})")]
    OutOfRange {
        what: &'static str,
        value: usize,
        limit: usize,
    },

    #[error("assumption {assumption} violated: {detail}")]
    Assumption {
        assumption: Assumption,
        detail: String,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("newton failed at step {step}: residual history {residuals:?}")]
    StepFailure { step: usize, residuals: Vec<f64> },

    #[error("solution diverged at step {step} (non-finite state)")]
    Divergence { step: usize },

    #[error("run with lambda = {lambda} failed: {source}")]
    Sweep {
        lambda: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("config line {line}: {message}")]
    Config { line: usize, message: String },

    #[error("mismatched trajectories: {0}")]
    Shape(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn assumption(assumption: Assumption, detail: impl Into<String>) -> Self {
        Error::Assumption {
            assumption,
            detail: detail.into(),
        }
    }

    /// True for errors caused by the user's configuration rather than by a solver failure.
    pub fn is_config_error(&self) -> bool {
        match self {
            Error::Assumption { .. }
            | Error::InvalidParameter(_)
            | Error::Config { .. }
            | Error::NonzeroMean { .. }
            | Error::OutOfRange { .. } => true,
            Error::Sweep { source, .. } => source.is_config_error(),
            _ => false,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
