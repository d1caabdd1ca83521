use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{function}: pole at {at}")]
    Pole { function: &'static str, at: String },

    #[error("{function}: argument outside domain ({detail})")]
    Domain {
        function: &'static str,
        detail: String,
    },

    #[error("{function}: no convergence ({detail})")]
    Convergence {
        function: &'static str,
        detail: String,
    },

    /// Adaptive quadrature gave up; `estimate` is the best error estimate reached.
    #[error("quadrature tolerance not met: estimate {estimate:e}, requested {requested:e}{}",
        cell.map(|c| format!(" (cell x = {c})")).unwrap_or_default())]
    ToleranceNotMet {
        estimate: f64,
        requested: f64,
        cell: Option<u64>,
    },

    #[error("closed form {closed_form} and contour quadrature {contour} disagree by {difference:e}")]
    BranchMismatch {
        closed_form: Complex64,
        contour: Complex64,
        difference: f64,
    },

    #[error("({u}, {v}) lies in the excluded set")]
    ExcludedSet { u: Complex64, v: Complex64 },

    #[error("sigma = {sigma} makes 2*sigma - 1 a non-positive integer or 1; use the critical-line estimator")]
    DegenerateSigma { sigma: f64 },

    #[error("insufficient data: need {needed} usable rows, got {got}")]
    InsufficientData { needed: usize, got: usize },

    #[error("{function}: non-finite result")]
    NonFinite { function: &'static str },

    #[error("invalid numeric policy: {0}")]
    InvalidPolicy(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    pub(crate) fn domain(function: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            function,
            detail: detail.into(),
        }
    }

    pub(crate) fn pole(function: &'static str, at: impl std::fmt::Display) -> Self {
        Error::Pole {
            function,
            at: at.to_string(),
        }
    }

    pub(crate) fn convergence(function: &'static str, detail: impl Into<String>) -> Self {
        Error::Convergence {
            function,
            detail: detail.into(),
        }
    }

    /// Short machine-friendly tag, used in the CSV `error_flag` column.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Pole { .. } => "pole",
            Error::Domain { .. } => "domain",
            Error::Convergence { .. } => "convergence",
            Error::ToleranceNotMet { .. } => "tolerance_not_met",
            Error::BranchMismatch { .. } => "branch_mismatch",
            Error::ExcludedSet { .. } => "excluded_set",
            Error::DegenerateSigma { .. } => "degenerate_sigma",
            Error::InsufficientData { .. } => "insufficient_data",
            Error::NonFinite { .. } => "non_finite",
            Error::InvalidPolicy(_) => "invalid_policy",
            Error::InvalidInput(_) => "invalid_input",
        }
    }
}
