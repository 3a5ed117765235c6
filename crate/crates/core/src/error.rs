use thiserror::Error;

/// Errors produced by the spectral toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("pole proximity: denominator modulus {0:e} below 1e-14")]
    PoleProximity(f64),

    #[error("classification ambiguous: |B'(z0)| = {deriv_mod} is parabolic but multiplicity {multiplicity:?} is unresolved")]
    ClassificationAmbiguous {
        deriv_mod: f64,
        multiplicity: Option<usize>,
    },

    #[error("lift discontinuity: unwrapped winding {winding} does not equal degree {degree}; double the grid size")]
    LiftDiscontinuity { winding: f64, degree: usize },

    #[error("limit exceeded: {0}")]
    LimitExceeded(String),

    #[error("not found: only {achieved} of {requested} orbits available")]
    NotFound { requested: usize, achieved: usize },

    #[error("depth exceeded: tree would visit {nodes} nodes (cap {cap})")]
    DepthExceeded { nodes: u64, cap: u64 },

    #[error("orbit shortage: {0}")]
    OrbitShortage(String),

    #[error("non-analytic: negative-frequency energy ratio {ratio:e} exceeds {tol:e}")]
    NonAnalytic { ratio: f64, tol: f64 },

    #[error("layer budget exceeded: {0}")]
    LayerBudgetExceeded(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("basin unresolved: {0}")]
    BasinUnresolved(String),
}

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidInput(_) => "InvalidInput",
            Error::PoleProximity(_) => "PoleProximity",
            Error::ClassificationAmbiguous { .. } => "ClassificationAmbiguous",
            Error::LiftDiscontinuity { .. } => "LiftDiscontinuity",
            Error::LimitExceeded(_) => "LimitExceeded",
            Error::NotFound { .. } => "NotFound",
            Error::DepthExceeded { .. } => "DepthExceeded",
            Error::OrbitShortage(_) => "OrbitShortage",
            Error::NonAnalytic { .. } => "NonAnalytic",
            Error::LayerBudgetExceeded(_) => "LayerBudgetExceeded",
            Error::Unsupported(_) => "Unsupported",
            Error::BasinUnresolved(_) => "BasinUnresolved",
        }
    }

    /// True for errors caused by bad caller input rather than a failed computation.
    pub fn is_validation(&self) -> bool {
        matches!(self, Error::InvalidInput(_) | Error::Unsupported(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
