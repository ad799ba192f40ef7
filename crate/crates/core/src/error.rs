use thiserror::Error;

/// Errors raised by the toolkit's numerical routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("integration diverged after sample {last_valid}")]
    IntegrationDiverged { last_valid: usize },

    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("invalid gauge: {0}")]
    InvalidGauge(String),

    #[error("transverse linear term present (omega1={omega1}, omega2={omega2}); not an LMG configuration")]
    NotLmg { omega1: f64, omega2: f64 },

    #[error("degenerate axis: {0}; use the analytic special branch")]
    DegenerateAxis(String),

    #[error("point ({0}, {1}, {2}) is not on the ellipsoid surface")]
    InvalidPoint(f64, f64, f64),

    #[error("point is not stationary (|dJ/dt| = {residual:e})")]
    NotStationary { residual: f64 },

    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("undefined protocol: {0}")]
    UndefinedProtocol(String),

    #[error("no bistability: J = {big_j} must exceed 2|K3| = {threshold}")]
    NoBistability { big_j: f64, threshold: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error("malformed record: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
