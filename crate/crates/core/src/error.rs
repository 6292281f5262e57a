use thiserror::Error;

/// Errors raised by the library. The CLI maps [`WzError::is_convergence`] to exit code 3 and
/// everything else to exit code 2.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum WzError {
    #[error("invalid group type: {0}")]
    InvalidGroup(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("energy must be non-negative, got {0}")]
    NegativeEnergy(f64),

    #[error("oracle limited to rank <= 8, got rank {0}")]
    OracleRankLimit(usize),

    #[error("invalid path: {0}")]
    InvalidPath(String),

    #[error("path endpoint is not a lattice point: {0}")]
    NonLatticeEndpoint(String),

    #[error("need at least {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },

    #[error("invalid spectral curve: {0}")]
    InvalidCurve(String),

    #[error("branch point too close to the unit circle: min |P| = {min_abs:e} below floor {floor:e}")]
    BranchSafety { min_abs: f64, floor: f64 },

    #[error("endpoint constraint violated: log mu at theta = {theta} is {distance:e} away from 2 pi i Z")]
    EndpointConstraint { theta: f64, distance: f64 },

    #[error("log mu not purely imaginary on the unit circle: max |Re log mu| = {0:e}")]
    NonUnitary(f64),

    #[error("lift invariant violated: {0}")]
    LiftInvariant(String),

    #[error("quadrature did not converge after {intervals} intervals (last change {last_change:e})")]
    NonConvergence { intervals: usize, last_change: f64 },

    #[error("convention error: {0}")]
    Convention(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("Maurer-Cartan projection residual {residual:e} exceeds {limit:e}; map too rough for the grid")]
    ProjectionResidual { residual: f64, limit: f64 },

    #[error("fraction {0} outside [0, 1]")]
    FractionOutOfRange(f64),

    #[error("sampler needs at least {min} samples, got {got}")]
    SamplerTooSmall { min: u64, got: u64 },

    #[error("{0}")]
    Parse(String),
}

impl WzError {
    pub fn is_convergence(&self) -> bool {
        matches!(self, WzError::NonConvergence { .. })
    }
}

pub type Result<T> = std::result::Result<T, WzError>;
