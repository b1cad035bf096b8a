use thiserror::Error;

/// Errors raised by the systems, fluxes and the finite-volume driver.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolverError {
    #[error("nonphysical state: {0}")]
    NonphysicalState(String),

    #[error("entropy Hessian is not positive definite (loss of convexity)")]
    SingularHessian,

    #[error("degenerate wave speeds: lambda_L = {lambda_l}, lambda_R = {lambda_r}")]
    DegenerateWaveSpeeds { lambda_l: f64, lambda_r: f64 },

    #[error("omega = {0} is outside [0, 1]")]
    OmegaOutOfRange(f64),

    #[error("normal magnetic field jumps across the interface by {0:e}")]
    B1Discontinuity(f64),

    #[error("all wave speeds vanish; the state does not evolve")]
    ZeroWaveSpeed,

    #[error("dissipation operator {0} is not available for system {1}")]
    UnsupportedDissipation(&'static str, &'static str),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("cell {cell} became nonphysical at t = {time}: {reason}")]
    CellFailure {
        cell: usize,
        time: f64,
        reason: String,
    },

    #[error("entropy violation at t = {time}: {detail}")]
    EntropyViolation { time: f64, detail: String },
}
