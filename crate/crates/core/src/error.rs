use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("matrix is not Hermitian (asymmetry {asymmetry:.3e}, scale {scale:.3e})")]
    NotHermitian { asymmetry: f64, scale: f64 },

    #[error("matrix is not positive definite (pivot {pivot:.3e} below {threshold:.3e})")]
    NotPositiveDefinite { pivot: f64, threshold: f64 },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The receiver's SINR target cannot be met within the energy budget.
    /// Alice must not transmit.
    #[error("no transmission possible: {0}")]
    NoTransmit(String),

    #[error("bisection failed after {iterations} iterations (residual {residual:.3e}): {reason}")]
    Bisection {
        iterations: usize,
        residual: f64,
        reason: &'static str,
    },

    /// Phase-1 certified that no PSD matrix meets every constraint.
    #[error("SDP infeasible: best attainable min constraint ratio {max_min_ratio:.6}")]
    SdpInfeasible { max_min_ratio: f64 },

    #[error(
        "SDP did not converge in {iterations} iterations \
         (primal {primal_residual:.3e}, dual {dual_residual:.3e}, gap {gap:.3e})"
    )]
    SdpNotConverged {
        iterations: usize,
        primal_residual: f64,
        dual_residual: f64,
        gap: f64,
    },

    #[error("Gaussian randomization found no feasible sample among {samples}")]
    RandomizationFailed { samples: usize },

    #[error("precondition violated: {0}")]
    Precondition(&'static str),

    #[error("eigensolver did not converge after {sweeps} sweeps")]
    EigenNotConverged { sweeps: usize },
}

impl Error {
    /// Short machine-readable tag, stable across releases.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NotHermitian { .. } => "not-hermitian",
            Error::NotPositiveDefinite { .. } => "not-positive-definite",
            Error::Dimension(_) => "dimension",
            Error::InvalidParameter(_) => "invalid-parameter",
            Error::NoTransmit(_) => "no-transmit",
            Error::Bisection { .. } => "bisection",
            Error::SdpInfeasible { .. } => "sdp-infeasible",
            Error::SdpNotConverged { .. } => "sdp-not-converged",
            Error::RandomizationFailed { .. } => "randomization-failed",
            Error::Precondition(_) => "precondition",
            Error::EigenNotConverged { .. } => "eigen-not-converged",
        }
    }
}
