use thiserror::Error;

use crate::cosmo::CosmoError;
use crate::ionchain::IonChainError;
use crate::linalg::LinalgError;
use crate::numerics::NumericsError;
use crate::specfun::SpecfunError;

/// Any failure raised by the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Special-function evaluation failed.
    #[error(transparent)]
    Specfun(#[from] SpecfunError),
    /// Ion-chain construction failed.
    #[error(transparent)]
    IonChain(#[from] IonChainError),
    /// Scale factor, map or window problem.
    #[error(transparent)]
    Cosmo(#[from] CosmoError),
    /// Quadrature or root finding failed.
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    /// Dense linear algebra failed.
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    /// Detector parameters violate their invariants.
    #[error("invalid detector: {0}")]
    InvalidDetector(&'static str),
    /// The red/blue ratio has a vanishing denominator.
    #[error("ratio denominator {0:e} is below 1e-300")]
    DegenerateRatio(f64),
    /// The integrand oscillates too fast to panelize within the cap.
    #[error("integrand needs more than {0} panels")]
    TooOscillatory(usize),
}
