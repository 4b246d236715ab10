use thiserror::Error;

/// Errors raised by the state constructors, channel maps and analysis routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("variance must be positive and finite, got {0}")]
    NonPositiveVariance(f64),

    #[error("uncertainty product vx*vy = {product} is below the vacuum limit 1")]
    HeisenbergViolation { product: f64 },

    #[error("transmission eta = {0} is outside [0, 1]")]
    EtaOutOfRange(f64),

    #[error("beam-splitter transmission T = {0} is outside [0, 1]")]
    TOutOfRange(f64),

    #[error(
        "target amplitude variance {vx_target} is not reachable: denominator {denominator} <= 0"
    )]
    InfeasibleTarget { vx_target: f64, denominator: f64 },

    #[error(
        "coherent amplitude quadrature (vx = 1): no squeezing is available to trade for purity"
    )]
    CoherentInputDegenerate,

    #[error("target amplitude variance {vx_target} is outside [{vx}, 1]")]
    TargetOutOfRange { vx: f64, vx_target: f64 },

    #[error("input is not amplitude squeezed (vx = {0} > 1)")]
    NotSqueezed(f64),

    #[error("feed-forward configuration out of range: {0}")]
    ConfigOutOfRange(String),

    #[error("photon number must be non-negative, got {0}")]
    NegativePhotonNumber(f64),

    #[error("signal photon budget exhausted: n_signal = {0} < 0")]
    SignalBudgetExhausted(f64),

    #[error("covariance matrix is unphysical: {0}")]
    UnphysicalCovariance(String),

    #[error("invalid sampling run: {0}")]
    InvalidRun(String),
}

pub type Result<T> = std::result::Result<T, Error>;
