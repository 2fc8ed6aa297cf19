//! Error types shared by the whole crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong in the sensor model.
///
/// Numeric payloads are stored as `f64` regardless of the scalar type the
/// computation ran in, so the error type stays non-generic.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    /// A constructor or operation received a value outside its domain.
    #[error("invalid {name}: {message}")]
    InvalidInput {
        name: &'static str,
        message: String,
    },

    /// Hurwitz zeta argument at or below the transverse channel opening.
    #[error("zeta argument a = {a} is outside (0, inf); the transverse channel is open")]
    ChannelOpen { a: f64 },

    /// Longitudinal momentum too large for the single-mode regime (p*d >= 2).
    #[error("p*d = {pd} >= 2: above the first excited transverse channel")]
    AboveSingleMode { pd: f64 },

    /// Phase shift requested for a non-propagating state.
    #[error("phase shift undefined at p = 0; use a strictly positive momentum")]
    ZeroMomentum,

    /// Finite-difference step underflowed to zero around the evaluation point.
    #[error("finite-difference step underflow at B = {b}")]
    StepUnderflow { b: f64 },

    /// A transmission left [0, 1]; indicates an internal inconsistency.
    #[error("transmission {t} outside [0, 1]: internal inconsistency")]
    TransmissionOutOfRange { t: f64 },

    /// Momentum-distribution truncation removed more than 1% of the mass.
    #[error("momentum window keeps only {mass:.6} of the distribution mass (> 1% truncated)")]
    TruncatedMass { mass: f64 },

    /// Adaptive quadrature failed to reach the requested tolerance.
    #[error("quadrature did not converge: estimated error {error_estimate}")]
    QuadratureFailure { error_estimate: f64 },

    /// Root bracketing failed: no sign change over the supplied interval.
    #[error("no sign change on [{lo}, {hi}]: root not bracketed")]
    NoBracket { lo: f64, hi: f64 },

    /// Transmission is not strictly monotone over the prior interval.
    #[error("transmission not strictly monotone on [{lo}, {hi}]; shrink the prior interval so it covers a single branch")]
    NonMonotonePrior { lo: f64, hi: f64 },

    /// Likelihood carries no field information (no detection events).
    #[error("no detection events recorded; the likelihood is flat in B")]
    NoDetections,

    /// Too many trials clamped at the prior boundary for the run to be valid.
    #[error("clamping rate {rate:.4} exceeds 1%: estimates pile up at the prior boundary")]
    ExcessiveClamping { rate: f64 },

    /// A probability left [0, 1] before sampling.
    #[error("detection probability {q} outside [0, 1]")]
    InvalidProbability { q: f64 },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, message: impl Into<String>) -> Self {
        Error::InvalidInput {
            name,
            message: message.into(),
        }
    }
}
