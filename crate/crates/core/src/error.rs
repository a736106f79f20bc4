use alloc::string::String;

/// Errors raised by the numerical kernels.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("expected a positive argument, got {0}")]
    NonPositiveInput(f64),
    #[error("declared growth indices are inconsistent with the sampled ratio: {0}")]
    IndexViolation(String),
    #[error("could not bracket a root: {0}")]
    BracketFailure(String),
    #[error("critical exponent undefined: N - s*m = {0} <= 0")]
    CriticalExponentUndefined(f64),
    #[error("holder quotient requested on the diagonal x = y")]
    DiagonalPair,
    #[error("weighted q-norm vanishes, Rayleigh quotient undefined")]
    ZeroDenominator,
    #[error("point is not on the Nehari set: |R_n - mu| = {0:e}")]
    NotOnNehari(f64),
    #[error("no admissible seed: every seed has Lambda_n(u) >= mu")]
    NoAdmissibleSeed,
    #[error("invalid regime: {0}")]
    InvalidRegime(String),
    #[error("continuation stalled: {0}")]
    ContinuationStall(String),
    #[error("hypotheses violated: {0}")]
    HypothesisFailure(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = core::result::Result<T, Error>;
