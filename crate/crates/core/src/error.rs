use thiserror::Error;

/// Errors raised by the certification kernel.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("operation is undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("polynomial degree {0} is too low for this operation")]
    DegreeTooLow(usize),
    #[error("polynomial has no real root")]
    NoRealRoot,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("subset size {size} is outside 1..={max}")]
    BadSubsetSize { size: usize, max: usize },
    #[error("equation is not Upsilon-stable")]
    NotStableEquation,
    #[error("equation is not strictly Upsilon-stable")]
    NotStrictlyStable,
    #[error("denominator of the level-set graph is not positive")]
    DenominatorNotPositive,
    #[error("could not sample {wanted} points inside the cone after {attempts} attempts")]
    SamplingExhausted { wanted: usize, attempts: usize },
    #[error("log-concavity ratio derivative is undefined at a critical point")]
    CriticalPoint,
    #[error("polynomial is not right-Noetherian")]
    NotCertified,
    #[error("deformation parameter outside [x_m, x_0]: {0}")]
    OutOfDeformationRange(String),
    #[error("coordinate {0} is zero")]
    ZeroCoordinate(usize),
    #[error("point is not on the level set (residual {0})")]
    NotOnLevelSet(String),
    #[error("constant must be positive")]
    NonPositiveConstant,
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("phase is outside both admissible branches")]
    PhaseOutOfRange,
    #[error("phase makes the leading coefficient vanish")]
    DegeneratePhase,
    #[error("closed-form criterion only covers n in 2..=4, got {0}")]
    DegreeOutOfRange(usize),
    #[error("top coefficient c_(n-1) must be zero; translate first")]
    TopCoefficientNotZero,
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
