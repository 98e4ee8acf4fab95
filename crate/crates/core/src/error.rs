use thiserror::Error;

/// Errors raised by the numeric and arithmetic routines.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("invalid precision context: {0}")]
    InvalidContext(String),
    #[error("series did not converge within {terms} terms")]
    NonConvergent { terms: usize },
    #[error("cancellation exceeds the working precision ({0})")]
    PrecisionExhausted(String),
    #[error("pole at nonpositive integer {0}")]
    PoleAtNonpositiveInteger(String),
    #[error("argument outside the disc of convergence: {0}")]
    DivergentArgument(String),
    #[error("boundary evaluation without convergence certificate: {0}")]
    NonConvergentBoundary(String),
    #[error("all group-law expressions vanish")]
    DegenerateFormula,
    #[error("divisor not supported on the 3-torsion: {0}")]
    SupportComputationFailed(String),
    #[error("singular curve")]
    SingularCurve,
    #[error("root number could not be resolved: {0}")]
    RootNumberUnresolved(String),
    #[error("argument on the branch cut: {0}")]
    BranchUndefined(String),
    #[error("singular parameter t = {0}")]
    SingularParameter(String),
    #[error("reduction is not split multiplicative at {0}")]
    NotMultiplicative(String),
    #[error("cubic root tracking failed at {0}")]
    RootTrackingFailed(String),
    #[error("parameter on the boundary of the curved triangle: {0}")]
    OnBoundary(String),
    #[error("membership inconclusive near the sampled boundary")]
    Inconclusive,
    #[error("malformed cache file: {0}")]
    CacheFormat(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    /// True for errors caused by inputs outside an operation's domain, as
    /// opposed to failures of the implementation itself.
    pub fn is_domain(&self) -> bool {
        !matches!(
            self,
            Error::DegenerateFormula
                | Error::SupportComputationFailed(_)
                | Error::PrecisionExhausted(_)
                | Error::RootTrackingFailed(_)
                | Error::Io(_)
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
