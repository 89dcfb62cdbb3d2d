use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid degree {0}: expected an odd integer >= 3")]
    InvalidDegree(usize),
    #[error("singular parameter: {0}")]
    SingularParameter(String),
    #[error("degenerate spectral parameter: s^ell = 1")]
    DegenerateSpectralParameter,
    #[error("invalid representation parameters: {0}")]
    InvalidParams(String),
    #[error("degenerate character: {0}")]
    DegenerateCharacter(String),
    #[error("inconsistent lift: {0}")]
    InconsistentLift(String),
    #[error("non-generic representation: {0}")]
    NonGeneric(String),
    #[error("singular braiding: Omega = {0:e}")]
    SingularBraiding(f64),
    #[error("matrix is not factorizable: {0}")]
    NonFactorizable(String),
    #[error("no intertwiner: smallest singular value {sigma_min:e} relative to {sigma_max:e}")]
    NoIntertwiner { sigma_min: f64, sigma_max: f64 },
    #[error("branch mismatch: {0}")]
    BranchMismatch(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("rejected triple: {0}")]
    RejectedTriple(String),
    #[error("sampling exhausted after {0} attempts")]
    SamplingExhausted(usize),
    #[error("parse error: {0}")]
    Parse(String),
}
