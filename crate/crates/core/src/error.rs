use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("form is not positive definite")]
    NotPositiveDefinite,
    #[error("result is not integral")]
    NonIntegralResult,
    #[error("{0} is not square free")]
    NotSquareFree(i64),
    #[error("{0} is not a prime")]
    NotPrime(i64),
    #[error("prime {0} divides 2 times the discriminant")]
    BadPrime(i64),
    #[error("lattice is not a hyperbolic plane plus a rank one block at {0}")]
    NotHyperbolicAtP(i64),
    #[error("form is not primitive")]
    NotPrimitive,
    #[error("discriminants do not satisfy n*dM = dN")]
    DiscriminantMismatch,
    #[error("not a representable pair by scaling {0}")]
    NotRepresentable(i64),
    #[error("no perfect matching")]
    NoMatching,
    #[error("hypothesis failed: {0}")]
    HypothesisFailure(String),
    #[error("genus table is not closed under neighbors")]
    IncompleteGenus,
    #[error("cannot parse form: {0}")]
    Parse(String),
    #[error("integer overflow")]
    Overflow,
}

impl Error {
    /// Stable variant name for machine-readable reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NotPositiveDefinite => "NotPositiveDefinite",
            Error::NonIntegralResult => "NonIntegral",
            Error::NotSquareFree(_) => "NotSquareFree",
            Error::NotPrime(_) => "NotPrime",
            Error::BadPrime(_) => "BadPrime",
            Error::NotHyperbolicAtP(_) => "NotHyperbolicAtP",
            Error::NotPrimitive => "NotPrimitive",
            Error::DiscriminantMismatch => "DiscriminantMismatch",
            Error::NotRepresentable(_) => "NotRepresentable",
            Error::NoMatching => "NoMatching",
            Error::HypothesisFailure(_) => "HypothesisFailure",
            Error::IncompleteGenus => "IncompleteGenus",
            Error::Parse(_) => "ParseError",
            Error::Overflow => "Overflow",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
