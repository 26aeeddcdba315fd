use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid fraction {p}/{q}: need 0 < p < q and gcd(p, q) = 1")]
    InvalidFraction { p: String, q: String },

    #[error("cannot parse fraction from {0:?}; expected \"p/q\"")]
    ParseFraction(String),

    #[error("invalid continued fraction vector: {0}")]
    InvalidVector(String),

    #[error("partial quotient of {0} does not fit in 64 bits")]
    PartialQuotientOverflow(String),

    #[error("numerator {0} is even; oriented equivalence needs odd numerators")]
    EvenNumerator(String),

    #[error("{0} is not a two-component link (denominator is odd)")]
    NotTwoComponent(String),

    #[error("orientation {tag} is not legal for denominator {q} ({reason})")]
    IllegalOrientation {
        tag: &'static str,
        q: String,
        reason: &'static str,
    },

    #[error("diagram with {0} crossings exceeds the supported size")]
    TooLarge(u128),

    #[error("invalid signed vector: {0}")]
    InvalidSignedVector(String),

    #[error("not an R-decomposition: {0}")]
    NotRDecomposition(String),

    #[error("{what} is undefined for n = {n}")]
    OutOfRange { what: &'static str, n: i64 },
}

pub type Result<T> = std::result::Result<T, Error>;
