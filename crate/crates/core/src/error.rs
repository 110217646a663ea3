use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("(g, n) = ({g}, {n}) is outside the range supported by this operation")]
    Unstable { g: u32, n: u32 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("zeta({0}) has no closed form as a rational multiple of a power of pi")]
    OddZeta(u32),

    #[error("zeta(1) diverges")]
    Divergent,

    #[error("cannot add pi^{left} and pi^{right} as a single monomial")]
    PiExponentMismatch { left: i32, right: i32 },

    #[error("division by a zeta expression that is not a single monomial")]
    NonMonomialDivisor,

    #[error("division by zero")]
    DivisionByZero,

    #[error("correlator cache: {0}")]
    Cache(String),

    #[error("internal consistency failure: {0}")]
    Consistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;
