use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("{0} is not a prime modulus")]
    NotPrime(u64),

    #[error("linear system has only the zero solution")]
    NoSolution,

    #[error("degenerate map: the coordinate forms share a nonconstant common factor")]
    DegenerateMap,

    #[error("no nonzero hypersurface contains the sampled curve ({conditions} conditions on {coefficients} coefficients)")]
    NoHypersurface {
        conditions: usize,
        coefficients: usize,
    },

    #[error("inconsistent marking: {0}")]
    InconsistentMarking(String),

    #[error("enumeration needs {required} evaluations, budget is {budget}")]
    BudgetExceeded { required: u128, budget: u64 },

    #[error("prime {prime} is too small: need p > {bound}")]
    PrimeTooSmall { prime: u64, bound: u64 },

    #[error("dimension estimate needs counts for at least two primes, got {0}")]
    InsufficientPrimes(usize),

    #[error("usage: {0}")]
    Usage(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
