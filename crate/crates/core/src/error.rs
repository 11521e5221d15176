use num_bigint::BigInt;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    /// An argument is outside the domain of the operation.
    #[error("{name} must be {requirement}, got {value}")]
    Domain {
        name: &'static str,
        requirement: &'static str,
        value: BigInt,
    },

    #[error("{0} is not prime")]
    NotPrime(BigInt),

    #[error("operation requires a polynomial of degree at least 1")]
    ConstantPolynomial,

    #[error("search window bound {bound} exceeds t-cap {cap}")]
    WindowExceedsCap { bound: BigInt, cap: BigInt },

    #[error("prime power {prime_power} exceeds the enumeration cap {cap}")]
    PrimePowerCap { prime_power: BigInt, cap: u64 },

    #[error("P({t}) = {value} is not a term of the progression")]
    NotInProgression { t: BigInt, value: BigInt },

    #[error("witness extraction needs t != t0 (both were {0})")]
    EqualPoints(BigInt),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("empty parameter range: {0}")]
    EmptyRange(&'static str),

    #[error("search needs {cells} cells, budget is {budget}")]
    BudgetExceeded { cells: u128, budget: u128 },

    #[error("thread pool: {0}")]
    ThreadPool(String),

    /// A count exceeded the bound proven for it. Always an implementation bug.
    #[error("bound violated at {0}")]
    BoundViolation(Box<Violation>),

    /// A checked invariant failed. Always an implementation bug.
    #[error("internal invariant failed: {0}")]
    Invariant(String),
}

impl Error {
    /// True for the error classes that indicate a bug rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::BoundViolation(_) | Error::Invariant(_))
    }

    pub(crate) fn domain(
        name: &'static str,
        requirement: &'static str,
        value: impl Into<BigInt>,
    ) -> Self {
        Error::Domain {
            name,
            requirement,
            value: value.into(),
        }
    }
}

/// The cell and counts behind a [`Error::BoundViolation`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub k: u32,
    pub q: BigInt,
    pub a: BigInt,
    pub n: BigInt,
    pub count_t: BigInt,
    pub bound: BigInt,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "k={} q={} a={} N={}: count_t={} > bound={}",
            self.k, self.q, self.a, self.n, self.count_t, self.bound
        )
    }
}
