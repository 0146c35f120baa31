use std::fmt;

use thiserror::Error;

/// Which hypothesis of the extraneous-solution construction failed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Hypothesis {
    /// `P^y ≢ c + S^x` in the ring.
    Congruence,
    /// Neither `2^x` nor `3^y` is determinate.
    NothingDeterminate,
    /// `x > 2` was required.
    TwoExponentTooSmall,
    /// `y > 0` was required.
    ThreeExponentZero,
    /// `2^(x-1)` divides the order of 3 modulo the part coprime to 6.
    TwoPowerDividesOrderOfThree,
    /// `3^y` divides the order of 2 modulo the part coprime to 6.
    ThreePowerDividesOrderOfTwo,
}

impl fmt::Display for Hypothesis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Hypothesis::Congruence => "3^y is not congruent to c + 2^x",
            Hypothesis::NothingDeterminate => "neither 2^x nor 3^y is determinate",
            Hypothesis::TwoExponentTooSmall => "x must exceed 2",
            Hypothesis::ThreeExponentZero => "y must be positive",
            Hypothesis::TwoPowerDividesOrderOfThree => "2^(x-1) divides O_3'(M)",
            Hypothesis::ThreePowerDividesOrderOfTwo => "3^y divides O_2'(M)",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("{a} and {b} are not coprime")]
    NotCoprime { a: String, b: String },

    #[error("could not factor {n} within the configured effort bound")]
    FactorizationNeeded { n: u64 },

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("prime power {prime}^{exp} does not fit in 64 bits")]
    PrimePowerTooLarge { prime: u64, exp: u32 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("base modulus has {range} canonical exponents, above the bound {bound}")]
    BaseModulusTooLarge { range: String, bound: usize },

    #[error("{prev} does not divide {next}")]
    NotDivisible { prev: String, next: String },

    #[error("unbalanced lifting does not apply: {0}")]
    UnbalancedInapplicable(String),

    #[error("meet-in-the-middle list of {requested} entries exceeds the cap of {cap}")]
    MemoryBudgetExceeded { requested: u128, cap: usize },

    #[error("new part {0} of the step modulus does not fit in 64 bits")]
    StepModulusTooLarge(String),

    #[error("exponent range {0} does not fit in 64 bits")]
    ExponentOverflow(String),

    #[error("discrete log subgroup of prime order {0} is too large for baby-step giant-step")]
    SubgroupTooLarge(u64),

    #[error("chain exhausted at index {index} with {remaining} indeterminate solutions left")]
    ChainExhausted {
        index: usize,
        remaining: usize,
        partial: Box<crate::solver::ChainRun>,
    },

    #[error("precondition violated: {0}")]
    PreconditionViolated(Hypothesis),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
