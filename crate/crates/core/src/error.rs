use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parity condition fails: chi(-1)psi(-1) = {product} but (-1)^k = {expected} for k = {weight}")]
    Parity {
        weight: u32,
        product: i32,
        expected: i32,
    },

    #[error("residue {residue} is not coprime to modulus {modulus}")]
    NotCoprime { residue: i64, modulus: u64 },

    #[error("character modulus {character} does not divide {modulus}")]
    ModulusMismatch { character: u64, modulus: u64 },

    #[error("value at index {index} is not real: {value}")]
    NotReal { index: u64, value: String },

    #[error("need at least {required} primes, got {supplied}")]
    TooFewPrimes { required: usize, supplied: usize },

    #[error("zeta exponent vector is not empty; expression does not detect primes")]
    NonTrivialExponents,

    #[error("no opposite-sign partner at top degree {degree}")]
    MissingPartner { degree: u32 },

    #[error("iteration bound {bound} exceeded")]
    IterationBound { bound: u64 },

    #[error("parse error: {0}")]
    Parse(String),
}
