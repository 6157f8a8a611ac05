//! Exact q-expansions, twisted Eisenstein series and divisor-sum identities
//! whose coefficients vanish at primes.

pub mod algebra;
pub mod cli;
pub mod detector;
pub mod eisenstein;
pub mod error;
pub mod macmahon;
pub mod qseries;
pub mod wexpr;

pub use error::{Error, Result};
