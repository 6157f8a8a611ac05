//! Coefficient domain: rationals, cyclotomic values and Dirichlet characters.

pub mod arith;
pub mod character;
pub mod cyclotomic;
pub mod rational;

pub use arith::{divisors, euler_phi, factorize, is_prime, kronecker, primes_up_to};
pub use character::{enumerate_characters, DirichletCharacter, UnitGroup};
pub use cyclotomic::CycValue;
pub use rational::{parse_rational, rational_to_string, Rational};
