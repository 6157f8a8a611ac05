//! MacMahon's partition functions
//!
//! ```text
//! M_a(n) = sum over 0 < s_1 < ... < s_a and n = m_1 s_1 + ... + m_a s_a of m_1 ... m_a
//! ```
//!
//! and the identity `(n^2 - 3n + 2) M_1(n) = 8 M_2(n)`, which holds for
//! `n >= 2` exactly when `n` is prime.

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::algebra::is_prime;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MacMahonTable {
    a: u32,
    values: Vec<BigUint>,
}

impl MacMahonTable {
    pub fn a(&self) -> u32 {
        self.a
    }

    pub fn nmax(&self) -> u64 {
        self.values.len() as u64 - 1
    }

    /// `M_a(n)` for `n <= nmax`.
    pub fn get(&self, n: u64) -> Option<&BigUint> {
        self.values.get(n as usize)
    }

    pub fn values(&self) -> &[BigUint] {
        &self.values
    }

    /// `n,M_a(n)` lines with a header.
    pub fn to_csv(&self) -> String {
        let mut out = format!("n,M_{}(n)\n", self.a);
        for (n, v) in self.values.iter().enumerate() {
            out.push_str(&format!("{n},{v}\n"));
        }
        out
    }
}

/// `M_a(0..=nmax)` from `sum_n M_a(n) q^n = sum_{s_1 < ... < s_a} prod q^(s_i) / (1 - q^(s_i))^2`.
///
/// `chains[j]` accumulates the products over chains of length `j` whose parts
/// are all below the current `s`; each new part `s` extends the chains of
/// length `j - 1`.
pub fn macmahon_table(a: u32, nmax: u64) -> Result<MacMahonTable> {
    if a == 0 {
        return Err(Error::InvalidInput("M_a needs a >= 1".into()));
    }
    let len = nmax as usize + 1;
    let a = a as usize;
    let mut chains: Vec<Vec<BigUint>> = vec![vec![BigUint::zero(); len]; a + 1];
    chains[0][0] = BigUint::from(1u32);
    let mut scratch = vec![BigUint::zero(); len];
    for s in 1..len {
        for j in (1..=a).rev() {
            // smallest n reachable by a chain of length j ending at s
            let floor = (j - 1) * j / 2 + s;
            if floor >= len || chains[j - 1].iter().all(Zero::is_zero) {
                continue;
            }
            for x in scratch.iter_mut() {
                x.set_zero();
            }
            for n in s..len {
                scratch[n].clone_from(&chains[j - 1][n - s]);
            }
            for _ in 0..2 {
                for n in s..len {
                    let (lo, hi) = scratch.split_at_mut(n);
                    hi[0] += &lo[n - s];
                }
            }
            for (dst, src) in chains[j].iter_mut().zip(&scratch) {
                *dst += src;
            }
        }
    }
    Ok(MacMahonTable { a: a as u32, values: chains.swap_remove(a) })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityMismatch {
    pub n: u64,
    #[serde(with = "bigint_string")]
    pub lhs: BigInt,
    #[serde(with = "bigint_string")]
    pub rhs: BigInt,
    pub is_prime: bool,
}

/// `n` in `2..=nmax` where "`(n^2-3n+2) M_1(n) = 8 M_2(n)`" and "`n` is prime" disagree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub nmax: u64,
    pub checked: u64,
    pub mismatches: Vec<IdentityMismatch>,
}

impl IdentityReport {
    pub fn holds(&self) -> bool {
        self.mismatches.is_empty()
    }
}

pub fn identity_sides(m1: &BigUint, m2: &BigUint, n: u64) -> (BigInt, BigInt) {
    let n = BigInt::from(n);
    let lhs = (&n * &n - BigInt::from(3) * &n + BigInt::from(2)) * BigInt::from(m1.clone());
    let rhs = BigInt::from(8) * BigInt::from(m2.clone());
    (lhs, rhs)
}

pub fn verify_prime_identity(nmax: u64) -> Result<IdentityReport> {
    if nmax < 2 {
        return Err(Error::InvalidInput("identity scan needs nmax >= 2".into()));
    }
    let m1 = macmahon_table(1, nmax)?;
    let m2 = macmahon_table(2, nmax)?;
    let mut mismatches = Vec::new();
    for n in 2..=nmax {
        let (lhs, rhs) = identity_sides(&m1.values[n as usize], &m2.values[n as usize], n);
        let prime = is_prime(n);
        if (lhs == rhs) != prime {
            mismatches.push(IdentityMismatch { n, lhs, rhs, is_prime: prime });
        }
    }
    Ok(IdentityReport { nmax, checked: nmax - 1, mismatches })
}

mod bigint_string {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}
