//! Scanning coefficient sequences over arithmetic progressions: prime
//! detection, strong detection and sign changes at primes.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::algebra::arith::gcd_i64;
use crate::algebra::rational::sign;
use crate::algebra::{is_prime, CycValue};
use crate::error::{Error, Result};
use crate::qseries::CoefficientSource;

/// `{n : n = residue (mod modulus)}` with `0 <= residue < modulus`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Progression {
    residue: u64,
    modulus: u64,
}

impl Progression {
    pub fn new(residue: i64, modulus: u64) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::InvalidInput("progression modulus must be positive".into()));
        }
        Ok(Progression { residue: residue.rem_euclid(modulus as i64) as u64, modulus })
    }

    /// Every integer.
    pub fn all() -> Self {
        Progression { residue: 0, modulus: 1 }
    }

    pub fn residue(&self) -> u64 {
        self.residue
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn contains(&self, n: u64) -> bool {
        n % self.modulus == self.residue
    }

    pub fn is_coprime(&self) -> bool {
        gcd_i64(self.residue as i64, self.modulus) == 1
    }

    /// Members `1..=bound` in increasing order.
    pub fn members(&self, bound: u64) -> impl Iterator<Item = u64> {
        let first = if self.residue == 0 { self.modulus } else { self.residue };
        (first..=bound).step_by(self.modulus as usize)
    }

    /// CRT: `None` when the residues disagree modulo `gcd` of the moduli.
    pub fn intersection(&self, other: &Progression) -> Option<Progression> {
        let (m1, m2) = (self.modulus as i128, other.modulus as i128);
        let (r1, r2) = (self.residue as i128, other.residue as i128);
        let e = m1.extended_gcd(&m2);
        let g = e.gcd;
        if (r2 - r1) % g != 0 {
            return None;
        }
        let lcm = m1 / g * m2;
        // r1 + m1 * t with m1 t = r2 - r1 (mod m2)
        let t = ((r2 - r1) / g * e.x).rem_euclid(m2 / g);
        let x = (r1 + m1 * t).rem_euclid(lcm);
        Some(Progression { residue: x as u64, modulus: lcm as u64 })
    }
}

impl fmt::Display for Progression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.residue, self.modulus)
    }
}

/// `"m/M"`.
impl FromStr for Progression {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = |msg: &str| Error::Parse(format!("progression {s:?}: {msg}"));
        let (m, modulus) = s.split_once('/').ok_or_else(|| bad("expected m/M"))?;
        let m: i64 = m.trim().parse().map_err(|_| bad("residue is not an integer"))?;
        let modulus: u64 = modulus.trim().parse().map_err(|_| bad("modulus is not a positive integer"))?;
        Progression::new(m, modulus).map_err(|e| bad(&e.to_string()))
    }
}

/// Residues `n mod N` coprime to `N` whose class meets `m mod M`.
pub fn v_set(residue: i64, modulus: u64, level: u64) -> Result<Vec<u64>> {
    let target = Progression::new(residue, modulus)?;
    if !target.is_coprime() {
        return Err(Error::NotCoprime { residue, modulus });
    }
    if level == 0 {
        return Err(Error::InvalidInput("level must be positive".into()));
    }
    Ok((0..level)
        .filter(|&n| gcd_i64(n as i64, level) == 1)
        .filter(|&n| Progression { residue: n, modulus: level }.intersection(&target).is_some())
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DetectionVerdict {
    StronglyDetects,
    Detects,
    Fails,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Expected {
    Zero,
    Nonzero,
}

/// A coefficient contradicting the verdict: a prime with `c(p) != 0` or,
/// in a strong scan, a non-prime with `c(n) = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub n: u64,
    pub value: CycValue,
    pub expected: Expected,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ScanOptions {
    /// Also require `c(n) != 0` off the primes.
    pub strong: bool,
    pub max_witnesses: usize,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions { strong: false, max_witnesses: 20 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DetectionReport {
    pub verdict: DetectionVerdict,
    pub progression: Progression,
    pub level: u64,
    pub bound: u64,
    pub strong: bool,
    pub primes_checked: u64,
    pub others_checked: u64,
    /// Every coefficient examined was zero, so detection holds for lack of
    /// anything to detect.
    pub vacuous: bool,
    pub prime_failures: u64,
    pub nonprime_zeros: u64,
    /// Sorted by `n`, at most `max_witnesses`.
    pub witnesses: Vec<Witness>,
}

/// Check `c(p) = 0` for primes `p <= bound`, `p` in the progression and
/// `p` not dividing `level`; a strong scan also checks `c(n) != 0` for the
/// remaining `n` (including `n = 1`) in the progression coprime to `level`.
pub fn scan_detection(
    source: &dyn CoefficientSource,
    progression: Progression,
    level: u64,
    bound: u64,
    options: ScanOptions,
) -> Result<DetectionReport> {
    if level == 0 {
        return Err(Error::InvalidInput("level must be positive".into()));
    }
    if let Some(b) = source.bound() {
        if b < bound {
            return Err(Error::InvalidInput(format!("source knows coefficients up to {b}, scan needs {bound}")));
        }
    }
    let mut report = DetectionReport {
        verdict: DetectionVerdict::Detects,
        progression,
        level,
        bound,
        strong: options.strong,
        primes_checked: 0,
        others_checked: 0,
        vacuous: true,
        prime_failures: 0,
        nonprime_zeros: 0,
        witnesses: Vec::new(),
    };
    for n in progression.members(bound) {
        if gcd_i64(n as i64, level) != 1 {
            continue;
        }
        let prime = is_prime(n);
        if !prime && !options.strong {
            continue;
        }
        let value = source.coefficient(n);
        if !value.is_zero() {
            report.vacuous = false;
        }
        let witness = if prime {
            report.primes_checked += 1;
            (!value.is_zero()).then(|| {
                report.prime_failures += 1;
                Expected::Zero
            })
        } else {
            report.others_checked += 1;
            value.is_zero().then(|| {
                report.nonprime_zeros += 1;
                Expected::Nonzero
            })
        };
        if let Some(expected) = witness {
            if report.witnesses.len() < options.max_witnesses {
                report.witnesses.push(Witness { n, value, expected });
            }
        }
    }
    report.verdict = if report.prime_failures > 0 {
        DetectionVerdict::Fails
    } else if options.strong && report.nonprime_zeros == 0 {
        DetectionVerdict::StronglyDetects
    } else {
        DetectionVerdict::Detects
    };
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignChangeReport {
    pub progression: Progression,
    pub bound: u64,
    pub primes_examined: u64,
    pub nonzero: u64,
    pub count: u64,
    /// Primes at which the sign differs from the previous nonzero value.
    pub positions: Vec<u64>,
}

/// Adjacent sign flips among the nonzero `c(p)`, `p <= bound` prime in the progression.
pub fn sign_changes(source: &dyn CoefficientSource, progression: Progression, bound: u64) -> Result<SignChangeReport> {
    let mut report = SignChangeReport {
        progression,
        bound,
        primes_examined: 0,
        nonzero: 0,
        count: 0,
        positions: Vec::new(),
    };
    let mut last = 0;
    for p in progression.members(bound).filter(|&n| is_prime(n)) {
        report.primes_examined += 1;
        let value = source.coefficient(p);
        let r = value.to_rational().ok_or_else(|| Error::NotReal { index: p, value: value.to_string() })?;
        let s = sign(&r);
        if s == 0 {
            continue;
        }
        report.nonzero += 1;
        if last != 0 && s != last {
            report.count += 1;
            report.positions.push(p);
        }
        last = s;
    }
    Ok(report)
}
