//! Formal products of shifted zeta functions.
//!
//! A [`WExpression`] `W(s) = sum_j A_j zeta(s - l_j) zeta(s - l_j - k_j)` is
//! the Dirichlet series of `a(n) = sum_j A_j n^(l_j) sigma_(k_j)(n)`. The
//! coefficients `a(p)` vanish at every prime exactly when the zeta exponents
//! `Z_W` cancel, exactly when `W` is a rational combination of the
//! four-term blocks
//!
//! ```text
//! W_m = zeta(s-m1)zeta(s-m3) + zeta(s-m2)zeta(s-m4) - zeta(s-m1)zeta(s-m4) - zeta(s-m2)zeta(s-m3).
//! ```

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::algebra::arith::{divisors, is_prime, primes_up_to};
use crate::algebra::rational::{int_pow, parse_rational, rational_to_string, sign};
use crate::algebra::Rational;
use crate::error::{Error, Result};

/// Canonical sum of `A * zeta(s - l) zeta(s - l - k)`, keyed by `(l, k)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WExpression {
    terms: BTreeMap<(u32, u32), Rational>,
}

impl WExpression {
    pub fn zero() -> Self {
        Self::default()
    }

    /// Merge terms whose shift pairs `{l, l + k}` agree; drop zero totals.
    pub fn from_divisor_expression<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (Rational, u32, u32)>,
    {
        let mut w = Self::zero();
        for (a, l, k) in terms {
            w.add_term(a, l, k);
        }
        w
    }

    /// `zeta(s - a) zeta(s - b)` with coefficient `c`.
    pub fn zeta_pair(c: Rational, a: u32, b: u32) -> Self {
        let mut w = Self::zero();
        w.add_pair(c, a, b);
        w
    }

    fn add_term(&mut self, a: Rational, l: u32, k: u32) {
        self.add_pair(a, l, l + k);
    }

    fn add_pair(&mut self, a: Rational, x: u32, y: u32) {
        let key = (x.min(y), x.max(y) - x.min(y));
        let entry = self.terms.entry(key).or_insert_with(Rational::zero);
        *entry += a;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    /// `(A, l, k)` in ascending `(l, k)` order.
    pub fn terms(&self) -> impl Iterator<Item = (&Rational, u32, u32)> {
        self.terms.iter().map(|(&(l, k), a)| (a, l, k))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `R_W`: the largest shift `l + k`; 0 for the zero expression.
    pub fn top_degree(&self) -> u32 {
        self.terms.keys().map(|&(l, k)| l + k).max().unwrap_or(0)
    }

    /// `S_W`: total `|A|` over terms of top degree.
    pub fn top_mass(&self) -> Rational {
        let r = self.top_degree();
        self.terms.iter().filter(|(&(l, k), _)| l + k == r).map(|(_, a)| a.abs()).sum()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&(l, k), a) in &other.terms {
            out.add_term(a.clone(), l, k);
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        WExpression { terms: self.terms.iter().map(|(key, a)| (*key, a * c)).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Rational::one()))
    }

    /// `a(n) = sum A n^l sigma_k(n)`.
    pub fn coefficient_a(&self, n: u64) -> Rational {
        assert!(n >= 1, "a(n) is defined for n >= 1");
        let divs = divisors(n);
        let mut total = Rational::zero();
        for (&(l, k), a) in &self.terms {
            let sigma: BigInt = divs.iter().map(|&d| num_traits::pow(BigInt::from(d), k as usize)).sum();
            total += a * Rational::from_integer(num_traits::pow(BigInt::from(n), l as usize) * sigma);
        }
        total
    }

    /// `a(p) = sum A (p^l + p^(l+k))`, valid at primes.
    pub fn prime_coefficient(&self, p: u64) -> Rational {
        let p = BigInt::from(p);
        self.terms
            .iter()
            .map(|(&(l, k), a)| {
                a * Rational::from_integer(num_traits::pow(p.clone(), l as usize) + num_traits::pow(p.clone(), (l + k) as usize))
            })
            .sum()
    }

    /// Exponents `B_m` with `Z_W = prod zeta(s - m)^(B_m)`.
    pub fn zeta_exponents(&self) -> ZetaExponentVector {
        let mut map: BTreeMap<i64, Rational> = BTreeMap::new();
        for (&(l, k), a) in &self.terms {
            for shift in [l, l + k] {
                *map.entry(shift as i64).or_insert_with(Rational::zero) += a;
            }
        }
        map.retain(|_, b| !b.is_zero());
        ZetaExponentVector(map)
    }

    /// Parse `"A,l,k;A,l,k;..."`.
    pub fn parse_terms(text: &str) -> Result<Self> {
        let mut terms = Vec::new();
        let mut offset = 0;
        for (i, chunk) in text.split(';').enumerate() {
            let start = offset;
            offset += chunk.len() + 1;
            if chunk.trim().is_empty() {
                continue;
            }
            let at = |msg: String| Error::Parse(format!("term {} (column {}): {msg}", i + 1, start + 1));
            let fields: Vec<&str> = chunk.split(',').collect();
            if fields.len() != 3 {
                return Err(at(format!("expected A,l,k but found {:?}", chunk.trim())));
            }
            let a = parse_rational(fields[0]).map_err(|e| at(e.to_string()))?;
            let shift = |s: &str, name: &str| {
                s.trim().parse::<u32>().map_err(|_| at(format!("{name} must be a non-negative integer, got {:?}", s.trim())))
            };
            terms.push((a, shift(fields[1], "l")?, shift(fields[2], "k")?));
        }
        Ok(Self::from_divisor_expression(terms))
    }
}

impl fmt::Display for WExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> =
            self.terms().map(|(a, l, k)| format!("{},{},{}", rational_to_string(a), l, k)).collect();
        write!(f, "{}", parts.join(";"))
    }
}

/// Map from shift `m` to the exponent of `zeta(s - m)` in `Z_W`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ZetaExponentVector(pub BTreeMap<i64, Rational>);

impl ZetaExponentVector {
    /// `Z_W = 1`.
    pub fn is_trivial(&self) -> bool {
        self.0.is_empty()
    }
}

impl Serialize for ZetaExponentVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let map: BTreeMap<String, String> =
            self.0.iter().map(|(m, b)| (m.to_string(), rational_to_string(b))).collect();
        map.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ZetaExponentVector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = BTreeMap::<String, String>::deserialize(d)?;
        let mut map = BTreeMap::new();
        for (m, b) in raw {
            let m: i64 = m.parse().map_err(D::Error::custom)?;
            let b = parse_rational(&b).map_err(D::Error::custom)?;
            if !b.is_zero() {
                map.insert(m, b);
            }
        }
        Ok(ZetaExponentVector(map))
    }
}

/// `m = (m1, m2, m3, m4)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Quadruple(pub [i64; 4]);

impl fmt::Display for Quadruple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.0;
        write!(f, "({a},{b},{c},{d})")
    }
}

/// `W_m` as a canonical expression; every shift must be non-negative.
pub fn quadruple_expression(m: Quadruple) -> Result<WExpression> {
    let [m1, m2, m3, m4] = m.0;
    if m.0.iter().any(|&x| x < 0 || x > u32::MAX as i64) {
        return Err(Error::InvalidInput(format!("W_m needs non-negative shifts, got {m}")));
    }
    let (m1, m2, m3, m4) = (m1 as u32, m2 as u32, m3 as u32, m4 as u32);
    let one = Rational::one();
    let mut w = WExpression::zero();
    w.add_pair(one.clone(), m1, m3);
    w.add_pair(one.clone(), m2, m4);
    w.add_pair(-one.clone(), m1, m4);
    w.add_pair(-one, m2, m3);
    Ok(w)
}

/// `a_m(n) = sum_{d | n} ((n/d)^m2 - (n/d)^m1)(d^m4 - d^m3)` for any integer shifts.
pub fn coefficient_a_quadruple(m: Quadruple, n: u64) -> Rational {
    assert!(n >= 1, "a_m(n) is defined for n >= 1");
    let [m1, m2, m3, m4] = m.0;
    divisors(n)
        .into_iter()
        .map(|d| (int_pow(n / d, m2) - int_pow(n / d, m1)) * (int_pow(d, m4) - int_pow(d, m3)))
        .sum()
}

/// `sgn(m2 - m1) sgn(m4 - m3)`, the sign of `a_m(n)` at composite `n`.
pub fn sign_of_composite(m: Quadruple, n: u64) -> Result<i32> {
    if n < 4 || is_prime(n) {
        return Err(Error::InvalidInput(format!("{n} is not composite")));
    }
    let [m1, m2, m3, m4] = m.0;
    Ok((m2 - m1).signum() as i32 * (m4 - m3).signum() as i32)
}

/// `sum c * W_m` expanded.
pub fn expand_decomposition(parts: &[(Rational, Quadruple)]) -> Result<WExpression> {
    let mut w = WExpression::zero();
    for (c, m) in parts {
        w = w.add(&quadruple_expression(*m)?.scale(c));
    }
    Ok(w)
}

/// Upper bound on unit peel steps for an integer expression. Each unit step
/// at degree `R` removes two units of mass there and adds at most two units
/// at lower degrees, so the mass ever seen at degree `d` is at most its
/// initial mass plus everything processed above it.
pub fn peel_step_bound(w: &WExpression) -> Result<u128> {
    let mut initial: BTreeMap<u32, u128> = BTreeMap::new();
    for (a, l, k) in w.terms() {
        if !a.is_integer() {
            return Err(Error::InvalidInput("peel bound needs integer coefficients".into()));
        }
        let mass = a.numer().abs().to_u128().ok_or(Error::IterationBound { bound: u64::MAX })?;
        *initial.entry(l + k).or_default() += mass;
    }
    let mut above: u128 = 0;
    let mut total: u128 = 0;
    for (_, u) in initial.iter().rev() {
        let t = u.saturating_add(above);
        above = above.saturating_add(t);
        total = total.saturating_add(t);
    }
    Ok(total / 2)
}

/// Write `W` as `sum c_m W_m` by repeatedly cancelling top-degree terms.
///
/// At top degree `R` the term `t` with the largest `k` (ties: smallest
/// `(l, k)`) is paired with the smallest opposite-sign term `j`, and
/// `m = (l_t, l_j, l_t, l_t + k_t)`. Output is aggregated and sorted by `m`.
pub fn decompose(w: &WExpression) -> Result<Vec<(Rational, Quadruple)>> {
    decompose_traced(w).map(|(parts, _)| parts)
}

/// Unit peel steps taken and the bound they were checked against.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PeelStats {
    pub steps: u128,
    pub bound: u128,
}

pub fn decompose_traced(w: &WExpression) -> Result<(Vec<(Rational, Quadruple)>, PeelStats)> {
    if !w.zeta_exponents().is_trivial() {
        return Err(Error::NonTrivialExponents);
    }
    let denom = w.terms().fold(BigInt::one(), |acc, (a, _, _)| acc.lcm(a.denom()));
    let scale = Rational::from_integer(denom.clone());
    let mut rest = w.scale(&scale);
    let bound = peel_step_bound(&rest)?;
    let mut steps: u128 = 0;
    let mut out: BTreeMap<Quadruple, BigInt> = BTreeMap::new();
    while !rest.is_zero() {
        let r = rest.top_degree();
        let top: Vec<(Rational, u32, u32)> =
            rest.terms().filter(|(_, l, k)| l + k == r).map(|(a, l, k)| (a.clone(), l, k)).collect();
        let max_k = top.iter().map(|t| t.2).max().expect("nonzero expression");
        let (a_t, l_t, k_t) = top.iter().find(|t| t.2 == max_k).cloned().expect("max exists");
        let s = sign(&a_t);
        let Some((a_j, l_j, _)) = top.iter().find(|t| sign(&t.0) == -s).cloned() else {
            return Err(Error::MissingPartner { degree: r });
        };
        let amount = a_t.abs().min(a_j.abs());
        steps += amount.to_integer().to_u128().unwrap_or(u128::MAX);
        if steps > bound {
            return Err(Error::IterationBound { bound: bound.min(u64::MAX as u128) as u64 });
        }
        let m = Quadruple([l_t as i64, l_j as i64, l_t as i64, (l_t + k_t) as i64]);
        let c = amount.to_integer() * BigInt::from(s);
        rest = rest.add(&quadruple_expression(m)?.scale(&Rational::from_integer(c.clone())));
        *out.entry(m).or_insert_with(BigInt::zero) -= c;
    }
    let parts = out
        .into_iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(m, c)| (Rational::new(c, denom.clone()), m))
        .collect();
    Ok((parts, PeelStats { steps, bound }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertifyMode {
    Exponents,
    Primes,
    Decomposition,
    All,
}

impl std::str::FromStr for CertifyMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exponents" => Ok(CertifyMode::Exponents),
            "primes" => Ok(CertifyMode::Primes),
            "decomposition" => Ok(CertifyMode::Decomposition),
            "all" => Ok(CertifyMode::All),
            _ => Err(Error::Parse(format!("unknown mode {s:?} (exponents, primes, decomposition, all)"))),
        }
    }
}

/// How many primes the `primes` mode evaluates.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum PrimeCountPolicy {
    /// `R_W + 1`: enough to force a polynomial of degree `R_W` to vanish.
    #[default]
    DegreePlusOne,
    /// `R_W` primes.
    Degree,
}

impl PrimeCountPolicy {
    pub fn count(self, w: &WExpression) -> usize {
        let r = w.top_degree() as usize;
        match self {
            PrimeCountPolicy::DegreePlusOne => r + 1,
            PrimeCountPolicy::Degree => r,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WVerdict {
    Detects,
    Refuted,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WWitness {
    pub prime: u64,
    #[serde(with = "crate::algebra::rational")]
    pub value: Rational,
}

/// Outcome of one or all certification modes. Fields of modes that were not
/// run are `None`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WCertificate {
    pub verdict: WVerdict,
    pub exponents: Option<ZetaExponentVector>,
    pub primes: Option<Vec<u64>>,
    pub witness: Option<WWitness>,
    #[serde(serialize_with = "serialize_decomposition", deserialize_with = "deserialize_decomposition")]
    pub decomposition: Option<Vec<(Rational, Quadruple)>>,
    /// Per-mode verdicts in the order exponents, primes, decomposition.
    pub modes: BTreeMap<String, WVerdict>,
}

impl WCertificate {
    /// Every mode that ran reached the same verdict.
    pub fn modes_agree(&self) -> bool {
        self.modes.values().all(|v| *v == self.verdict)
    }
}

fn serialize_decomposition<S: Serializer>(
    d: &Option<Vec<(Rational, Quadruple)>>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match d {
        None => s.serialize_none(),
        Some(parts) => {
            let rows: Vec<(String, [i64; 4])> = parts.iter().map(|(c, m)| (rational_to_string(c), m.0)).collect();
            rows.serialize(s)
        }
    }
}

fn deserialize_decomposition<'de, D: Deserializer<'de>>(
    d: D,
) -> std::result::Result<Option<Vec<(Rational, Quadruple)>>, D::Error> {
    let Some(rows) = Option::<Vec<(String, [i64; 4])>>::deserialize(d)? else {
        return Ok(None);
    };
    rows.into_iter()
        .map(|(c, m)| Ok((parse_rational(&c).map_err(D::Error::custom)?, Quadruple(m))))
        .collect::<std::result::Result<Vec<_>, D::Error>>()
        .map(Some)
}

/// The first `count` primes.
pub fn first_primes(count: usize) -> Vec<u64> {
    let mut limit = 32u64;
    loop {
        let ps = primes_up_to(limit);
        if ps.len() >= count {
            return ps[..count].to_vec();
        }
        limit *= 2;
    }
}

pub fn certify_prime_detection(w: &WExpression, mode: CertifyMode, policy: PrimeCountPolicy) -> Result<WCertificate> {
    let run = |m: CertifyMode| mode == m || mode == CertifyMode::All;
    let mut cert = WCertificate {
        verdict: WVerdict::Detects,
        exponents: None,
        primes: None,
        witness: None,
        decomposition: None,
        modes: BTreeMap::new(),
    };
    let verdict = |ok: bool| if ok { WVerdict::Detects } else { WVerdict::Refuted };
    if run(CertifyMode::Exponents) {
        let e = w.zeta_exponents();
        cert.modes.insert("exponents".into(), verdict(e.is_trivial()));
        cert.exponents = Some(e);
    }
    if run(CertifyMode::Primes) {
        let primes = first_primes(policy.count(w));
        cert.witness = primes.iter().find_map(|&p| {
            let value = w.coefficient_a(p);
            (!value.is_zero()).then_some(WWitness { prime: p, value })
        });
        cert.modes.insert("primes".into(), verdict(cert.witness.is_none()));
        cert.primes = Some(primes);
    }
    if run(CertifyMode::Decomposition) {
        match decompose(w) {
            Ok(parts) => {
                let ok = expand_decomposition(&parts)? == *w;
                cert.modes.insert("decomposition".into(), verdict(ok));
                cert.decomposition = Some(parts);
            }
            Err(Error::NonTrivialExponents) => {
                cert.modes.insert("decomposition".into(), WVerdict::Refuted);
            }
            Err(e) => return Err(e),
        }
    }
    if cert.modes.values().any(|v| *v == WVerdict::Refuted) {
        cert.verdict = WVerdict::Refuted;
    }
    Ok(cert)
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RationalJson {
    Int(i64),
    Text(String),
}

impl RationalJson {
    fn into_rational(self) -> Result<Rational> {
        match self {
            RationalJson::Int(n) => Ok(Rational::from_integer(n.into())),
            RationalJson::Text(s) => parse_rational(&s),
        }
    }
}

/// `{"terms": [["A", l, k], ...]}`; `A` may also be a JSON integer.
impl Serialize for WExpression {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Out {
            terms: Vec<(String, u32, u32)>,
        }
        Out { terms: self.terms().map(|(a, l, k)| (rational_to_string(a), l, k)).collect() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for WExpression {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct In {
            terms: Vec<(RationalJson, u32, u32)>,
        }
        let raw = In::deserialize(d)?;
        let mut terms = Vec::with_capacity(raw.terms.len());
        for (a, l, k) in raw.terms {
            terms.push((a.into_rational().map_err(D::Error::custom)?, l, k));
        }
        Ok(WExpression::from_divisor_expression(terms))
    }
}
