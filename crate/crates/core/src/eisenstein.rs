//! Twisted Eisenstein series `E_{k,chi,psi}`, the weight-2 series, the
//! `H_{k,l,chi,psi}` combinations and the polynomial describing their
//! coefficients at primes in a residue class.
//!
//! Normalization follows the displayed q-expansion
//!
//! ```text
//! E_{k,chi,psi} = delta(chi) L(1-k, psi) + 2 sum_{n>=1} sigma^{chi,psi}_{k-1}(n) q^n,
//! sigma^{chi,psi}_{k-1}(n) = sum_{d | n} chi(n/d) psi(d) d^(k-1),
//! ```
//!
//! with `delta(chi) = 1` exactly when the *first* character is principal.
//! `L(1-k, psi)` is computed from the primitive character inducing `psi`.
//! Weight 0 is the zero series. The weight-2 series is available both as
//! `E2 = 1 - 24 sum sigma_1(n) q^n` and rescaled as `E2_hat = -E2/12`, which
//! coincides with `E_{2,1,1}`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::algebra::arith::{divisors, gcd_i64, is_prime};
use crate::algebra::{enumerate_characters, CycValue, DirichletCharacter, Rational};
use crate::error::{Error, Result};
use crate::qseries::{CoefficientSource, QSeries};

/// `sum_{d | n} chi(n/d) psi(d) d^(k-1)`.
pub fn sigma_weighted(k_minus_1: u32, chi: &DirichletCharacter, psi: &DirichletCharacter, n: u64) -> CycValue {
    assert!(n >= 1, "sigma is defined for n >= 1");
    let (oc, op) = (chi.order() as u64, psi.order() as u64);
    let order = oc.lcm(&op);
    let mut terms = Vec::new();
    for d in divisors(n) {
        let (Some(a), Some(b)) = (chi.value_exponent((n / d) as i64), psi.value_exponent(d as i64)) else {
            continue;
        };
        let e = (a * (order / oc) + b * (order / op)) % order;
        terms.push((e, Rational::from_integer(num_traits::pow(BigInt::from(d), k_minus_1 as usize))));
    }
    CycValue::from_root_powers(order as u32, terms)
}

/// Bernoulli numbers `B_0..=B_n` with `B_1 = -1/2`.
pub fn bernoulli_numbers(n: usize) -> Vec<Rational> {
    let mut b = vec![Rational::zero(); n + 1];
    b[0] = Rational::one();
    for m in 1..=n {
        // sum_{j=0}^{m} C(m+1, j) B_j = 0
        let mut acc = Rational::zero();
        let mut binom = BigInt::one();
        for (j, bj) in b.iter().enumerate().take(m) {
            acc += bj * Rational::from_integer(binom.clone());
            binom = binom * BigInt::from(m + 1 - j) / BigInt::from(j + 1);
        }
        b[m] = -acc / Rational::from_integer(BigInt::from(m + 1));
    }
    b
}

/// Generalized Bernoulli number `B_{k,psi}` for the primitive character
/// inducing `psi`, from `sum_a psi(a) t e^(at) / (e^(ft) - 1)`:
/// `B_{k,psi} = f^(k-1) sum_{a=1}^{f} psi(a) B_k(a/f)`.
pub fn gen_bernoulli(k: u32, psi: &DirichletCharacter) -> CycValue {
    assert!(k >= 1, "B_(k,psi) needs k >= 1");
    let prim = psi.primitive();
    let f = prim.modulus();
    let k = k as usize;
    let b = bernoulli_numbers(k);
    let mut total = CycValue::zero();
    for a in 1..=f {
        let value = prim.value(a as i64);
        if value.is_zero() {
            continue;
        }
        // f^(k-1) B_k(a/f) = sum_j C(k,j) B_j a^(k-j) f^(j-1)
        let mut poly = Rational::zero();
        let mut binom = BigInt::one();
        for (j, bj) in b.iter().enumerate() {
            let term = Rational::from_integer(num_traits::pow(BigInt::from(a), k - j))
                * Rational::new(num_traits::pow(BigInt::from(f), j), BigInt::from(f));
            poly += bj * Rational::from_integer(binom.clone()) * term;
            binom = binom * BigInt::from(k - j) / BigInt::from(j + 1);
        }
        total = &total + &value.scale(&poly);
    }
    total
}

/// `L(1-k, psi) = -B_{k,psi} / k`.
pub fn l_value(k: u32, psi: &DirichletCharacter) -> CycValue {
    gen_bernoulli(k, psi).scale(&-Rational::new(BigInt::one(), BigInt::from(k)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EisensteinKind {
    /// `E_{k,chi,psi}`; weight 0 is the zero series.
    Twisted {
        weight: u32,
        chi: DirichletCharacter,
        psi: DirichletCharacter,
    },
    /// `1 - 24 sum sigma_1(n) q^n`.
    E2,
    /// `-E2/12 = -1/12 + 2 sum sigma_1(n) q^n`.
    E2Hat,
}

/// `D^derivative E | V_dilation` for one Eisenstein series `E`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EisensteinSpec {
    kind: EisensteinKind,
    derivative: u32,
    dilation: u64,
}

impl EisensteinSpec {
    /// Checked constructor: `k >= 2` (or the zero series `k = 0`) and
    /// `chi(-1) psi(-1) = (-1)^k`.
    pub fn new(weight: u32, chi: DirichletCharacter, psi: DirichletCharacter) -> Result<Self> {
        let spec = Self::formal(weight, chi, psi)?;
        if !spec.satisfies_parity() {
            let EisensteinKind::Twisted { chi, psi, .. } = &spec.kind else { unreachable!() };
            return Err(Error::Parity {
                weight,
                product: chi.parity() * psi.parity(),
                expected: if weight % 2 == 0 { 1 } else { -1 },
            });
        }
        Ok(spec)
    }

    /// The q-expansion given by the divisor-sum formula without the parity
    /// requirement. Such series need not be modular, but their coefficients
    /// at primes follow the same pattern.
    pub fn formal(weight: u32, chi: DirichletCharacter, psi: DirichletCharacter) -> Result<Self> {
        if weight == 1 {
            return Err(Error::InvalidInput("weight 1 Eisenstein series are not supported".into()));
        }
        Ok(EisensteinSpec { kind: EisensteinKind::Twisted { weight, chi, psi }, derivative: 0, dilation: 1 })
    }

    /// `E_{k,1,1}` with trivial characters mod 1.
    pub fn level_one(weight: u32) -> Result<Self> {
        Self::new(weight, DirichletCharacter::principal(1), DirichletCharacter::principal(1))
    }

    pub fn e2() -> Self {
        EisensteinSpec { kind: EisensteinKind::E2, derivative: 0, dilation: 1 }
    }

    pub fn e2_hat() -> Self {
        EisensteinSpec { kind: EisensteinKind::E2Hat, derivative: 0, dilation: 1 }
    }

    pub fn with_derivative(mut self, times: u32) -> Self {
        self.derivative = times;
        self
    }

    pub fn with_dilation(mut self, d: u64) -> Self {
        assert!(d >= 1, "V_d needs d >= 1");
        self.dilation = d;
        self
    }

    pub fn kind(&self) -> &EisensteinKind {
        &self.kind
    }

    pub fn derivative(&self) -> u32 {
        self.derivative
    }

    pub fn dilation(&self) -> u64 {
        self.dilation
    }

    pub fn weight(&self) -> u32 {
        match &self.kind {
            EisensteinKind::Twisted { weight, .. } => *weight,
            _ => 2,
        }
    }

    pub fn satisfies_parity(&self) -> bool {
        match &self.kind {
            EisensteinKind::Twisted { weight: 0, .. } => true,
            EisensteinKind::Twisted { weight, chi, psi } => {
                chi.parity() * psi.parity() == if weight % 2 == 0 { 1 } else { -1 }
            }
            _ => true,
        }
    }

    pub fn level(&self) -> u64 {
        let base = match &self.kind {
            EisensteinKind::Twisted { chi, psi, .. } => chi.modulus() * psi.modulus(),
            _ => 1,
        };
        base * self.dilation
    }

    fn base_constant(&self) -> CycValue {
        match &self.kind {
            EisensteinKind::Twisted { weight: 0, .. } => CycValue::zero(),
            EisensteinKind::Twisted { weight, chi, psi } => {
                if chi.is_principal() {
                    l_value(*weight, psi)
                } else {
                    CycValue::zero()
                }
            }
            EisensteinKind::E2 => CycValue::one(),
            EisensteinKind::E2Hat => CycValue::from_rational(Rational::new((-1).into(), 12.into())),
        }
    }

    fn base_coefficient(&self, n: u64) -> CycValue {
        match &self.kind {
            EisensteinKind::Twisted { weight: 0, .. } => CycValue::zero(),
            EisensteinKind::Twisted { weight, chi, psi } => {
                sigma_weighted(weight - 1, chi, psi, n).scale(&Rational::from_integer(2.into()))
            }
            EisensteinKind::E2 => CycValue::from_rational(Rational::from_integer(BigInt::from(-24) * sigma1(n))),
            EisensteinKind::E2Hat => CycValue::from_rational(Rational::from_integer(BigInt::from(2) * sigma1(n))),
        }
    }

    pub fn coefficient(&self, n: u64) -> CycValue {
        if n == 0 {
            return if self.derivative == 0 { self.base_constant() } else { CycValue::zero() };
        }
        if n % self.dilation != 0 {
            return CycValue::zero();
        }
        let m = n / self.dilation;
        let c = self.base_coefficient(m);
        if self.derivative == 0 {
            c
        } else {
            c.scale(&Rational::from_integer(num_traits::pow(BigInt::from(m), self.derivative as usize)))
        }
    }

    pub fn qexp(&self, truncation: u64) -> QSeries {
        QSeries::from_fn(truncation, self.level(), |n| self.coefficient(n))
    }
}

fn sigma1(n: u64) -> BigInt {
    divisors(n).into_iter().map(BigInt::from).sum()
}

impl CoefficientSource for EisensteinSpec {
    fn coefficient(&self, n: u64) -> CycValue {
        EisensteinSpec::coefficient(self, n)
    }
}

impl fmt::Display for EisensteinSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.derivative > 0 {
            write!(f, "D^{} ", self.derivative)?;
        }
        match &self.kind {
            EisensteinKind::Twisted { weight, chi, psi } => write!(f, "E[{weight}, {chi}, {psi}]")?,
            EisensteinKind::E2 => write!(f, "E2")?,
            EisensteinKind::E2Hat => write!(f, "E2hat")?,
        }
        if self.dilation > 1 {
            write!(f, " | V_{}", self.dilation)?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum KindJson {
    Twisted { k: u32, chi: DirichletCharacter, psi: DirichletCharacter },
    E2,
    E2Hat,
}

fn default_dilation() -> u64 {
    1
}

fn is_false(b: &bool) -> bool {
    !*b
}

#[derive(Serialize, Deserialize)]
struct SpecJson {
    #[serde(flatten)]
    kind: KindJson,
    #[serde(default)]
    derivative: u32,
    #[serde(default = "default_dilation")]
    dilation: u64,
    #[serde(default, skip_serializing_if = "is_false")]
    formal: bool,
}

impl Serialize for EisensteinSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let kind = match &self.kind {
            EisensteinKind::Twisted { weight, chi, psi } => {
                KindJson::Twisted { k: *weight, chi: chi.clone(), psi: psi.clone() }
            }
            EisensteinKind::E2 => KindJson::E2,
            EisensteinKind::E2Hat => KindJson::E2Hat,
        };
        SpecJson { kind, derivative: self.derivative, dilation: self.dilation, formal: !self.satisfies_parity() }
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for EisensteinSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = SpecJson::deserialize(d)?;
        if raw.dilation == 0 {
            return Err(D::Error::custom("dilation must be positive"));
        }
        let base = match raw.kind {
            KindJson::Twisted { k, chi, psi } => {
                if raw.formal {
                    EisensteinSpec::formal(k, chi, psi)
                } else {
                    EisensteinSpec::new(k, chi, psi)
                }
                .map_err(D::Error::custom)?
            }
            KindJson::E2 => EisensteinSpec::e2(),
            KindJson::E2Hat => EisensteinSpec::e2_hat(),
        };
        Ok(base.with_derivative(raw.derivative).with_dilation(raw.dilation))
    }
}

/// A finite linear combination `sum c_i * spec_i`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EisensteinCombination {
    pub terms: Vec<(CycValue, EisensteinSpec)>,
}

impl EisensteinCombination {
    pub fn single(spec: EisensteinSpec) -> Self {
        EisensteinCombination { terms: vec![(CycValue::one(), spec)] }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        EisensteinCombination { terms }
    }

    pub fn scale(&self, s: &CycValue) -> Self {
        EisensteinCombination { terms: self.terms.iter().map(|(c, e)| (c * s, e.clone())).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&CycValue::from_integer(-1)))
    }

    pub fn level(&self) -> u64 {
        self.terms.iter().fold(1, |acc, (_, e)| acc.lcm(&e.level()))
    }

    pub fn coefficient(&self, n: u64) -> CycValue {
        self.terms
            .iter()
            .filter(|(c, _)| !c.is_zero())
            .fold(CycValue::zero(), |acc, (c, e)| &acc + &(c * &e.coefficient(n)))
    }

    pub fn qexp(&self, truncation: u64) -> QSeries {
        QSeries::from_fn(truncation, self.level(), |n| self.coefficient(n))
    }
}

impl CoefficientSource for EisensteinCombination {
    fn coefficient(&self, n: u64) -> CycValue {
        EisensteinCombination::coefficient(self, n)
    }
}

/// `H_{k,l,chi,psi} = conj(chi(m)) D^(l-1) E_{k,psi,chi} - psi(m) E_{l,conj(psi),conj(chi)}`
/// for characters mod `M` and a residue `m` coprime to `M`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "HSpecJson", into = "HSpecJson")]
pub struct HSpec {
    k: u32,
    l: u32,
    chi: DirichletCharacter,
    psi: DirichletCharacter,
    residue: i64,
    modulus: u64,
}

#[derive(Serialize, Deserialize)]
struct HSpecJson {
    k: u32,
    l: u32,
    chi: DirichletCharacter,
    psi: DirichletCharacter,
    m: i64,
    #[serde(rename = "M")]
    modulus: u64,
}

impl TryFrom<HSpecJson> for HSpec {
    type Error = Error;
    fn try_from(j: HSpecJson) -> Result<Self> {
        HSpec::new(j.k, j.l, j.chi, j.psi, j.m, j.modulus)
    }
}

impl From<HSpec> for HSpecJson {
    fn from(h: HSpec) -> Self {
        HSpecJson { k: h.k, l: h.l, chi: h.chi, psi: h.psi, m: h.residue, modulus: h.modulus }
    }
}

/// Which parameter points a spanning set admits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParityPolicy {
    /// Every `(k, l, chi, psi)`; constituents are formal divisor-sum series.
    Formal,
    /// Only points where both constituents satisfy `chi(-1)psi(-1) = (-1)^weight`.
    Strict,
}

impl HSpec {
    pub fn new(
        k: u32,
        l: u32,
        chi: DirichletCharacter,
        psi: DirichletCharacter,
        residue: i64,
        modulus: u64,
    ) -> Result<Self> {
        if k < 2 || l < 2 {
            return Err(Error::InvalidInput(format!("H needs k, l >= 2 (got k = {k}, l = {l})")));
        }
        for c in [&chi, &psi] {
            if c.modulus() != modulus {
                return Err(Error::ModulusMismatch { character: c.modulus(), modulus });
            }
        }
        if gcd_i64(residue, modulus) != 1 {
            return Err(Error::NotCoprime { residue, modulus });
        }
        Ok(HSpec { k, l, chi, psi, residue, modulus })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    pub fn chi(&self) -> &DirichletCharacter {
        &self.chi
    }

    pub fn psi(&self) -> &DirichletCharacter {
        &self.psi
    }

    pub fn residue(&self) -> i64 {
        self.residue
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// `K = k + l`.
    pub fn weight_sum(&self) -> u32 {
        self.k + self.l
    }

    fn first(&self) -> EisensteinSpec {
        EisensteinSpec::formal(self.k, self.psi.clone(), self.chi.clone())
            .expect("k >= 2")
            .with_derivative(self.l - 1)
    }

    fn second(&self) -> EisensteinSpec {
        EisensteinSpec::formal(self.l, self.psi.conj(), self.chi.conj()).expect("l >= 2")
    }

    pub fn satisfies_parity(&self) -> bool {
        self.first().satisfies_parity() && self.second().satisfies_parity()
    }

    pub fn combination(&self) -> EisensteinCombination {
        let m = self.residue;
        EisensteinCombination {
            terms: vec![
                (self.chi.value(m).conj(), self.first()),
                (-self.psi.value(m), self.second()),
            ],
        }
    }

    pub fn coefficient(&self, n: u64) -> CycValue {
        self.combination().coefficient(n)
    }

    pub fn qexp(&self, truncation: u64) -> QSeries {
        self.combination().qexp(truncation)
    }

    fn key(&self) -> (u32, u32, u64, u64) {
        (self.k, self.l, self.chi.index(), self.psi.index())
    }
}

impl fmt::Display for HSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "H[{}, {}, {}, {}; m = {} mod {}]", self.k, self.l, self.chi, self.psi, self.residue, self.modulus)
    }
}

/// All parameter points `(k, l, chi, psi)` with `k + l = K`, ordered by `(k, l, chi, psi)`.
pub fn h_parameter_points(weight_sum: u32, modulus: u64, residue: i64, policy: ParityPolicy) -> Result<Vec<HSpec>> {
    if weight_sum < 4 {
        return Err(Error::InvalidInput(format!("K = {weight_sum} < 4 leaves no k, l >= 2")));
    }
    if gcd_i64(residue, modulus) != 1 {
        return Err(Error::NotCoprime { residue, modulus });
    }
    let chars = enumerate_characters(modulus);
    let mut out = Vec::new();
    for k in 2..=weight_sum - 2 {
        let l = weight_sum - k;
        for chi in &chars {
            for psi in &chars {
                let h = HSpec::new(k, l, chi.clone(), psi.clone(), residue, modulus)?;
                if policy == ParityPolicy::Formal || h.satisfies_parity() {
                    out.push(h);
                }
            }
        }
    }
    out.sort_by_key(HSpec::key);
    out.dedup_by_key(|h| h.key());
    Ok(out)
}

/// Unordered pairs of distinct parameter points with the same `K`; each
/// difference `H_1 - H_2` detects primes `p = m (mod M)`.
pub fn spanning_set(weight_sum: u32, modulus: u64, residue: i64, policy: ParityPolicy) -> Result<Vec<(HSpec, HSpec)>> {
    let points = h_parameter_points(weight_sum, modulus, residue, policy)?;
    let mut pairs = Vec::new();
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            pairs.push((points[i].clone(), points[j].clone()));
        }
    }
    Ok(pairs)
}

/// `H_1 - H_2` as a single combination.
pub fn h_difference(a: &HSpec, b: &HSpec) -> EisensteinCombination {
    a.combination().sub(&b.combination())
}

/// `c_f(p) = sum_r beta_r p^r` for primes `p = m (mod M)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeCoefficientPolynomial {
    modulus: u64,
    residue: i64,
    /// Slot `r` holds `beta_r`; the length is one more than the degree bound.
    coefficients: Vec<CycValue>,
}

impl PrimeCoefficientPolynomial {
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn residue(&self) -> i64 {
        self.residue
    }

    pub fn coefficients(&self) -> &[CycValue] {
        &self.coefficients
    }

    /// Largest power with a slot, including slots whose coefficient cancelled.
    pub fn degree_bound(&self) -> usize {
        self.coefficients.len().saturating_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.iter().all(CycValue::is_zero)
    }

    pub fn evaluate(&self, p: u64) -> CycValue {
        let x = Rational::from_integer(BigInt::from(p));
        self.coefficients
            .iter()
            .rev()
            .fold(CycValue::zero(), |acc, b| &acc.scale(&x) + b)
    }
}

/// Polynomial in `p` for the coefficients of `combination` at primes `p = m (mod M)`.
///
/// Every character modulus must divide `M`, `gcd(m, M) = 1`, and `V_d`
/// dilations other than `d = 1` are rejected.
pub fn prime_coefficient_polynomial(
    combination: &EisensteinCombination,
    residue: i64,
    modulus: u64,
) -> Result<PrimeCoefficientPolynomial> {
    if modulus == 0 {
        return Err(Error::InvalidInput("modulus must be positive".into()));
    }
    if gcd_i64(residue, modulus) != 1 {
        return Err(Error::NotCoprime { residue, modulus });
    }
    let mut slots: Vec<CycValue> = Vec::new();
    let mut put = |r: usize, v: CycValue| {
        if slots.len() <= r {
            slots.resize(r + 1, CycValue::zero());
        }
        slots[r] = &slots[r] + &v;
    };
    for (c, spec) in &combination.terms {
        if spec.dilation() != 1 {
            return Err(Error::InvalidInput(format!("{spec}: V_d with d > 1 has no prime-coefficient polynomial")));
        }
        let l = spec.derivative() as usize;
        match spec.kind() {
            EisensteinKind::Twisted { weight: 0, .. } => {}
            EisensteinKind::Twisted { weight, chi, psi } => {
                for ch in [chi, psi] {
                    if modulus % ch.modulus() != 0 {
                        return Err(Error::ModulusMismatch { character: ch.modulus(), modulus });
                    }
                }
                let two = Rational::from_integer(2.into());
                put(l, (c * &chi.value(residue)).scale(&two));
                put(l + *weight as usize - 1, (c * &psi.value(residue)).scale(&two));
            }
            EisensteinKind::E2 => {
                let v = c.scale(&Rational::from_integer((-24).into()));
                put(l, v.clone());
                put(l + 1, v);
            }
            EisensteinKind::E2Hat => {
                let v = c.scale(&Rational::from_integer(2.into()));
                put(l, v.clone());
                put(l + 1, v);
            }
        }
    }
    Ok(PrimeCoefficientPolynomial { modulus, residue, coefficients: slots })
}

/// Eventual sign of `c_f(p)`: the sign of the leading nonzero coefficient.
pub fn eisenstein_sign(poly: &PrimeCoefficientPolynomial) -> Result<i32> {
    let Some((r, lead)) = poly.coefficients.iter().enumerate().rev().find(|(_, c)| !c.is_zero()) else {
        return Ok(0);
    };
    let value = lead.to_rational().ok_or_else(|| Error::NotReal { index: r as u64, value: lead.to_string() })?;
    Ok(crate::algebra::rational::sign(&value))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeWitness {
    pub prime: u64,
    pub value: CycValue,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Detects,
    Refuted,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeCheckCertificate {
    pub verdict: Verdict,
    pub witness: Option<PrimeWitness>,
    pub primes: Vec<u64>,
    pub polynomial: PrimeCoefficientPolynomial,
}

/// The first `count` primes `p = m (mod M)`.
pub fn primes_in_progression(residue: i64, modulus: u64, count: usize) -> Vec<u64> {
    let r = residue.rem_euclid(modulus as i64) as u64;
    let mut out = Vec::with_capacity(count);
    let mut n = if r == 0 { modulus } else { r };
    while out.len() < count {
        if is_prime(n) {
            out.push(n);
        }
        n += modulus;
        if gcd_i64(r as i64, modulus) != 1 && out.len() == 1 {
            // at most one prime (a divisor of M) can lie in a non-coprime class
            break;
        }
    }
    out
}

/// Vandermonde check: vanishing at `r + 1` distinct primes of the class forces
/// every `beta_r` to vanish, so `c_f(p) = 0` for all primes in the class.
pub fn finite_prime_check(poly: &PrimeCoefficientPolynomial, primes: &[u64]) -> Result<PrimeCheckCertificate> {
    let required = poly.degree_bound() + 1;
    let mut seen = primes.to_vec();
    seen.sort_unstable();
    seen.dedup();
    if seen.len() != primes.len() {
        return Err(Error::InvalidInput("primes must be distinct".into()));
    }
    for &p in primes {
        if !is_prime(p) {
            return Err(Error::InvalidInput(format!("{p} is not prime")));
        }
        if (p as i64 - poly.residue).rem_euclid(poly.modulus as i64) != 0 {
            return Err(Error::InvalidInput(format!("{p} is not {} mod {}", poly.residue, poly.modulus)));
        }
    }
    if primes.len() < required {
        return Err(Error::TooFewPrimes { required, supplied: primes.len() });
    }
    for &p in primes {
        let value = poly.evaluate(p);
        if !value.is_zero() {
            return Ok(PrimeCheckCertificate {
                verdict: Verdict::Refuted,
                witness: Some(PrimeWitness { prime: p, value }),
                primes: primes.to_vec(),
                polynomial: poly.clone(),
            });
        }
    }
    Ok(PrimeCheckCertificate { verdict: Verdict::Detects, witness: None, primes: primes.to_vec(), polynomial: poly.clone() })
}

#[derive(Serialize, Deserialize)]
struct PolyJson {
    modulus: u64,
    residue: i64,
    degree_bound: usize,
    coefficients: std::collections::BTreeMap<usize, CycValue>,
}

impl Serialize for PrimeCoefficientPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolyJson {
            modulus: self.modulus,
            residue: self.residue,
            degree_bound: self.degree_bound(),
            coefficients: self
                .coefficients
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(r, c)| (r, c.clone()))
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PrimeCoefficientPolynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = PolyJson::deserialize(d)?;
        if raw.modulus == 0 {
            return Err(D::Error::custom("modulus must be positive"));
        }
        let mut coefficients = vec![CycValue::zero(); raw.degree_bound + 1];
        for (r, c) in raw.coefficients {
            if r > raw.degree_bound {
                return Err(D::Error::custom(format!("coefficient {r} beyond degree bound")));
            }
            coefficients[r] = c;
        }
        Ok(PrimeCoefficientPolynomial { modulus: raw.modulus, residue: raw.residue, coefficients })
    }
}

/// One term of a form description file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FormTerm {
    Eisenstein {
        #[serde(default = "CycValue::one")]
        coeff: CycValue,
        eisenstein: EisensteinSpec,
    },
    H {
        #[serde(default = "CycValue::one")]
        coeff: CycValue,
        h: HSpec,
    },
}

/// `{"terms": [...]}` mixing Eisenstein series and `H` combinations.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormSpec {
    pub terms: Vec<FormTerm>,
}

impl FormSpec {
    pub fn combination(&self) -> EisensteinCombination {
        let mut out = EisensteinCombination::default();
        for t in &self.terms {
            let part = match t {
                FormTerm::Eisenstein { coeff, eisenstein } => {
                    EisensteinCombination { terms: vec![(coeff.clone(), eisenstein.clone())] }
                }
                FormTerm::H { coeff, h } => h.combination().scale(coeff),
            };
            out = out.add(&part);
        }
        out
    }

    pub fn from_h_difference(a: &HSpec, b: &HSpec) -> Self {
        FormSpec {
            terms: vec![
                FormTerm::H { coeff: CycValue::one(), h: a.clone() },
                FormTerm::H { coeff: CycValue::from_integer(-1), h: b.clone() },
            ],
        }
    }
}
