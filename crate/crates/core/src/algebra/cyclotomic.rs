//! Exact elements of cyclotomic fields `Q(zeta_c)`.
//!
//! A [`CycValue`] of order `c` is stored in the power basis
//! `1, zeta_c, ..., zeta_c^(phi(c)-1)` reduced modulo the `c`-th cyclotomic
//! polynomial. The stored order is not minimized automatically; binary
//! operations embed both operands into `Q(zeta_lcm)`. Use
//! [`CycValue::normalize_order`] to find the smallest field containing a value.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock, RwLock};

use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::arith::{divisors, euler_phi};
use super::rational::{self, parse_rational, rational_to_string, Rational};

static CYCLOTOMIC_CACHE: OnceLock<RwLock<HashMap<u32, Arc<Vec<i64>>>>> = OnceLock::new();

/// Coefficients (low to high) of the `n`-th cyclotomic polynomial.
pub fn cyclotomic_polynomial(n: u32) -> Arc<Vec<i64>> {
    assert!(n >= 1, "cyclotomic polynomial of order 0");
    let cache = CYCLOTOMIC_CACHE.get_or_init(|| RwLock::new(HashMap::new()));
    if let Some(p) = cache.read().unwrap().get(&n) {
        return p.clone();
    }
    // x^n - 1 divided by every Phi_d with d | n, d < n.
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in divisors(n as u64) {
        let d = d as u32;
        if d == n {
            continue;
        }
        let phi_d = cyclotomic_polynomial(d);
        num = exact_div(&num, &phi_d);
    }
    let result = Arc::new(num);
    cache.write().unwrap().insert(n, result.clone());
    result
}

fn exact_div(num: &[i64], den: &[i64]) -> Vec<i64> {
    let dn = den.len() - 1;
    let mut rem = num.to_vec();
    let mut quot = vec![0i64; num.len() - dn];
    for i in (0..quot.len()).rev() {
        let c = rem[i + dn];
        quot[i] = c;
        if c != 0 {
            for (j, &dj) in den.iter().enumerate() {
                rem[i + j] -= c * dj;
            }
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    quot
}

/// Reduce a dense polynomial in `zeta_order` into canonical power-basis form.
fn reduce(order: u32, mut dense: Vec<Rational>) -> BTreeMap<u32, Rational> {
    let phi = cyclotomic_polynomial(order);
    let deg = phi.len() - 1;
    // zeta^order = 1 first, then the cyclotomic relation.
    if dense.len() > order as usize {
        let (low, high) = dense.split_at_mut(order as usize);
        for (i, c) in high.iter_mut().enumerate() {
            if !c.is_zero() {
                let slot = &mut low[i % order as usize];
                let c = std::mem::replace(c, Rational::zero());
                rational::add_assign(slot, &c);
            }
        }
        dense.truncate(order as usize);
    }
    for i in (deg..dense.len()).rev() {
        if dense[i].is_zero() {
            continue;
        }
        let c = std::mem::replace(&mut dense[i], Rational::zero());
        for (j, &pj) in phi.iter().enumerate().take(deg) {
            if pj != 0 {
                rational::sub_assign(&mut dense[i - deg + j], &rational::mul(&c, &Rational::from_integer(pj.into())));
            }
        }
    }
    dense
        .into_iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(e, c)| (e as u32, c))
        .collect()
}

#[derive(Clone, Debug)]
pub struct CycValue {
    order: u32,
    coeffs: BTreeMap<u32, Rational>,
}

impl CycValue {
    pub fn zero() -> Self {
        Self::from_rational(Rational::zero())
    }

    pub fn one() -> Self {
        Self::from_rational(Rational::one())
    }

    pub fn from_rational(r: Rational) -> Self {
        let mut coeffs = BTreeMap::new();
        if !r.is_zero() {
            coeffs.insert(0, r);
        }
        CycValue { order: 1, coeffs }
    }

    pub fn from_integer(n: i64) -> Self {
        Self::from_rational(Rational::from_integer(n.into()))
    }

    /// `zeta_order^exponent`.
    pub fn root_of_unity(order: u32, exponent: u64) -> Self {
        Self::from_root_powers(order, [(exponent, Rational::one())])
    }

    /// `sum c * zeta_order^e` over the given pairs; exponents may exceed `order`.
    pub fn from_root_powers<I>(order: u32, terms: I) -> Self
    where
        I: IntoIterator<Item = (u64, Rational)>,
    {
        assert!(order >= 1, "order must be positive");
        let mut dense = vec![Rational::zero(); order as usize];
        for (e, c) in terms {
            rational::add_assign(&mut dense[(e % order as u64) as usize], &c);
        }
        CycValue {
            order,
            coeffs: reduce(order, dense),
        }
    }

    /// Build from explicit power-basis coefficients, reducing as needed.
    pub fn from_coeffs(order: u32, coeffs: impl IntoIterator<Item = (u32, Rational)>) -> Self {
        Self::from_root_powers(order, coeffs.into_iter().map(|(e, c)| (e as u64, c)))
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coeffs(&self) -> &BTreeMap<u32, Rational> {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// The value as a rational number, if it is one.
    pub fn to_rational(&self) -> Option<Rational> {
        match self.coeffs.len() {
            0 => Some(Rational::zero()),
            1 => self.coeffs.get(&0).cloned(),
            _ => None,
        }
    }

    /// Re-express in `Q(zeta_order)`; `order` must be a multiple of `self.order()`.
    pub fn embed(&self, order: u32) -> CycValue {
        assert!(order % self.order == 0, "cannot embed order {} into {order}", self.order);
        if order == self.order {
            return self.clone();
        }
        let step = (order / self.order) as u64;
        Self::from_root_powers(order, self.coeffs.iter().map(|(&e, c)| (e as u64 * step, c.clone())))
    }

    fn unify(a: &CycValue, b: &CycValue) -> (u32, CycValue, CycValue) {
        if a.order == b.order {
            return (a.order, a.clone(), b.clone());
        }
        let l = a.order.lcm(&b.order);
        (l, a.embed(l), b.embed(l))
    }

    /// Complex conjugate: every root of unity `zeta` maps to `zeta^-1`.
    pub fn conj(&self) -> CycValue {
        if self.order <= 2 {
            return self.clone();
        }
        let c = self.order as u64;
        Self::from_root_powers(self.order, self.coeffs.iter().map(|(&e, v)| ((c - e as u64) % c, v.clone())))
    }

    pub fn scale(&self, r: &Rational) -> CycValue {
        if r.is_zero() {
            return CycValue { order: self.order, coeffs: BTreeMap::new() };
        }
        CycValue {
            order: self.order,
            coeffs: self.coeffs.iter().map(|(&e, c)| (e, rational::mul(c, r))).collect(),
        }
    }

    pub fn pow(&self, mut exp: u32) -> CycValue {
        let mut base = self.clone();
        let mut acc = CycValue::one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            exp >>= 1;
        }
        acc
    }

    /// Numerical value as `(re, im)`.
    pub fn to_complex(&self) -> (f64, f64) {
        let mut re = 0.0;
        let mut im = 0.0;
        for (&e, c) in &self.coeffs {
            let angle = 2.0 * std::f64::consts::PI * e as f64 / self.order as f64;
            let c = c.to_f64().unwrap_or(f64::NAN);
            re += c * angle.cos();
            im += c * angle.sin();
        }
        (re, im)
    }

    /// The same value stored at the smallest order `d | order` whose field contains it.
    pub fn normalize_order(&self) -> CycValue {
        for d in divisors(self.order as u64) {
            let d = d as u32;
            if d == self.order {
                break;
            }
            if let Some(v) = self.express_in(d) {
                return v;
            }
        }
        self.clone()
    }

    /// Solve `embed(y) = self` for `y` in `Q(zeta_d)`.
    fn express_in(&self, d: u32) -> Option<CycValue> {
        let n = euler_phi(self.order as u64) as usize;
        let k = euler_phi(d as u64) as usize;
        // Column i is the embedding of zeta_d^i.
        let mut rows: Vec<Vec<Rational>> = vec![vec![Rational::zero(); k + 1]; n];
        for i in 0..k {
            let col = CycValue::root_of_unity(d, i as u64).embed(self.order);
            for (&e, c) in &col.coeffs {
                rows[e as usize][i] = c.clone();
            }
        }
        for (&e, c) in &self.coeffs {
            rows[e as usize][k] = c.clone();
        }
        let solution = solve_linear(rows, k)?;
        Some(CycValue::from_coeffs(d, solution.into_iter().enumerate().map(|(i, c)| (i as u32, c))))
    }
}

/// Gaussian elimination on an augmented system with `unknowns` columns.
fn solve_linear(mut rows: Vec<Vec<Rational>>, unknowns: usize) -> Option<Vec<Rational>> {
    let mut pivot_row = 0;
    let mut pivots = Vec::new();
    for col in 0..unknowns {
        let Some(r) = (pivot_row..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(pivot_row, r);
        let inv = rows[pivot_row][col].recip();
        for x in rows[pivot_row].iter_mut() {
            *x *= &inv;
        }
        for r in 0..rows.len() {
            if r != pivot_row && !rows[r][col].is_zero() {
                let f = rows[r][col].clone();
                let (src, dst) = if r < pivot_row {
                    let (a, b) = rows.split_at_mut(pivot_row);
                    (&b[0], &mut a[r])
                } else {
                    let (a, b) = rows.split_at_mut(r);
                    (&a[pivot_row], &mut b[0])
                };
                for (x, s) in dst.iter_mut().zip(src.iter()) {
                    *x -= &f * s;
                }
            }
        }
        pivots.push((pivot_row, col));
        pivot_row += 1;
    }
    if rows[pivot_row..].iter().any(|row| !row[unknowns].is_zero()) {
        return None;
    }
    let mut out = vec![Rational::zero(); unknowns];
    for (r, c) in pivots {
        out[c] = rows[r][unknowns].clone();
    }
    Some(out)
}

impl PartialEq for CycValue {
    fn eq(&self, other: &Self) -> bool {
        if self.order == other.order {
            return self.coeffs == other.coeffs;
        }
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return self.coeffs.is_empty() && other.coeffs.is_empty();
        }
        let (_, a, b) = CycValue::unify(self, other);
        a.coeffs == b.coeffs
    }
}

impl Eq for CycValue {}

impl From<Rational> for CycValue {
    fn from(r: Rational) -> Self {
        CycValue::from_rational(r)
    }
}

impl From<i64> for CycValue {
    fn from(n: i64) -> Self {
        CycValue::from_integer(n)
    }
}

impl Add for &CycValue {
    type Output = CycValue;
    fn add(self, rhs: &CycValue) -> CycValue {
        if rhs.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return rhs.clone();
        }
        let (order, mut a, b) = CycValue::unify(self, rhs);
        for (e, c) in b.coeffs {
            let slot = a.coeffs.entry(e).or_insert_with(Rational::zero);
            rational::add_assign(slot, &c);
            if slot.is_zero() {
                a.coeffs.remove(&e);
            }
        }
        a.order = order;
        a
    }
}

impl Neg for &CycValue {
    type Output = CycValue;
    fn neg(self) -> CycValue {
        CycValue {
            order: self.order,
            coeffs: self.coeffs.iter().map(|(&e, c)| (e, -c)).collect(),
        }
    }
}

impl Sub for &CycValue {
    type Output = CycValue;
    fn sub(self, rhs: &CycValue) -> CycValue {
        self + &(-rhs)
    }
}

impl Mul for &CycValue {
    type Output = CycValue;
    fn mul(self, rhs: &CycValue) -> CycValue {
        if self.is_zero() || rhs.is_zero() {
            return CycValue::zero();
        }
        if let Some(r) = rhs.to_rational() {
            return self.scale(&r);
        }
        if let Some(r) = self.to_rational() {
            return rhs.scale(&r);
        }
        let (order, a, b) = CycValue::unify(self, rhs);
        let deg = euler_phi(order as u64) as usize;
        let mut dense = vec![Rational::zero(); 2 * deg];
        for (&i, x) in &a.coeffs {
            for (&j, y) in &b.coeffs {
                rational::add_assign(&mut dense[(i + j) as usize], &rational::mul(x, y));
            }
        }
        CycValue { order, coeffs: reduce(order, dense) }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for CycValue {
            type Output = CycValue;
            fn $m(self, rhs: CycValue) -> CycValue {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&CycValue> for CycValue {
            type Output = CycValue;
            fn $m(self, rhs: &CycValue) -> CycValue {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for CycValue {
    type Output = CycValue;
    fn neg(self) -> CycValue {
        -&self
    }
}

impl fmt::Display for CycValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        for (i, (&e, c)) in self.coeffs.iter().enumerate() {
            let negative = c < &Rational::zero();
            let abs = if negative { -c } else { c.clone() };
            if i == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if negative { '-' } else { '+' })?;
            }
            match e {
                0 => write!(f, "{abs}")?,
                _ => {
                    if !abs.is_one() {
                        write!(f, "{abs}*")?;
                    }
                    write!(f, "z{}", self.order)?;
                    if e > 1 {
                        write!(f, "^{e}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct CycJson {
    order: u32,
    coeffs: BTreeMap<String, String>,
}

impl Serialize for CycValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        CycJson {
            order: self.order,
            coeffs: self
                .coeffs
                .iter()
                .map(|(e, c)| (e.to_string(), rational_to_string(c)))
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CycValue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = CycJson::deserialize(d)?;
        if raw.order == 0 {
            return Err(D::Error::custom("order must be positive"));
        }
        let mut terms = Vec::with_capacity(raw.coeffs.len());
        for (e, c) in raw.coeffs {
            let e: u64 = e.parse().map_err(|_| D::Error::custom(format!("bad exponent {e:?}")))?;
            terms.push((e, parse_rational(&c).map_err(D::Error::custom)?));
        }
        Ok(CycValue::from_root_powers(raw.order, terms))
    }
}
