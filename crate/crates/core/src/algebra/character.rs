//! Dirichlet characters, labelled through a fixed CRT decomposition of
//! `(Z/MZ)*`.
//!
//! The unit group is split over the prime powers of `M` in increasing prime
//! order. An odd prime power `p^e` contributes one cyclic factor generated by
//! the smallest primitive root mod `p^e`. The 2-part contributes nothing for
//! `2^1`, the factor `<-1>` for `2^2`, and `<-1> x <5>` for `2^e`, `e >= 3`.
//! A character is an exponent vector `(a_1, ..., a_r)` with `a_i` taken mod
//! the order `n_i` of factor `i`; it sends generator `g_i` to
//! `exp(2 pi i a_i / n_i)`. The enumeration index is the mixed-radix number
//! formed by the exponents with the last factor varying fastest, so index 0
//! is always the principal character.

use std::fmt;
use std::sync::Arc;

use num_integer::Integer;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::arith::{factorize, gcd_i64, kronecker, pow_mod, valuation};
use super::cyclotomic::CycValue;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
struct Factor {
    /// Generator as a residue mod the prime power.
    generator: u64,
    order: u64,
}

#[derive(Debug, Clone)]
struct Component {
    prime: u64,
    power: u32,
    modulus: u64,
    factors: Vec<Factor>,
    /// Discrete logs of every residue mod `modulus`, `None` off units.
    logs: Vec<Option<Vec<u64>>>,
}

impl Component {
    fn new(prime: u64, power: u32) -> Self {
        let modulus = prime.pow(power);
        let factors = if prime == 2 {
            match power {
                1 => vec![],
                2 => vec![Factor { generator: 3, order: 2 }],
                _ => vec![
                    Factor { generator: modulus - 1, order: 2 },
                    Factor { generator: 5, order: modulus / 4 },
                ],
            }
        } else {
            let order = modulus / prime * (prime - 1);
            vec![Factor { generator: primitive_root(modulus, order), order }]
        };
        let mut logs = vec![None; modulus as usize];
        let mut exps = vec![0u64; factors.len()];
        loop {
            let elem = factors
                .iter()
                .zip(&exps)
                .fold(1 % modulus, |acc, (f, &a)| acc * pow_mod(f.generator, a, modulus) % modulus);
            logs[elem as usize] = Some(exps.clone());
            if !advance(&mut exps, factors.iter().map(|f| f.order)) {
                break;
            }
        }
        if modulus == 2 {
            logs[1] = Some(vec![]);
        }
        Component { prime, power, modulus, factors, logs }
    }

    /// Conductor exponent contribution given this component's exponents.
    fn conductor(&self, exps: &[u64]) -> u64 {
        let p = self.prime;
        let e = self.power;
        if p != 2 {
            let a = exps[0];
            if a == 0 {
                return 1;
            }
            let f = e.saturating_sub(valuation(a, p)).max(1);
            return p.pow(f);
        }
        match exps {
            [] => 1,
            [b] => {
                if *b == 0 {
                    1
                } else {
                    4
                }
            }
            [b, c] => {
                if *c != 0 {
                    2u64.pow(e.saturating_sub(valuation(*c, 2)).max(3))
                } else if *b != 0 {
                    4
                } else {
                    1
                }
            }
            _ => unreachable!("2-part has at most two factors"),
        }
    }
}

fn primitive_root(modulus: u64, order: u64) -> u64 {
    let prime_divisors: Vec<u64> = factorize(order).into_iter().map(|(q, _)| q).collect();
    (2..modulus)
        .find(|&g| g.gcd(&modulus) == 1 && prime_divisors.iter().all(|&q| pow_mod(g, order / q, modulus) != 1))
        .unwrap_or(1)
}

/// Mixed-radix increment with the last digit fastest; false on wrap-around.
fn advance(digits: &mut [u64], radices: impl DoubleEndedIterator<Item = u64> + ExactSizeIterator) -> bool {
    let radices: Vec<u64> = radices.collect();
    for i in (0..digits.len()).rev() {
        digits[i] += 1;
        if digits[i] < radices[i] {
            return true;
        }
        digits[i] = 0;
    }
    false
}

/// The unit group `(Z/MZ)*` with its fixed generator choice.
#[derive(Debug, Clone)]
pub struct UnitGroup {
    modulus: u64,
    components: Vec<Component>,
}

impl UnitGroup {
    pub fn new(modulus: u64) -> Self {
        assert!(modulus >= 1, "modulus must be positive");
        let components = factorize(modulus).into_iter().map(|(p, e)| Component::new(p, e)).collect();
        UnitGroup { modulus, components }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Orders of the cyclic factors, in labelling order.
    pub fn factor_orders(&self) -> Vec<u64> {
        self.components.iter().flat_map(|c| c.factors.iter().map(|f| f.order)).collect()
    }

    /// Generators of the cyclic factors lifted to residues mod `M` (other components set to 1).
    pub fn generators(&self) -> Vec<u64> {
        let m = self.modulus;
        let mut out = Vec::new();
        for c in &self.components {
            let rest = m / c.modulus;
            for f in &c.factors {
                // x = g mod c.modulus, x = 1 mod rest
                out.push(crt_pair(f.generator, c.modulus, 1 % rest, rest));
            }
        }
        out
    }

    pub fn size(&self) -> u64 {
        self.factor_orders().iter().product()
    }

    fn exps_of_index(&self, index: u64) -> Option<Vec<u64>> {
        let orders = self.factor_orders();
        if index >= orders.iter().product::<u64>() {
            return None;
        }
        let mut rest = index;
        let mut exps = vec![0; orders.len()];
        for i in (0..orders.len()).rev() {
            exps[i] = rest % orders[i];
            rest /= orders[i];
        }
        Some(exps)
    }

    fn index_of_exps(&self, exps: &[u64]) -> u64 {
        self.factor_orders().iter().zip(exps).fold(0, |acc, (&n, &a)| acc * n + a)
    }

    pub fn character(&self, index: u64) -> Result<DirichletCharacter> {
        let exps = self.exps_of_index(index).ok_or_else(|| {
            Error::InvalidInput(format!("character index {index} out of range for modulus {}", self.modulus))
        })?;
        Ok(self.build(index, exps))
    }

    fn build(&self, index: u64, exps: Vec<u64>) -> DirichletCharacter {
        let orders = self.factor_orders();
        let exponent = orders.iter().fold(1u64, |acc, n| acc.lcm(n));
        let order = orders.iter().zip(&exps).fold(1u64, |acc, (&n, &a)| acc.lcm(&(n / n.gcd(&a))));
        let m = self.modulus;
        let table: Vec<Option<u64>> = (0..m)
            .map(|r| {
                let mut num = 0u64;
                let mut k = 0;
                for c in &self.components {
                    let logs = c.logs[(r % c.modulus) as usize].as_ref()?;
                    for (f, &lg) in c.factors.iter().zip(logs) {
                        num = (num + exps[k] * lg % f.order * (exponent / f.order)) % exponent;
                        k += 1;
                    }
                }
                Some(num / (exponent / order))
            })
            .collect();
        let mut k = 0;
        let mut conductor = 1;
        for c in &self.components {
            let n = c.factors.len();
            conductor *= c.conductor(&exps[k..k + n]);
            k += n;
        }
        let parity = match table[((m - 1) % m) as usize] {
            Some(t) if 2 * t == order => -1,
            _ => 1,
        };
        DirichletCharacter {
            modulus: m,
            index,
            exponents: exps,
            order: order as u32,
            conductor,
            parity,
            table: table.into(),
        }
    }

    pub fn characters(&self) -> Vec<DirichletCharacter> {
        (0..self.size()).map(|j| self.character(j).expect("index in range")).collect()
    }
}

fn crt_pair(a: u64, m: u64, b: u64, n: u64) -> u64 {
    (0..n).map(|k| a + k * m).find(|x| x % n == b % n).expect("coprime moduli")
}

#[derive(Clone)]
pub struct DirichletCharacter {
    modulus: u64,
    index: u64,
    exponents: Vec<u64>,
    order: u32,
    conductor: u64,
    parity: i32,
    /// `table[r] = Some(t)` means `chi(r) = zeta_order^t`.
    table: Arc<[Option<u64>]>,
}

/// Exactly `phi(M)` characters, principal first.
pub fn enumerate_characters(modulus: u64) -> Vec<DirichletCharacter> {
    UnitGroup::new(modulus).characters()
}

impl DirichletCharacter {
    pub fn principal(modulus: u64) -> Self {
        UnitGroup::new(modulus).character(0).expect("index 0 always exists")
    }

    pub fn from_index(modulus: u64, index: u64) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::InvalidInput("character modulus must be positive".into()));
        }
        UnitGroup::new(modulus).character(index)
    }

    /// The character `n -> (D/n)` at modulus `|D|` (`4|D|` when `D = 2, 3 mod 4`).
    pub fn kronecker(d: i64) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidInput("Kronecker character needs D != 0".into()));
        }
        let modulus = if d.rem_euclid(4) <= 1 { d.unsigned_abs() } else { 4 * d.unsigned_abs() };
        enumerate_characters(modulus)
            .into_iter()
            .find(|chi| {
                (1..=modulus as i64).all(|n| match chi.value_exponent(n) {
                    None => true,
                    Some(t) => {
                        let k = kronecker(d, n);
                        (k == 1 && t == 0) || (k == -1 && 2 * t == chi.order as u64)
                    }
                })
            })
            .ok_or_else(|| Error::InvalidInput(format!("no Dirichlet character matches (D/.) for D = {d}")))
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn index(&self) -> u64 {
        self.index
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn is_primitive(&self) -> bool {
        self.conductor == self.modulus
    }

    pub fn is_principal(&self) -> bool {
        self.order == 1
    }

    /// `chi(-1)`.
    pub fn parity(&self) -> i32 {
        self.parity
    }

    pub fn is_real(&self) -> bool {
        self.order <= 2
    }

    /// `Some(t)` with `chi(n) = zeta_order^t`, `None` when `gcd(n, M) > 1`.
    pub fn value_exponent(&self, n: i64) -> Option<u64> {
        self.table[n.rem_euclid(self.modulus as i64) as usize]
    }

    pub fn value(&self, n: i64) -> CycValue {
        match self.value_exponent(n) {
            None => CycValue::zero(),
            Some(t) => CycValue::root_of_unity(self.order, t),
        }
    }

    pub fn conj(&self) -> Self {
        let group = UnitGroup::new(self.modulus);
        let exps: Vec<u64> =
            group.factor_orders().iter().zip(&self.exponents).map(|(&n, &a)| (n - a) % n).collect();
        let index = group.index_of_exps(&exps);
        group.build(index, exps)
    }

    /// Pointwise product; both characters must share the modulus.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch { character: other.modulus, modulus: self.modulus });
        }
        let group = UnitGroup::new(self.modulus);
        let exps: Vec<u64> = group
            .factor_orders()
            .iter()
            .zip(self.exponents.iter().zip(&other.exponents))
            .map(|(&n, (&a, &b))| (a + b) % n)
            .collect();
        let index = group.index_of_exps(&exps);
        Ok(group.build(index, exps))
    }

    /// The primitive character mod the conductor inducing this one.
    pub fn primitive(&self) -> Self {
        if self.is_primitive() {
            return self.clone();
        }
        let m = self.modulus as i64;
        enumerate_characters(self.conductor)
            .into_iter()
            .find(|cand| {
                (1..=m).filter(|&n| gcd_i64(n, self.modulus) == 1).all(|n| {
                    cand.value(n) == self.value(n)
                })
            })
            .expect("every character is induced from its conductor")
    }
}

impl PartialEq for DirichletCharacter {
    fn eq(&self, other: &Self) -> bool {
        self.modulus == other.modulus && self.index == other.index
    }
}

impl Eq for DirichletCharacter {}

impl fmt::Debug for DirichletCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DirichletCharacter")
            .field("modulus", &self.modulus)
            .field("index", &self.index)
            .field("order", &self.order)
            .field("conductor", &self.conductor)
            .finish()
    }
}

impl fmt::Display for DirichletCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "chi[{}:{}]", self.modulus, self.index)
    }
}

#[derive(Serialize, Deserialize)]
struct CharacterJson {
    modulus: u64,
    index: u64,
}

impl Serialize for DirichletCharacter {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CharacterJson { modulus: self.modulus, index: self.index }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for DirichletCharacter {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = CharacterJson::deserialize(d)?;
        DirichletCharacter::from_index(raw.modulus, raw.index).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::arith::{divisors, euler_phi};

    #[test]
    fn modulus_one_is_trivial() {
        let chars = enumerate_characters(1);
        assert_eq!(chars.len(), 1);
        for n in -5..20 {
            assert_eq!(chars[0].value(n), CycValue::one());
        }
        assert!(chars[0].is_primitive());
    }

    #[test]
    fn modulus_five_labelling() {
        let chars = enumerate_characters(5);
        assert_eq!(chars.len(), 4);
        let quartic: Vec<_> = chars
            .iter()
            .filter(|c| c.order() == 4 && c.value(2) == CycValue::root_of_unity(4, 1))
            .collect();
        assert_eq!(quartic.len(), 1);
        assert_eq!(quartic[0].index(), 1);
        assert_eq!(quartic[0].value(4), CycValue::from_integer(-1));
        for c in &chars {
            assert!(c.value(10).is_zero());
        }
    }

    /// Brute force: every multiplicative map (Z/5)* -> mu_4 is some enumerated character.
    #[test]
    fn modulus_five_brute_force() {
        let chars = enumerate_characters(5);
        // 2 generates (Z/5)*; a homomorphism is fixed by the image of 2.
        for t in 0..4u64 {
            let found = chars.iter().any(|c| {
                (0..4u32).all(|k| c.value(pow_mod(2, k as u64, 5) as i64) == CycValue::root_of_unity(4, t * k as u64))
            });
            assert!(found, "missing homomorphism with 2 -> i^{t}");
        }
    }

    #[test]
    fn modulus_twelve_all_real() {
        let chars = enumerate_characters(12);
        assert_eq!(chars.len(), 4);
        assert!(chars.iter().all(|c| c.is_real()));
        // (Z/12)* = C2 x C2: all four sign patterns on {5, 7} occur exactly once.
        let mut patterns: Vec<(bool, bool)> = chars
            .iter()
            .map(|c| (c.value(5) == CycValue::one(), c.value(7) == CycValue::one()))
            .collect();
        patterns.sort();
        patterns.dedup();
        assert_eq!(patterns.len(), 4);
    }

    #[test]
    fn count_is_phi_and_distinct() {
        for m in 1..=60u64 {
            let chars = enumerate_characters(m);
            assert_eq!(chars.len() as u64, euler_phi(m), "M = {m}");
            assert!(chars[0].is_principal());
            for i in 0..chars.len() {
                for j in 0..i {
                    let differ = (0..m as i64).any(|n| chars[i].value(n) != chars[j].value(n));
                    assert!(differ, "M = {m}: characters {i} and {j} coincide");
                }
            }
        }
    }

    #[test]
    fn multiplicative_and_periodic() {
        for m in 1..=24u64 {
            for c in enumerate_characters(m) {
                for a in 0..m as i64 {
                    assert_eq!(c.value(a), c.value(a + m as i64));
                    assert_eq!(c.value(a).is_zero(), gcd_i64(a, m) > 1);
                    for b in 0..m as i64 {
                        assert_eq!(c.value(a * b), &c.value(a) * &c.value(b), "M={m} a={a} b={b}");
                    }
                    if gcd_i64(a, m) == 1 {
                        assert_eq!(c.value(a).pow(c.order()), CycValue::one());
                    }
                }
            }
        }
    }

    #[test]
    fn orthogonality() {
        for m in 1..=24u64 {
            let chars = enumerate_characters(m);
            for n in 0..m as i64 {
                let total = chars.iter().fold(CycValue::zero(), |acc, c| &acc + &c.value(n));
                let expected = if n.rem_euclid(m as i64) == 1 % m as i64 { euler_phi(m) as i64 } else { 0 };
                assert_eq!(total, CycValue::from_integer(expected), "M={m} n={n}");
            }
        }
    }

    /// Minimal d | M such that chi is trivial on units congruent to 1 mod d.
    fn brute_conductor(c: &DirichletCharacter) -> u64 {
        let m = c.modulus();
        divisors(m)
            .into_iter()
            .find(|&d| {
                (1..=m as i64)
                    .filter(|&n| gcd_i64(n, m) == 1 && (n - 1).rem_euclid(d as i64) == 0)
                    .all(|n| c.value(n) == CycValue::one())
            })
            .unwrap()
    }

    #[test]
    fn conductor_matches_brute_force() {
        for m in 1..=48u64 {
            for c in enumerate_characters(m) {
                assert_eq!(c.conductor(), brute_conductor(&c), "M = {m}, index {}", c.index());
                assert_eq!(m % c.conductor(), 0);
            }
        }
    }

    #[test]
    fn parity_matches_value_at_minus_one() {
        for m in 1..=30u64 {
            for c in enumerate_characters(m) {
                assert_eq!(c.value(-1), CycValue::from_integer(c.parity() as i64));
            }
        }
    }

    #[test]
    fn kronecker_character() {
        let chi = DirichletCharacter::kronecker(-3).unwrap();
        assert_eq!(chi.modulus(), 3);
        assert_eq!(chi.parity(), -1);
        assert!(chi.is_primitive());
        for n in -20..20i64 {
            assert_eq!(chi.value(n), CycValue::from_integer(kronecker(-3, n) as i64));
        }
        let chi = DirichletCharacter::kronecker(-4).unwrap();
        assert_eq!(chi.modulus(), 4);
        assert_eq!(chi.value(3), CycValue::from_integer(-1));
        let chi = DirichletCharacter::kronecker(2).unwrap();
        assert_eq!(chi.modulus(), 8);
        assert!(chi.is_primitive());
    }

    #[test]
    fn products_conjugates_and_primitive() {
        for m in [5u64, 8, 12, 15] {
            let chars = enumerate_characters(m);
            for a in &chars {
                assert!(a.mul(&a.conj()).unwrap().is_principal());
                for b in &chars {
                    let ab = a.mul(b).unwrap();
                    for n in 0..m as i64 {
                        assert_eq!(ab.value(n), &a.value(n) * &b.value(n));
                    }
                }
                let p = a.primitive();
                assert_eq!(p.modulus(), a.conductor());
                assert!(p.is_primitive());
            }
        }
        let c5 = DirichletCharacter::from_index(5, 1).unwrap();
        assert!(c5.mul(&DirichletCharacter::principal(3)).is_err());
    }

    #[test]
    fn generators_have_factor_orders() {
        for m in [7u64, 9, 16, 40, 63] {
            let g = UnitGroup::new(m);
            for (gen, n) in g.generators().into_iter().zip(g.factor_orders()) {
                assert_eq!(pow_mod(gen, n, m), 1 % m);
                assert!(factorize(n).iter().all(|(q, _)| pow_mod(gen, n / q, m) != 1));
            }
        }
    }

    #[test]
    fn json_shape() {
        let c = DirichletCharacter::from_index(5, 2).unwrap();
        let text = serde_json::to_string(&c).unwrap();
        assert_eq!(text, r#"{"modulus":5,"index":2}"#);
        let back: DirichletCharacter = serde_json::from_str(&text).unwrap();
        assert_eq!(back, c);
        assert!(serde_json::from_str::<DirichletCharacter>(r#"{"modulus":5,"index":4}"#).is_err());
    }
}
