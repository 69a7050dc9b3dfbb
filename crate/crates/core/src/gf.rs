//! Prime-field and extension-field arithmetic over GF(p^e).
//!
//! Elements are small integer codes: the power-basis coefficients
//! `c_0 + c_1 x + ... + c_{e-1} x^{e-1}` packed as base-p digits with `c_0`
//! least significant. Codes `0..q` are the canonical element order used by
//! every other module (truth tables, default parameters, enumeration).

use std::fmt;

use thiserror::Error;

/// Largest field order supported.
pub const MAX_ORDER: u64 = 1 << 16;

/// Fields up to this order carry full multiplication and inverse tables.
const TABLE_LIMIT: u32 = 256;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GfError {
    #[error("characteristic {0} is not prime")]
    NonPrimeP(u32),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("field order {0} exceeds the supported maximum")]
    TooLarge(u64),
    #[error("modulus must have {expected} coefficients and be monic, got {got:?}")]
    DegreeMismatch { expected: usize, got: Vec<u32> },
    #[error("modulus coefficient {0} is not reduced mod p")]
    BadCoefficient(u32),
    #[error("modulus {0:?} is reducible over the prime field")]
    ReducibleModulus(Vec<u32>),
    #[error("division by zero")]
    DivisionByZero,
    #[error("code {code} is not an element of a field of order {q}")]
    NotAnElement { code: u32, q: u32 },
}

/// A field element, identified by its code in `0..q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default, serde::Serialize)]
#[serde(transparent)]
pub struct FElem(pub u32);

impl FElem {
    pub const ZERO: FElem = FElem(0);
    pub const ONE: FElem = FElem(1);

    pub fn code(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A concrete finite field with its defining modulus.
#[derive(Clone)]
pub struct FieldSpec {
    p: u32,
    e: u32,
    q: u32,
    /// Monic, constant term first, length e+1.
    modulus: Vec<u32>,
    tables: Option<Tables>,
}

#[derive(Clone)]
struct Tables {
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldSpec").field("p", &self.p).field("e", &self.e).field("modulus", &self.modulus).finish()
    }
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.e == other.e && self.modulus == other.modulus
    }
}

impl Eq for FieldSpec {}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits `q` as `p^e`, or `None` when it is not a prime power.
pub fn prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while !q.is_multiple_of(p) {
        p += 1;
    }
    let (mut rest, mut e) = (q, 0);
    while rest % p == 0 {
        rest /= p;
        e += 1;
    }
    (rest == 1).then_some((p as u32, e))
}

/// The modulus used when the caller does not supply one.
///
/// A few small orders have fixed choices; everything else takes the first
/// irreducible monic polynomial when the lower coefficients are read as a
/// base-p number.
pub fn default_modulus(p: u32, e: u32) -> Vec<u32> {
    match (p, e) {
        (_, 1) => vec![0, 1],
        (2, 2) => vec![1, 1, 1],
        (2, 3) => vec![1, 1, 0, 1],
        (3, 2) => vec![1, 0, 1],
        (2, 4) => vec![1, 1, 0, 0, 1],
        (5, 2) => vec![2, 1, 1],
        (3, 3) => vec![1, 2, 0, 1],
        (2, 5) => vec![1, 0, 1, 0, 0, 1],
        _ => {
            let count = (p as u64).pow(e);
            (0..count)
                .map(|code| {
                    let mut poly = digits(code, p, e as usize);
                    poly.push(1);
                    poly
                })
                .find(|poly| is_irreducible(poly, p))
                .expect("an irreducible polynomial of every degree exists")
        }
    }
}

fn digits(mut code: u64, p: u32, len: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push((code % p as u64) as u32);
        code /= p as u64;
    }
    out
}

fn trim(poly: &mut Vec<u32>) {
    while poly.last() == Some(&0) {
        poly.pop();
    }
}

fn inv_mod_p(a: u32, p: u32) -> u32 {
    // p is small, so Fermat is fine.
    let mut result = 1u64;
    let mut base = a as u64 % p as u64;
    let mut exp = p - 2;
    while exp > 0 {
        if exp & 1 == 1 {
            result = result * base % p as u64;
        }
        base = base * base % p as u64;
        exp >>= 1;
    }
    result as u32
}

/// Remainder of `num` modulo `den` over F_p (den nonzero, trimmed).
fn poly_rem(num: &[u32], den: &[u32], p: u32) -> Vec<u32> {
    let mut rem = num.to_vec();
    trim(&mut rem);
    let lead_inv = inv_mod_p(*den.last().unwrap(), p);
    while rem.len() >= den.len() {
        let shift = rem.len() - den.len();
        let factor = rem.last().unwrap() * lead_inv % p;
        for (i, &d) in den.iter().enumerate() {
            let sub = factor * d % p;
            rem[shift + i] = (rem[shift + i] + p - sub) % p;
        }
        trim(&mut rem);
    }
    rem
}

/// Trial division by every monic polynomial of degree at most deg/2.
fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let deg = poly.len() - 1;
    if deg <= 1 {
        return deg == 1;
    }
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for code in 0..count {
            let mut div = digits(code, p, d);
            div.push(1);
            if poly_rem(poly, &div, p).is_empty() {
                return false;
            }
        }
    }
    true
}

impl FieldSpec {
    /// Builds GF(p^e) with the given modulus, or the default one.
    pub fn new(p: u32, e: u32, modulus: Option<Vec<u32>>) -> Result<Self, GfError> {
        if !is_prime(p as u64) {
            return Err(GfError::NonPrimeP(p));
        }
        let q = (p as u64)
            .checked_pow(e)
            .filter(|&q| q <= MAX_ORDER && e >= 1)
            .ok_or(GfError::TooLarge((p as u64).saturating_pow(e)))?;
        let modulus = match modulus {
            Some(m) => {
                if m.len() != e as usize + 1 || m.last() != Some(&1) {
                    return Err(GfError::DegreeMismatch { expected: e as usize + 1, got: m });
                }
                if let Some(&c) = m.iter().find(|&&c| c >= p) {
                    return Err(GfError::BadCoefficient(c));
                }
                if !is_irreducible(&m, p) {
                    return Err(GfError::ReducibleModulus(m));
                }
                m
            }
            None => default_modulus(p, e),
        };
        let mut field = FieldSpec { p, e, q: q as u32, modulus, tables: None };
        if field.q <= TABLE_LIMIT {
            field.tables = Some(field.build_tables());
        }
        Ok(field)
    }

    /// GF(q) with the default modulus.
    pub fn of_order(q: u64) -> Result<Self, GfError> {
        let (p, e) = prime_power(q).ok_or(GfError::NotPrimePower(q))?;
        Self::new(p, e, None)
    }

    fn build_tables(&self) -> Tables {
        let q = self.q as usize;
        let mut add = vec![0u8; q * q];
        let mut mul = vec![0u8; q * q];
        let mut neg = vec![0u8; q];
        let mut inv = vec![0u8; q];
        for a in 0..q {
            neg[a] = self.slow_neg(a as u32) as u8;
            for b in 0..q {
                add[a * q + b] = self.slow_add(a as u32, b as u32) as u8;
                let prod = self.slow_mul(a as u32, b as u32);
                mul[a * q + b] = prod as u8;
                if prod == 1 {
                    inv[a] = b as u8;
                }
            }
        }
        Tables { add, mul, neg, inv }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// All elements in canonical order.
    pub fn elements(&self) -> impl Iterator<Item = FElem> {
        (0..self.q).map(FElem)
    }

    pub fn element(&self, code: u32) -> Result<FElem, GfError> {
        if code < self.q {
            Ok(FElem(code))
        } else {
            Err(GfError::NotAnElement { code, q: self.q })
        }
    }

    /// The image of an integer under Z -> F_p.
    pub fn from_int(&self, n: i64) -> FElem {
        FElem(n.rem_euclid(self.p as i64) as u32)
    }

    fn slow_add(&self, a: u32, b: u32) -> u32 {
        let (mut a, mut b) = (a, b);
        let (mut out, mut place) = (0, 1);
        for _ in 0..self.e {
            out += (a % self.p + b % self.p) % self.p * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out
    }

    fn slow_neg(&self, a: u32) -> u32 {
        let mut a = a;
        let (mut out, mut place) = (0, 1);
        for _ in 0..self.e {
            out += (self.p - a % self.p) % self.p * place;
            a /= self.p;
            place *= self.p;
        }
        out
    }

    fn slow_mul(&self, a: u32, b: u32) -> u32 {
        let (p, e) = (self.p, self.e as usize);
        let da = digits(a as u64, p, e);
        let db = digits(b as u64, p, e);
        let mut prod = vec![0u32; 2 * e];
        for (i, &x) in da.iter().enumerate() {
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % p;
            }
        }
        let rem = poly_rem(&prod, &self.modulus, p);
        rem.iter().rev().fold(0, |acc, &c| acc * p + c)
    }

    pub fn add(&self, a: FElem, b: FElem) -> FElem {
        match &self.tables {
            Some(t) => FElem(t.add[(a.0 * self.q + b.0) as usize] as u32),
            None => FElem(self.slow_add(a.0, b.0)),
        }
    }

    pub fn neg(&self, a: FElem) -> FElem {
        match &self.tables {
            Some(t) => FElem(t.neg[a.0 as usize] as u32),
            None => FElem(self.slow_neg(a.0)),
        }
    }

    pub fn sub(&self, a: FElem, b: FElem) -> FElem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FElem, b: FElem) -> FElem {
        match &self.tables {
            Some(t) => FElem(t.mul[(a.0 * self.q + b.0) as usize] as u32),
            None => FElem(self.slow_mul(a.0, b.0)),
        }
    }

    pub fn inv(&self, a: FElem) -> Result<FElem, GfError> {
        if a.is_zero() {
            return Err(GfError::DivisionByZero);
        }
        Ok(match &self.tables {
            Some(t) => FElem(t.inv[a.0 as usize] as u32),
            None => self.pow(a, self.q as u64 - 2),
        })
    }

    pub fn div(&self, a: FElem, b: FElem) -> Result<FElem, GfError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^n` with the convention `0^0 = 1`.
    pub fn pow(&self, a: FElem, mut n: u64) -> FElem {
        let mut result = FElem::ONE;
        let mut base = a;
        while n > 0 {
            if n & 1 == 1 {
                result = self.mul(result, base);
            }
            base = self.mul(base, base);
            n >>= 1;
        }
        result
    }

    pub fn is_square(&self, a: FElem) -> bool {
        if a.is_zero() || self.p == 2 {
            return true;
        }
        self.pow(a, (self.q as u64 - 1) / 2) == FElem::ONE
    }

    /// Raw tables for hot loops; present when q <= 256.
    pub fn byte_tables(&self) -> Option<(&[u8], &[u8], &[u8])> {
        self.tables.as_ref().map(|t| (&t.add[..], &t.mul[..], &t.neg[..]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f9_and_f4_products() {
        let f9 = FieldSpec::of_order(9).unwrap();
        assert_eq!(f9.mul(FElem(3), FElem(3)), FElem(2));
        let f4 = FieldSpec::of_order(4).unwrap();
        assert_eq!(f4.mul(FElem(2), FElem(2)), FElem(3));
    }

    #[test]
    fn constructor_errors() {
        assert_eq!(FieldSpec::new(4, 1, None).unwrap_err(), GfError::NonPrimeP(4));
        assert!(matches!(FieldSpec::new(2, 2, Some(vec![1, 0, 1])), Err(GfError::ReducibleModulus(_))));
        assert!(matches!(FieldSpec::new(3, 2, Some(vec![1, 1])), Err(GfError::DegreeMismatch { .. })));
        assert_eq!(FieldSpec::of_order(12).unwrap_err(), GfError::NotPrimePower(12));
    }

    #[test]
    fn default_moduli_are_irreducible() {
        for q in [4u64, 8, 9, 16, 25, 27, 32, 49, 64, 81, 121, 125, 128, 243, 256] {
            let f = FieldSpec::of_order(q).unwrap();
            assert!(is_irreducible(f.modulus(), f.p()), "q={q}");
        }
        assert_eq!(FieldSpec::of_order(25).unwrap().modulus(), &[2, 1, 1]);
    }

    #[test]
    fn inverse_of_zero_fails() {
        let f = FieldSpec::of_order(7).unwrap();
        assert_eq!(f.inv(FElem::ZERO), Err(GfError::DivisionByZero));
    }

    #[test]
    fn untabled_field_matches_fermat() {
        let f = FieldSpec::of_order(289).unwrap();
        for a in [1u32, 2, 17, 100, 288] {
            let a = FElem(a);
            assert_eq!(f.mul(a, f.inv(a).unwrap()), FElem::ONE);
            assert_eq!(f.pow(a, 288), FElem::ONE);
        }
    }
}
