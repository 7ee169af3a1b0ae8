//! Arithmetic in GF(p) for the small primes used at desk scale.

use crate::{Error, Result};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

pub const SUPPORTED_PRIMES: [u8; 4] = [2, 3, 5, 7];

/// The prime field GF(p), carried around as a lightweight context.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimeField {
    p: u8,
}

impl PrimeField {
    pub fn new(p: u8) -> Result<Self> {
        if SUPPORTED_PRIMES.contains(&p) {
            Ok(PrimeField { p })
        } else {
            Err(Error::UnsupportedField(p))
        }
    }

    #[inline]
    pub fn p(self) -> u8 {
        self.p
    }

    #[inline]
    pub fn add(self, a: u8, b: u8) -> u8 {
        ((a as u16 + b as u16) % self.p as u16) as u8
    }

    #[inline]
    pub fn sub(self, a: u8, b: u8) -> u8 {
        ((a as u16 + self.p as u16 - b as u16) % self.p as u16) as u8
    }

    #[inline]
    pub fn mul(self, a: u8, b: u8) -> u8 {
        ((a as u16 * b as u16) % self.p as u16) as u8
    }

    #[inline]
    pub fn neg(self, a: u8) -> u8 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(self, a: u8) -> u8 {
        assert!(a % self.p != 0, "zero has no inverse");
        (1..self.p).find(|&b| self.mul(a, b) == 1).unwrap()
    }

    pub fn elements(self) -> impl Iterator<Item = u8> {
        0..self.p
    }

    /// Reduce an arbitrary integer into `[0, p)`.
    pub fn reduce(self, x: i64) -> u8 {
        x.rem_euclid(self.p as i64) as u8
    }
}

/// A single element of GF(p) carrying its modulus.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElement {
    value: u8,
    field: PrimeField,
}

impl FieldElement {
    pub fn new(value: i64, field: PrimeField) -> Self {
        FieldElement { value: field.reduce(value), field }
    }

    pub fn value(self) -> u8 {
        self.value
    }

    pub fn field(self) -> PrimeField {
        self.field
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    pub fn inverse(self) -> Option<Self> {
        (self.value != 0).then(|| FieldElement { value: self.field.inv(self.value), field: self.field })
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.field.p)
    }
}

impl Add for FieldElement {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        assert_eq!(self.field, o.field);
        FieldElement { value: self.field.add(self.value, o.value), field: self.field }
    }
}

impl Sub for FieldElement {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        assert_eq!(self.field, o.field);
        FieldElement { value: self.field.sub(self.value, o.value), field: self.field }
    }
}

impl Mul for FieldElement {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        assert_eq!(self.field, o.field);
        FieldElement { value: self.field.mul(self.value, o.value), field: self.field }
    }
}

impl Neg for FieldElement {
    type Output = Self;
    fn neg(self) -> Self {
        FieldElement { value: self.field.neg(self.value), field: self.field }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_unsupported_primes() {
        assert!(PrimeField::new(4).is_err());
        assert!(PrimeField::new(11).is_err());
    }

    #[test]
    fn inverses_exist() {
        for p in SUPPORTED_PRIMES {
            let f = PrimeField::new(p).unwrap();
            for a in 1..p {
                assert_eq!(f.mul(a, f.inv(a)), 1);
            }
        }
    }

    #[test]
    fn element_ops() {
        let f = PrimeField::new(7).unwrap();
        let a = FieldElement::new(5, f);
        let b = FieldElement::new(-3, f);
        assert_eq!((a + b).value(), 2);
        assert_eq!((a * b).value(), 6);
        assert_eq!((a - b).value(), 1);
        assert_eq!((-a).value(), 2);
        assert_eq!((a * a.inverse().unwrap()).value(), 1);
    }
}
