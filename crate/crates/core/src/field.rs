//! Scalar fields used by the generator (GF(p)) and the online solver (f64).
//!
//! Elements are plain values; the field object carries whatever context the
//! arithmetic needs (the modulus for GF(p), nothing for the reals).

use std::fmt::Debug;

use thiserror::Error;

/// Largest prime below 2^16.
pub const DEFAULT_PRIME: u32 = 65521;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("modulus {0} does not fit the 31-bit element representation")]
    ModulusTooLarge(u64),
    #[error("zero has no inverse")]
    ZeroInverse,
    #[error("denominator {0} vanishes in the field")]
    SingularDenominator(i64),
}

pub trait Field: Clone + Debug + Send + Sync {
    type Elem: Copy + PartialEq + Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, v: i64) -> Self::Elem;
    fn add(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    fn sub(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    fn mul(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    fn neg(&self, a: Self::Elem) -> Self::Elem;
    fn inv(&self, a: Self::Elem) -> Result<Self::Elem, FieldError>;
    fn is_zero(&self, a: Self::Elem) -> bool;

    fn div(&self, a: Self::Elem, b: Self::Elem) -> Result<Self::Elem, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// Integer power, negative exponents through the inverse.
    fn pow(&self, a: Self::Elem, e: i32) -> Result<Self::Elem, FieldError> {
        let base = if e < 0 { self.inv(a)? } else { a };
        let mut n = e.unsigned_abs();
        let mut acc = self.one();
        let mut sq = base;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(acc, sq);
            }
            sq = self.mul(sq, sq);
            n >>= 1;
        }
        Ok(acc)
    }

    /// Embed the rational `num / den`.
    fn from_ratio(&self, num: i64, den: i64) -> Result<Self::Elem, FieldError> {
        self.div(self.from_i64(num), self.from_i64(den))
            .map_err(|_| FieldError::SingularDenominator(den))
    }
}

/// The prime field GF(p), elements stored reduced in `[0, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    p: u32,
}

impl Default for PrimeField {
    fn default() -> Self {
        Self { p: DEFAULT_PRIME }
    }
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, FieldError> {
        if p >= 1 << 31 {
            return Err(FieldError::ModulusTooLarge(p));
        }
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(Self { p: p as u32 })
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn reduce(&self, v: u64) -> u32 {
        (v % self.p as u64) as u32
    }

    /// Symmetric representative in `(-p/2, p/2]`, handy for printing.
    pub fn signed(&self, a: u32) -> i64 {
        let a = a as i64;
        let p = self.p as i64;
        if a > p / 2 {
            a - p
        } else {
            a
        }
    }
}

impl Field for PrimeField {
    type Elem = u32;

    #[inline]
    fn zero(&self) -> u32 {
        0
    }

    #[inline]
    fn one(&self) -> u32 {
        1
    }

    fn from_i64(&self, v: i64) -> u32 {
        v.rem_euclid(self.p as i64) as u32
    }

    #[inline]
    fn add(&self, a: u32, b: u32) -> u32 {
        let s = a as u64 + b as u64;
        if s >= self.p as u64 {
            (s - self.p as u64) as u32
        } else {
            s as u32
        }
    }

    #[inline]
    fn sub(&self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    fn mul(&self, a: u32, b: u32) -> u32 {
        self.reduce(a as u64 * b as u64)
    }

    #[inline]
    fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    fn inv(&self, a: u32) -> Result<u32, FieldError> {
        if a % self.p == 0 {
            return Err(FieldError::ZeroInverse);
        }
        // extended Euclid on (a, p)
        let (mut r0, mut r1) = (self.p as i64, a as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        Ok(t0.rem_euclid(self.p as i64) as u32)
    }

    #[inline]
    fn is_zero(&self, a: u32) -> bool {
        a == 0
    }
}

/// Floating-point reals.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Reals;

impl Field for Reals {
    type Elem = f64;

    fn zero(&self) -> f64 {
        0.0
    }
    fn one(&self) -> f64 {
        1.0
    }
    fn from_i64(&self, v: i64) -> f64 {
        v as f64
    }
    fn add(&self, a: f64, b: f64) -> f64 {
        a + b
    }
    fn sub(&self, a: f64, b: f64) -> f64 {
        a - b
    }
    fn mul(&self, a: f64, b: f64) -> f64 {
        a * b
    }
    fn neg(&self, a: f64) -> f64 {
        -a
    }
    fn inv(&self, a: f64) -> Result<f64, FieldError> {
        if a == 0.0 {
            Err(FieldError::ZeroInverse)
        } else {
            Ok(1.0 / a)
        }
    }
    fn is_zero(&self, a: f64) -> bool {
        a == 0.0
    }
    fn pow(&self, a: f64, e: i32) -> Result<f64, FieldError> {
        if e < 0 && a == 0.0 {
            return Err(FieldError::ZeroInverse);
        }
        Ok(a.powi(e))
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn inverse_basics() {
        let f = PrimeField::default();
        assert_eq!(f.inv(1).unwrap(), 1);
        assert_eq!(f.inv(2).unwrap(), 32761);
        assert_eq!((2u64 * 32761) % 65521, 1);
        assert_eq!(f.inv(0), Err(FieldError::ZeroInverse));
    }

    #[test]
    fn inverse_round_trip() {
        let f = PrimeField::default();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let a = rng.gen_range(1..f.modulus());
            let ai = f.inv(a).unwrap();
            assert_eq!(f.mul(a, ai), 1);
            assert_eq!(f.inv(ai).unwrap(), a);
        }
    }

    #[test]
    fn rejects_composites() {
        assert_eq!(PrimeField::new(65520), Err(FieldError::NotPrime(65520)));
        assert!(PrimeField::new(7).is_ok());
        assert!(PrimeField::new(2_147_483_647).is_ok());
        assert!(PrimeField::new(1 << 31).is_err());
    }

    #[test]
    fn ratios_and_powers() {
        let f = PrimeField::new(7).unwrap();
        // 3/2 = 3 * 4 = 12 = 5 mod 7
        assert_eq!(f.from_ratio(3, 2).unwrap(), 5);
        assert_eq!(f.from_ratio(-1, 1).unwrap(), 6);
        assert!(matches!(f.from_ratio(1, 14), Err(FieldError::SingularDenominator(14))));
        assert_eq!(f.pow(3, -1).unwrap(), f.inv(3).unwrap());
        assert_eq!(f.pow(3, 6).unwrap(), 1);
        assert_eq!(f.signed(6), -1);
    }
}
