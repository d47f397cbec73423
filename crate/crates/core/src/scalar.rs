//! Coefficient fields.
//!
//! Everything in the crate is generic over [`Scalar`]; the default is the
//! exact rational field [`Rational`]. [`Fp`] provides small prime fields.

use std::fmt;
use std::hash::Hash;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Arbitrary-precision rational numbers, always stored reduced with a
/// positive denominator.
pub type Rational = num_rational::BigRational;

/// A field of coefficients with exact arithmetic.
pub trait Scalar:
    Clone
    + Eq
    + Hash
    + fmt::Debug
    + fmt::Display
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Send
    + Sync
    + 'static
{
    /// Parses an integer or `p/q` literal. A zero denominator is rejected.
    fn parse_literal(s: &str) -> Option<Self>;

    fn from_i64(n: i64) -> Self;

    /// True for values that print with a leading minus sign.
    fn is_negative_literal(&self) -> bool;
}

impl Scalar for Rational {
    fn parse_literal(s: &str) -> Option<Self> {
        let s = s.trim();
        match s.split_once('/') {
            Some((p, q)) => {
                let p = BigInt::from_str(p.trim()).ok()?;
                let q = BigInt::from_str(q.trim()).ok()?;
                if q.is_zero() {
                    return None;
                }
                Some(Rational::new(p, q))
            }
            None => BigInt::from_str(s).ok().map(Rational::from_integer),
        }
    }

    fn from_i64(n: i64) -> Self {
        Rational::from_integer(BigInt::from(n))
    }

    fn is_negative_literal(&self) -> bool {
        self.numer() < &BigInt::zero()
    }
}

/// The prime field `Z/PZ`. `P` must be prime; this is not checked.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fp<const P: u64>(u64);

impl<const P: u64> Fp<P> {
    pub fn new(n: i64) -> Self {
        Fp(n.rem_euclid(P as i64) as u64)
    }

    pub fn value(self) -> u64 {
        self.0
    }

    fn pow(self, mut e: u64) -> Self {
        let mut base = self.0 as u128;
        let mut acc: u128 = 1;
        let p = P as u128;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        Fp(acc as u64)
    }

    pub fn inverse(self) -> Option<Self> {
        if self.0 == 0 {
            None
        } else {
            Some(self.pow(P - 2))
        }
    }
}

impl<const P: u64> fmt::Debug for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}", self.0, P)
    }
}

impl<const P: u64> fmt::Display for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u64> Zero for Fp<P> {
    fn zero() -> Self {
        Fp(0)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
}

impl<const P: u64> One for Fp<P> {
    fn one() -> Self {
        Fp(1 % P)
    }
}

impl<const P: u64> Add for Fp<P> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Fp(((self.0 as u128 + rhs.0 as u128) % P as u128) as u64)
    }
}

impl<const P: u64> Sub for Fp<P> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<const P: u64> Neg for Fp<P> {
    type Output = Self;
    fn neg(self) -> Self {
        if self.0 == 0 {
            self
        } else {
            Fp(P - self.0)
        }
    }
}

impl<const P: u64> Mul for Fp<P> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Fp(((self.0 as u128 * rhs.0 as u128) % P as u128) as u64)
    }
}

impl<const P: u64> Div for Fp<P> {
    type Output = Self;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Self) -> Self {
        self * rhs.inverse().expect("division by zero in prime field")
    }
}

impl<const P: u64> Scalar for Fp<P> {
    fn parse_literal(s: &str) -> Option<Self> {
        let s = s.trim();
        match s.split_once('/') {
            Some((p, q)) => {
                let p: i64 = p.trim().parse().ok()?;
                let q = Fp::new(q.trim().parse().ok()?);
                q.inverse().map(|inv| Fp::new(p) * inv)
            }
            None => s.parse().ok().map(Fp::new),
        }
    }

    fn from_i64(n: i64) -> Self {
        Fp::new(n)
    }

    fn is_negative_literal(&self) -> bool {
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_literals() {
        let half = Rational::parse_literal("1/2").unwrap();
        assert_eq!(half.to_string(), "1/2");
        assert_eq!(Rational::parse_literal("-6/4").unwrap().to_string(), "-3/2");
        assert_eq!(Rational::parse_literal("7").unwrap(), Rational::from_i64(7));
        assert!(Rational::parse_literal("1/0").is_none());
        assert!(Rational::parse_literal("x").is_none());
        assert!(Rational::from_i64(-2).is_negative_literal());
    }

    #[test]
    fn prime_field_arithmetic() {
        type F7 = Fp<7>;
        let a = F7::new(3);
        assert_eq!(a * a.inverse().unwrap(), F7::one());
        assert_eq!(F7::new(-1).value(), 6);
        assert_eq!(F7::parse_literal("1/2").unwrap(), F7::new(4));
        assert_eq!(F7::new(5) - F7::new(6), F7::new(6));
        assert!(F7::zero().inverse().is_none());
    }
}
