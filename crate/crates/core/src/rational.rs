//! Exact nonnegative fractions for durations and time positions.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("rational with zero denominator ({num}/0)")]
pub struct ZeroDenominator {
    pub num: u64,
}

/// A reduced fraction `num/den` with `den > 0`.
///
/// Zero is always stored as `0/1`, so derived equality is value equality.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rational {
    num: u64,
    den: u64,
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl Rational {
    pub const ZERO: Rational = Rational { num: 0, den: 1 };
    pub const ONE: Rational = Rational { num: 1, den: 1 };

    pub fn new(num: u64, den: u64) -> Result<Self, ZeroDenominator> {
        if den == 0 {
            return Err(ZeroDenominator { num });
        }
        Ok(Self::reduced(num as u128, den as u128))
    }

    /// Integer value `n/1`.
    pub const fn integer(n: u64) -> Self {
        Rational { num: n, den: 1 }
    }

    // Intermediate products are computed in u128; the reduced result must fit u64.
    fn reduced(num: u128, den: u128) -> Self {
        debug_assert!(den != 0);
        if num == 0 {
            return Self::ZERO;
        }
        let g = gcd(num, den);
        let (num, den) = (num / g, den / g);
        Rational {
            num: u64::try_from(num).expect("rational numerator overflows u64"),
            den: u64::try_from(den).expect("rational denominator overflows u64"),
        }
    }

    pub fn num(self) -> u64 {
        self.num
    }

    pub fn den(self) -> u64 {
        self.den
    }

    pub fn is_zero(self) -> bool {
        self.num == 0
    }

    pub fn checked_add(self, other: Rational) -> Option<Rational> {
        let num = (self.num as u128)
            .checked_mul(other.den as u128)?
            .checked_add((other.num as u128).checked_mul(self.den as u128)?)?;
        let den = (self.den as u128).checked_mul(other.den as u128)?;
        let r = Self::reduced_checked(num, den)?;
        Some(r)
    }

    pub fn checked_mul(self, other: Rational) -> Option<Rational> {
        // Cross-reduce first so the products stay small.
        let g1 = gcd(self.num as u128, other.den as u128).max(1);
        let g2 = gcd(other.num as u128, self.den as u128).max(1);
        let num = (self.num as u128 / g1).checked_mul(other.num as u128 / g2)?;
        let den = (self.den as u128 / g2).checked_mul(other.den as u128 / g1)?;
        Self::reduced_checked(num, den)
    }

    fn reduced_checked(num: u128, den: u128) -> Option<Rational> {
        if num == 0 {
            return Some(Self::ZERO);
        }
        let g = gcd(num, den);
        Some(Rational {
            num: u64::try_from(num / g).ok()?,
            den: u64::try_from(den / g).ok()?,
        })
    }
}

impl Default for Rational {
    fn default() -> Self {
        Self::ZERO
    }
}

impl Add for Rational {
    type Output = Rational;

    fn add(self, rhs: Rational) -> Rational {
        self.checked_add(rhs).expect("rational addition overflow")
    }
}

impl Mul for Rational {
    type Output = Rational;

    fn mul(self, rhs: Rational) -> Rational {
        self.checked_mul(rhs)
            .expect("rational multiplication overflow")
    }
}

impl std::iter::Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::ZERO, |acc, r| acc + r)
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        let lhs = self.num as u128 * other.den as u128;
        let rhs = other.num as u128 * self.den as u128;
        lhs.cmp(&rhs)
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}
