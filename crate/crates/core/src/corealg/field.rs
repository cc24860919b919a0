use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::gauss::GaussRat;

/// Exact rational number.
pub type Rat = BigRational;

/// A commutative field with exact arithmetic.
///
/// Every numeric layer of the engine (polynomials, rational functions,
/// elimination) is written against this trait so the same code runs over
/// plain rationals, Gaussian rationals, and rational functions in the
/// formal weight parameter.
pub trait Field:
    Clone
    + PartialEq
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
{
    fn from_rat(r: &Rat) -> Self;

    fn from_i64(n: i64) -> Self {
        Self::from_rat(&Rat::from_integer(BigInt::from(n)))
    }

    /// Rough size used to prefer simple pivots during elimination.
    fn cost(&self) -> usize {
        0
    }

    fn inv(&self) -> Self {
        Self::one() / self.clone()
    }
}

/// A field containing the Gaussian rationals, with complex conjugation.
/// Coefficients of functions, jets and operators live in such a field.
pub trait Coeff: Field {
    fn from_gauss(g: &GaussRat) -> Self;

    /// Complex conjugation; the formal parameter is treated as real.
    fn conj(&self) -> Self;

    /// The value as a Gaussian rational when it does not depend on the
    /// formal parameter.
    fn as_gauss(&self) -> Option<GaussRat>;
}

impl Field for Rat {
    fn from_rat(r: &Rat) -> Self {
        r.clone()
    }

    fn cost(&self) -> usize {
        (self.numer().bits() + self.denom().bits()) as usize
    }
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Formats a rational as `p/q` (or `p` when integral).
pub fn fmt_rat(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p`, `p/q`, `-p/q` exactly. Decimal notation is rejected.
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().ok()?;
    let d: BigInt = d.parse().ok()?;
    if d.is_zero() {
        return None;
    }
    Some(Rat::new(n, d))
}

pub(crate) fn rat_is_neg(r: &Rat) -> bool {
    r.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        for s in ["0", "3", "-2/3", "5/3", "-7"] {
            assert_eq!(fmt_rat(&parse_rat(s).unwrap()), s);
        }
        assert_eq!(fmt_rat(&parse_rat("4/6").unwrap()), "2/3");
        assert!(parse_rat("1/0").is_none());
        assert!(parse_rat("0.5").is_none());
        assert!(parse_rat("param").is_none());
    }
}
