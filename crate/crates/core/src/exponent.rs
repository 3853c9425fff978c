//! Exact rational exponents extended with `+inf`.
//!
//! All space parameters and derived exponents live here, so conditions such
//! as `1/q + 1/(r*r2) = 1/r1` are decided exactly. A value is either a
//! reduced `BigRational` or the single point at infinity; there is no `-inf`
//! and no NaN. Undefined combinations (`inf - inf`, `0 * inf`, division by
//! zero, negative multiples of `inf`) are rejected as errors, which forces
//! call sites to branch explicitly.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Exponent {
    /// A finite rational, stored in lowest terms with positive denominator
    /// (`BigRational` maintains that normal form).
    Finite(BigRational),
    /// The point at `+inf`.
    Infinite,
}

use Exponent::{Finite, Infinite};

impl Exponent {
    pub fn zero() -> Self {
        Finite(BigRational::zero())
    }

    pub fn one() -> Self {
        Finite(BigRational::one())
    }

    pub fn infinity() -> Self {
        Infinite
    }

    pub fn from_int(n: i64) -> Self {
        Finite(BigRational::from_integer(BigInt::from(n)))
    }

    /// `num/den` as an exact rational; `den` must be nonzero.
    pub fn new(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::Exponent("zero denominator".into()));
        }
        Ok(Finite(BigRational::new(BigInt::from(num), BigInt::from(den))))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Infinite)
    }

    pub fn is_finite(&self) -> bool {
        !self.is_infinite()
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Finite(r) if r.is_zero())
    }

    pub fn is_positive(&self) -> bool {
        match self {
            Finite(r) => r.is_positive(),
            Infinite => true,
        }
    }

    pub fn is_negative(&self) -> bool {
        matches!(self, Finite(r) if r.is_negative())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        match (self, other) {
            (Finite(a), Finite(b)) => Ok(Finite(a + b)),
            _ => Ok(Infinite),
        }
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        match (self, other) {
            (Finite(a), Finite(b)) => Ok(Finite(a - b)),
            (Infinite, Finite(_)) => Ok(Infinite),
            (_, Infinite) => Err(Error::Exponent("subtraction of inf".into())),
        }
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        match (self, other) {
            (Finite(a), Finite(b)) => Ok(Finite(a * b)),
            (Finite(a), Infinite) | (Infinite, Finite(a)) => {
                if a.is_positive() {
                    Ok(Infinite)
                } else {
                    Err(Error::Exponent("non-positive multiple of inf".into()))
                }
            }
            (Infinite, Infinite) => Ok(Infinite),
        }
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        match (self, other) {
            (Finite(a), Finite(b)) => {
                if b.is_zero() {
                    Err(Error::Exponent("division by zero".into()))
                } else {
                    Ok(Finite(a / b))
                }
            }
            (Finite(_), Infinite) => Ok(Self::zero()),
            (Infinite, Finite(b)) => {
                if b.is_positive() {
                    Ok(Infinite)
                } else {
                    Err(Error::Exponent("inf divided by non-positive".into()))
                }
            }
            (Infinite, Infinite) => Err(Error::Exponent("inf / inf".into())),
        }
    }

    /// Multiplicative inverse with the convention `1/inf = 0`; `1/0` is an error.
    pub fn recip(&self) -> Result<Self> {
        match self {
            Infinite => Ok(Self::zero()),
            Finite(r) if r.is_zero() => Err(Error::Exponent("reciprocal of zero".into())),
            Finite(r) => Ok(Finite(r.recip())),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Finite(r) => r.to_f64().expect("rational to f64"),
            Infinite => f64::INFINITY,
        }
    }

    pub fn to_scalar<T: Scalar>(&self) -> T {
        match self {
            Finite(_) => T::from_f64_lossy(self.to_f64()),
            Infinite => T::infinity(),
        }
    }
}

impl PartialOrd for Exponent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Exponent {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Finite(a), Finite(b)) => a.cmp(b),
            (Finite(_), Infinite) => Ordering::Less,
            (Infinite, Finite(_)) => Ordering::Greater,
            (Infinite, Infinite) => Ordering::Equal,
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Infinite => write!(f, "inf"),
            Finite(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Finite(r) => write!(f, "{}/{}", r.numer(), r.denom()),
        }
    }
}

impl fmt::Debug for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Parses `"inf"`, integers (`"2"`) and fractions (`"3/2"`).
/// Decimal notation is rejected so space parameters stay exact.
impl FromStr for Exponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("inf") || s == "∞" {
            return Ok(Infinite);
        }
        if s.contains('.') || s.contains('e') || s.contains('E') {
            return Err(Error::Parameter(format!(
                "exponent `{s}` must be an exact rational like 3/2, an integer, or inf"
            )));
        }
        let parse_int = |t: &str| -> Result<BigInt> {
            t.trim()
                .parse::<BigInt>()
                .map_err(|_| Error::Parameter(format!("cannot parse `{t}` as an integer")))
        };
        match s.split_once('/') {
            None => Ok(Finite(BigRational::from_integer(parse_int(s)?))),
            Some((n, d)) => {
                let den = parse_int(d)?;
                if den.is_zero() {
                    return Err(Error::Parameter(format!("zero denominator in `{s}`")));
                }
                Ok(Finite(BigRational::new(parse_int(n)?, den)))
            }
        }
    }
}
