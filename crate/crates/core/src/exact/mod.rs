//! Exact arithmetic kernel.
//!
//! Everything here is generic over the [`Field`] trait so that one formula can
//! be evaluated at rational points, on symbolic rational functions, on
//! truncated Laurent series, or on jets carrying first derivatives.

mod jet;
pub mod linalg;
mod poly;
mod ratfunc;
mod series;

use core::fmt::Debug;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::Rng;

pub use jet::Jet;
pub use poly::{sym, MultiPoly, Symbol};
pub use series::DEFAULT_TRUNCATION;
pub use ratfunc::RatFunc;
pub use series::{LocalSeries, Order};

/// Arbitrary-precision rational number, always kept in lowest terms with a
/// positive denominator.
pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExactError {
    #[error("division by the zero rational function")]
    DivisionByZero,
    #[error("substitution makes the denominator identically zero")]
    PolarSubstitution,
    #[error("symbol `{0}` has no binding")]
    UnboundSymbol(alloc::string::String),
    #[error("specialization annihilates the function identically")]
    Annihilated,
    #[error("cannot parse `{0}` as a rational")]
    Parse(alloc::string::String),
}

/// The arithmetic every formula in this crate is written against.
///
/// `checked_div` returns `None` when the divisor is not invertible: zero for
/// a field, a series that vanishes within its precision, or a jet whose value
/// part is zero.
pub trait Field:
    Clone + Debug + PartialEq + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn from_rational(r: &Rational) -> Self;
    fn checked_div(&self, rhs: &Self) -> Option<Self>;

    fn from_int(n: i64) -> Self {
        Self::from_rational(&int(n))
    }

    fn square(&self) -> Self {
        self.clone() * self.clone()
    }

    fn recip(&self) -> Option<Self> {
        Self::one().checked_div(self)
    }

    /// Nonzero as a formal object but zero at the base point (jets only).
    fn is_degenerate(&self) -> bool {
        false
    }
}

impl Field for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
    fn checked_div(&self, rhs: &Self) -> Option<Self> {
        if Zero::is_zero(rhs) {
            None
        } else {
            Some(self / rhs)
        }
    }
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn is_integral(r: &Rational) -> bool {
    r.is_integer()
}

/// Parse `"p/q"`, `"p"` or `"-p/q"`.
pub fn parse_rational(s: &str) -> Result<Rational, ExactError> {
    let err = || ExactError::Parse(s.into());
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| err())?;
            let d: BigInt = d.trim().parse().map_err(|_| err())?;
            if d.is_zero() {
                return Err(err());
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| err())?)),
    }
}

/// Canonical `"p/q"` string (plain `"p"` for integers).
pub fn format_rational(r: &Rational) -> alloc::string::String {
    use alloc::string::ToString;
    if r.is_integer() {
        r.numer().to_string()
    } else {
        alloc::format!("{}/{}", r.numer(), r.denom())
    }
}

/// Uniform random rational with nonzero numerator in `[-bound, bound]` and
/// denominator in `[1, bound]`.
pub fn random_rational<R: Rng + ?Sized>(rng: &mut R, bound: i64) -> Rational {
    let bound = bound.max(2);
    loop {
        let n = rng.gen_range(-bound..=bound);
        if n != 0 {
            let d = rng.gen_range(1..=bound);
            return frac(n, d);
        }
    }
}


/// Probabilistic equality of two rational functions: compare values at
/// `trials` random points, redrawing points where either side has a pole.
/// Sound with overwhelming probability for the coefficient sizes used here.
pub fn probably_equal<R: Rng + ?Sized>(a: &RatFunc, b: &RatFunc, rng: &mut R, trials: usize, bound: i64) -> bool {
    let mut syms = a.symbols();
    for s in b.symbols() {
        if !syms.contains(&s) {
            syms.push(s);
        }
    }
    let mut done = 0;
    let mut attempts = 0;
    while done < trials && attempts < 1000 {
        attempts += 1;
        let point: alloc::collections::BTreeMap<Symbol, Rational> =
            syms.iter().map(|s| (s.clone(), random_rational(rng, bound))).collect();
        match (a.eval(&point), b.eval(&point)) {
            (Ok(x), Ok(y)) => {
                if x != y {
                    return false;
                }
                done += 1;
            }
            _ => continue,
        }
    }
    done == trials
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_strings_round_trip() {
        for s in ["0", "-3", "5/7", "-12/5"] {
            assert_eq!(format_rational(&parse_rational(s).unwrap()), s);
        }
        assert_eq!(parse_rational("4/6").unwrap(), frac(2, 3));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn rationals_are_normalized() {
        let r = frac(6, -4);
        assert_eq!(r.numer(), &BigInt::from(-3));
        assert_eq!(r.denom(), &BigInt::from(2));
    }
}
