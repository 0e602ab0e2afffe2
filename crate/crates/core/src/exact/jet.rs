use core::array;
use core::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;

use super::Rational;

/// First-order jet: a value together with its gradient in `N` directions.
///
/// Arithmetic is exact, so evaluating a formula on jets yields its exact
/// Jacobian at the base point.
#[derive(Clone, Debug, PartialEq)]
pub struct Jet<const N: usize> {
    pub value: Rational,
    pub grad: [Rational; N],
}

impl<const N: usize> Jet<N> {
    pub fn constant(value: Rational) -> Self {
        Jet { value, grad: array::from_fn(|_| Rational::zero()) }
    }

    /// The coordinate function `x_i` at `value`.
    pub fn variable(value: Rational, i: usize) -> Self {
        let mut j = Self::constant(value);
        j.grad[i] = Rational::from_integer(1.into());
        j
    }
}

impl<const N: usize> Add for Jet<N> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Jet { value: self.value + rhs.value, grad: array::from_fn(|i| &self.grad[i] + &rhs.grad[i]) }
    }
}

impl<const N: usize> Sub for Jet<N> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Jet { value: self.value - rhs.value, grad: array::from_fn(|i| &self.grad[i] - &rhs.grad[i]) }
    }
}

impl<const N: usize> Neg for Jet<N> {
    type Output = Self;
    fn neg(self) -> Self {
        Jet { value: -self.value, grad: self.grad.map(|g| -g) }
    }
}

impl<const N: usize> Mul for Jet<N> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Jet {
            grad: array::from_fn(|i| &self.grad[i] * &rhs.value + &self.value * &rhs.grad[i]),
            value: self.value * rhs.value,
        }
    }
}

impl<const N: usize> super::Field for Jet<N> {
    fn zero() -> Self {
        Self::constant(<Rational as Zero>::zero())
    }
    fn one() -> Self {
        Self::constant(Rational::from_integer(1.into()))
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(&self.value) && self.grad.iter().all(Zero::is_zero)
    }
    fn from_rational(r: &Rational) -> Self {
        Self::constant(r.clone())
    }
    fn checked_div(&self, rhs: &Self) -> Option<Self> {
        if Zero::is_zero(&rhs.value) {
            return None;
        }
        let inv = Rational::from_integer(1.into()) / &rhs.value;
        let v = &self.value * &inv;
        Some(Jet { grad: array::from_fn(|i| (&self.grad[i] - &v * &rhs.grad[i]) * &inv), value: v })
    }
    fn is_degenerate(&self) -> bool {
        Zero::is_zero(&self.value) && !super::Field::is_zero(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{frac, int, Field};

    #[test]
    fn quotient_rule() {
        let x = Jet::<2>::variable(int(3), 0);
        let y = Jet::<2>::variable(int(2), 1);
        let f = (x.clone() * x.clone()).checked_div(&y).unwrap();
        assert_eq!(f.value, frac(9, 2));
        assert_eq!(f.grad[0], int(3));
        assert_eq!(f.grad[1], frac(-9, 4));
        assert!(x.checked_div(&(y.clone() - y)).is_none());
    }

    #[test]
    fn degenerate_detection() {
        let x = Jet::<1>::variable(int(0), 0);
        assert!(x.is_degenerate());
        assert!(!Jet::<1>::zero().is_degenerate());
    }
}
