use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use super::poly::gcd;
use super::{ExactError, Field, LocalSeries, MultiPoly, Order, Rational, Symbol};

/// Above this many terms on either side, reduction skips the full gcd and only
/// strips rational content. Verdicts never rely on canonical forms.
const GCD_TERM_CAP: usize = 600;

fn capped_gcd(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    if a.as_constant().is_some() || b.as_constant().is_some() || a.term_count() > GCD_TERM_CAP || b.term_count() > GCD_TERM_CAP {
        MultiPoly::one()
    } else {
        gcd(a, b)
    }
}

/// Quotient of two polynomials over Q with a monic denominator.
#[derive(Clone)]
pub struct RatFunc {
    num: MultiPoly,
    den: MultiPoly,
}

impl RatFunc {
    pub fn from_poly(p: MultiPoly) -> Self {
        RatFunc { num: p, den: MultiPoly::one() }
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_poly(MultiPoly::constant(c))
    }

    pub fn var(name: &str) -> Self {
        Self::from_poly(MultiPoly::var(name))
    }

    pub fn new(num: MultiPoly, den: MultiPoly) -> Result<Self, ExactError> {
        if den.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        Ok(Self::reduced(num, den))
    }

    fn reduced(num: MultiPoly, den: MultiPoly) -> Self {
        if num.is_zero() {
            return Self::from_poly(MultiPoly::zero());
        }
        let g = capped_gcd(&num, &den);
        let (num, den) = if g.as_constant().is_some() {
            (num, den)
        } else {
            (num.div_exact(&g).unwrap(), den.div_exact(&g).unwrap())
        };
        Self::normalized(num, den)
    }

    /// Makes the denominator monic; no cancellation.
    fn normalized(num: MultiPoly, den: MultiPoly) -> Self {
        if num.is_zero() {
            return Self::from_poly(MultiPoly::zero());
        }
        let lc = den.leading_coeff().unwrap().clone();
        let inv = Rational::from_integer(1.into()) / lc;
        RatFunc { num: num.scale(&inv).trim(), den: den.scale(&inv).trim() }
    }

    pub fn numer(&self) -> &MultiPoly {
        &self.num
    }

    pub fn denom(&self) -> &MultiPoly {
        &self.den
    }

    pub fn symbols(&self) -> Vec<Symbol> {
        let mut s = self.num.symbols();
        for v in self.den.symbols() {
            if !s.contains(&v) {
                s.push(v);
            }
        }
        s.sort();
        s
    }

    pub fn as_constant(&self) -> Option<Rational> {
        let n = self.num.as_constant()?;
        let d = self.den.as_constant()?;
        Some(n / d)
    }

    pub fn checked_div_rf(&self, rhs: &RatFunc) -> Result<RatFunc, ExactError> {
        if rhs.num.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        Ok(Self::reduced(&self.num * &rhs.den, &self.den * &rhs.num))
    }

    /// Evaluate at a point of any field; `Err` on a polar hit or a missing
    /// binding.
    pub fn eval_in<F: Field>(&self, env: &dyn Fn(&str) -> Option<F>) -> Result<F, ExactError> {
        let n = self.num.eval(env)?;
        let d = self.den.eval(env)?;
        n.checked_div(&d).ok_or(ExactError::PolarSubstitution)
    }

    pub fn eval(&self, point: &BTreeMap<Symbol, Rational>) -> Result<Rational, ExactError> {
        self.eval_in::<Rational>(&|s| point.get(s).cloned())
    }

    /// Compose with rational functions bound to some of the variables.
    pub fn substitute(&self, bindings: &BTreeMap<Symbol, RatFunc>) -> Result<RatFunc, ExactError> {
        let env = |v: &str| bindings.get(v).cloned();
        let n = self.num.substitute(&env)?;
        let d = self.den.substitute(&env)?;
        n.checked_div_rf(&d).map_err(|_| ExactError::PolarSubstitution)
    }

    pub fn derivative(&self, x: &str) -> RatFunc {
        let n = &(&self.num.derivative(x) * &self.den) - &(&self.num * &self.den.derivative(x));
        Self::reduced(n, &self.den * &self.den)
    }

    /// Order of vanishing in `variable` after binding every other symbol.
    ///
    /// Returns `Order::AtLeast(truncation + 1)` when all coefficients up to the
    /// truncation cancel; `Err(Annihilated)` when the specialization kills the
    /// numerator or denominator identically.
    pub fn vanishing_order(
        &self,
        variable: &str,
        specialization: &BTreeMap<Symbol, Rational>,
        truncation: usize,
    ) -> Result<Order, ExactError> {
        let t = LocalSeries::<Rational>::variable(truncation);
        let env = |s: &str| {
            if s == variable {
                Some(t.clone())
            } else {
                specialization.get(s).map(|r| LocalSeries::constant(r.clone()))
            }
        };
        let n = self.num.eval(&env)?;
        let d = self.den.eval(&env)?;
        let (on, od) = (n.order(), d.order());
        match (on, od) {
            (Order::Zero, _) | (_, Order::Zero) => Err(ExactError::Annihilated),
            (Order::Exact(a), Order::Exact(b)) => {
                let k = a - b;
                if k > truncation as i64 {
                    Ok(Order::AtLeast(truncation as i64 + 1))
                } else {
                    Ok(Order::Exact(k))
                }
            }
            _ => Ok(Order::AtLeast(truncation as i64 + 1)),
        }
    }
}

impl PartialEq for RatFunc {
    /// Cross-multiplication equality; exact but potentially expensive.
    fn eq(&self, other: &Self) -> bool {
        (&(&self.num * &other.den) - &(&other.num * &self.den)).is_zero()
    }
}

impl Field for RatFunc {
    fn zero() -> Self {
        RatFunc::from_poly(MultiPoly::zero())
    }
    fn one() -> Self {
        RatFunc::from_poly(MultiPoly::one())
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn from_rational(r: &Rational) -> Self {
        RatFunc::constant(r.clone())
    }
    fn checked_div(&self, rhs: &Self) -> Option<Self> {
        self.checked_div_rf(rhs).ok()
    }
}

impl Add for RatFunc {
    type Output = RatFunc;
    // Henrici: with both operands reduced only gcd(b, d) and gcd(t, g) are
    // needed, and the result is reduced.
    fn add(self, rhs: RatFunc) -> RatFunc {
        if self.num.is_zero() {
            return rhs;
        }
        if rhs.num.is_zero() {
            return self;
        }
        let g = capped_gcd(&self.den, &rhs.den);
        let bd = self.den.div_exact(&g).expect("gcd divides");
        let dd = rhs.den.div_exact(&g).expect("gcd divides");
        let t = &(&self.num * &dd) + &(&rhs.num * &bd);
        if t.is_zero() {
            return <RatFunc as Field>::zero();
        }
        let h = capped_gcd(&t, &g);
        let num = t.div_exact(&h).expect("gcd divides");
        let den = &bd * &rhs.den.div_exact(&h).expect("gcd divides");
        RatFunc::normalized(num, den)
    }
}

impl Sub for RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: RatFunc) -> RatFunc {
        self + (-rhs)
    }
}

impl Mul for RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: RatFunc) -> RatFunc {
        if self.num.is_zero() || rhs.num.is_zero() {
            return <RatFunc as Field>::zero();
        }
        let g1 = capped_gcd(&self.num, &rhs.den);
        let g2 = capped_gcd(&rhs.num, &self.den);
        let q = |a: &MultiPoly, g: &MultiPoly| a.div_exact(g).expect("gcd divides");
        RatFunc::normalized(&q(&self.num, &g1) * &q(&rhs.num, &g2), &q(&self.den, &g2) * &q(&rhs.den, &g1))
    }
}

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc { num: -&self.num, den: self.den }
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.as_constant().is_some() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl From<Rational> for RatFunc {
    fn from(r: Rational) -> Self {
        RatFunc::constant(r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{frac, int, poly::sym};

    fn v(s: &str) -> RatFunc {
        RatFunc::var(s)
    }

    fn k(n: i64) -> RatFunc {
        RatFunc::constant(int(n))
    }

    #[test]
    fn inverse_pair_multiplies_to_one() {
        let a = v("q1").checked_div(&v("q2")).unwrap();
        let b = v("q2").checked_div(&v("q1")).unwrap();
        assert_eq!((a * b).as_constant(), Some(int(1)));
    }

    #[test]
    fn cancellation() {
        let r = v("r1") + v("r2") + v("a0");
        let d = r - v("r1");
        assert_eq!(d, v("r2") + v("a0"));
        assert_eq!(d.symbols().len(), 2);
    }

    #[test]
    fn reciprocal_of_q12() {
        let q12 = v("q1") + v("q2") - k(1);
        let inv = k(1).checked_div(&q12).unwrap();
        assert_eq!(inv.numer().as_constant(), Some(int(1)));
        assert_eq!(inv.denom(), q12.numer());
        assert!(k(1).checked_div(&(v("q1") - v("q1"))).is_none());
    }

    #[test]
    fn reduction_uses_gcd() {
        let f = v("q1") + v("q2") - k(1);
        let num = f.clone() * v("r1");
        let r = num.checked_div(&(f.clone() * f.clone())).unwrap();
        assert_eq!(r.numer(), v("r1").numer());
        assert_eq!(r.denom(), f.numer());
    }

    #[test]
    fn substitution() {
        let q12 = v("q1") + v("q2") - k(1);
        let mut swap = BTreeMap::new();
        swap.insert(sym("q1"), v("q2"));
        swap.insert(sym("q2"), v("q1"));
        assert_eq!(q12.substitute(&swap).unwrap(), q12);

        let mut shift = BTreeMap::new();
        shift.insert(sym("r1"), v("r1") - v("t1"));
        assert_eq!(v("r1").substitute(&shift).unwrap(), v("r1") - v("t1"));

        let mut zero = BTreeMap::new();
        zero.insert(sym("q1"), k(0));
        let inv = k(1).checked_div(&v("q1")).unwrap();
        assert_eq!(inv.substitute(&zero).unwrap_err(), ExactError::PolarSubstitution);
    }

    #[test]
    fn derivatives() {
        let p = v("q1") * v("p1") + v("q2") * v("p2") + v("a0");
        assert_eq!(p.derivative("p1"), v("q1"));
        let inv = k(1).checked_div(&v("q1")).unwrap();
        let expect = k(-1).checked_div(&(v("q1") * v("q1"))).unwrap();
        assert_eq!(inv.derivative("q1"), expect);
        assert!(RatFunc::constant(frac(3, 7)).derivative("q1").is_zero());
    }

    #[test]
    fn vanishing_orders() {
        let u = v("u");
        let f = u.clone() * u.clone() * (k(1) + u.clone());
        let at = BTreeMap::new();
        assert_eq!(f.vanishing_order("u", &at, 8).unwrap(), Order::Exact(2));

        let g = (v("a") * u.clone() + u.clone() * u.clone()).checked_div(&u).unwrap();
        let mut at = BTreeMap::new();
        at.insert(sym("a"), int(3));
        assert_eq!(g.vanishing_order("u", &at, 8).unwrap(), Order::Exact(0));

        let pole = k(1).checked_div(&(u.clone() * u.clone())).unwrap();
        assert_eq!(pole.vanishing_order("u", &BTreeMap::new(), 8).unwrap(), Order::Exact(-2));

        let high = u.clone().pow_int(12);
        assert_eq!(high.vanishing_order("u", &BTreeMap::new(), 8).unwrap(), Order::AtLeast(9));

        let mut kill = BTreeMap::new();
        kill.insert(sym("a"), int(0));
        let h = v("a") * u;
        assert_eq!(h.vanishing_order("u", &kill, 8).unwrap_err(), ExactError::Annihilated);
    }

    impl RatFunc {
        fn pow_int(self, n: u32) -> RatFunc {
            let mut acc = k(1);
            for _ in 0..n {
                acc = acc * self.clone();
            }
            acc
        }
    }
}
