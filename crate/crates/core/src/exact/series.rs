use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Mul, Neg, Sub};

use super::{Field, Rational};

/// Default number of relative terms kept when a series has to be inverted.
pub const DEFAULT_TRUNCATION: usize = 8;

const INF: i64 = i64::MAX;

/// Result of an order-of-vanishing query.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Order {
    /// The leading exponent, possibly negative.
    Exact(i64),
    /// Every coefficient below this exponent cancels; the truncation was too
    /// short to see the leading term.
    AtLeast(i64),
    /// Identically zero.
    Zero,
}

/// Truncated Laurent series `Σ coeffs[i]·t^(val+i)`, known modulo `t^prec`.
///
/// Exact inputs (polynomials in `t`) carry infinite precision; precision is
/// only lost when a series with more than one term is inverted, and then
/// `work` relative terms are kept.
#[derive(Clone, Debug)]
pub struct LocalSeries<F> {
    val: i64,
    coeffs: Vec<F>,
    prec: i64,
    work: usize,
}

impl<F: Field> LocalSeries<F> {
    pub fn constant(c: F) -> Self {
        let coeffs = if c.is_zero() { Vec::new() } else { vec![c] };
        LocalSeries { val: 0, coeffs, prec: INF, work: 0 }
    }

    /// The uniformizer `t`, with `work` terms kept by later inversions.
    pub fn variable(work: usize) -> Self {
        LocalSeries { val: 1, coeffs: vec![F::one()], prec: INF, work }
    }

    /// `c0 + c1·t + …` from an explicit exact coefficient list.
    pub fn from_coeffs(coeffs: Vec<F>, work: usize) -> Self {
        LocalSeries { val: 0, coeffs, prec: INF, work }.normalized()
    }

    pub fn with_work(mut self, work: usize) -> Self {
        self.work = work;
        self
    }

    pub fn precision(&self) -> Option<i64> {
        (self.prec != INF).then_some(self.prec)
    }

    fn work(&self) -> usize {
        if self.work == 0 {
            DEFAULT_TRUNCATION
        } else {
            self.work
        }
    }

    fn normalized(mut self) -> Self {
        let skip = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if skip > 0 {
            self.coeffs.drain(..skip);
            self.val += skip as i64;
        }
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        if self.coeffs.is_empty() && self.prec != INF {
            self.val = self.prec;
        }
        self
    }

    pub fn order(&self) -> Order {
        let s = self.clone().normalized();
        match (s.coeffs.is_empty(), s.prec == INF) {
            (true, true) => Order::Zero,
            (true, false) => Order::AtLeast(s.prec),
            (false, _) => Order::Exact(s.val),
        }
    }

    /// Leading exponent and coefficient, if visible within the precision.
    pub fn leading(&self) -> Option<(i64, F)> {
        let s = self.clone().normalized();
        s.coeffs.first().cloned().map(|c| (s.val, c))
    }

    /// Coefficient of `t^k`; `None` if `k` is beyond the known precision.
    pub fn coeff(&self, k: i64) -> Option<F> {
        if k >= self.prec {
            return None;
        }
        if k < self.val || k >= self.val + self.coeffs.len() as i64 {
            return Some(F::zero());
        }
        Some(self.coeffs[(k - self.val) as usize].clone())
    }

    fn end(&self) -> i64 {
        self.val + self.coeffs.len() as i64
    }

    pub fn inverse(&self) -> Option<Self> {
        let a = self.clone().normalized();
        let c0 = a.coeffs.first()?;
        let c0inv = c0.recip()?;
        let rel = if a.prec == INF { INF } else { a.prec - a.val };
        if rel == INF && a.coeffs.len() == 1 {
            return Some(LocalSeries { val: -a.val, coeffs: vec![c0inv], prec: INF, work: a.work });
        }
        let n = if rel == INF { a.work() } else { (rel as usize).min(a.work().max(1)) };
        let mut b: Vec<F> = Vec::with_capacity(n);
        b.push(c0inv.clone());
        for k in 1..n {
            let mut s = F::zero();
            for j in 1..=k.min(a.coeffs.len() - 1) {
                s = s + a.coeffs[j].clone() * b[k - j].clone();
            }
            b.push(-(s * c0inv.clone()));
        }
        Some(LocalSeries { val: -a.val, coeffs: b, prec: -a.val + n as i64, work: a.work }.normalized())
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::constant(F::one()).with_work(self.work);
        for _ in 0..n {
            acc = acc * self.clone();
        }
        acc
    }
}

impl<F: Field> Add for LocalSeries<F> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let prec = self.prec.min(rhs.prec);
        let work = self.work.max(rhs.work);
        let lo = if self.coeffs.is_empty() {
            rhs.val
        } else if rhs.coeffs.is_empty() {
            self.val
        } else {
            self.val.min(rhs.val)
        }
        .min(prec);
        let hi = self.end().max(rhs.end()).min(prec);
        let mut coeffs = Vec::new();
        let mut k = lo;
        while k < hi {
            coeffs.push(self.coeff(k).unwrap_or_else(F::zero) + rhs.coeff(k).unwrap_or_else(F::zero));
            k += 1;
        }
        LocalSeries { val: lo, coeffs, prec, work }.normalized()
    }
}

impl<F: Field> Neg for LocalSeries<F> {
    type Output = Self;
    fn neg(self) -> Self {
        LocalSeries { val: self.val, coeffs: self.coeffs.into_iter().map(|c| -c).collect(), prec: self.prec, work: self.work }
    }
}

impl<F: Field> Sub for LocalSeries<F> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<F: Field> Mul for LocalSeries<F> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let a = self.normalized();
        let b = rhs.normalized();
        let work = a.work.max(b.work);
        let exact_zero = |s: &Self| s.coeffs.is_empty() && s.prec == INF;
        if exact_zero(&a) || exact_zero(&b) {
            return LocalSeries { val: 0, coeffs: Vec::new(), prec: INF, work };
        }
        let val = a.val + b.val;
        let ra = if a.prec == INF { INF } else { a.prec - a.val };
        let rb = if b.prec == INF { INF } else { b.prec - b.val };
        let rel = ra.min(rb);
        let full = (a.coeffs.len() + b.coeffs.len()).saturating_sub(1) as i64;
        let n = if rel == INF { full } else { rel.min(full) }.max(0) as usize;
        let mut coeffs = vec![F::zero(); n];
        for (i, x) in a.coeffs.iter().enumerate() {
            if i >= n {
                break;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if i + j >= n {
                    break;
                }
                coeffs[i + j] = coeffs[i + j].clone() + x.clone() * y.clone();
            }
        }
        let prec = if rel == INF { INF } else { val + rel };
        LocalSeries { val, coeffs, prec, work }.normalized()
    }
}

impl<F: Field> PartialEq for LocalSeries<F> {
    fn eq(&self, other: &Self) -> bool {
        let d = self.clone() - other.clone();
        d.coeffs.is_empty()
    }
}

impl<F: Field> Field for LocalSeries<F> {
    fn zero() -> Self {
        Self::constant(F::zero())
    }
    fn one() -> Self {
        Self::constant(F::one())
    }
    /// True when no nonzero coefficient is visible within the precision.
    fn is_zero(&self) -> bool {
        self.clone().normalized().coeffs.is_empty()
    }
    fn from_rational(r: &Rational) -> Self {
        Self::constant(F::from_rational(r))
    }
    fn checked_div(&self, rhs: &Self) -> Option<Self> {
        let inv = rhs.inverse()?;
        Some(self.clone() * inv)
    }
    fn is_degenerate(&self) -> bool {
        self.leading().is_some_and(|(_, c)| c.is_degenerate())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{frac, int};

    type S = LocalSeries<Rational>;

    fn t() -> S {
        S::variable(8)
    }

    fn c(n: i64) -> S {
        S::constant(int(n))
    }

    #[test]
    fn orders_of_products_add() {
        let f = t() * t() * (c(1) + t());
        let g = (c(3) * t() + t() * t()).checked_div(&t()).unwrap();
        assert_eq!(f.order(), Order::Exact(2));
        assert_eq!(g.order(), Order::Exact(0));
        assert_eq!((f * g).order(), Order::Exact(2));
    }

    #[test]
    fn geometric_series_inverse() {
        let inv = (c(1) - t()).recip().unwrap();
        for k in 0..8 {
            assert_eq!(inv.coeff(k), Some(int(1)));
        }
        assert_eq!(inv.coeff(8), None);
        assert_eq!(inv.precision(), Some(8));
    }

    #[test]
    fn laurent_poles() {
        let s = c(2).checked_div(&(t() * t() * (c(1) + t()))).unwrap();
        assert_eq!(s.order(), Order::Exact(-2));
        assert_eq!(s.coeff(-2), Some(int(2)));
        assert_eq!(s.coeff(-1), Some(int(-2)));
    }

    #[test]
    fn cancellation_beyond_precision_is_reported() {
        let a = (c(1) - t()).recip().unwrap();
        let b = (c(1) - t()).recip().unwrap();
        assert_eq!((a - b).order(), Order::AtLeast(8));
        assert_eq!((c(5) - c(5)).order(), Order::Zero);
    }

    #[test]
    fn inverse_round_trip() {
        let a = c(2) + t() * S::constant(frac(1, 3)) - t() * t();
        let r = a.recip().unwrap() * a.clone();
        assert_eq!(r.order(), Order::Exact(0));
        assert_eq!(r.coeff(0), Some(int(1)));
        for k in 1..8 {
            assert_eq!(r.coeff(k), Some(int(0)));
        }
    }
}
