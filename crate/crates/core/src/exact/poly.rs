use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{ExactError, Rational};

/// Variable name. Cheap to clone and ordered lexicographically.
pub type Symbol = Arc<str>;

pub fn sym(name: &str) -> Symbol {
    Arc::from(name)
}

/// Sparse multivariate polynomial with rational coefficients.
///
/// `vars` is sorted and duplicate free; every exponent vector has the same
/// length as `vars`. Variables may have zero exponent in every term, which
/// keeps binary operations cheap; [`MultiPoly::trim`] drops them.
#[derive(Clone, PartialEq, Eq)]
pub struct MultiPoly {
    vars: Vec<Symbol>,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl MultiPoly {
    pub fn zero() -> Self {
        MultiPoly { vars: Vec::new(), terms: BTreeMap::new() }
    }

    pub fn constant(c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Vec::new(), c);
        }
        MultiPoly { vars: Vec::new(), terms }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn var(name: &str) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(vec![1], Rational::one());
        MultiPoly { vars: vec![sym(name)], terms }
    }

    pub fn vars(&self) -> &[Symbol] {
        &self.vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &Rational)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The constant value if the polynomial has no variable of positive degree.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (e, c) = self.terms.iter().next().unwrap();
                e.iter().all(|&k| k == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    /// Symbols that actually occur with positive degree.
    pub fn symbols(&self) -> Vec<Symbol> {
        (0..self.vars.len())
            .filter(|&i| self.terms.keys().any(|e| e[i] > 0))
            .map(|i| self.vars[i].clone())
            .collect()
    }

    pub fn trim(&self) -> Self {
        let keep = self.symbols();
        self.with_vars(&keep)
    }

    fn index_of(&self, x: &str) -> Option<usize> {
        self.vars.iter().position(|v| &**v == x)
    }

    /// Re-express over a superset of variables (or a subset containing every
    /// occurring variable).
    fn with_vars(&self, vars: &[Symbol]) -> Self {
        if vars == self.vars.as_slice() {
            return self.clone();
        }
        let map: Vec<Option<usize>> = self.vars.iter().map(|v| vars.iter().position(|w| w == v)).collect();
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut ne = vec![0u32; vars.len()];
            for (i, &k) in e.iter().enumerate() {
                match map[i] {
                    Some(j) => ne[j] = k,
                    None => debug_assert_eq!(k, 0, "dropping an occurring variable"),
                }
            }
            terms.insert(ne, c.clone());
        }
        MultiPoly { vars: vars.to_vec(), terms }
    }

    fn aligned(a: &Self, b: &Self) -> (Self, Self) {
        if a.vars == b.vars {
            return (a.clone(), b.clone());
        }
        let mut vars = a.vars.clone();
        for v in &b.vars {
            if !vars.contains(v) {
                vars.push(v.clone());
            }
        }
        vars.sort();
        (a.with_vars(&vars), b.with_vars(&vars))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        MultiPoly { vars: self.vars.clone(), terms: self.terms.iter().map(|(e, k)| (e.clone(), k * c)).collect() }
    }

    pub fn degree_in(&self, x: &str) -> u32 {
        match self.index_of(x) {
            Some(i) => self.terms.keys().map(|e| e[i]).max().unwrap_or(0),
            None => 0,
        }
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    /// Total degree in a subset of the variables.
    pub fn degree_in_group(&self, group: &[&str]) -> u32 {
        let idx: Vec<usize> = group.iter().filter_map(|g| self.index_of(g)).collect();
        self.terms.keys().map(|e| idx.iter().map(|&i| e[i]).sum()).max().unwrap_or(0)
    }

    /// Coefficients of `x⁰, x¹, …` as polynomials not involving `x`.
    pub fn coeffs_in(&self, x: &str) -> Vec<MultiPoly> {
        let Some(i) = self.index_of(x) else {
            return vec![self.clone()];
        };
        let n = self.degree_in(x) as usize;
        let mut out: Vec<BTreeMap<Vec<u32>, Rational>> = vec![BTreeMap::new(); n + 1];
        for (e, c) in &self.terms {
            let mut ne = e.clone();
            ne[i] = 0;
            out[e[i] as usize].insert(ne, c.clone());
        }
        out.into_iter().map(|terms| MultiPoly { vars: self.vars.clone(), terms }).collect()
    }

    /// Leading coefficient in lexicographic order of the (sorted) variables.
    pub fn leading_coeff(&self) -> Option<&Rational> {
        self.terms.iter().next_back().map(|(_, c)| c)
    }

    pub fn make_monic(&self) -> Self {
        match self.leading_coeff() {
            Some(c) => self.scale(&(Rational::one() / c)),
            None => Self::zero(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Evaluate with each variable bound to a value in any [`Field`].
    pub fn eval<F: super::Field>(&self, env: &dyn Fn(&str) -> Option<F>) -> Result<F, ExactError> {
        let mut vals = Vec::with_capacity(self.vars.len());
        let occurring = self.symbols();
        for v in &self.vars {
            if occurring.contains(v) {
                vals.push(Some(env(v).ok_or_else(|| ExactError::UnboundSymbol(String::from(&**v)))?));
            } else {
                vals.push(None);
            }
        }
        // Horner-free evaluation with cached powers.
        let mut powers: Vec<Vec<F>> = vals.iter().map(|v| v.iter().map(|x| x.clone()).collect::<Vec<_>>()).collect();
        let mut acc = F::zero();
        for (e, c) in &self.terms {
            let mut t = F::from_rational(c);
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let p = &mut powers[i];
                while p.len() < k as usize {
                    let next = p[p.len() - 1].clone() * p[0].clone();
                    p.push(next);
                }
                t = t * p[k as usize - 1].clone();
            }
            acc = acc + t;
        }
        Ok(acc)
    }

    pub fn derivative(&self, x: &str) -> Self {
        let Some(i) = self.index_of(x) else {
            return Self::zero();
        };
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut ne = e.clone();
                ne[i] -= 1;
                terms.insert(ne, c * Rational::from_integer(e[i].into()));
            }
        }
        MultiPoly { vars: self.vars.clone(), terms }
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        if d.is_zero() {
            return None;
        }
        if let Some(c) = d.as_constant() {
            return Some(self.scale(&(Rational::one() / c)));
        }
        let (mut r, d) = Self::aligned(self, d);
        let (de, dc) = d.terms.iter().next_back().map(|(e, c)| (e.clone(), c.clone())).unwrap();
        let mut q = BTreeMap::new();
        while let Some((re, rc)) = r.terms.iter().next_back().map(|(e, c)| (e.clone(), c.clone())) {
            if re.iter().zip(&de).any(|(a, b)| a < b) {
                return None;
            }
            let me: Vec<u32> = re.iter().zip(&de).map(|(a, b)| a - b).collect();
            let mc = rc / &dc;
            let mono = MultiPoly { vars: r.vars.clone(), terms: [(me.clone(), mc.clone())].into_iter().collect() };
            r = &r - &(&mono * &d);
            q.insert(me, mc);
        }
        Some(MultiPoly { vars: r.vars.clone(), terms: q })
    }

    /// Scalar multiple with coprime integer coefficients; keeps remainder
    /// sequences from blowing up.
    fn integer_primitive(&self) -> Self {
        let mut lcm = BigInt::one();
        let mut g = BigInt::zero();
        for c in self.terms.values() {
            lcm = lcm.lcm(c.denom());
        }
        for c in self.terms.values() {
            g = g.gcd(&(c.numer() * (&lcm / c.denom())));
        }
        if g.is_zero() {
            return self.clone();
        }
        self.scale(&Rational::new(lcm, g))
    }

    /// Pseudo-remainder of `a` by `b` with respect to `x`.
    fn prem(a: &Self, b: &Self, x: &str) -> Self {
        let db = b.degree_in(x);
        let bc = b.coeffs_in(x);
        let lb = bc[db as usize].clone();
        let xpoly = MultiPoly::var(x);
        let mut r = a.clone();
        let mut da = r.degree_in(x);
        while !r.is_zero() && da >= db {
            let lr = r.coeffs_in(x)[da as usize].clone();
            let shift = xpoly.pow(da - db);
            r = (&(&r * &lb) - &(&(&lr * &shift) * b)).integer_primitive();
            let nd = r.degree_in(x);
            debug_assert!(r.is_zero() || nd < da);
            da = nd;
        }
        r
    }

    fn content_in(&self, x: &str) -> Self {
        let mut g = Self::zero();
        for c in self.coeffs_in(x) {
            if !c.is_zero() {
                g = gcd(&g, &c);
                if g.as_constant().is_some() {
                    return Self::one();
                }
            }
        }
        g
    }

    /// Substitute rational functions for variables.
    pub fn substitute(&self, env: &dyn Fn(&str) -> Option<super::RatFunc>) -> Result<super::RatFunc, ExactError> {
        use super::RatFunc;
        self.eval::<RatFunc>(&|v| Some(env(v).unwrap_or_else(|| RatFunc::from_poly(MultiPoly::var(v)))))
    }
}

/// Monic greatest common divisor over Q (recursive primitive remainder
/// sequences). `gcd(0, 0) = 0`.
pub fn gcd(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    if a.is_zero() {
        return b.make_monic();
    }
    if b.is_zero() {
        return a.make_monic();
    }
    if a.as_constant().is_some() || b.as_constant().is_some() {
        return MultiPoly::one();
    }
    let (a, b) = MultiPoly::aligned(a, b);
    let sa = a.symbols();
    let sb = b.symbols();
    // A variable absent from one side: the gcd divides that side's content.
    if let Some(x) = sa.iter().find(|v| !sb.contains(v)) {
        return gcd(&a.content_in(x), &b);
    }
    if let Some(x) = sb.iter().find(|v| !sa.contains(v)) {
        return gcd(&a, &b.content_in(x));
    }
    let x = sa.last().unwrap().clone();
    let ca = a.content_in(&x);
    let cb = b.content_in(&x);
    let c = gcd(&ca, &cb);
    let mut p = a.div_exact(&ca).unwrap().integer_primitive();
    let mut q = b.div_exact(&cb).unwrap().integer_primitive();
    if p.degree_in(&x) < q.degree_in(&x) {
        core::mem::swap(&mut p, &mut q);
    }
    let g = loop {
        let r = MultiPoly::prem(&p, &q, &x);
        if r.is_zero() {
            break q;
        }
        if r.degree_in(&x) == 0 {
            break MultiPoly::one();
        }
        let rc = r.content_in(&x);
        p = q;
        q = r.div_exact(&rc).unwrap().integer_primitive();
    };
    let gc = g.content_in(&x);
    (&c * &g.div_exact(&gc).unwrap()).trim().make_monic()
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        let (mut a, b) = MultiPoly::aligned(self, rhs);
        for (e, c) in b.terms {
            let entry = a.terms.entry(e);
            match entry {
                alloc::collections::btree_map::Entry::Occupied(mut o) => {
                    let s = o.get() + &c;
                    if s.is_zero() {
                        o.remove();
                    } else {
                        *o.get_mut() = s;
                    }
                }
                alloc::collections::btree_map::Entry::Vacant(v) => {
                    v.insert(c);
                }
            }
        }
        a
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly { vars: self.vars.clone(), terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect() }
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        self + &(-rhs)
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        if self.is_zero() || rhs.is_zero() {
            return MultiPoly::zero();
        }
        let (a, b) = MultiPoly::aligned(self, rhs);
        let mut terms: BTreeMap<Vec<u32>, Rational> = BTreeMap::new();
        for (ea, ca) in &a.terms {
            for (eb, cb) in &b.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                let c = ca * cb;
                let slot = terms.entry(e).or_insert_with(Rational::zero);
                *slot += c;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        MultiPoly { vars: a.vars, terms }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for MultiPoly {
            type Output = MultiPoly;
            fn $m(self, rhs: MultiPoly) -> MultiPoly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -&self
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| if k == 1 { String::from(&*self.vars[i]) } else { alloc::format!("{}^{}", self.vars[i], k) })
                .collect();
            let neg = c < &Rational::zero();
            let mag = if neg { -c.clone() } else { c.clone() };
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let magstr = super::format_rational(&mag);
            if mono.is_empty() {
                f.write_str(&magstr)?;
            } else {
                if !mag.is_one() {
                    write!(f, "{}*", if mag.is_integer() { magstr } else { alloc::format!("({})", magstr) })?;
                }
                f.write_str(&mono.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{frac, int};

    fn v(s: &str) -> MultiPoly {
        MultiPoly::var(s)
    }

    fn c(n: i64) -> MultiPoly {
        MultiPoly::constant(int(n))
    }

    #[test]
    fn arithmetic_cancels() {
        let p = &(&v("r1") + &v("r2")) + &v("a0");
        let d = &p - &v("r1");
        assert_eq!(d.trim(), (&v("r2") + &v("a0")).trim());
        assert!((&p - &p).is_zero());
    }

    #[test]
    fn exact_division() {
        let a = &v("x") + &c(1);
        let b = &v("y") - &v("x");
        let prod = &a * &b;
        assert_eq!(prod.div_exact(&a).unwrap().trim(), b.trim());
        assert!(prod.div_exact(&(&v("x") + &c(2))).is_none());
    }

    #[test]
    fn gcd_recovers_common_factor() {
        let f = &(&v("q1") + &v("q2")) - &c(1);
        let g1 = &(&v("r1") * &v("q2")) + &c(3);
        let g2 = &v("r2").pow(2) - &v("q1");
        let a = &f * &g1;
        let b = &(&f * &f) * &g2;
        let g = gcd(&a, &b);
        assert_eq!(g, f.make_monic().trim());
        assert_eq!(gcd(&g1, &g2), MultiPoly::one());
    }

    #[test]
    fn gcd_with_disjoint_variables() {
        let f = &v("x") - &c(2);
        let a = &f * &v("y");
        let b = &f * &(&v("x") + &c(5));
        assert_eq!(gcd(&a, &b), f.trim());
    }

    #[test]
    fn derivative_and_degree() {
        let p = &(&v("q1") * &v("p1")) + &(&v("q2") * &v("p2"));
        assert_eq!(p.derivative("p1").trim(), v("q1"));
        assert_eq!(c(7).derivative("q1"), MultiPoly::zero());
        let s = (&v("x").pow(3) * &v("y")).scale(&frac(1, 2));
        assert_eq!(s.degree_in("x"), 3);
        assert_eq!(s.total_degree(), 4);
        assert_eq!(s.degree_in_group(&["x", "z"]), 3);
    }

    #[test]
    fn evaluation() {
        let p = &(&v("x").pow(2) * &v("y")) - &c(1);
        let val: Rational = p.eval(&|s| match s {
            "x" => Some(int(3)),
            "y" => Some(frac(1, 3)),
            _ => None,
        })
        .unwrap();
        assert_eq!(val, int(2));
        assert!(p.eval::<Rational>(&|_| None).is_err());
    }
}
