use std::collections::BTreeMap;

use garnier_core::exact::{frac, int, sym, Field, MultiPoly, Order, RatFunc, Rational, Symbol};
use proptest::prelude::*;

fn poly(terms: &[(i64, u32, u32)]) -> MultiPoly {
    let x = MultiPoly::var("x");
    let y = MultiPoly::var("y");
    let mut p = MultiPoly::zero();
    for &(c, i, j) in terms {
        let m = &x.pow(i) * &y.pow(j);
        p = &p + &m.scale(&int(c));
    }
    p
}

fn terms() -> impl Strategy<Value = Vec<(i64, u32, u32)>> {
    prop::collection::vec((-9i64..=9, 0u32..3, 0u32..3), 1..4)
}

fn nonzero_terms() -> impl Strategy<Value = Vec<(i64, u32, u32)>> {
    terms().prop_filter("nonzero", |t| !poly(t).is_zero())
}

fn ratfunc() -> impl Strategy<Value = RatFunc> {
    (terms(), nonzero_terms()).prop_map(|(n, d)| RatFunc::new(poly(&n), poly(&d)).unwrap())
}

fn sigma() -> BTreeMap<Symbol, RatFunc> {
    let mut s = BTreeMap::new();
    s.insert(sym("x"), RatFunc::var("y") + RatFunc::from_rational(&int(2)));
    s.insert(sym("y"), RatFunc::var("x") * RatFunc::var("y") - RatFunc::from_rational(&frac(1, 3)));
    s
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn ring_axioms(a in ratfunc(), b in ratfunc(), c in ratfunc()) {
        prop_assert_eq!((a.clone() + b.clone()) + c.clone(), a.clone() + (b.clone() + c.clone()));
        prop_assert_eq!((a.clone() * b.clone()) * c.clone(), a.clone() * (b.clone() * c.clone()));
        prop_assert_eq!(a.clone() * (b.clone() + c.clone()), a.clone() * b.clone() + a.clone() * c.clone());
        prop_assert_eq!(a.clone() - a.clone(), RatFunc::zero());
        if !Field::is_zero(&b) {
            prop_assert_eq!(a.checked_div(&b).unwrap() * b.clone(), a);
        }
    }

    #[test]
    fn substitution_is_multiplicative(a in ratfunc(), b in ratfunc()) {
        let s = sigma();
        let (Ok(sa), Ok(sb)) = (a.substitute(&s), b.substitute(&s)) else { return Ok(()) };
        let sab = (a * b).substitute(&s).unwrap();
        prop_assert_eq!(sab, sa * sb);
    }

    #[test]
    fn leibniz(a in ratfunc(), b in ratfunc()) {
        let lhs = (a.clone() * b.clone()).derivative("x");
        let rhs = a.derivative("x") * b.clone() + a * b.derivative("x");
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn orders_add(f in nonzero_terms(), g in nonzero_terms(), y in -20i64..20) {
        let (f, g) = (RatFunc::from_poly(poly(&f)), RatFunc::from_poly(poly(&g)));
        let mut at = BTreeMap::new();
        at.insert(sym("y"), Rational::from_integer(y.into()));
        let of = f.vanishing_order("x", &at, 8);
        let og = g.vanishing_order("x", &at, 8);
        if let (Ok(Order::Exact(a)), Ok(Order::Exact(b))) = (of, og) {
            prop_assert_eq!((f.clone() * g.clone()).vanishing_order("x", &at, 8).unwrap(), Order::Exact(a + b));
        }
    }
}

