//! Bäcklund generators as exact rational maps.
//!
//! Every formula is written once, generic over [`Field`], and then evaluated
//! at rational points, on symbolic rational functions, or on jets.

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use rand::Rng;

use crate::exact::{random_rational, Field, Jet, RatFunc, Rational};
use crate::lattice::Convention;
pub use crate::generator::{parse_word, Generator, UnknownGenerator};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum BmapError {
    #[error("{generator}: polar locus, {denominator} vanishes")]
    Polar { generator: Generator, denominator: &'static str },
    #[error("step {step} ({generator}): polar locus, {denominator} vanishes")]
    PolarAtStep { step: usize, generator: Generator, denominator: &'static str },
    #[error("parameters are not generic: {0}")]
    NotGeneric(String),
}

/// `(κ0, κ1, κ∞, θ1, θ2, α0, s1, s2)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ParamVector<F> {
    pub k0: F,
    pub k1: F,
    pub kinf: F,
    pub t1: F,
    pub t2: F,
    pub a0: F,
    pub s1: F,
    pub s2: F,
}

impl<F: Field> ParamVector<F> {
    /// Names used in JSON and as symbols in symbolic mode.
    pub const NAMES: [&'static str; 8] = ["k0", "k1", "kI", "t1", "t2", "a0", "s1", "s2"];

    pub fn from_array(a: [F; 8]) -> Self {
        let [k0, k1, kinf, t1, t2, a0, s1, s2] = a;
        ParamVector { k0, k1, kinf, t1, t2, a0, s1, s2 }
    }

    pub fn to_array(&self) -> [F; 8] {
        [
            self.k0.clone(),
            self.k1.clone(),
            self.kinf.clone(),
            self.t1.clone(),
            self.t2.clone(),
            self.a0.clone(),
            self.s1.clone(),
            self.s2.clone(),
        ]
    }

    pub fn map<G>(&self, f: impl Fn(&F) -> G) -> ParamVector<G> {
        ParamVector {
            k0: f(&self.k0),
            k1: f(&self.k1),
            kinf: f(&self.kinf),
            t1: f(&self.t1),
            t2: f(&self.t2),
            a0: f(&self.a0),
            s1: f(&self.s1),
            s2: f(&self.s2),
        }
    }

    /// `d = 2α0 + κ0 + κ1 + κ∞ + θ1 + θ2`, always recomputed.
    pub fn d(&self) -> F {
        self.a0.clone() + self.a0.clone() + self.k0.clone() + self.k1.clone() + self.kinf.clone() + self.t1.clone()
            + self.t2.clone()
    }

    /// The nonvanishing conditions on a single parameter vector: `s_i ∉ {0,1}`,
    /// `s1 ≠ s2`, and `κ0, κ1, κ∞, θ1, θ2, α0, α0+κ∞` nonzero.
    pub fn basic_conditions(&self) -> Result<(), &'static str> {
        let one = F::one();
        let checks: [(F, &'static str); 12] = [
            (self.s1.clone(), "s1"),
            (self.s2.clone(), "s2"),
            (self.s1.clone() - one.clone(), "s1-1"),
            (self.s2.clone() - one, "s2-1"),
            (self.s1.clone() - self.s2.clone(), "s1-s2"),
            (self.k0.clone(), "k0"),
            (self.k1.clone(), "k1"),
            (self.kinf.clone(), "kI"),
            (self.t1.clone(), "t1"),
            (self.t2.clone(), "t2"),
            (self.a0.clone(), "a0"),
            (self.a0.clone() + self.kinf.clone(), "a0+kI"),
        ];
        match checks.iter().find(|(v, _)| v.is_zero()) {
            Some((_, name)) => Err(name),
            None => Ok(()),
        }
    }

    /// Genericity: the basic conditions hold for the vector and for its image
    /// under every generator.
    pub fn genericity(&self) -> Result<(), String> {
        self.basic_conditions().map_err(|n| alloc::format!("{n} = 0"))?;
        for g in Generator::ALL {
            let image = param_act(g, self).map_err(|e| alloc::format!("{e}"))?;
            image.basic_conditions().map_err(|n| alloc::format!("{n} = 0 after {g}"))?;
        }
        Ok(())
    }

    pub fn is_generic(&self) -> bool {
        self.genericity().is_ok()
    }
}

impl ParamVector<Rational> {
    pub fn from_ints(a: [i64; 8]) -> Self {
        ParamVector::from_array(a.map(crate::exact::int))
    }

    /// Uniform draw, redrawn until generic.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, bound: i64) -> Self {
        loop {
            let p = ParamVector::from_array(core::array::from_fn(|_| random_rational(rng, bound)));
            if p.is_generic() {
                return p;
            }
        }
    }

    pub fn lift<F: Field>(&self) -> ParamVector<F> {
        self.map(F::from_rational)
    }
}

impl ParamVector<RatFunc> {
    /// Every parameter as a free symbol.
    pub fn symbolic() -> Self {
        ParamVector::from_array(Self::NAMES.map(RatFunc::var))
    }
}

/// Which presentation a point is given in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Coords {
    /// `(q1, q2, p1, p2)`
    Qp,
    /// `(q1, q2, r1, r2)` with `r_i = q_i p_i`
    Qr,
}

impl Coords {
    pub fn names(self) -> [&'static str; 4] {
        match self {
            Coords::Qp => ["q1", "q2", "p1", "p2"],
            Coords::Qr => ["q1", "q2", "r1", "r2"],
        }
    }
}

impl fmt::Display for Coords {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Coords::Qp => "qp",
            Coords::Qr => "qr",
        })
    }
}

pub type Point<F> = [F; 4];

fn div<F: Field>(g: Generator, a: F, b: &F, name: &'static str) -> Result<F, BmapError> {
    a.checked_div(b).ok_or(BmapError::Polar { generator: g, denominator: name })
}

// Named auxiliary expressions.

pub fn q12<F: Field>(q1: &F, q2: &F) -> F {
    q1.clone() + q2.clone() - F::one()
}

/// `q1/s1 + q2/s2 − 1`; `None` when some `s_i` vanishes.
pub fn q12s<F: Field>(q1: &F, q2: &F, a: &ParamVector<F>) -> Option<F> {
    Some(q1.checked_div(&a.s1)? + q2.checked_div(&a.s2)? - F::one())
}

pub fn p12<F: Field>(x: &Point<F>, a: &ParamVector<F>) -> F {
    x[0].clone() * x[2].clone() + x[1].clone() * x[3].clone() + a.a0.clone()
}

pub fn r12<F: Field>(r1: &F, r2: &F, a: &ParamVector<F>) -> F {
    r1.clone() + r2.clone() + a.a0.clone()
}

/// `q2/q1 − r2/r1` in `(q, r)` coordinates.
pub fn a12<F: Field>(x: &Point<F>) -> Option<F> {
    Some(x[1].checked_div(&x[0])? - x[3].checked_div(&x[2])?)
}

/// `s1 q2/(s2 q1) − r2/r1` in `(q, r)` coordinates.
pub fn a12s<F: Field>(x: &Point<F>, a: &ParamVector<F>) -> Option<F> {
    Some((a.s1.clone() * x[1].clone()).checked_div(&(a.s2.clone() * x[0].clone()))? - x[3].checked_div(&x[2])?)
}

/// Parameter action of a generator.
pub fn param_act<F: Field>(g: Generator, a: &ParamVector<F>) -> Result<ParamVector<F>, BmapError> {
    use Generator::*;
    let mut b = a.clone();
    match g {
        Wk0 => {
            b.k0 = -a.k0.clone();
            b.a0 = a.a0.clone() + a.k0.clone();
        }
        Wk1 => {
            b.k1 = -a.k1.clone();
            b.a0 = a.a0.clone() + a.k1.clone();
        }
        WkInf => {
            b.kinf = -a.kinf.clone();
            b.a0 = a.a0.clone() + a.kinf.clone();
        }
        Wt1 => {
            b.t1 = -a.t1.clone();
            b.a0 = a.a0.clone() + a.t1.clone();
        }
        Wt2 => {
            b.t2 = -a.t2.clone();
            b.a0 = a.a0.clone() + a.t2.clone();
        }
        Wa0 => {
            let d = a.d();
            b.k0 = d.clone() - a.k0.clone();
            b.k1 = d - a.k1.clone();
            b.kinf = -a.kinf.clone();
            b.t1 = -a.t1.clone();
            b.t2 = -a.t2.clone();
            b.a0 = -a.a0.clone();
        }
        S1 => {
            b.k0 = a.k1.clone();
            b.k1 = a.k0.clone();
            b.s1 = div(g, F::one(), &a.s1, "s1")?;
            b.s2 = div(g, F::one(), &a.s2, "s2")?;
        }
        S2 => {
            b.k1 = a.kinf.clone();
            b.kinf = a.k1.clone();
            b.s1 = div(g, a.s1.clone(), &(a.s1.clone() - F::one()), "s1-1")?;
            b.s2 = div(g, a.s2.clone(), &(a.s2.clone() - F::one()), "s2-1")?;
        }
        S3 => {
            b.kinf = a.t1.clone();
            b.t1 = a.kinf.clone();
            b.s1 = div(g, F::one(), &a.s1, "s1")?;
            b.s2 = div(g, a.s2.clone(), &a.s1, "s1")?;
        }
        S4 => {
            b.t1 = a.t2.clone();
            b.t2 = a.t1.clone();
            b.s1 = a.s2.clone();
            b.s2 = a.s1.clone();
        }
    }
    Ok(b)
}

/// The map on `(q1, q2, r1, r2)`.
pub fn apply_qr<F: Field>(g: Generator, x: &Point<F>, a: &ParamVector<F>) -> Result<Point<F>, BmapError> {
    use Generator::*;
    let [q1, q2, r1, r2] = x.clone();
    Ok(match g {
        Wk0 => {
            let s1q = a.s1.clone() * q12s(&q1, &q2, a).ok_or(BmapError::Polar { generator: g, denominator: "s1" })?;
            let s2q = a.s2.clone() * q12s(&q1, &q2, a).ok_or(BmapError::Polar { generator: g, denominator: "s2" })?;
            let n1 = a.k0.clone() * q1.clone();
            let n2 = a.k0.clone() * q2.clone();
            [q1, q2, r1 - div(g, n1, &s1q, "Q12s")?, r2 - div(g, n2, &s2q, "Q12s")?]
        }
        Wk1 => {
            let q = q12(&q1, &q2);
            let n1 = a.k1.clone() * q1.clone();
            let n2 = a.k1.clone() * q2.clone();
            [q1, q2, r1 - div(g, n1, &q, "Q12")?, r2 - div(g, n2, &q, "Q12")?]
        }
        WkInf => [q1, q2, r1, r2],
        Wt1 => [q1, q2, r1 - a.t1.clone(), r2],
        Wt2 => [q1, q2, r1, r2 - a.t2.clone()],
        Wa0 => {
            let r = r12(&r1, &r2, a);
            let rk = r.clone() + a.kinf.clone();
            let n1 = a.s1.clone() * r1.clone() * (r1.clone() - a.t1.clone());
            let n2 = a.s2.clone() * r2.clone() * (r2.clone() - a.t2.clone());
            let b1 = div(g, div(g, div(g, n1, &q1, "q1")?, &r, "R12")?, &rk, "R12+kI")?;
            let b2 = div(g, div(g, div(g, n2, &q2, "q2")?, &r, "R12")?, &rk, "R12+kI")?;
            [b1, b2, -r1, -r2]
        }
        S1 => [div(g, q1, &a.s1, "s1")?, div(g, q2, &a.s2, "s2")?, r1, r2],
        S2 => {
            let q = q12(&q1, &q2);
            let r = r12(&r1, &r2, a);
            [
                div(g, q1.clone(), &q, "Q12")?,
                div(g, q2.clone(), &q, "Q12")?,
                r1 - q1 * r.clone(),
                r2 - q2 * r,
            ]
        }
        S3 => {
            let r = r12(&r1, &r2, a);
            [div(g, F::one(), &q1, "q1")?, -div(g, q2, &q1, "q1")?, -r, r2]
        }
        S4 => [q2, q1, r2, r1],
    })
}

/// The map on `(q1, q2, p1, p2)`.
///
/// For `w_α0` the `p̄_i` entries are used in the cancelled form
/// `−q_i P12 (P12+κ∞) / (s_i (q_i p_i − θ_i))`, which equals `−q_i p_i / q̄_i`
/// as a rational function.
pub fn apply_qp<F: Field>(g: Generator, x: &Point<F>, a: &ParamVector<F>) -> Result<Point<F>, BmapError> {
    use Generator::*;
    let [q1, q2, p1, p2] = x.clone();
    Ok(match g {
        Wk0 => {
            let s1q = a.s1.clone() * q12s(&q1, &q2, a).ok_or(BmapError::Polar { generator: g, denominator: "s1" })?;
            let s2q = a.s2.clone() * q12s(&q1, &q2, a).ok_or(BmapError::Polar { generator: g, denominator: "s2" })?;
            [q1, q2, p1 - div(g, a.k0.clone(), &s1q, "Q12s")?, p2 - div(g, a.k0.clone(), &s2q, "Q12s")?]
        }
        Wk1 => {
            let q = q12(&q1, &q2);
            [q1, q2, p1 - div(g, a.k1.clone(), &q, "Q12")?, p2 - div(g, a.k1.clone(), &q, "Q12")?]
        }
        WkInf => [q1, q2, p1, p2],
        Wt1 => {
            let t = div(g, a.t1.clone(), &q1, "q1")?;
            [q1, q2, p1 - t, p2]
        }
        Wt2 => {
            let t = div(g, a.t2.clone(), &q2, "q2")?;
            [q1, q2, p1, p2 - t]
        }
        Wa0 => {
            let p = p12(x, a);
            let pp = p.clone() * (p.clone() + a.kinf.clone());
            let u1 = q1.clone() * p1.clone() - a.t1.clone();
            let u2 = q2.clone() * p2.clone() - a.t2.clone();
            let b1 = div(g, a.s1.clone() * p1 * u1.clone(), &pp, "P12(P12+kI)")?;
            let b2 = div(g, a.s2.clone() * p2 * u2.clone(), &pp, "P12(P12+kI)")?;
            let c1 = -div(g, q1 * pp.clone(), &(a.s1.clone() * u1), "q1p1-t1")?;
            let c2 = -div(g, q2 * pp, &(a.s2.clone() * u2), "q2p2-t2")?;
            [b1, b2, c1, c2]
        }
        S1 => [div(g, q1, &a.s1, "s1")?, div(g, q2, &a.s2, "s2")?, a.s1.clone() * p1, a.s2.clone() * p2],
        S2 => {
            let q = q12(&q1, &q2);
            let p = p12(x, a);
            [
                div(g, q1, &q, "Q12")?,
                div(g, q2, &q, "Q12")?,
                q.clone() * (p1 - p.clone()),
                q * (p2 - p),
            ]
        }
        S3 => {
            let p = p12(x, a);
            [div(g, F::one(), &q1, "q1")?, -div(g, q2, &q1, "q1")?, -(q1.clone() * p), -(q1 * p2)]
        }
        S4 => [q2, q1, p2, p1],
    })
}

pub fn apply<F: Field>(g: Generator, coords: Coords, x: &Point<F>, a: &ParamVector<F>) -> Result<Point<F>, BmapError> {
    match coords {
        Coords::Qp => apply_qp(g, x, a),
        Coords::Qr => apply_qr(g, x, a),
    }
}

/// `(q, p) ↦ (q, q p)`.
pub fn qp_to_qr<F: Field>(x: &Point<F>) -> Point<F> {
    [x[0].clone(), x[1].clone(), x[0].clone() * x[2].clone(), x[1].clone() * x[3].clone()]
}

/// `(q, r) ↦ (q, r/q)`; `None` on `q1 q2 = 0`.
pub fn qr_to_qp<F: Field>(x: &Point<F>) -> Option<Point<F>> {
    Some([x[0].clone(), x[1].clone(), x[2].checked_div(&x[0])?, x[3].checked_div(&x[1])?])
}

/// Order in which a word's letters act on points.
///
/// `LeftFirst` applies `w1` first; its pullback is `M1 ⋯ Mn`, matching the
/// lattice convention of the same name.
pub fn word_order(word: &[Generator], convention: Convention) -> Vec<Generator> {
    let mut w = word.to_vec();
    if convention == Convention::RightFirst {
        w.reverse();
    }
    w
}

/// Thread a point and the parameters through a word.
pub fn apply_word<F: Field>(
    word: &[Generator],
    coords: Coords,
    x: &Point<F>,
    a: &ParamVector<F>,
    convention: Convention,
) -> Result<(Point<F>, ParamVector<F>), BmapError> {
    let mut x = x.clone();
    let mut a = a.clone();
    for (step, g) in word_order(word, convention).into_iter().enumerate() {
        let at_step = |e: BmapError| match e {
            BmapError::Polar { generator, denominator } => BmapError::PolarAtStep { step, generator, denominator },
            e => e,
        };
        x = apply(g, coords, &x, &a).map_err(at_step)?;
        a = param_act(g, &a).map_err(at_step)?;
    }
    Ok((x, a))
}

/// Parameters only.
pub fn param_word<F: Field>(word: &[Generator], a: &ParamVector<F>, convention: Convention) -> Result<ParamVector<F>, BmapError> {
    let mut a = a.clone();
    for g in word_order(word, convention) {
        a = param_act(g, &a)?;
    }
    Ok(a)
}

/// Exact Jacobian `∂x̄_i/∂x_j` at a rational point, through first-order jets.
pub fn jacobian_at(
    g: Generator,
    coords: Coords,
    x: &Point<Rational>,
    a: &ParamVector<Rational>,
) -> Result<[[Rational; 4]; 4], BmapError> {
    let xj: Point<Jet<4>> = core::array::from_fn(|i| Jet::variable(x[i].clone(), i));
    let y = apply(g, coords, &xj, &a.lift())?;
    Ok(core::array::from_fn(|i| y[i].grad.clone()))
}

/// Symbolic Jacobian in the coordinate symbols of `coords` and the parameter
/// symbols `k0 … s2`.
pub fn jacobian(g: Generator, coords: Coords) -> Result<[[RatFunc; 4]; 4], BmapError> {
    let names = coords.names();
    let x: Point<RatFunc> = names.map(RatFunc::var);
    let y = apply(g, coords, &x, &ParamVector::symbolic())?;
    Ok(core::array::from_fn(|i| core::array::from_fn(|j| y[i].derivative(names[j]))))
}

/// Uniform random point.
pub fn random_point<R: Rng + ?Sized>(rng: &mut R, bound: i64) -> Point<Rational> {
    core::array::from_fn(|_| random_rational(rng, bound))
}

/// Result of a randomized point check.
#[derive(Clone, Debug, PartialEq)]
pub struct PointCheck {
    pub generator: Generator,
    pub coords: Coords,
    /// Points at which the identity was evaluated.
    pub points: usize,
    /// First failing `(point, parameters)` if any.
    pub counterexample: Option<Box<(Point<Rational>, ParamVector<Rational>)>>,
    /// Set when too many draws hit polar loci to reach the requested count.
    pub exhausted: bool,
}

impl PointCheck {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none() && !self.exhausted
    }
}

/// Evaluate `check` at `trials` random generic draws. `check` returns `None`
/// when the draw hits a polar locus, which triggers a redraw (at most 1000 in
/// a row).
pub fn sample_check<R: Rng + ?Sized>(
    g: Generator,
    coords: Coords,
    rng: &mut R,
    trials: usize,
    bound: i64,
    check: impl Fn(&Point<Rational>, &ParamVector<Rational>) -> Option<bool>,
) -> PointCheck {
    let mut report = PointCheck { generator: g, coords, points: 0, counterexample: None, exhausted: false };
    let mut misses = 0;
    while report.points < trials {
        let a = ParamVector::random(rng, bound);
        let x = random_point(rng, bound);
        match check(&x, &a) {
            None => {
                misses += 1;
                if misses >= 1000 {
                    report.exhausted = true;
                    break;
                }
            }
            Some(ok) => {
                misses = 0;
                report.points += 1;
                if !ok {
                    report.counterexample = Some(Box::new((x, a)));
                    break;
                }
            }
        }
    }
    report
}

/// `g ∘ g = id` on points and parameters.
pub fn involution_check<R: Rng + ?Sized>(g: Generator, coords: Coords, rng: &mut R, trials: usize, bound: i64) -> PointCheck {
    sample_check(g, coords, rng, trials, bound, |x, a| {
        let y = apply(g, coords, x, a).ok()?;
        let b = param_act(g, a).ok()?;
        let z = apply(g, coords, &y, &b).ok()?;
        let c = param_act(g, &b).ok()?;
        Some(&z == x && &c == a)
    })
}

/// The `(q, p)` row equals the `(q, r)` row conjugated by `r_i = q_i p_i`.
pub fn consistency_qp_qr<R: Rng + ?Sized>(g: Generator, rng: &mut R, trials: usize, bound: i64) -> PointCheck {
    sample_check(g, Coords::Qp, rng, trials, bound, |x, a| {
        let direct = apply_qp(g, x, a).ok()?;
        let via = qr_to_qp(&apply_qr(g, &qp_to_qr(x), a).ok()?)?;
        Some(direct == via)
    })
}

/// Symbolic involution check: compose the formulas as rational functions in
/// all coordinates and parameters and compare exactly. Slow for `w_α0`.
pub fn involution_check_symbolic(g: Generator, coords: Coords) -> Result<bool, BmapError> {
    let x: Point<RatFunc> = coords.names().map(RatFunc::var);
    let a = ParamVector::symbolic();
    let y = apply(g, coords, &x, &a)?;
    let b = param_act(g, &a)?;
    let z = apply(g, coords, &y, &b)?;
    let c = param_act(g, &b)?;
    Ok(z == x && c == a)
}

/// Symbolic version of [`consistency_qp_qr`].
pub fn consistency_qp_qr_symbolic(g: Generator) -> Result<bool, BmapError> {
    let x: Point<RatFunc> = Coords::Qp.names().map(RatFunc::var);
    let a = ParamVector::symbolic();
    let direct = apply_qp(g, &x, &a)?;
    let via = qr_to_qp(&apply_qr(g, &qp_to_qr(&x), &a)?).ok_or(BmapError::Polar { generator: g, denominator: "q" })?;
    Ok(direct == via)
}

/// Genericity is carried to genericity by every generator.
#[derive(Clone, Debug, PartialEq)]
pub struct GenericityCheck {
    pub samples: usize,
    pub failures: Vec<(Generator, ParamVector<Rational>)>,
}

impl GenericityCheck {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn genericity_preserved<R: Rng + ?Sized>(rng: &mut R, samples: usize, bound: i64) -> GenericityCheck {
    let mut failures = Vec::new();
    for _ in 0..samples {
        let a = ParamVector::random(rng, bound);
        for g in Generator::ALL {
            if !param_act(g, &a).map(|b| b.is_generic()).unwrap_or(false) {
                failures.push((g, a.clone()));
            }
        }
    }
    GenericityCheck { samples, failures }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{frac, int};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use Generator::*;

    fn pt(v: [i64; 4]) -> Point<Rational> {
        v.map(int)
    }

    fn ones_23() -> ParamVector<Rational> {
        ParamVector::from_ints([1, 1, 1, 1, 1, 1, 2, 3])
    }

    #[test]
    fn parameter_rows() {
        let a = ParamVector::from_ints([2, 3, 5, 7, 11, 13, 17, 19]);
        let b = param_act(Wt1, &a).unwrap();
        assert_eq!((b.t1.clone(), b.a0.clone()), (int(-7), int(20)));
        assert_eq!(b.k0, a.k0);

        let b = param_act(Wa0, &ParamVector::from_ints([1, 1, 1, 1, 1, 1, 2, 3])).unwrap();
        assert_eq!(b.to_array()[..6], [6, 6, -1, -1, -1, -1].map(int));
        assert_eq!(b.d(), int(7));

        let b = param_act(S3, &a).unwrap();
        assert_eq!((b.s1.clone(), b.s2.clone()), (frac(1, 17), frac(19, 17)));
        assert_eq!((b.kinf.clone(), b.t1.clone()), (a.t1.clone(), a.kinf.clone()));

        let b = param_act(S2, &a).unwrap();
        assert_eq!((b.s1, b.k1, b.kinf), (frac(17, 16), a.kinf.clone(), a.k1.clone()));
        let mut c = a.clone();
        c.s1 = int(1);
        assert_eq!(param_act(S2, &c), Err(BmapError::Polar { generator: S2, denominator: "s1-1" }));
    }

    #[test]
    fn d_invariant_under_wa0() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let a = ParamVector::random(&mut rng, 50);
            assert_eq!(param_act(Wa0, &a).unwrap().d(), a.d());
        }
    }

    #[test]
    fn qr_examples() {
        let a = ones_23();
        assert_eq!(apply_qr(S4, &pt([2, 3, 5, 7]), &a).unwrap(), pt([3, 2, 7, 5]));
        assert_eq!(apply_qr(Wa0, &pt([1, 1, 1, 1]), &a).unwrap(), pt([0, 0, -1, -1]));
        assert_eq!(
            apply_qr(Wk1, &pt([1, 0, 5, 7]), &a),
            Err(BmapError::Polar { generator: Wk1, denominator: "Q12" })
        );
        // σ3 at a hand-checked point: R12 = 5 + 7 + 1
        assert_eq!(apply_qr(S3, &pt([2, 3, 5, 7]), &a).unwrap(), [frac(1, 2), frac(-3, 2), int(-13), int(7)]);
    }

    #[test]
    fn qp_examples() {
        let a = ParamVector::from_ints([2, 3, 5, 7, 11, 13, 17, 19]);
        let x = pt([2, 3, 5, 7]);
        assert_eq!(apply_qp(Wt1, &x, &a).unwrap(), [int(2), int(3), frac(3, 2), int(7)]);
        assert_eq!(apply_qp(S1, &x, &a).unwrap(), [frac(2, 17), frac(3, 19), int(85), int(133)]);
        assert_eq!(
            apply_qp(Wt1, &pt([0, 3, 5, 7]), &a),
            Err(BmapError::Polar { generator: Wt1, denominator: "q1" })
        );
    }

    #[test]
    fn jacobian_examples() {
        let j = jacobian(S4, Coords::Qr).unwrap();
        for (i, row) in j.iter().enumerate() {
            for (k, e) in row.iter().enumerate() {
                let want = if k == [1, 0, 3, 2][i] { 1 } else { 0 };
                assert_eq!(e.as_constant(), Some(int(want)));
            }
        }
        let j = jacobian(Wt1, Coords::Qp).unwrap();
        let q1 = RatFunc::var("q1");
        assert_eq!(j[2][0], RatFunc::var("t1").checked_div(&(q1.clone() * q1)).unwrap());
        let j = jacobian(WkInf, Coords::Qp).unwrap();
        for (i, row) in j.iter().enumerate() {
            for (k, e) in row.iter().enumerate() {
                assert_eq!(e.as_constant(), Some(int((i == k) as i64)));
            }
        }
    }

    #[test]
    fn jet_jacobian_matches_symbolic() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = ParamVector::random(&mut rng, 30);
        let x = random_point(&mut rng, 30);
        let mut env = alloc::collections::BTreeMap::new();
        for (n, v) in Coords::Qr.names().iter().zip(x.iter()) {
            env.insert(crate::exact::sym(n), v.clone());
        }
        for (n, v) in ParamVector::<Rational>::NAMES.iter().zip(a.to_array()) {
            env.insert(crate::exact::sym(n), v);
        }
        for g in Generator::ALL {
            let num = jacobian_at(g, Coords::Qr, &x, &a).unwrap();
            let sym = jacobian(g, Coords::Qr).unwrap();
            for i in 0..4 {
                for k in 0..4 {
                    assert_eq!(sym[i][k].eval(&env).unwrap(), num[i][k], "{g} ({i},{k})");
                }
            }
        }
    }

    #[test]
    fn words() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = ParamVector::random(&mut rng, 100);
        let x = random_point(&mut rng, 100);
        for conv in [Convention::LeftFirst, Convention::RightFirst] {
            assert_eq!(apply_word(&[], Coords::Qr, &x, &a, conv).unwrap(), (x.clone(), a.clone()));
            for g in Generator::ALL {
                assert_eq!(apply_word(&[g, g], Coords::Qr, &x, &a, conv).unwrap(), (x.clone(), a.clone()));
            }
        }
        let bad = [int(1), int(0), int(5), int(7)];
        assert_eq!(
            apply_word(&[S4, Wk1], Coords::Qr, &bad, &a, Convention::LeftFirst),
            Err(BmapError::PolarAtStep { step: 1, generator: Wk1, denominator: "Q12" })
        );
    }

    #[test]
    fn all_generators_are_involutions_and_tables_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for g in Generator::ALL {
            for c in [Coords::Qr, Coords::Qp] {
                let r = involution_check(g, c, &mut rng, 100, 1_000_000);
                assert!(r.passed(), "{r:?}");
            }
            let r = consistency_qp_qr(g, &mut rng, 5, 1_000_000);
            assert!(r.passed(), "{r:?}");
        }
    }

    #[test]
    fn symbolic_mode_on_cheap_generators() {
        for g in [Wk1, Wt1, Wt2, S1, S2, S3, S4] {
            assert_eq!(involution_check_symbolic(g, Coords::Qr), Ok(true), "{g}");
            assert_eq!(consistency_qp_qr_symbolic(g), Ok(true), "{g}");
        }
    }

    #[test]
    fn t1_word_translates_parameters() {
        // With α1 read as κ0 and δ as d, the shift δ·(−1, 2, 0, 0, 0, 0) on
        // the roots becomes (α0, κ0) ↦ (α0 − d, κ0 + 2d).
        let a = ParamVector::symbolic();
        let d = a.d();
        let t = crate::lattice::t1_word(WkInf);
        let b = param_word(&t, &a, Convention::LeftFirst).unwrap();
        let mut want = a.clone();
        want.a0 = a.a0.clone() - d.clone();
        want.k0 = a.k0.clone() + d.clone() + d.clone();
        assert_eq!(b, want);
        assert_eq!(b.d(), d);
        let back = param_word(&t, &a, Convention::RightFirst).unwrap();
        assert_eq!(param_word(&t, &back, Convention::LeftFirst).unwrap(), a);
        // the other slot moves κ1 as well
        let c = param_word(&crate::lattice::t1_word(Wk1), &a, Convention::LeftFirst).unwrap();
        assert!(c.k1 != a.k1);
    }

    #[test]
    fn genericity_is_preserved() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        assert!(genericity_preserved(&mut rng, 100, 1_000_000).passed());
        assert!(!ParamVector::from_ints([1, 0, 1, 1, 1, 1, 2, 3]).is_generic());
        assert!(!ParamVector::from_ints([1, 1, 1, 1, 1, 1, 2, 2]).is_generic());
        // α0 + θ1 = 0 makes the w_θ1 image fail
        assert!(!ParamVector::from_ints([1, 1, 1, -1, 1, 1, 2, 3]).is_generic());
        assert!(ParamVector::from_ints([3, 5, 7, 11, 13, 17, 19, 23]).basic_conditions().is_ok());
    }
}
