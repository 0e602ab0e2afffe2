//! Curve germs through generic points of divisors, and what can be read off
//! them: vanishing orders, limit points, and the rank of the limit map.
//!
//! A germ transversal to `Ê_k` is written in chart `k` with the exceptional
//! coordinate equal to `t` and the other three coordinates free. The free
//! coordinates are either plain rationals or first-order jets in three
//! directions; with jets the limit of any map along the germ carries its
//! Jacobian in the directions of `Ê_k`, so the rank of the image is exact.

use alloc::vec::Vec;

use rand::Rng;

use super::charts::{from_base, to_base, CHART_COUNT};
use crate::bmap::{ParamVector, Point};
use crate::exact::{linalg, random_rational, Field, Jet, LocalSeries, Order, Rational};

pub type Series<F> = LocalSeries<F>;
pub type JetSeries = LocalSeries<Jet<3>>;

/// Effort spent per geometric quantity: `trials` independent germs, and the
/// first truncation of the series (doubled three times when an order is only
/// bounded below).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub trials: usize,
    pub truncation: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { trials: 5, truncation: crate::exact::DEFAULT_TRUNCATION }
    }
}

impl Budget {
    pub fn with_trials(trials: usize) -> Self {
        Budget { trials, ..Budget::default() }
    }

    pub fn ladder(&self) -> [usize; 4] {
        let t = self.truncation.max(1);
        [t, 2 * t, 4 * t, 8 * t]
    }

    pub fn is_last(&self, work: usize) -> bool {
        work >= self.ladder()[3]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GermFail {
    /// The truncation hid a leading term; retry with more terms.
    Precision,
    /// The sampled point is special (a division by zero, a vanishing value);
    /// redraw it.
    Degenerate,
}

/// Free coordinate values as series over `F`.
pub trait Coefficient: Field {
    fn free(value: Rational, i: usize) -> Self;
    fn value(&self) -> Rational;
    fn gradient(&self) -> Vec<Rational>;
}

impl Coefficient for Rational {
    fn free(value: Rational, _: usize) -> Self {
        value
    }
    fn value(&self) -> Rational {
        self.clone()
    }
    fn gradient(&self) -> Vec<Rational> {
        Vec::new()
    }
}

impl Coefficient for Jet<3> {
    fn free(value: Rational, i: usize) -> Self {
        Jet::variable(value, i)
    }
    fn value(&self) -> Rational {
        self.value.clone()
    }
    fn gradient(&self) -> Vec<Rational> {
        self.grad.to_vec()
    }
}

pub fn draw<R: Rng + ?Sized>(rng: &mut R, n: usize, bound: i64) -> Vec<Rational> {
    (0..n).map(|_| random_rational(rng, bound)).collect()
}

/// Chart-`k` coordinates of the germ: the exceptional slot is `t`, the other
/// slots take `free[0..3]` in order.
pub fn chart_germ<F: Coefficient>(k: usize, free: &[Rational], work: usize) -> Option<Point<Series<F>>> {
    let exc = super::charts::chart(k)?.exceptional;
    let mut it = free.iter().enumerate();
    Some(core::array::from_fn(|slot| {
        if slot == exc {
            Series::variable(work)
        } else {
            let (i, v) = it.next().expect("three free values");
            Series::constant(F::free(v.clone(), i)).with_work(work)
        }
    }))
}

pub fn lift_params<F: Field>(a: &ParamVector<Rational>) -> ParamVector<Series<F>> {
    a.lift()
}

/// Base germ through a generic point of `Ê_k`.
pub fn exceptional_germ<F: Coefficient>(
    k: usize,
    free: &[Rational],
    a: &ParamVector<Rational>,
    work: usize,
) -> Result<Point<Series<F>>, GermFail> {
    let c = chart_germ::<F>(k, free, work).ok_or(GermFail::Degenerate)?;
    to_base(k, &c, &lift_params(a)).ok_or(GermFail::Precision)
}

/// Order along the germ, failing if the truncation was too short.
pub fn order<F: Field>(s: &Series<F>) -> Result<Option<i64>, GermFail> {
    match s.order() {
        Order::Exact(k) => Ok(Some(k)),
        Order::Zero => Ok(None),
        Order::AtLeast(_) => Err(GermFail::Precision),
    }
}

/// Value at `t = 0`; the series must have no pole there.
pub fn limit<F: Field>(s: &Series<F>) -> Result<F, GermFail> {
    match s.order() {
        Order::Exact(k) if k < 0 => Err(GermFail::Degenerate),
        _ => s.coeff(0).ok_or(GermFail::Precision),
    }
}

/// Limit of `(1 : x : y)` as a point of P², scaled to be finite.
pub fn projective_limit<F: Field>(x: &Series<F>, y: &Series<F>) -> Result<[F; 3], GermFail> {
    let ox = order(x)?.unwrap_or(0);
    let oy = order(y)?.unwrap_or(0);
    let m = 0.max(-ox).max(-oy);
    let first = if m == 0 { F::one() } else { F::zero() };
    Ok([first, x.coeff(-m).ok_or(GermFail::Precision)?, y.coeff(-m).ok_or(GermFail::Precision)?])
}

/// Homogeneous limit `(Q0:Q1:Q2), (R0:R1:R2)` of a base germ.
pub fn homogeneous_limit<F: Field>(y: &Point<Series<F>>) -> Result<[[F; 3]; 2], GermFail> {
    Ok([projective_limit(&y[0], &y[1])?, projective_limit(&y[2], &y[3])?])
}

/// Rank of the Jacobian of a list of jets.
pub fn jet_rank(jets: &[Jet<3>]) -> usize {
    let m: linalg::Matrix = jets.iter().map(|j| j.grad.to_vec()).collect();
    linalg::rank(&m)
}

/// Affine charts of a projective point given as jets: divide by the first
/// coordinate whose value is nonzero.
fn dehomogenize(p: &[Jet<3>; 3]) -> Result<Vec<Jet<3>>, GermFail> {
    let i = p.iter().position(|c| !num_traits::Zero::is_zero(&c.value)).ok_or(GermFail::Degenerate)?;
    let mut out = Vec::new();
    for (j, c) in p.iter().enumerate() {
        if j != i {
            out.push(c.checked_div(&p[i]).ok_or(GermFail::Degenerate)?);
        }
    }
    Ok(out)
}

/// Rank of the limit map in P²×P²; 3 means the germ family sweeps out a
/// hypersurface.
pub fn base_rank(y: &Point<JetSeries>) -> Result<usize, GermFail> {
    let [q, r] = homogeneous_limit(y)?;
    let mut coords = dehomogenize(&q)?;
    coords.extend(dehomogenize(&r)?);
    Ok(jet_rank(&coords))
}

/// Where a base germ lands in chart `j`: the limits of the chart
/// coordinates, provided they are finite and the exceptional one is zero.
pub fn lands_in<F: Field>(
    j: usize,
    y: &Point<Series<F>>,
    a: &ParamVector<Series<F>>,
) -> Result<Option<Point<F>>, GermFail> {
    let exc = super::charts::chart(j).ok_or(GermFail::Degenerate)?.exceptional;
    let c = match from_base(j, y, a) {
        Some(c) => c,
        None => return Ok(None),
    };
    for (slot, s) in c.iter().enumerate() {
        let need = if slot == exc { 1 } else { 0 };
        match s.order() {
            Order::Exact(k) if k < need => return Ok(None),
            Order::AtLeast(p) if p < need => return Err(GermFail::Precision),
            _ => {}
        }
    }
    let mut out: Vec<F> = Vec::with_capacity(4);
    for s in &c {
        out.push(limit(s)?);
    }
    Ok(Some(out.try_into().ok().expect("four coordinates")))
}

/// Rank of the three non-exceptional chart coordinates at a landing point.
pub fn landing_rank(j: usize, p: &Point<Jet<3>>) -> usize {
    let exc = super::charts::chart(j).map(|c| c.exceptional).unwrap_or(0);
    let free: Vec<Jet<3>> = p.iter().enumerate().filter(|(s, _)| *s != exc).map(|(_, x)| x.clone()).collect();
    jet_rank(&free)
}

/// Runs `f` on fresh random values, escalating the truncation when asked and
/// redrawing on degenerate samples.
pub fn with_retries<R: Rng + ?Sized, T>(
    rng: &mut R,
    n: usize,
    bound: i64,
    budget: Budget,
    mut f: impl FnMut(&[Rational], usize) -> Result<T, GermFail>,
) -> Option<T> {
    for _ in 0..64 {
        let vals = draw(rng, n, bound);
        for work in budget.ladder() {
            match f(&vals, work) {
                Ok(v) => return Some(v),
                Err(GermFail::Precision) => continue,
                Err(GermFail::Degenerate) => break,
            }
        }
    }
    None
}

/// Dimension of the center `C_k`, read off as the rank of the limit of the
/// chart-`k` germ family in P²×P², maximized over a few germs.
pub fn center_dimension<R: Rng + ?Sized>(k: usize, a: &ParamVector<Rational>, rng: &mut R, budget: Budget) -> Option<usize> {
    if k == 0 || k > CHART_COUNT {
        return None;
    }
    (0..budget.trials.max(1)).filter_map(|_| center_rank(k, a, rng, budget)).max()
}

fn center_rank<R: Rng + ?Sized>(k: usize, a: &ParamVector<Rational>, rng: &mut R, budget: Budget) -> Option<usize> {
    with_retries(rng, 3, 1_000_000, budget, |free, work| {
        let y = exceptional_germ::<Jet<3>>(k, free, a, work)?;
        match super::charts::chart(k).and_then(|c| c.prior) {
            None => base_rank(&y),
            // a center inside an earlier exceptional divisor is measured in
            // that divisor's chart
            Some(p) => {
                let c = from_base(p, &y, &lift_params(a)).ok_or(GermFail::Degenerate)?;
                let mut lim = Vec::new();
                for s in &c {
                    lim.push(limit(s)?);
                }
                Ok(jet_rank(&lim))
            }
        }
    })
}
