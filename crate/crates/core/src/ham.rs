//! The two Hamiltonians, the sixth-Painlevé decomposition, Hamiltonian vector
//! fields, and the Bäcklund symmetry of the flows.

use alloc::vec::Vec;

use rand::Rng;

use crate::bmap::{apply_qp, param_act, random_point, BmapError, Generator, ParamVector, Point};
use crate::exact::{frac, random_rational, Field, Jet, Rational};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum HamError {
    #[error("excluded time values: {0} vanishes")]
    ExcludedTime(&'static str),
    #[error("{0} moves s1, s2 by a Möbius map; its action on the flows is not specified")]
    Unsupported(Generator),
    #[error(transparent)]
    Map(#[from] BmapError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Hamiltonian {
    H1,
    H2,
    /// The sixth Painlevé Hamiltonian in `(q1, p1, s1)`.
    Hvi,
}

/// Which parameter fills the `θ` slot of `H_VI`. The display uses both `θ`
/// and `θ1`; reading both as `θ1` is the one that makes the decomposition an
/// identity. `Theta2` exists as a negative control.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ThetaSlot {
    Theta1,
    Theta2,
}

fn ratio<F: Field>(n: F, d: &F, what: &'static str) -> Result<F, HamError> {
    n.checked_div(d).ok_or(HamError::ExcludedTime(what))
}

/// `s1(s1−1)(s2−1)/(s1−s2)`-type coefficients: `(s1(s1−1), s1(s2−1), s2(s1−1))`
/// each divided by `s1 − s2`.
fn time_coeffs<F: Field>(s1: &F, s2: &F) -> Result<[F; 3], HamError> {
    let one = F::one();
    let den = s1.clone() - s2.clone();
    Ok([
        ratio(s1.clone() * (s1.clone() - one.clone()), &den, "s1-s2")?,
        ratio(s1.clone() * (s2.clone() - one.clone()), &den, "s1-s2")?,
        ratio(s2.clone() * (s1.clone() - one), &den, "s1-s2")?,
    ])
}

/// `s1(s1−1) H1`, polynomial in `(q1, q2, p1, p2)`.
pub fn h1_cleared<F: Field>(x: &Point<F>, a: &ParamVector<F>) -> Result<F, HamError> {
    let [q1, q2, p1, p2] = x.clone();
    let one = F::one();
    let [e, c12, c21] = time_coeffs(&a.s1, &a.s2)?;
    let s1 = a.s1.clone();
    let two = F::from_int(2);

    let a11 = q1.clone() * (q1.clone() - one.clone()) * (q1.clone() - s1.clone()) - e.clone() * q1.clone() * q2.clone();
    let a12 = two.clone() * q1.clone() * q2.clone() * (q1.clone() + c12.clone());
    let a22 = q1.clone() * q2.clone() * (q2.clone() - c21.clone());
    let b1 = (a.k0.clone() - a.d()) * q1.clone() * (q1.clone() - one.clone())
        + a.k1.clone() * q1.clone() * (q1.clone() - s1.clone())
        + a.t1.clone() * (q1.clone() - one) * (q1.clone() - s1)
        + a.t2.clone() * q1.clone() * (q1.clone() + c12.clone())
        - a.t1.clone() * e * q2.clone();
    let b2 = (two * a.a0.clone() + a.kinf.clone()) * q1.clone() * q2.clone() + a.t2.clone() * q1.clone() * c21
        - a.t1.clone() * q2 * c12;
    let c = a.a0.clone() * (a.a0.clone() + a.kinf.clone()) * q1;

    Ok(a11 * p1.clone() * p1.clone() + a12 * p1.clone() * p2.clone() + a22 * p2.clone() * p2.clone() - b1 * p1
        + b2 * p2
        + c)
}

/// `s(s−1) H_VI(q, p, s, κ0, κ1, κ∞, θ, α0)`.
#[allow(clippy::too_many_arguments)]
pub fn hvi_cleared<F: Field>(q: &F, p: &F, s: &F, _k0: &F, k1: &F, kinf: &F, theta: &F, a0: &F) -> F {
    let one = F::one();
    let qm = q.clone() - one;
    let qs = q.clone() - s.clone();
    let lin = -((F::from_int(2) * a0.clone() + k1.clone() + kinf.clone() + theta.clone()) * q.clone() * qm.clone())
        + k1.clone() * q.clone() * qs.clone()
        + theta.clone() * qm.clone() * qs.clone();
    q.clone() * qm * qs * p.clone() * p.clone() - lin * p.clone() + a0.clone() * (a0.clone() + kinf.clone()) * q.clone()
}

/// Swap `q1↔q2, p1↔p2, s1↔s2, θ1↔θ2`.
pub fn swap<F: Field>(x: &Point<F>, a: &ParamVector<F>) -> (Point<F>, ParamVector<F>) {
    let mut b = a.clone();
    core::mem::swap(&mut b.s1, &mut b.s2);
    core::mem::swap(&mut b.t1, &mut b.t2);
    ([x[1].clone(), x[0].clone(), x[3].clone(), x[2].clone()], b)
}

fn excluded<F: Field>(s: &F, name: [&'static str; 2]) -> Result<F, HamError> {
    let c = s.clone() * (s.clone() - F::one());
    if c.is_zero() {
        return Err(HamError::ExcludedTime(if s.is_zero() { name[0] } else { name[1] }));
    }
    Ok(c)
}

pub fn eval_h<F: Field>(which: Hamiltonian, x: &Point<F>, a: &ParamVector<F>) -> Result<F, HamError> {
    match which {
        Hamiltonian::H1 => {
            let c = excluded(&a.s1, ["s1", "s1-1"])?;
            ratio(h1_cleared(x, a)?, &c, "s1")
        }
        Hamiltonian::H2 => {
            let (y, b) = swap(x, a);
            eval_h(Hamiltonian::H1, &y, &b)
        }
        Hamiltonian::Hvi => {
            let c = excluded(&a.s1, ["s1", "s1-1"])?;
            let n = hvi_cleared(&x[0], &x[2], &a.s1, &a.k0, &a.k1, &a.kinf, &a.t1, &a.a0);
            ratio(n, &c, "s1")
        }
    }
}

/// Right side of the decomposition of `s1(s1−1)H1` through `H_VI`.
pub fn hvi_decomposition<F: Field>(x: &Point<F>, a: &ParamVector<F>, slot: ThetaSlot) -> Result<F, HamError> {
    let [q1, q2, p1, p2] = x.clone();
    let [e, c12, c21] = time_coeffs(&a.s1, &a.s2)?;
    let two = F::from_int(2);
    let theta = match slot {
        ThetaSlot::Theta1 => &a.t1,
        ThetaSlot::Theta2 => &a.t2,
    };
    let vi = hvi_cleared(&q1, &p1, &a.s1, &a.k0, &a.k1, &a.kinf, theta, &a.a0);
    let t1 = (two.clone() * q1.clone() * p1.clone() + q2.clone() * p2.clone() + two.clone() * a.a0.clone() + a.kinf.clone())
        * q1.clone()
        * q2.clone()
        * p2.clone();
    let t2 = e * (a.t1.clone() - q1.clone() * p1.clone()) * q2.clone() * p1.clone();
    let t3 = c12 * (two * q1.clone() * p1.clone() - a.t1.clone()) * q2.clone() * p2.clone();
    let t4 = c21 * (-(q2 * p2.clone() * p2.clone()) + a.t2.clone() * (p2 - p1)) * q1;
    Ok(vi + t1 + t2 + t3 + t4)
}

/// `s1(s1−1)H1` minus the decomposition.
pub fn hvi_residual<F: Field>(x: &Point<F>, a: &ParamVector<F>, slot: ThetaSlot) -> Result<F, HamError> {
    Ok(h1_cleared(x, a)? - hvi_decomposition(x, a, slot)?)
}

/// `(dq1, dq2, dp1, dp2)/ds_j`.
pub fn vector_field(j: usize, x: &Point<Rational>, a: &ParamVector<Rational>) -> Result<Point<Rational>, HamError> {
    let which = if j == 1 { Hamiltonian::H1 } else { Hamiltonian::H2 };
    let xj: Point<Jet<4>> = core::array::from_fn(|i| Jet::variable(x[i].clone(), i));
    let h = eval_h(which, &xj, &a.lift())?;
    let [dq1, dq2, dp1, dp2] = h.grad;
    Ok([dp1, dp2, -dq1, -dq2])
}

/// `α0 = (1 − κ0 − κ1 − κ∞ − θ1 − θ2)/2`, placing the parameters on `d = 1`.
pub fn on_unit_hyperplane(mut a: ParamVector<Rational>) -> ParamVector<Rational> {
    a.a0 = (Rational::from_integer(1.into()) - &a.k0 - &a.k1 - &a.kinf - &a.t1 - &a.t2) * frac(1, 2);
    a
}

/// Random generic parameters with `d = 1`.
pub fn random_unit_params<R: Rng + ?Sized>(rng: &mut R, bound: i64) -> ParamVector<Rational> {
    loop {
        let a = on_unit_hyperplane(ParamVector::from_array(core::array::from_fn(|_| random_rational(rng, bound))));
        if a.is_generic() {
            return a;
        }
    }
}

/// The seven generators whose action on `(s1, s2)` is at most a swap.
pub const SYMMETRY_GENERATORS: [Generator; 7] =
    [Generator::Wk0, Generator::Wk1, Generator::WkInf, Generator::Wt1, Generator::Wt2, Generator::Wa0, Generator::S4];

/// `V_{j'}(g(x); g(α)) − ∂g/∂s_j − J_g · V_j(x; α)`, where `j' = j` except
/// for `σ4`, which exchanges the two times.
pub fn symmetry_residual(
    g: Generator,
    j: usize,
    x: &Point<Rational>,
    a: &ParamVector<Rational>,
) -> Result<Point<Rational>, HamError> {
    if !SYMMETRY_GENERATORS.contains(&g) {
        return Err(HamError::Unsupported(g));
    }
    // jets in (q1, q2, p1, p2, s1, s2)
    let xj: Point<Jet<6>> = core::array::from_fn(|i| Jet::variable(x[i].clone(), i));
    let mut aj: ParamVector<Jet<6>> = a.lift();
    aj.s1 = Jet::variable(a.s1.clone(), 4);
    aj.s2 = Jet::variable(a.s2.clone(), 5);
    let y = apply_qp(g, &xj, &aj)?;
    let b = param_act(g, a)?;
    let y0: Point<Rational> = core::array::from_fn(|i| y[i].value.clone());
    let jt = if g == Generator::S4 { 3 - j } else { j };
    let lhs = vector_field(jt, &y0, &b)?;
    let v = vector_field(j, x, a)?;
    Ok(core::array::from_fn(|i| {
        let mut rhs = y[i].grad[3 + j].clone();
        for (k, vk) in v.iter().enumerate() {
            rhs += &y[i].grad[k] * vk;
        }
        &lhs[i] - rhs
    }))
}

/// Outcome of a randomized exact identity check.
#[derive(Clone, Debug, PartialEq)]
pub struct ResidualCheck {
    pub points: usize,
    /// First nonzero residual, with the point and parameters that produced it.
    pub nonzero: Option<(Point<Rational>, ParamVector<Rational>, Vec<Rational>)>,
    pub exhausted: bool,
}

impl ResidualCheck {
    pub fn passed(&self) -> bool {
        self.nonzero.is_none() && !self.exhausted
    }
}

fn run_check<R: Rng + ?Sized>(
    rng: &mut R,
    trials: usize,
    bound: i64,
    params: impl Fn(&mut R) -> ParamVector<Rational>,
    f: impl Fn(&Point<Rational>, &ParamVector<Rational>) -> Option<Vec<Rational>>,
) -> ResidualCheck {
    let mut out = ResidualCheck { points: 0, nonzero: None, exhausted: false };
    let mut misses = 0;
    while out.points < trials {
        let a = params(rng);
        let x = random_point(rng, bound);
        let Some(r) = f(&x, &a) else {
            misses += 1;
            if misses >= 1000 {
                out.exhausted = true;
                break;
            }
            continue;
        };
        misses = 0;
        out.points += 1;
        if r.iter().any(|v| !Field::is_zero(v)) {
            out.nonzero = Some((x, a, r));
            break;
        }
    }
    out
}

pub fn hvi_identity_check<R: Rng + ?Sized>(rng: &mut R, trials: usize, bound: i64, slot: ThetaSlot) -> ResidualCheck {
    run_check(rng, trials, bound, |r| ParamVector::random(r, bound), |x, a| {
        hvi_residual(x, a, slot).ok().map(|v| alloc::vec![v])
    })
}

/// `H2(x; α) = H1(swapped x; swapped α)` against the explicitly swapped
/// vector fields: `V2(x) = swap(V1(swap x))`.
pub fn swap_check<R: Rng + ?Sized>(rng: &mut R, trials: usize, bound: i64) -> ResidualCheck {
    run_check(rng, trials, bound, |r| ParamVector::random(r, bound), |x, a| {
        let (y, b) = swap(x, a);
        let v2 = vector_field(2, x, a).ok()?;
        let v1 = vector_field(1, &y, &b).ok()?;
        let sv1 = [v1[1].clone(), v1[0].clone(), v1[3].clone(), v1[2].clone()];
        let mut r: Vec<Rational> = v2.iter().zip(&sv1).map(|(p, q)| p - q).collect();
        r.push(eval_h(Hamiltonian::H2, x, a).ok()? - eval_h(Hamiltonian::H1, &y, &b).ok()?);
        Some(r)
    })
}

/// Whether parameters are drawn on `d = 1` or freely.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ParamSampling {
    UnitD,
    Free,
}

/// Symmetry of both flows under `g`, at `trials` random exact points.
pub fn symmetry_check<R: Rng + ?Sized>(
    g: Generator,
    rng: &mut R,
    trials: usize,
    bound: i64,
    sampling: ParamSampling,
) -> ResidualCheck {
    run_check(
        rng,
        trials,
        bound,
        |r| match sampling {
            ParamSampling::UnitD => random_unit_params(r, bound),
            ParamSampling::Free => ParamVector::random(r, bound),
        },
        |x, a| {
            let mut out = symmetry_residual(g, 1, x, a).ok()?.to_vec();
            out.extend(symmetry_residual(g, 2, x, a).ok()?);
            Some(out)
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, sym, RatFunc};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(17)
    }

    #[test]
    fn h1_on_q_zero() {
        // only θ1(q1−1)(q1−s1)p1 survives, so H1 = −θ1 p1/(s1−1) there; it
        // agrees with H_VI, and the q2 velocity vanishes
        let mut rng = rng();
        for _ in 0..10 {
            let a = ParamVector::random(&mut rng, 100);
            let mut x = random_point(&mut rng, 100);
            x[0] = int(0);
            x[1] = int(0);
            let want = -(&a.t1 * &x[2]) / (&a.s1 - int(1));
            assert_eq!(eval_h(Hamiltonian::H1, &x, &a).unwrap(), want);
            assert_eq!(eval_h(Hamiltonian::Hvi, &x, &a).unwrap(), want);
            let v = vector_field(1, &x, &a).unwrap();
            assert_eq!(v[0], -(&a.t1) / (&a.s1 - int(1)));
            assert_eq!(v[1], int(0));
        }
    }

    #[test]
    fn hvi_value_at_q_zero() {
        let mut a = ParamVector::from_ints([3, 5, 7, 1, 11, 13, 2, 19]);
        let x = [int(0), int(4), int(3), int(9)];
        assert_eq!(eval_h(Hamiltonian::Hvi, &x, &a).unwrap(), int(-3));
        a.s1 = int(1);
        assert_eq!(eval_h(Hamiltonian::Hvi, &x, &a), Err(HamError::ExcludedTime("s1-1")));
    }

    #[test]
    fn cleared_h1_is_polynomial_in_the_coordinates() {
        let x = ["q1", "q2", "p1", "p2"].map(RatFunc::var);
        let h = h1_cleared(&x, &ParamVector::symbolic()).unwrap();
        for v in ["q1", "q2", "p1", "p2"] {
            assert_eq!(h.denom().degree_in(v), 0);
        }
        assert!(h.denom().vars().iter().all(|s| s.as_ref() == "s1" || s.as_ref() == "s2"));
    }

    #[test]
    fn decomposition_identity() {
        let mut rng = rng();
        let r = hvi_identity_check(&mut rng, 20, 1_000_000, ThetaSlot::Theta1);
        assert!(r.passed() && r.points == 20, "{r:?}");
        let r = hvi_identity_check(&mut rng, 20, 1_000_000, ThetaSlot::Theta2);
        assert!(r.nonzero.is_some());
        // symbolic: the residual is identically zero
        let x = ["q1", "q2", "p1", "p2"].map(RatFunc::var);
        assert!(Field::is_zero(&hvi_residual(&x, &ParamVector::symbolic(), ThetaSlot::Theta1).unwrap()));
    }

    #[test]
    fn p_free_part() {
        let x = [RatFunc::var("q1"), RatFunc::var("q2"), RatFunc::zero(), RatFunc::zero()];
        let a = ParamVector::symbolic();
        let want = a.a0.clone() * (a.a0.clone() + a.kinf.clone()) * RatFunc::var("q1");
        assert_eq!(h1_cleared(&x, &a).unwrap(), want);
        assert_eq!(hvi_decomposition(&x, &a, ThetaSlot::Theta1).unwrap(), want);
    }

    #[test]
    fn swap_symmetry() {
        let r = swap_check(&mut rng(), 20, 1_000_000);
        assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn parameter_free_field_has_only_quadratic_terms() {
        let mut rng = rng();
        let mut a = ParamVector::from_ints([0, 0, 0, 0, 0, 0, 3, 5]);
        a.s1 = int(3);
        let x = random_point(&mut rng, 50);
        let v = vector_field(1, &x, &a).unwrap();
        // every term of H1 is then quadratic in p, so dp/ds is quadratic and
        // dq/ds linear in p: scaling p by 2 scales them by 4 and 2
        let mut y = x.clone();
        y[2] *= int(2);
        y[3] *= int(2);
        let w = vector_field(1, &y, &a).unwrap();
        assert_eq!(w[0], &v[0] * int(2));
        assert_eq!(w[2], &v[2] * int(4));
    }

    #[test]
    fn flows_are_symmetric_on_unit_d() {
        let mut rng = rng();
        for g in SYMMETRY_GENERATORS {
            let r = symmetry_check(g, &mut rng, 20, 1_000_000, ParamSampling::UnitD);
            assert!(r.passed() && r.points == 20, "{g}: {r:?}");
        }
    }

    #[test]
    fn off_unit_d_only_the_s_dependent_maps_break() {
        let mut rng = rng();
        for g in SYMMETRY_GENERATORS {
            let r = symmetry_check(g, &mut rng, 5, 1000, ParamSampling::Free);
            let expect_fail = matches!(g, Generator::Wk0 | Generator::Wa0);
            assert_eq!(r.nonzero.is_some(), expect_fail, "{g}");
        }
        assert_eq!(
            symmetry_residual(Generator::S1, 1, &random_point(&mut rng, 9), &ParamVector::random(&mut rng, 9)),
            Err(HamError::Unsupported(Generator::S1))
        );
        let _ = sym("q1");
    }
}
