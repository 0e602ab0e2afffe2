//! The blow-up atlas: one chart per center, written as maps to and from the
//! affine base coordinates `(q1, q2, r1, r2)`.

use crate::bmap::{q12, q12s, r12, ParamVector, Point};
use crate::exact::Field;

pub const CHART_COUNT: usize = 21;

/// One chart `U_k` of the blow-up along `C_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlowupChart {
    pub index: usize,
    pub coords: [&'static str; 4],
    /// Position in `coords` of the coordinate whose vanishing is `E_k`.
    pub exceptional: usize,
    /// Chart whose coordinates define the center (`C8` sits in `U7`).
    pub prior: Option<usize>,
    pub center: &'static str,
    /// Chart coordinates as functions of the base.
    pub tuple: &'static str,
    /// True for charts not written out in the source data.
    pub derived: bool,
}

macro_rules! chart {
    ($k:expr, [$($c:expr),*], $e:expr, $p:expr, $center:expr, $tuple:expr, $derived:expr) => {
        BlowupChart { index: $k, coords: [$($c),*], exceptional: $e, prior: $p, center: $center, tuple: $tuple, derived: $derived }
    };
}

pub fn chart(k: usize) -> Option<BlowupChart> {
    Some(match k {
        1 => chart!(1, ["u1", "q2", "v1", "r2"], 0, None, "q1 = r1 = 0", "(q1, q2, r1/q1, r2)", false),
        2 => chart!(2, ["u2", "q2", "v2", "r2"], 0, None, "q1 = r1 - t1 = 0", "(q1, q2, (r1 - t1)/q1, r2)", false),
        3 => chart!(3, ["q1", "u3", "r1", "v3"], 1, None, "q2 = r2 = 0", "(q1, q2, r1, r2/q2)", false),
        4 => chart!(4, ["q1", "u4", "r1", "v4"], 1, None, "q2 = r2 - t2 = 0", "(q1, q2, r1, (r2 - t2)/q2)", false),
        5 => chart!(5, ["u5", "q21", "r1", "v5"], 0, None, "Q0 = R12 = 0", "(1/q1, q2/q1, r1, q1 R12)", false),
        6 => chart!(6, ["u6", "q21", "r1", "v6"], 0, None, "Q0 = R12 + kI = 0", "(1/q1, q2/q1, r1, q1 (R12 + kI))", false),
        7 => chart!(7, ["q1", "u7", "v7", "w7"], 1, None, "R0 = Q12 = A12 = 0", "(q1, 1/r1, Q12 r1, A12 r1)", false),
        8 => chart!(8, ["q1", "u8", "v8", "w7"], 1, Some(7), "u7 = v7 - k1 q1 = 0", "(q1, 1/r1, (v7 - k1 q1) r1, w7)", false),
        9 => chart!(9, ["q1", "u9", "v9", "w9"], 1, None, "R0 = Q12s = A12s = 0", "(q1, 1/r1, Q12s r1, A12s r1)", false),
        10 => chart!(10, ["q1", "u10", "v10", "w9"], 1, Some(9), "u9 = v9 - k0 q1/s1 = 0", "(q1, 1/r1, (v9 - k0 q1/s1) r1, w9)", false),
        11 => chart!(11, ["u11", "v11", "r1", "r2"], 0, None, "Q0 = Q2 = 0", "(1/q1, q2, r1, r2)", false),
        12 => chart!(12, ["u12", "v12", "r1", "r2"], 0, None, "Q0 = Q1 = 0", "(1/q2, q1, r1, r2)", false),
        13 => chart!(13, ["u13", "v13", "r1", "r2"], 0, None, "q1 = q2 = 0", "(q1, q2/q1, r1, r2)", false),
        14 => chart!(14, ["x14", "w14", "v14", "u14"], 3, None, "q1 = q2 - 1 = R0 = R1 = 0", "(q1 r2, (q2 - 1) r2, r1, 1/r2)", false),
        15 => chart!(15, ["x15", "w15", "v15", "u15"], 3, None, "q1 = q2/s2 - 1 = R0 = R1 = 0", "(q1 r2, (q2/s2 - 1) r2, r1, 1/r2)", false),
        16 => chart!(16, ["x16", "w16", "v16", "u16"], 3, None, "q2 = q1 - 1 = R0 = R2 = 0", "(q2 r1, (q1 - 1) r1, r2, 1/r1)", false),
        17 => chart!(17, ["x17", "w17", "v17", "u17"], 3, None, "q2 = q1/s1 - 1 = R0 = R2 = 0", "(q2 r1, (q1/s1 - 1) r1, r2, 1/r1)", false),
        18 => chart!(18, ["x18", "w18", "v18", "u18"], 3, None, "Q0 = Q1 + Q2 = R0 = R1 + R2 = 0", "(r1/q1, (q2/q1 + 1) r1, r2 + r1, 1/r1)", false),
        19 => chart!(19, ["x19", "w19", "v19", "u19"], 3, None, "Q0 = Q1/s1 + Q2/s2 = R0 = R1 + R2 = 0", "(r1/q1, (q2/q1 + s2/s1) r1, r2 + r1, 1/r1)", false),
        20 => chart!(20, ["v20", "w20", "u20", "r21"], 2, None, "q1 + c1 = q2 + c2 = R0 = 0", "((q1 + c1) r1, (q2 + c2) r1, 1/r1, r2/r1)", false),
        21 => chart!(
            21,
            ["v21", "w21", "u21", "r21"],
            2,
            None,
            "R0 = 0, X (1 + r21)^2 = 1, Y = r21^2 X  with X = -c1 q1/s1, Y = -c2 q2/s2, r21 = R2/R1",
            "((X - 1/(1 + r21)^2) r1, (Y - r21^2/(1 + r21)^2) r1, 1/r1, r2/r1)",
            true
        ),
        _ => return None,
    })
}

/// `c1 = s1(s2−1)/(s1−s2)` and `c2 = s2(s1−1)/(s2−s1)`; the point
/// `(q1, q2) = (−c1, −c2)` is where `Q12 = Q12s = 0` meet.
pub fn c20_offsets<F: Field>(a: &ParamVector<F>) -> Option<(F, F)> {
    let one = F::one();
    let c1 = (a.s1.clone() * (a.s2.clone() - one.clone())).checked_div(&(a.s1.clone() - a.s2.clone()))?;
    let c2 = (a.s2.clone() * (a.s1.clone() - one)).checked_div(&(a.s2.clone() - a.s1.clone()))?;
    Some((c1, c2))
}

fn inv<F: Field>(x: &F) -> Option<F> {
    x.recip()
}

/// Chart coordinates to base coordinates `(q1, q2, r1, r2)`. `None` when the
/// formula divides by something that vanishes.
pub fn to_base<F: Field>(k: usize, c: &Point<F>, a: &ParamVector<F>) -> Option<Point<F>> {
    let [c0, c1, c2, c3] = c.clone();
    let one = F::one();
    Some(match k {
        1 => [c0.clone(), c1, c0 * c2, c3],
        2 => [c0.clone(), c1, a.t1.clone() + c0 * c2, c3],
        3 => [c0, c1.clone(), c2, c1 * c3],
        4 => [c0, c1.clone(), c2, a.t2.clone() + c1 * c3],
        5 | 6 => {
            let q1 = inv(&c0)?;
            let q2 = c1.checked_div(&c0)?;
            let shift = if k == 6 { a.kinf.clone() } else { F::zero() };
            let r2 = c3 * c0 - c2.clone() - a.a0.clone() - shift;
            [q1, q2, c2, r2]
        }
        7 => {
            let (q1, u, v, w) = (c0, c1, c2, c3);
            let r1 = inv(&u)?;
            let q2 = one - q1.clone() + v * u.clone();
            let r2 = (q2.checked_div(&q1)? - w * u.clone()).checked_div(&u)?;
            [q1, q2, r1, r2]
        }
        8 => {
            let v7 = a.k1.clone() * c0.clone() + c2 * c1.clone();
            return to_base(7, &[c0, c1, v7, c3], a);
        }
        9 => {
            let (q1, u, v, w) = (c0, c1, c2, c3);
            let r1 = inv(&u)?;
            let q2 = a.s2.clone() * (one + v * u.clone() - q1.checked_div(&a.s1)?);
            let ratio = (a.s1.clone() * q2.clone()).checked_div(&(a.s2.clone() * q1.clone()))?;
            let r2 = (ratio - w * u.clone()).checked_div(&u)?;
            [q1, q2, r1, r2]
        }
        10 => {
            let v9 = (a.k0.clone() * c0.clone()).checked_div(&a.s1)? + c2 * c1.clone();
            return to_base(9, &[c0, c1, v9, c3], a);
        }
        11 => [inv(&c0)?, c1, c2, c3],
        12 => [c1, inv(&c0)?, c2, c3],
        13 => [c0.clone(), c0 * c1, c2, c3],
        14 | 15 => {
            let (x, w, v, u) = (c0, c1, c2, c3);
            let s = if k == 15 { a.s2.clone() } else { one.clone() };
            [x * u.clone(), s * (one + w * u.clone()), v, inv(&u)?]
        }
        16 | 17 => {
            let (x, w, v, u) = (c0, c1, c2, c3);
            let s = if k == 17 { a.s1.clone() } else { one.clone() };
            [s * (one + w * u.clone()), x * u.clone(), inv(&u)?, v]
        }
        18 | 19 => {
            let (x, w, v, u) = (c0, c1, c2, c3);
            let r1 = inv(&u)?;
            let q1 = inv(&(x * u.clone()))?;
            let shift = if k == 19 { a.s2.clone().checked_div(&a.s1)? } else { one };
            let q2 = q1.clone() * (w * u - shift);
            [q1, q2, r1.clone(), v - r1]
        }
        20 => {
            let (v, w, u, rho) = (c0, c1, c2, c3);
            let (e1, e2) = c20_offsets(a)?;
            let r1 = inv(&u)?;
            [v * u.clone() - e1, w * u.clone() - e2, r1.clone(), rho * r1]
        }
        21 => {
            let (v, w, u, rho) = (c0, c1, c2, c3);
            let (e1, e2) = c20_offsets(a)?;
            let r1 = inv(&u)?;
            let d = (one.clone() + rho.clone()).square();
            let x = inv(&d)? + v * u.clone();
            let y = rho.square().checked_div(&d)? + w * u;
            // X = −c1 q1/s1, Y = −c2 q2/s2
            let q1 = -(x * a.s1.clone()).checked_div(&e1)?;
            let q2 = -(y * a.s2.clone()).checked_div(&e2)?;
            [q1, q2, r1.clone(), rho * r1]
        }
        _ => return None,
    })
}

/// Base coordinates to chart coordinates, the defining tuple of each chart.
pub fn from_base<F: Field>(k: usize, x: &Point<F>, a: &ParamVector<F>) -> Option<Point<F>> {
    let [q1, q2, r1, r2] = x.clone();
    let one = F::one();
    Some(match k {
        1 => [q1.clone(), q2, r1.checked_div(&q1)?, r2],
        2 => [q1.clone(), q2, (r1 - a.t1.clone()).checked_div(&q1)?, r2],
        3 => [q1, q2.clone(), r1, r2.checked_div(&q2)?],
        4 => [q1, q2.clone(), r1, (r2 - a.t2.clone()).checked_div(&q2)?],
        5 | 6 => {
            let shift = if k == 6 { a.kinf.clone() } else { F::zero() };
            let v = q1.clone() * (r12(&r1, &r2, a) + shift);
            [inv(&q1)?, q2.checked_div(&q1)?, r1, v]
        }
        7 | 8 => {
            let u = inv(&r1)?;
            let v7 = q12(&q1, &q2) * r1.clone();
            let a12 = q2.checked_div(&q1)? - r2.checked_div(&r1)?;
            let w7 = a12 * r1.clone();
            if k == 7 {
                [q1, u, v7, w7]
            } else {
                let v8 = (v7 - a.k1.clone() * q1.clone()) * r1;
                [q1, u, v8, w7]
            }
        }
        9 | 10 => {
            let u = inv(&r1)?;
            let v9 = q12s(&q1, &q2, a)? * r1.clone();
            let a12s = (a.s1.clone() * q2).checked_div(&(a.s2.clone() * q1.clone()))? - r2.checked_div(&r1)?;
            let w9 = a12s * r1.clone();
            if k == 9 {
                [q1, u, v9, w9]
            } else {
                let v10 = (v9 - (a.k0.clone() * q1.clone()).checked_div(&a.s1)?) * r1;
                [q1, u, v10, w9]
            }
        }
        11 => [inv(&q1)?, q2, r1, r2],
        12 => [inv(&q2)?, q1, r1, r2],
        13 => [q1.clone(), q2.checked_div(&q1)?, r1, r2],
        14 | 15 => {
            let q2s = if k == 15 { q2.checked_div(&a.s2)? } else { q2 };
            [q1 * r2.clone(), (q2s - one) * r2.clone(), r1, inv(&r2)?]
        }
        16 | 17 => {
            let q1s = if k == 17 { q1.checked_div(&a.s1)? } else { q1 };
            [q2 * r1.clone(), (q1s - one) * r1.clone(), r2, inv(&r1)?]
        }
        18 | 19 => {
            let shift = if k == 19 { a.s2.checked_div(&a.s1)? } else { one };
            [r1.checked_div(&q1)?, (q2.checked_div(&q1)? + shift) * r1.clone(), r2 + r1.clone(), inv(&r1)?]
        }
        20 => {
            let (e1, e2) = c20_offsets(a)?;
            [(q1 + e1) * r1.clone(), (q2 + e2) * r1.clone(), inv(&r1)?, r2.checked_div(&r1)?]
        }
        21 => {
            let (e1, e2) = c20_offsets(a)?;
            let rho = r2.checked_div(&r1)?;
            let d = (one + rho.clone()).square();
            let x = -(e1 * q1).checked_div(&a.s1)?;
            let y = -(e2 * q2).checked_div(&a.s2)?;
            [(x - inv(&d)?) * r1.clone(), (y - rho.square().checked_div(&d)?) * r1.clone(), inv(&r1)?, rho]
        }
        _ => return None,
    })
}
