use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::certify::*;
use super::pullback::*;
use super::*;
use crate::bmap::ParamVector;
use crate::exact::{int, Field, MultiPoly, RatFunc, Rational};
use crate::generator::Generator;
use crate::lattice::{table_action, DivisorClass, Model, X21_CENTER_DIMS};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn params(r: &mut ChaCha8Rng) -> ParamVector<Rational> {
    ParamVector::random(r, 30)
}

fn d(model: Model, s: &str) -> DivisorClass {
    DivisorClass::parse(model, s).unwrap()
}

#[test]
fn every_chart_inverts_its_tuple() {
    let mut r = rng(1);
    let a = params(&mut r);
    for k in 1..=CHART_COUNT {
        assert!(pullback::chart_round_trip(k, &a, &mut r, 100), "U{k}");
    }
}

#[test]
fn chart_formulas_match_hand_inversions() {
    let a = ParamVector::<RatFunc>::symbolic();
    let v = |s: &str| RatFunc::var(s);
    let x = to_base(1, &[v("u1"), v("q2"), v("v1"), v("r2")], &a).unwrap();
    assert_eq!(x[2], v("u1") * v("v1"));
    let x = to_base(7, &[v("q1"), v("u7"), v("v7"), v("w7")], &a).unwrap();
    let q2 = RatFunc::from_rational(&int(1)) - v("q1") + v("v7") * v("u7");
    assert_eq!(x[1], q2);
    assert_eq!(x[3], (q2.checked_div(&v("q1")).unwrap() - v("w7") * v("u7")).checked_div(&v("u7")).unwrap());
    let x = to_base(14, &[v("x14"), v("w14"), v("v14"), v("u14")], &a).unwrap();
    assert_eq!(x[0], v("x14") * v("u14"));
    assert_eq!(x[3], v("u14").recip().unwrap());
    assert_eq!(chart(14).unwrap().exceptional, 3);
    assert_eq!(chart(8).unwrap().prior, Some(7));
    assert!(chart(22).is_none());
}

#[test]
fn center_dimensions_from_the_atlas() {
    let mut r = rng(2);
    let a = params(&mut r);
    assert_eq!(center_dimensions(&a, &mut r, Budget::default()).unwrap(), X21_CENTER_DIMS.to_vec());
}

#[test]
fn intersection_suites() {
    let mut r = rng(3);
    let a = params(&mut r);
    for m in [Model::X10, Model::X21] {
        let s = intersection_suite(m, &a, &mut r, Budget::default()).unwrap();
        assert!(s.passed(), "{m}");
    }
    let x10 = intersection_suite(Model::X10, &a, &mut r, Budget::default()).unwrap();
    assert_eq!(x10.anticanonical, d(Model::X10, "3Hq+3Hr-E1-E2-E3-E4-E5-E6-2E7-E8-2E9-E10"));
    let p = intersection_suite(Model::P2xP2, &a, &mut r, Budget::default()).unwrap();
    assert_eq!(p.rank, 2);
    assert_eq!(p.anticanonical, d(Model::P2xP2, "3Hq+3Hr"));
}

#[test]
fn coordinate_leaves_have_their_classes() {
    let mut r = rng(4);
    let a = params(&mut r);
    for (eq, class) in [("q1", "Hq-E1-E2"), ("q2", "Hq-E3-E4")] {
        let hs = Hypersurface::new(MultiPoly::var(eq));
        let (c, _, unstable) = class_of(&hs, Model::X10, &a, &mut r, Budget::with_trials(3)).unwrap();
        assert_eq!(c, d(Model::X10, class));
        assert!(!unstable);
    }
}

#[test]
fn wk1_pulls_hr_back_through_e7_e8() {
    let mut r = rng(5);
    let a = params(&mut r);
    let rep = matrix_of(Generator::Wk1, Model::X10, &a, &mut r, Budget::default()).unwrap();
    let col = &rep.columns[1];
    assert_eq!(col.class, d(Model::X10, "Hq+Hr-E7-E8"));
    assert_eq!(col.bidegree(), (int(1), int(1)));
    let m = col.multiplicities();
    assert_eq!((m[6].clone(), m[7].clone()), (int(1), int(1)));
    assert!(m.iter().enumerate().all(|(i, x)| i == 6 || i == 7 || *x == int(0)));
    // on Ê7 the section vanishes to order one in the chart coordinate u7
    assert_eq!(col.components[0].multiplicities[6], 1);
}

#[test]
fn simple_rows_of_the_x10_table() {
    let mut r = rng(6);
    for g in [Generator::S4, Generator::Wt2, Generator::WkInf] {
        let a = params(&mut r);
        let rep = matrix_of(g, Model::X10, &a, &mut r, Budget::default()).unwrap();
        assert_eq!(rep.matrix(), table_action(g, Model::X10).unwrap().divisor_matrix, "{}", g.name());
        assert!(!rep.unstable());
    }
}

#[test]
fn wa0_hq_on_x21() {
    let mut r = rng(7);
    let a = params(&mut r);
    let rep = matrix_of(Generator::Wa0, Model::X21, &a, &mut r, Budget::default()).unwrap();
    assert_eq!(rep.columns[0].class, d(Model::X21, "2Hq+2Hr-E1-E2-E3-E4-E5-E6-E11-E12-E13-E14-E15-E16-E17-E18-E19"));
    // the table leaves E14..E19 fixed; the map exchanges them in pairs
    let moved: Vec<(usize, usize)> = (14..=19)
        .map(|k| match &rep.columns[k + 1].components[0].landing {
            Landing::Exceptional(j) => (k, *j),
            other => panic!("E{k}: {other:?}"),
        })
        .collect();
    assert_eq!(moved, [(14, 15), (15, 14), (16, 17), (17, 16), (18, 19), (19, 18)]);
}

#[test]
fn s2_rows_on_x21() {
    let mut r = rng(8);
    let a = params(&mut r);
    let rep = matrix_of(Generator::S2, Model::X21, &a, &mut r, Budget::with_trials(2)).unwrap();
    let col = |k: usize| rep.columns[k + 1].class.clone();
    assert_eq!(col(11), DivisorClass::e(Model::X21, 16));
    assert_eq!(col(12), DivisorClass::e(Model::X21, 14));
    assert_eq!(col(19), DivisorClass::e(Model::X21, 20));
}

#[test]
fn certificates() {
    let mut r = rng(9);
    for (g, m, pass) in [
        (Generator::Wt1, Model::X10, true),
        (Generator::S4, Model::X10, true),
        (Generator::Wa0, Model::X10, false),
        (Generator::Wa0, Model::X21, true),
    ] {
        let a = params(&mut r);
        let c = pseudo_iso_certificate(g, m, &a, &mut r, Budget::with_trials(2)).unwrap();
        assert_eq!(c.passed(), pass, "{} on {m}", g.name());
        assert_eq!(c.witnesses.is_empty(), pass);
    }
}

#[test]
fn wa0_contracts_q0_on_x10_only() {
    let mut r = rng(10);
    let a = params(&mut r);
    let w = contraction_witnesses(Generator::Wa0, Model::X10, &a, &mut r, Budget::default()).unwrap();
    let q0 = w.iter().find(|w| w.divisor == "Q0=0").expect("Q0=0 is contracted");
    assert_eq!(q0.image, "Q1=Q2=0");
    assert_eq!(q0.image_dimension, 2);
    assert!(contraction_witnesses(Generator::Wa0, Model::X21, &a, &mut r, Budget::default()).unwrap().is_empty());
    assert!(contraction_witnesses(Generator::S4, Model::X10, &a, &mut r, Budget::default()).unwrap().is_empty());
}

#[test]
fn c21_is_the_image_of_c20() {
    let mut r = rng(11);
    let a = params(&mut r);
    let rep = c21_center(&a, &mut r, 8, Budget::default()).unwrap();
    assert!(rep.consistent(), "{rep:?}");
}

#[test]
fn c21_equations_reject_c20() {
    let mut r = rng(12);
    let a = params(&mut r);
    let (c1, c2) = charts::c20_offsets(&a).unwrap();
    let one = int(1);
    let p = [[one.clone(), -c1, -c2], [int(0), one, int(3)]];
    assert!(!on_c21(&p, &a));
}

#[test]
fn no_charts_on_the_base() {
    let mut r = rng(13);
    let a = params(&mut r);
    assert!(matches!(matrix_of(Generator::S1, Model::P2xP2, &a, &mut r, Budget::with_trials(1)), Err(GeomError::Model(_))));
}

#[test]
fn interpolation_finds_a_quadric() {
    let mut r = rng(14);
    // points of q1 r1 + q2 r2 = 1 in homogeneous form
    let mut sample = |r: &mut ChaCha8Rng| {
        let q1 = crate::exact::random_rational(r, 50);
        let q2 = crate::exact::random_rational(r, 50);
        let r1 = crate::exact::random_rational(r, 50);
        let r2 = (int(1) - &q1 * &r1) / &q2;
        Some([[int(1), q1, q2], [int(1), r1, r2]])
    };
    let hs = fit_hypersurface(&mut sample, &mut r).unwrap();
    assert_eq!(hs.bidegree, (1, 1));
    assert_eq!(hs.equation.term_count(), 3);
}
