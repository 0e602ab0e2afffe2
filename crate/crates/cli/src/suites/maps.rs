//! Randomized exact checks on the maps themselves.

use garnier_core::bmap::{consistency_qp_qr, genericity_preserved, involution_check, Coords, PointCheck};
use garnier_core::generator::Generator;
use garnier_core::ham::{hvi_identity_check, swap_check, symmetry_check, ParamSampling, ResidualCheck, ThetaSlot, SYMMETRY_GENERATORS};
use serde_json::{json, Value};

use super::{Session, Suite};
use crate::config::{INVOLUTION_TRIALS, SYMMETRY_TRIALS};
use crate::report::{params, point, rats, Check};

const BOUND: i64 = 100;

fn point_check(c: Check, r: &PointCheck, coords: Coords) -> Check {
    let actual = match &r.counterexample {
        Some(ce) => json!({ "points": r.points, "counterexample": { "point": point(&ce.0, coords.names()), "params": params(&ce.1) } }),
        None => json!({ "points": r.points, "exhausted": r.exhausted }),
    };
    c.outcome(r.passed(), json!({ "points": r.points, "counterexample": null }), actual)
}

fn residual_check(c: Check, r: &ResidualCheck, trials: usize) -> Check {
    let actual = match &r.nonzero {
        Some((x, a, res)) => json!({
            "points": r.points,
            "residual": rats(res),
            "point": point(x, Coords::Qp.names()),
            "params": params(a),
        }),
        None => json!({ "points": r.points, "residual": 0, "exhausted": r.exhausted }),
    };
    c.outcome(r.passed() && r.points >= trials, json!({ "points": trials, "residual": 0 }), actual)
}

pub fn involutions(s: &mut Session) -> Vec<Check> {
    let suite = "involutions";
    let trials = s.config.trials_or(INVOLUTION_TRIALS);
    let mut out = Vec::new();
    for (i, g) in Generator::ALL.into_iter().enumerate() {
        for (k, coords) in [Coords::Qr, Coords::Qp].into_iter().enumerate() {
            let mut rng = s.rng(Suite::Involutions, (i * 4 + k) as u64);
            let r = involution_check(g, coords, &mut rng, trials, BOUND);
            out.push(point_check(Check::new(suite, format!("{} is an involution in ({coords})", g.name()), Some(8)), &r, coords));
        }
        let mut rng = s.rng(Suite::Involutions, (i * 4 + 2) as u64);
        let r = consistency_qp_qr(g, &mut rng, trials, BOUND);
        out.push(point_check(Check::new(suite, format!("{} agrees in (q,p) and (q,r)", g.name()), Some(8)), &r, Coords::Qp));
    }
    let mut rng = s.rng(Suite::Involutions, 1000);
    let r = genericity_preserved(&mut rng, trials, BOUND);
    let failures: Vec<Value> = r.failures.iter().take(5).map(|(g, a)| json!({ "generator": g.name(), "params": params(a) })).collect();
    out.push(Check::new(suite, "every generator preserves genericity", Some(8)).outcome(
        r.passed(),
        json!({ "samples": trials, "failures": 0 }),
        json!({ "samples": r.samples, "failures": r.failures.len(), "first_failures": failures }),
    ));
    out
}

pub fn hamiltonian(s: &mut Session) -> Vec<Check> {
    let suite = "hamiltonian";
    let trials = s.config.trials_or(SYMMETRY_TRIALS);
    let mut out = Vec::new();

    let mut rng = s.rng(Suite::Hamiltonian, 0);
    let r = hvi_identity_check(&mut rng, trials, BOUND, ThetaSlot::Theta1);
    out.push(residual_check(Check::new(suite, "H1 restricted to q2 = p2 = 0 is H_VI", Some(9)), &r, trials));

    for (i, g) in SYMMETRY_GENERATORS.into_iter().enumerate() {
        // the flows are symmetric under w_κ0 and w_α0 only on d = 1
        let sampling = if matches!(g, Generator::Wk0 | Generator::Wa0) { ParamSampling::UnitD } else { ParamSampling::Free };
        let mut rng = s.rng(Suite::Hamiltonian, 1 + i as u64);
        let r = symmetry_check(g, &mut rng, trials, BOUND, sampling);
        let mut c = residual_check(Check::new(suite, format!("both flows are symmetric under {}", g.name()), Some(9)), &r, trials);
        if sampling == ParamSampling::UnitD {
            c = c.note("parameters sampled on d = 1");
        }
        out.push(c);
    }

    let mut rng = s.rng(Suite::Hamiltonian, 100);
    let r = swap_check(&mut rng, trials, BOUND);
    out.push(residual_check(Check::new(suite, "H2 is H1 with the indices swapped", Some(9)), &r, trials));
    out
}
