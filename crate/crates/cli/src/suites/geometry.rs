//! Suites that recompute Picard actions from the charts.

use garnier_core::generator::Generator;
use garnier_core::geom::{
    assemble_certificate, c21_center, contraction_witnesses, intersection_suite, ContractionWitness,
    PseudoIsoCertificate, PullbackReport,
};
use garnier_core::lattice::{anticanonical, pairing, table_action, CurveClass, DivisorClass, Model};
use garnier_core::Rational;
use serde_json::{json, Value};

use super::{Session, Suite};
use crate::report::{class, lattice_map, Check};

/// Columns where the two maps differ, as `label: table -> computed`.
fn column_diff(table: &garnier_core::lattice::BiLatticeMap, computed: &PullbackReport) -> Vec<String> {
    let labels = table.model.divisor_basis();
    computed
        .columns
        .iter()
        .enumerate()
        .filter(|(j, c)| table.image_of_basis(*j) != c.class)
        .map(|(j, c)| format!("{}: table {} vs computed {}", labels[j], table.image_of_basis(j), c.class))
        .collect()
}

fn landings(r: &PullbackReport) -> Value {
    Value::Array(
        r.columns
            .iter()
            .flat_map(|c| c.components.iter().map(move |p| json!({ "column": c.source, "divisor": p.divisor, "landing": p.landing.describe() })))
            .collect(),
    )
}

pub fn tables(s: &mut Session) -> Vec<Check> {
    let suite = "tables";
    let mut out = Vec::new();
    for model in s.models() {
        let criterion = if model == Model::X10 { 1 } else { 2 };
        for g in Session::generators(model) {
            let c = Check::new(suite, format!("{model}/{}", g.name()), Some(criterion));
            let table = match table_action(g, model) {
                Ok(t) => t,
                Err(e) => {
                    out.push(c.failed(e));
                    continue;
                }
            };
            out.push(match s.pullback(g, model, false) {
                Ok(rep) => {
                    let computed = match rep.lattice_map() {
                        Ok(m) => m,
                        Err(e) => {
                            out.push(c.failed(e));
                            continue;
                        }
                    };
                    let diff = column_diff(&table, rep);
                    let mut c = c.outcome(
                        computed.divisor_matrix == table.divisor_matrix && !rep.unstable(),
                        lattice_map(&table),
                        json!({ "map": lattice_map(&computed), "landings": landings(rep) }),
                    );
                    if !diff.is_empty() {
                        c = c.note(diff.join("; "));
                    } else if rep.unstable() {
                        c = c.note("some multiplicities varied between germs");
                    }
                    c
                }
                Err(e) => c.failed(e),
            });
        }
    }
    out
}

fn witness_json(w: &[ContractionWitness]) -> Value {
    Value::Array(
        w.iter().map(|w| json!({ "divisor": w.divisor, "image": w.image, "image_dimension": w.image_dimension })).collect(),
    )
}

fn certificate_json(c: &PseudoIsoCertificate) -> Value {
    json!({
        "mutually_inverse": c.mutually_inverse,
        "pairing_preserved": c.pairing_preserved,
        "anticanonical_fixed": c.anticanonical_fixed,
        "witnesses": witness_json(&c.witnesses),
    })
}

fn certificate(s: &mut Session, g: Generator, model: Model, task: u64) -> Result<PseudoIsoCertificate, String> {
    let forward = s.pullback(g, model, false)?.clone();
    let backward = s.pullback(g, model, true)?.clone();
    let mut rng = s.rng(Suite::Theorem1, task);
    let witnesses = contraction_witnesses(g, model, &s.params, &mut rng, s.config.budget()).map_err(|e| e.to_string())?;
    Ok(assemble_certificate(forward, backward, witnesses))
}

fn lattice_checks(suite: &str, model: Model) -> Vec<Check> {
    let n = model.rank();
    let mut out = Vec::new();
    let want = if model == Model::X10 { 12 } else { 23 };
    out.push(Check::new(suite, format!("{model} rank"), Some(3)).compare(json!(want), json!(n)));
    let mut bad = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let want = if i != j { 0 } else if i < 2 { 1 } else { -1 };
            let got = pairing(&DivisorClass::basis(model, i), &CurveClass::basis(model, j)).expect("same model");
            if got != Rational::from_integer(want.into()) {
                bad.push(format!("({i},{j})"));
            }
        }
    }
    out.push(
        Check::new(suite, format!("{model} pairing <H_i,h_j> = delta_ij, <E_k,e_l> = -delta_kl"), Some(3))
            .compare(json!([]), json!(bad)),
    );
    out
}

pub fn theorem1(s: &mut Session) -> Vec<Check> {
    let suite = "theorem1";
    let mut out = Vec::new();
    let budget = s.config.budget();

    let want_k = DivisorClass::parse(Model::X10, "3Hq+3Hr-E1-E2-E3-E4-E5-E6-2E7-E8-2E9-E10").expect("literal");
    for model in s.models() {
        out.extend(lattice_checks(suite, model));
        if model == Model::X10 {
            out.push(Check::new(suite, "X10 anticanonical class", Some(3)).compare(class(&want_k), class(&anticanonical(model))));
        }
        let mut rng = s.rng(Suite::Theorem1, model as u64);
        let c = Check::new(suite, format!("{model} center dimensions and -K from the charts"), if model == Model::X10 { Some(3) } else { None });
        out.push(match intersection_suite(model, &s.params, &mut rng, budget) {
            Some(r) => c.outcome(
                r.passed(),
                json!({ "center_dims": model.center_dims(), "anticanonical": class(&anticanonical(model)) }),
                json!({ "center_dims": r.center_dims, "anticanonical": class(&r.anticanonical) }),
            ),
            None => c.failed("center dimensions could not be measured"),
        });
    }

    for (mi, model) in s.models().into_iter().enumerate() {
        for g in Session::generators(model) {
            let task = 16 + mi as u64 * 16 + g as u64;
            let c = Check::new(suite, format!("{model}/{} is a pseudo-isomorphism", g.name()), Some(6));
            out.push(match certificate(s, g, model, task) {
                Ok(cert) => c.outcome(cert.passed(), json!({ "passed": true }), certificate_json(&cert)),
                Err(e) => c.failed(e),
            });
        }
    }

    if s.models().contains(&Model::X10) {
        let g = Generator::Wa0;
        let mut rng = s.rng(Suite::Theorem1, 64);
        let c = Check::new(suite, "X10/wa0 contracts Q0=0 into Q1=Q2=0", Some(6));
        out.push(match contraction_witnesses(g, Model::X10, &s.params, &mut rng, budget) {
            Ok(w) => {
                let found = w.iter().any(|w| w.divisor == "Q0=0" && w.image == "Q1=Q2=0");
                c.outcome(found, json!({ "divisor": "Q0=0", "image": "Q1=Q2=0" }), witness_json(&w))
            }
            Err(e) => c.failed(e),
        });
    }

    if s.models().contains(&Model::X21) {
        let mut rng = s.rng(Suite::Theorem1, 65);
        let c = Check::new(suite, "C21 is the image of C20 and E20, E21 are exchanged", None);
        out.push(match c21_center(&s.params, &mut rng, 8, budget) {
            Ok(r) => c.outcome(
                r.consistent(),
                json!({ "equations_hold": true, "dimension": 1, "forward": "E21", "backward": "E20" }),
                json!({
                    "equations_hold": r.equations_hold,
                    "dimension": r.dimension,
                    "forward": r.forward.describe(),
                    "backward": r.backward.describe(),
                }),
            ),
            Err(e) => c.failed(e),
        });
    }
    out
}
