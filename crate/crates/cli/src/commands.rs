//! `act` and `apply`: word-level queries outside the suites.

use garnier_core::bmap::{apply_word, param_word, parse_word, BmapError, Coords, ParamVector, Point};
use garnier_core::exact::{parse_rational, RatFunc};
use garnier_core::generator::Generator;
use garnier_core::lattice::{degree_sequence, BiLatticeMap, restrict_to_x10_map, second_differences, shift_vector, word_action, Model, RootDatum};
use garnier_core::Rational;
use serde_json::{json, Map, Value};

use crate::config::{version, ConfigError, RunConfig};
use crate::report::{class, lattice_map, params as params_json, point as point_json, rats};

#[derive(Debug, thiserror::Error)]
pub enum CommandError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    /// The map is undefined at the given data; carries a JSON description.
    #[error("{message}")]
    Map { message: String, detail: Value },
}

impl CommandError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CommandError::Config(_) => 2,
            CommandError::Map { .. } => 1,
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            CommandError::Config(e) => json!({ "error": { "kind": "config", "message": e.to_string() } }),
            CommandError::Map { message, detail } => json!({ "error": { "kind": "map", "message": message, "detail": detail } }),
        }
    }
}

fn word(s: &str) -> Result<Vec<Generator>, ConfigError> {
    parse_word(s).map_err(|e| ConfigError::Input(e.to_string()))
}

fn root_action(m: &BiLatticeMap) -> Value {
    // on X21 the roots are acted on by the block over Hq, Hr, E1..E10
    let (m10, closed) = match m.model {
        Model::X10 => (m.clone(), true),
        Model::X21 => match BiLatticeMap::from_divisor_matrix(Model::X10, m.block(0..12, 0..12)) {
            Ok(b) => (b, restrict_to_x10_map(m).is_some()),
            Err(_) => return json!({ "note": "the 12x12 block is singular" }),
        },
        Model::P2xP2 => return Value::Null,
    };
    let rd = RootDatum::x10();
    let images: [_; 6] = core::array::from_fn(|j| m10.apply(&rd.roots[j]));
    json!({
        "span_preserved": closed,
        "images": images.iter().map(class).collect::<Vec<_>>(),
        "translation_by_delta": shift_vector(&images).map(|k| rats(&k)),
    })
}

/// The composed lattice map of `word` on `model`, its action on the roots,
/// its action on the parameters and optionally `⟨Mⁿ Hq, hq⟩` for `n = 1..=degrees`.
pub fn act(word_str: &str, model: Model, config: &RunConfig, degrees: Option<usize>) -> Result<Value, CommandError> {
    config.validate()?;
    let w = word(word_str)?;
    if model == Model::X10 && w.contains(&Generator::Wa0) {
        return Err(ConfigError::Input("wa0 has no action on X10 (it contracts Q0=0); use --model X21".into()).into());
    }
    let m = word_action(&w, model, config.convention).map_err(|e| ConfigError::Input(e.to_string()))?;
    let symbolic = param_word(&w, &ParamVector::<RatFunc>::symbolic(), config.convention).map_err(map_error)?;
    let mut pa = Map::new();
    for (n, v) in ParamVector::<RatFunc>::NAMES.iter().zip(symbolic.to_array()) {
        pa.insert((*n).into(), Value::String(v.to_string()));
    }
    let mut out = json!({
        "version": version(),
        "config": config.echo(),
        "word": w.iter().map(|g| g.name()).collect::<Vec<_>>(),
        "map": lattice_map(&m),
        "roots": root_action(&m),
        "params": Value::Object(pa),
    });
    if let Some(n) = degrees {
        let seq = degree_sequence(&m, n);
        out["degree_sequence"] = json!({ "values": rats(&seq), "second_differences": rats(&second_differences(&seq)) });
    }
    Ok(out)
}

fn map_error(e: BmapError) -> CommandError {
    let detail = match &e {
        BmapError::Polar { generator, denominator } => {
            json!({ "kind": "polar", "generator": generator.name(), "denominator": denominator })
        }
        BmapError::PolarAtStep { step, generator, denominator } => {
            json!({ "kind": "polar", "step": step, "generator": generator.name(), "denominator": denominator })
        }
        BmapError::NotGeneric(why) => json!({ "kind": "not_generic", "reason": why }),
    };
    CommandError::Map { message: e.to_string(), detail }
}

fn rational_field(v: &Value, what: &str) -> Result<Rational, ConfigError> {
    let bad = || ConfigError::Input(format!("{what}: expected a \"p/q\" string or an integer"));
    match v {
        Value::String(s) => parse_rational(s).map_err(|_| bad()),
        Value::Number(n) => n.as_i64().map(garnier_core::exact::int).ok_or_else(bad),
        _ => Err(bad()),
    }
}

/// Reads `names.len()` rationals from a JSON object keyed by `names` or from
/// a JSON array in that order.
fn rationals(s: &str, names: &[&str], what: &str) -> Result<Vec<Rational>, ConfigError> {
    let v: Value = serde_json::from_str(s).map_err(|e| ConfigError::Input(format!("{what}: {e}")))?;
    match &v {
        Value::Array(items) if items.len() == names.len() => {
            items.iter().zip(names).map(|(x, n)| rational_field(x, &format!("{what}.{n}"))).collect()
        }
        Value::Object(map) => {
            if let Some(k) = map.keys().find(|k| !names.contains(&k.as_str())) {
                return Err(ConfigError::Input(format!("{what}: unknown key `{k}` (expected {})", names.join(", "))));
            }
            names
                .iter()
                .map(|n| {
                    let x = map.get(*n).ok_or_else(|| ConfigError::Input(format!("{what}: missing `{n}`")))?;
                    rational_field(x, &format!("{what}.{n}"))
                })
                .collect()
        }
        _ => Err(ConfigError::Input(format!("{what}: expected an object with keys {} or an array", names.join(", ")))),
    }
}

pub fn parse_point(s: &str, coords: Coords) -> Result<Point<Rational>, ConfigError> {
    let v = rationals(s, &coords.names(), "point")?;
    Ok(core::array::from_fn(|i| v[i].clone()))
}

pub fn parse_params(s: &str) -> Result<ParamVector<Rational>, ConfigError> {
    let v = rationals(s, &ParamVector::<Rational>::NAMES, "params")?;
    Ok(ParamVector::from_array(core::array::from_fn(|i| v[i].clone())))
}

/// Exact image of a point under `word`, threading the parameters.
pub fn apply(word_str: &str, coords: Coords, point: &str, params: &str, config: &RunConfig) -> Result<Value, CommandError> {
    config.validate()?;
    let w = word(word_str)?;
    let x = parse_point(point, coords)?;
    let a = parse_params(params)?;
    a.genericity().map_err(|why| map_error(BmapError::NotGeneric(why)))?;
    let (y, b) = apply_word(&w, coords, &x, &a, config.convention).map_err(map_error)?;
    Ok(json!({
        "version": version(),
        "config": config.echo(),
        "word": w.iter().map(|g| g.name()).collect::<Vec<_>>(),
        "coords": coords.to_string(),
        "point": point_json(&y, coords.names()),
        "params": params_json(&b),
    }))
}
