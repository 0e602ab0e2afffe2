//! Verification suites. Each returns a list of [`Check`]s; [`Session`] holds
//! what several suites share, chiefly the recomputed pullback matrices.

mod algebra;
mod geometry;
mod maps;

use std::collections::BTreeMap;
use std::str::FromStr;

use garnier_core::bmap::{param_act, ParamVector};
use garnier_core::generator::Generator;
use garnier_core::geom::{matrix_of, PullbackReport};
use garnier_core::lattice::Model;
use garnier_core::Rational;

use crate::config::{ConfigError, RunConfig};
use crate::report::{Check, Report};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Suite {
    Figure1,
    Hamiltonian,
    Involutions,
    Tables,
    Theorem1,
    Theorem2,
    Theorem3,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Figure1,
        Suite::Hamiltonian,
        Suite::Involutions,
        Suite::Tables,
        Suite::Theorem1,
        Suite::Theorem2,
        Suite::Theorem3,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Figure1 => "figure1",
            Suite::Hamiltonian => "hamiltonian",
            Suite::Involutions => "involutions",
            Suite::Tables => "tables",
            Suite::Theorem1 => "theorem1",
            Suite::Theorem2 => "theorem2",
            Suite::Theorem3 => "theorem3",
        }
    }

    /// `"all"` expands to every suite.
    pub fn parse_list(s: &str) -> Result<Vec<Suite>, ConfigError> {
        if s == "all" {
            return Ok(Suite::ALL.to_vec());
        }
        let mut out = s.split(',').map(str::parse).collect::<Result<Vec<Suite>, _>>()?;
        out.sort();
        out.dedup();
        Ok(out)
    }
}

impl FromStr for Suite {
    type Err = ConfigError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL.into_iter().find(|x| x.name() == s.trim()).ok_or_else(|| ConfigError::Suite(s.into()))
    }
}

// rng stream layout; every task draws from its own stream
const STREAM_PARAMS: u64 = 1;
const STREAM_SUITE: u64 = 16;
const STREAM_PULLBACK: u64 = 1 << 16;

fn model_index(m: Model) -> u64 {
    match m {
        Model::P2xP2 => 0,
        Model::X10 => 1,
        Model::X21 => 2,
    }
}

fn generator_index(g: Generator) -> u64 {
    Generator::ALL.iter().position(|&x| x == g).expect("listed") as u64
}

/// Shared state of one run.
pub struct Session {
    pub config: RunConfig,
    /// Parameters at which all geometric computations take place.
    pub params: ParamVector<Rational>,
    pullbacks: BTreeMap<(Generator, Model, bool), Result<PullbackReport, String>>,
}

impl Session {
    pub fn new(config: RunConfig) -> Self {
        let params = ParamVector::random(&mut config.rng(STREAM_PARAMS), 30);
        Session { config, params, pullbacks: BTreeMap::new() }
    }

    pub fn models(&self) -> Vec<Model> {
        match self.config.model {
            Some(m) => vec![m],
            None => vec![Model::X10, Model::X21],
        }
    }

    /// Generators whose action on `model` is tabulated.
    pub fn generators(model: Model) -> Vec<Generator> {
        match model {
            Model::X10 => Generator::X10.to_vec(),
            _ => Generator::ALL.to_vec(),
        }
    }

    /// Random stream for a named task inside a suite.
    pub fn rng(&self, suite: Suite, task: u64) -> rand_chacha::ChaCha8Rng {
        self.config.rng(STREAM_SUITE + (suite as u64) * 4096 + task)
    }

    /// Recomputed pullback of `g` on `model`, at the session parameters
    /// (`backward = false`) or at their image under `g`.
    pub fn pullback(&mut self, g: Generator, model: Model, backward: bool) -> Result<&PullbackReport, String> {
        let key = (g, model, backward);
        if !self.pullbacks.contains_key(&key) {
            let stream = STREAM_PULLBACK + generator_index(g) * 8 + model_index(model) * 2 + backward as u64;
            let mut rng = self.config.rng(stream);
            let budget = self.config.budget();
            let result = (|| {
                let a = if backward { param_act(g, &self.params).map_err(|e| e.to_string())? } else { self.params.clone() };
                matrix_of(g, model, &a, &mut rng, budget).map_err(|e| e.to_string())
            })();
            self.pullbacks.insert(key, result);
        }
        self.pullbacks[&key].as_ref().map_err(Clone::clone)
    }

    pub fn run(&mut self, suite: Suite) -> Vec<Check> {
        match suite {
            Suite::Figure1 => algebra::figure1(self),
            Suite::Theorem2 => algebra::theorem2(self),
            Suite::Theorem3 => algebra::theorem3(self),
            Suite::Tables => geometry::tables(self),
            Suite::Theorem1 => geometry::theorem1(self),
            Suite::Involutions => maps::involutions(self),
            Suite::Hamiltonian => maps::hamiltonian(self),
        }
    }
}

/// Runs `suites` under `config` and assembles the report.
pub fn verify(config: &RunConfig, suites: &[Suite]) -> Report {
    let mut session = Session::new(config.clone());
    let mut checks = Vec::new();
    for &s in suites {
        checks.extend(session.run(s));
    }
    Report::new(config, suites.iter().map(|s| s.name().to_string()).collect(), checks)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_lists() {
        assert_eq!(Suite::parse_list("all").unwrap(), Suite::ALL);
        assert_eq!(Suite::parse_list("tables,figure1,tables").unwrap(), [Suite::Figure1, Suite::Tables]);
        assert!(Suite::parse_list("tables,figure2").is_err());
    }

    #[test]
    fn streams_do_not_depend_on_order() {
        let config = RunConfig::default();
        let a = verify(&config, &[Suite::Hamiltonian]);
        let b = verify(&config, &[Suite::Figure1, Suite::Hamiltonian]);
        let tail: Vec<_> = b.checks.iter().filter(|c| c.suite == "hamiltonian").map(|c| c.actual.clone()).collect();
        assert_eq!(a.checks.iter().map(|c| c.actual.clone()).collect::<Vec<_>>(), tail);
    }
}
