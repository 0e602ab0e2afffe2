use garnier_core::geom::Budget;
use garnier_core::lattice::{Convention, Model};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Output {
    Text,
    Json,
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("--trials must be at least 1")]
    Trials,
    #[error("--truncation must lie in 1..=64, got {0}")]
    Truncation(usize),
    #[error("unknown model `{0}` (expected X10 or X21)")]
    Model(String),
    #[error("unknown suite `{0}`")]
    Suite(String),
    #[error("{0}")]
    Input(String),
}

/// Everything a run depends on. Two runs with equal configs produce the same
/// report byte for byte.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub seed: u64,
    /// Overrides every per-check default when set.
    pub trials: Option<usize>,
    pub truncation: usize,
    pub convention: Convention,
    pub output: Output,
    /// Restricts the geometric suites to one model.
    pub model: Option<Model>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: 0,
            trials: None,
            truncation: garnier_core::exact::DEFAULT_TRUNCATION,
            convention: Convention::LeftFirst,
            output: Output::Text,
            model: None,
        }
    }
}

pub const CLASS_TRIALS: usize = 5;
pub const INVOLUTION_TRIALS: usize = 100;
pub const SYMMETRY_TRIALS: usize = 20;

impl RunConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.trials == Some(0) {
            return Err(ConfigError::Trials);
        }
        if !(1..=64).contains(&self.truncation) {
            return Err(ConfigError::Truncation(self.truncation));
        }
        Ok(())
    }

    pub fn trials_or(&self, default: usize) -> usize {
        self.trials.unwrap_or(default)
    }

    pub fn budget(&self) -> Budget {
        Budget { trials: self.trials_or(CLASS_TRIALS), truncation: self.truncation }
    }

    /// Independent stream for one task, so results do not depend on which
    /// other tasks ran before it.
    pub fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut r = ChaCha8Rng::seed_from_u64(self.seed);
        r.set_stream(stream);
        r
    }

    pub fn echo(&self) -> Value {
        json!({
            "seed": self.seed,
            "trials": self.trials,
            "truncation": self.truncation,
            "convention": self.convention.name(),
            "output": match self.output { Output::Text => "text", Output::Json => "json" },
            "model": self.model.map(|m| m.name()),
        })
    }
}

pub fn parse_model(s: &str) -> Result<Model, ConfigError> {
    match s {
        "X10" | "x10" => Ok(Model::X10),
        "X21" | "x21" => Ok(Model::X21),
        _ => Err(ConfigError::Model(s.into())),
    }
}

pub fn version() -> String {
    format!("v{}", env!("CARGO_PKG_VERSION"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(RunConfig::default().validate().is_ok());
        assert!(RunConfig { trials: Some(0), ..RunConfig::default() }.validate().is_err());
        assert!(RunConfig { truncation: 65, ..RunConfig::default() }.validate().is_err());
    }

    #[test]
    fn budget_follows_overrides() {
        let c = RunConfig { trials: Some(3), truncation: 12, ..RunConfig::default() };
        assert_eq!(c.budget(), Budget { trials: 3, truncation: 12 });
        assert_eq!(c.budget().ladder(), [12, 24, 48, 96]);
        assert_eq!(RunConfig::default().trials_or(INVOLUTION_TRIALS), 100);
    }
}
