use std::time::Duration;

use serde::{Deserialize, Serialize};

use super::error::ConfigError;

/// How backward decomposition interleaves with forward reasoning.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BackwardMode {
    /// One backward step per forward step, alternating. The default.
    Pair,
    /// All backward decomposition happens up front, producing a frozen
    /// target chain; forward steps then run against that chain.
    Single,
}

impl BackwardMode {
    pub fn as_str(self) -> &'static str {
        match self {
            BackwardMode::Pair => "pair",
            BackwardMode::Single => "single",
        }
    }
}

/// Engine parameters shared by every method.
///
/// `max_steps` bounds the search depth (the outer step index may be rewound
/// by backtracking, so it is a depth bound, not an iteration count).
/// `width` bounds the number of distinct `(state, target)` attempts made at
/// any one depth before that depth is declared exhausted and the search
/// backtracks one level shallower.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EngineConfig {
    pub max_steps: usize,
    pub width: usize,
    pub backward_mode: BackwardMode,
    pub seed: u64,
    /// Forwarded to adapters that talk to remote endpoints; deterministic
    /// adapters ignore it.
    pub per_call_timeout: Duration,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            max_steps: 20,
            width: 13,
            backward_mode: BackwardMode::Pair,
            seed: 0,
            per_call_timeout: Duration::from_secs(60),
        }
    }
}

impl EngineConfig {
    pub fn new(max_steps: usize, width: usize) -> Self {
        EngineConfig {
            max_steps,
            width,
            ..EngineConfig::default()
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.max_steps == 0 {
            return Err(ConfigError::ZeroMaxSteps);
        }
        if self.width == 0 {
            return Err(ConfigError::ZeroWidth);
        }
        Ok(())
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_backward_mode(mut self, mode: BackwardMode) -> Self {
        self.backward_mode = mode;
        self
    }

    /// One-line echo of the knobs that affect a run, embedded in trace files.
    pub fn echo(&self) -> String {
        format!(
            "L={} n={} mode={} seed={}",
            self.max_steps,
            self.width,
            self.backward_mode.as_str(),
            self.seed
        )
    }
}
