//! Concrete accessibility oracles with analytic ground truth.

pub mod coupling;
pub mod gas;
pub mod rubbing;
pub mod synthetic;
pub mod water;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::oracle::AccessibilityOracle;
use crate::sampler::StateSampler;

pub use gas::{GasOracle, GasSampler, GasSpec};
pub use rubbing::{RubbingOracle, RubbingSampler, TwoBodyState};
pub use water::{PhaseConstants, WaterOracle, WaterSampler, WaterState};

/// The shipped model worlds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Model {
    IdealGas,
    Rubbing,
    Water,
}

impl Model {
    pub const ALL: [Model; 3] = [Model::IdealGas, Model::Rubbing, Model::Water];

    pub fn as_str(self) -> &'static str {
        match self {
            Model::IdealGas => "ideal-gas",
            Model::Rubbing => "rubbing",
            Model::Water => "water",
        }
    }

    pub fn oracle(self) -> Arc<dyn AccessibilityOracle> {
        match self {
            Model::IdealGas => Arc::new(GasOracle::default()),
            Model::Rubbing => Arc::new(RubbingOracle::default()),
            Model::Water => Arc::new(WaterOracle::default()),
        }
    }

    pub fn sampler(self) -> Box<dyn StateSampler> {
        match self {
            Model::IdealGas => Box::new(GasSampler::new(GasSpec::monatomic())),
            Model::Rubbing => Box::new(RubbingSampler::default()),
            Model::Water => Box::new(WaterSampler::default()),
        }
    }

    /// Sampler restricted to one unit of amount, i.e. one comparability class.
    pub fn class_sampler(self) -> Box<dyn StateSampler> {
        match self {
            Model::IdealGas => Box::new(GasSampler::new(GasSpec::monatomic()).with_amount(1.0)),
            Model::Rubbing => Box::new(RubbingSampler::default().with_amount(1.0)),
            Model::Water => Box::new(WaterSampler {
                amounts: vec![1.0],
                ..WaterSampler::default()
            }),
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Model {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Model::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| format!("unknown model `{s}` (expected ideal-gas, rubbing or water)"))
    }
}
