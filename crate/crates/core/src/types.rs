use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Higher-order personal value group of an employee.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ValueType {
    /// Conservative: security and conformity.
    C,
    /// Open-to-change: self-direction and stimulation.
    O,
    /// Self-enhancing: power and achievement.
    SE,
    /// Self-transcendent: benevolence and universalism.
    ST,
}

impl ValueType {
    pub const ALL: [ValueType; 4] = [ValueType::C, ValueType::O, ValueType::SE, ValueType::ST];

    /// Position in [`ValueType::ALL`]; used to index per-group arrays.
    pub fn index(self) -> usize {
        match self {
            ValueType::C => 0,
            ValueType::O => 1,
            ValueType::SE => 2,
            ValueType::ST => 3,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            ValueType::C => "C",
            ValueType::O => "O",
            ValueType::SE => "SE",
            ValueType::ST => "ST",
        }
    }
}

impl fmt::Display for ValueType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for ValueType {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "C" => Ok(ValueType::C),
            "O" => Ok(ValueType::O),
            "SE" => Ok(ValueType::SE),
            "ST" => Ok(ValueType::ST),
            other => Err(format!("unknown value type `{other}`")),
        }
    }
}

/// Hours of one working day split between shirking, cooperation and
/// individual tasks. Individual time is the residual of the budget.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct TimeAllocation {
    pub shirk: f64,
    pub coop: f64,
    pub individual: f64,
}

impl TimeAllocation {
    /// Builds an allocation whose individual time is `tau - shirk - coop`.
    ///
    /// Rounding residue below zero is flushed to zero.
    pub fn from_shirk_coop(shirk: f64, coop: f64, tau: f64) -> Self {
        let individual = (tau - shirk - coop).max(0.0);
        TimeAllocation { shirk, coop, individual }
    }

    pub fn total(&self) -> f64 {
        self.shirk + self.coop + self.individual
    }
}

/// A single worker and everything the day loop mutates about them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Employee {
    pub id: usize,
    pub vtype: ValueType,
    pub alloc: TimeAllocation,
    /// Perceived descriptive shirking norm, in hours.
    pub shirk_norm: f64,
    /// Perceived descriptive cooperation norm, in hours.
    pub coop_norm: f64,
    pub satisfaction: f64,
    pub base_satisfaction: f64,
    /// Verbal catches since the last written warning.
    pub catch_count: u32,
    /// Days on which written warnings were issued, strictly increasing.
    pub written_warnings: Vec<u32>,
    pub beta: f64,
    /// Maximum number of interactions for the current day.
    pub cap: u32,
    /// Deviation-from-norm width, fixed by value type.
    pub delta: f64,
}

/// Monitoring share, pay-for-performance intensity and pay-for-performance
/// type. All three live in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Strategy {
    pub sigma: f64,
    pub mu: f64,
    pub lambda: f64,
}

impl Strategy {
    pub const NEUTRAL: Strategy = Strategy { sigma: 0.5, mu: 0.0, lambda: 1.0 };

    pub fn clamped(self) -> Self {
        Strategy {
            sigma: self.sigma.clamp(0.0, 1.0),
            mu: self.mu.clamp(0.0, 1.0),
            lambda: self.lambda.clamp(0.0, 1.0),
        }
    }
}

impl Default for Strategy {
    fn default() -> Self {
        Strategy::NEUTRAL
    }
}

/// Management side of the firm: the current strategy, the accepted
/// shirking threshold and the daily benchmark ledgers (one slot per
/// elapsed day, day 1 at index 0).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManagementState {
    pub strategy: Strategy,
    pub s_max: f64,
    pub obs_shirk_history: Vec<Option<f64>>,
    pub obs_coop_history: Vec<Option<f64>>,
    pub output_history: Vec<f64>,
}

impl ManagementState {
    pub fn new(strategy: Strategy, s_max: f64) -> Self {
        ManagementState {
            strategy,
            s_max,
            obs_shirk_history: Vec::new(),
            obs_coop_history: Vec::new(),
            output_history: Vec::new(),
        }
    }

    pub fn sigma(&self) -> f64 {
        self.strategy.sigma
    }

    pub fn mu(&self) -> f64 {
        self.strategy.mu
    }

    pub fn lambda(&self) -> f64 {
        self.strategy.lambda
    }
}
