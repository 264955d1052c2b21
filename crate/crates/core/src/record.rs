//! Per-day observables and their flat column view.

use serde::{Deserialize, Serialize};

use crate::types::{Strategy, TimeAllocation, ValueType};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgentSnapshot {
    pub id: usize,
    pub vtype: ValueType,
    pub alloc: TimeAllocation,
    pub satisfaction: f64,
    pub beta: f64,
    pub output: f64,
    pub reward: f64,
    pub interactions: u32,
}

/// Everything observed on day `t`. Strategy values are the ones in force
/// at the end of the day.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DayRecord {
    pub t: u32,
    pub strategy: Strategy,
    pub s_max: f64,
    pub ego: f64,
    pub mean_obs_shirk: Option<f64>,
    pub mean_obs_coop: Option<f64>,
    pub total_output: f64,
    pub total_reward: f64,
    pub profitability: f64,
    pub group_profitability: [Option<f64>; 4],
    pub satisfaction_mean: f64,
    pub group_satisfaction: [Option<f64>; 4],
    pub homophily_mean: Option<f64>,
    pub group_homophily: [Option<f64>; 4],
    pub verbal_warnings: u32,
    pub written_warnings: u32,
    pub interactions_per_agent: f64,
    pub mean_shirk: f64,
    pub mean_coop: f64,
    pub mean_individual: f64,
    pub mean_beta: f64,
    pub strategy_updated: bool,
    pub agents: Option<Vec<AgentSnapshot>>,
}

/// Column indices into [`DayRecord::observables`].
pub mod col {
    use crate::types::ValueType;

    pub const SIGMA: usize = 0;
    pub const MU: usize = 1;
    pub const LAMBDA: usize = 2;
    pub const S_MAX: usize = 3;
    pub const EGO: usize = 4;
    pub const PROFITABILITY: usize = 5;
    const PROFITABILITY_GROUP: usize = 6;
    pub const SATISFACTION: usize = 10;
    const SATISFACTION_GROUP: usize = 11;
    pub const HOMOPHILY: usize = 15;
    const HOMOPHILY_GROUP: usize = 16;
    pub const VERBAL_WARNINGS: usize = 20;
    pub const WRITTEN_WARNINGS: usize = 21;
    pub const MEAN_OBS_SHIRK: usize = 22;
    pub const MEAN_OBS_COOP: usize = 23;
    pub const TOTAL_OUTPUT: usize = 24;
    pub const TOTAL_REWARD: usize = 25;
    pub const INTERACTIONS_PER_AGENT: usize = 26;
    pub const MEAN_SHIRK: usize = 27;
    pub const MEAN_COOP: usize = 28;
    pub const MEAN_INDIVIDUAL: usize = 29;
    pub const MEAN_BETA: usize = 30;

    pub fn profitability(g: ValueType) -> usize {
        PROFITABILITY_GROUP + g.index()
    }

    pub fn satisfaction(g: ValueType) -> usize {
        SATISFACTION_GROUP + g.index()
    }

    pub fn homophily(g: ValueType) -> usize {
        HOMOPHILY_GROUP + g.index()
    }
}

pub const OBSERVABLE_NAMES: [&str; 31] = [
    "sigma",
    "mu",
    "lambda",
    "s_max",
    "ego",
    "profitability",
    "profitability_C",
    "profitability_O",
    "profitability_SE",
    "profitability_ST",
    "satisfaction_mean",
    "satisfaction_C",
    "satisfaction_O",
    "satisfaction_SE",
    "satisfaction_ST",
    "homophily_mean",
    "homophily_C",
    "homophily_O",
    "homophily_SE",
    "homophily_ST",
    "verbal_warnings",
    "written_warnings",
    "mean_obs_shirk",
    "mean_obs_coop",
    "total_output",
    "total_reward",
    "interactions_per_agent",
    "mean_shirk",
    "mean_coop",
    "mean_individual",
    "mean_beta",
];

impl DayRecord {
    /// Flat numeric view, ordered like [`OBSERVABLE_NAMES`].
    pub fn observables(&self) -> Vec<Option<f64>> {
        let mut v = Vec::with_capacity(OBSERVABLE_NAMES.len());
        v.extend([
            Some(self.strategy.sigma),
            Some(self.strategy.mu),
            Some(self.strategy.lambda),
            Some(self.s_max),
            Some(self.ego),
            Some(self.profitability),
        ]);
        v.extend(self.group_profitability);
        v.push(Some(self.satisfaction_mean));
        v.extend(self.group_satisfaction);
        v.push(self.homophily_mean);
        v.extend(self.group_homophily);
        v.extend([
            Some(f64::from(self.verbal_warnings)),
            Some(f64::from(self.written_warnings)),
            self.mean_obs_shirk,
            self.mean_obs_coop,
            Some(self.total_output),
            Some(self.total_reward),
            Some(self.interactions_per_agent),
            Some(self.mean_shirk),
            Some(self.mean_coop),
            Some(self.mean_individual),
            Some(self.mean_beta),
        ]);
        debug_assert_eq!(v.len(), OBSERVABLE_NAMES.len());
        v
    }
}

/// One row of a numeric series: a day and its observables.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesRow {
    pub t: u32,
    pub values: Vec<Option<f64>>,
}

impl SeriesRow {
    pub fn get(&self, column: usize) -> Option<f64> {
        self.values[column]
    }
}

pub fn series_from_records(records: &[DayRecord]) -> Vec<SeriesRow> {
    records.iter().map(|r| SeriesRow { t: r.t, values: r.observables() }).collect()
}
