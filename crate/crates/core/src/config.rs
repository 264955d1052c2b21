//! Simulation parameters, named scenarios and validation.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::types::Strategy;

/// How the first day's time allocation is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TimeInitMethod {
    /// Uniform draw from the simplex `s + c + p = tau`.
    Randomly,
    /// A third of the budget for each activity.
    Equally,
    /// Shirk the initial threshold, split the rest by task interdependence.
    Kappa,
    /// No shirking, split the whole budget by task interdependence.
    KappaNoShirk,
}

impl TimeInitMethod {
    pub const ALL: [TimeInitMethod; 4] = [
        TimeInitMethod::Randomly,
        TimeInitMethod::Equally,
        TimeInitMethod::Kappa,
        TimeInitMethod::KappaNoShirk,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TimeInitMethod::Randomly => "Randomly",
            TimeInitMethod::Equally => "Equally",
            TimeInitMethod::Kappa => "Kappa",
            TimeInitMethod::KappaNoShirk => "KappaNoShirk",
        }
    }
}

impl fmt::Display for TimeInitMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TimeInitMethod {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key: String = s.chars().filter(|c| c.is_ascii_alphanumeric()).collect();
        match key.to_ascii_lowercase().as_str() {
            "randomly" | "random" => Ok(TimeInitMethod::Randomly),
            "equally" | "equal" => Ok(TimeInitMethod::Equally),
            "kappa" => Ok(TimeInitMethod::Kappa),
            "kappanoshirk" | "kappanoshirking" => Ok(TimeInitMethod::KappaNoShirk),
            _ => Err(format!("unknown time initialisation method `{s}`")),
        }
    }
}

/// Which day's partner behaviour feeds the norm update.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NormLag {
    Current,
    Previous,
}

impl FromStr for NormLag {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "current" => Ok(NormLag::Current),
            "previous" => Ok(NormLag::Previous),
            _ => Err(format!("unknown norm lag `{s}` (expected current|previous)")),
        }
    }
}

/// Divisor of the observed shirking/cooperation means.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ObsMeanDivisor {
    /// Number of monitored employees.
    Etc,
    /// Whole workforce.
    N,
}

impl FromStr for ObsMeanDivisor {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "etc" => Ok(ObsMeanDivisor::Etc),
            "n" => Ok(ObsMeanDivisor::N),
            _ => Err(format!("unknown observation divisor `{s}` (expected etc|n)")),
        }
    }
}

/// The reference scenarios: a constant neutral management and four
/// adaptive managements differing in update frequency and intensity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Scenario {
    Base,
    Daily,
    Monthly,
    Biannually,
    Yearly,
}

impl Scenario {
    pub const ALL: [Scenario; 5] = [
        Scenario::Base,
        Scenario::Daily,
        Scenario::Monthly,
        Scenario::Biannually,
        Scenario::Yearly,
    ];

    pub const ADAPTIVE: [Scenario; 4] =
        [Scenario::Daily, Scenario::Monthly, Scenario::Biannually, Scenario::Yearly];

    pub fn name(self) -> &'static str {
        match self {
            Scenario::Base => "Base",
            Scenario::Daily => "Daily",
            Scenario::Monthly => "Monthly",
            Scenario::Biannually => "Biannually",
            Scenario::Yearly => "Yearly",
        }
    }

    /// `(suf, sui)`; `None` for the constant-management baseline.
    pub fn update_rule(self) -> Option<(u32, f64)> {
        match self {
            Scenario::Base => None,
            Scenario::Daily => Some((1, 1.0 / 600.0)),
            Scenario::Monthly => Some((30, 1.0 / 20.0)),
            Scenario::Biannually => Some((180, 3.0 / 10.0)),
            Scenario::Yearly => Some((365, 73.0 / 120.0)),
        }
    }

    /// Default configuration for this scenario.
    pub fn config(self) -> SimConfig {
        SimConfig::default().with_scenario(self)
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scenario {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Scenario::ALL
            .into_iter()
            .find(|sc| sc.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown scenario `{s}` (expected Base|Daily|Monthly|Biannually|Yearly)"))
    }
}

/// Every exogenous parameter of a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    /// Label written into exports.
    pub scenario: String,
    pub n: usize,
    /// Shares of C, O, SE, ST employees.
    pub type_dist: [f64; 4],
    /// Task interdependence.
    pub kappa: f64,
    /// Hourly base wage; also the output scale factor.
    pub wage_hourly: f64,
    /// Norm adjustment rate.
    pub h: f64,
    /// Daily time budget in hours.
    pub tau: f64,
    /// Strength of the satisfaction-productivity link.
    pub s_eff: f64,
    /// Satisfaction shock of a verbal warning.
    pub eta: f64,
    /// Strategy update frequency, in days.
    pub suf: u32,
    /// Strategy update intensity.
    pub sui: f64,
    /// Benchmark window length; defaults to `suf`.
    pub lookback: Option<u32>,
    pub steps: u32,
    pub replicates: u32,
    pub master_seed: u64,
    pub init_strategy: Strategy,
    pub time_init: TimeInitMethod,
    /// Range of the uniform draw that is rounded into the daily interaction cap.
    pub cap_range: (f64, f64),
    pub endogenous_management: bool,
    pub norm_lag: NormLag,
    /// Scale reward responsiveness by pay-for-performance intensity.
    pub rho_mu_scaling: bool,
    pub obs_mean_divisor: ObsMeanDivisor,
    /// Keep per-agent traces in every day record.
    pub record_agents: bool,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            scenario: Scenario::Base.name().to_string(),
            n: 100,
            type_dist: [0.25; 4],
            kappa: 0.5,
            wage_hourly: 1.0,
            h: 0.1,
            tau: 8.0,
            s_eff: 0.5,
            eta: 0.05,
            suf: 30,
            sui: 1.0 / 20.0,
            lookback: None,
            steps: 3650,
            replicates: 100,
            master_seed: 42,
            init_strategy: Strategy::NEUTRAL,
            time_init: TimeInitMethod::Randomly,
            cap_range: (0.0, 7.14),
            endogenous_management: false,
            norm_lag: NormLag::Current,
            rho_mu_scaling: true,
            obs_mean_divisor: ObsMeanDivisor::Etc,
            record_agents: false,
        }
    }
}

impl SimConfig {
    /// Applies the scenario's update rule (and label) to this configuration.
    pub fn with_scenario(mut self, scenario: Scenario) -> Self {
        self.scenario = scenario.name().to_string();
        match scenario.update_rule() {
            Some((suf, sui)) => {
                self.suf = suf;
                self.sui = sui;
                self.endogenous_management = true;
            }
            None => self.endogenous_management = false,
        }
        self
    }

    pub fn lookback(&self) -> u32 {
        self.lookback.unwrap_or(self.suf)
    }

    /// Daily base wage: hourly wage times the time budget.
    pub fn base_wage_daily(&self) -> f64 {
        self.wage_hourly * self.tau
    }

    /// Initial accepted shirking: a tenth of the time budget.
    pub fn initial_s_max(&self) -> f64 {
        self.tau / 10.0
    }
}

/// A single failed constraint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub field: &'static str,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

/// Lists every constraint `cfg` breaks; an empty list means the
/// configuration is runnable.
pub fn validate_config(cfg: &SimConfig) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut fail = |field: &'static str, message: &str| {
        out.push(Violation { field, message: message.to_string() })
    };
    let unit = |x: f64| x.is_finite() && (0.0..=1.0).contains(&x);

    if cfg.n < 2 {
        fail("n", "at least two employees are required");
    }
    if cfg.type_dist.iter().any(|&p| !unit(p)) {
        fail("type_dist", "type shares must lie in [0, 1]");
    }
    let total: f64 = cfg.type_dist.iter().sum();
    if !((total - 1.0).abs() <= 1e-9) {
        fail("type_dist", "type distribution must sum to 1");
    }
    if !unit(cfg.kappa) {
        fail("kappa", "kappa must lie in [0, 1]");
    }
    if !(cfg.wage_hourly.is_finite() && cfg.wage_hourly > 0.0) {
        fail("wage_hourly", "hourly wage must be positive");
    }
    if !(cfg.h.is_finite() && cfg.h > 0.0 && cfg.h < 1.0) {
        fail("h", "h must lie in (0, 1)");
    }
    if !(cfg.tau.is_finite() && cfg.tau > 0.0) {
        fail("tau", "tau must be positive");
    }
    if !unit(cfg.s_eff) {
        fail("s_eff", "s_eff must lie in [0, 1]");
    }
    if !(cfg.eta.is_finite() && (0.0..=1.0 / 3.0).contains(&cfg.eta)) {
        fail("eta", "eta must lie in [0, 1/3]");
    }
    if cfg.suf == 0 {
        fail("suf", "suf must be a positive integer");
    }
    if !(cfg.sui.is_finite() && cfg.sui > 0.0) {
        fail("sui", "sui must be positive");
    }
    if cfg.lookback == Some(0) {
        fail("lookback", "lookback must be a positive integer");
    }
    if cfg.replicates == 0 {
        fail("replicates", "at least one replicate is required");
    }
    let s = cfg.init_strategy;
    if !unit(s.sigma) {
        fail("init_strategy.sigma", "initial sigma must lie in [0, 1]");
    }
    if !unit(s.mu) {
        fail("init_strategy.mu", "initial mu must lie in [0, 1]");
    }
    if !unit(s.lambda) {
        fail("init_strategy.lambda", "initial lambda must lie in [0, 1]");
    }
    let (lo, hi) = cfg.cap_range;
    if !(lo.is_finite() && hi.is_finite() && lo >= 0.0 && lo <= hi) {
        fail("cap_range", "cap range must satisfy 0 <= lo <= hi");
    }
    out
}
