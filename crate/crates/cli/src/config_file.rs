//! Flat TOML configuration files whose keys mirror [`SimConfig`].
//!
//! ```toml
//! scenario = "Monthly"
//! steps = 730
//! sigma0 = 0.25
//! time_init = "Kappa"
//! ```

use std::path::Path;

use firmsim_core::{NormLag, ObsMeanDivisor, Scenario, SimConfig, TimeInitMethod};
use serde::Deserialize;

use crate::error::CliError;

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub scenario: Option<String>,
    pub n: Option<usize>,
    pub type_dist: Option<[f64; 4]>,
    pub kappa: Option<f64>,
    pub wage_hourly: Option<f64>,
    pub h: Option<f64>,
    pub tau: Option<f64>,
    pub s_eff: Option<f64>,
    pub eta: Option<f64>,
    pub suf: Option<u32>,
    pub sui: Option<f64>,
    pub lookback: Option<u32>,
    pub steps: Option<u32>,
    pub replicates: Option<u32>,
    #[serde(alias = "seed")]
    pub master_seed: Option<u64>,
    pub sigma0: Option<f64>,
    pub mu0: Option<f64>,
    pub lambda0: Option<f64>,
    pub time_init: Option<String>,
    pub cap_lo: Option<f64>,
    pub cap_hi: Option<f64>,
    pub endogenous_management: Option<bool>,
    pub norm_lag: Option<String>,
    pub rho_mu_scaling: Option<bool>,
    pub obs_mean_divisor: Option<String>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Usage(format!("config file: {}", e.message())))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config file {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn scenario(&self) -> Result<Option<Scenario>, CliError> {
        self.scenario.as_deref().map(parse_value).transpose()
    }

    /// Overrides every key present in the file.
    pub fn apply(&self, cfg: &mut SimConfig) -> Result<(), CliError> {
        macro_rules! set {
            ($($field:ident),*) => {$(
                if let Some(v) = self.$field {
                    cfg.$field = v;
                }
            )*};
        }
        set!(n, type_dist, kappa, wage_hourly, h, tau, s_eff, eta, suf, sui, steps, replicates, master_seed);
        set!(endogenous_management, rho_mu_scaling);
        if self.lookback.is_some() {
            cfg.lookback = self.lookback;
        }
        if let Some(v) = self.sigma0 {
            cfg.init_strategy.sigma = v;
        }
        if let Some(v) = self.mu0 {
            cfg.init_strategy.mu = v;
        }
        if let Some(v) = self.lambda0 {
            cfg.init_strategy.lambda = v;
        }
        if let Some(v) = self.cap_lo {
            cfg.cap_range.0 = v;
        }
        if let Some(v) = self.cap_hi {
            cfg.cap_range.1 = v;
        }
        if let Some(s) = &self.time_init {
            cfg.time_init = parse_value::<TimeInitMethod>(s)?;
        }
        if let Some(s) = &self.norm_lag {
            cfg.norm_lag = parse_value::<NormLag>(s)?;
        }
        if let Some(s) = &self.obs_mean_divisor {
            cfg.obs_mean_divisor = parse_value::<ObsMeanDivisor>(s)?;
        }
        Ok(())
    }
}

fn parse_value<T: std::str::FromStr<Err = String>>(s: &str) -> Result<T, CliError> {
    s.parse().map_err(|e: String| CliError::Usage(format!("config file: {e}")))
}
