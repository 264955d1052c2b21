//! Cartesian parameter grids over the sweepable subset of [`SimConfig`].

use std::fmt;

use firmsim_core::{SimConfig, TimeInitMethod};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParam {
    Sigma0,
    Mu0,
    Lambda0,
    TimeInit,
    /// A `suf:sui` pair.
    Update,
    H,
    Kappa,
    Eta,
    SEff,
}

impl SweepParam {
    pub const ALL: [SweepParam; 9] = [
        SweepParam::Sigma0,
        SweepParam::Mu0,
        SweepParam::Lambda0,
        SweepParam::TimeInit,
        SweepParam::Update,
        SweepParam::H,
        SweepParam::Kappa,
        SweepParam::Eta,
        SweepParam::SEff,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SweepParam::Sigma0 => "sigma0",
            SweepParam::Mu0 => "mu0",
            SweepParam::Lambda0 => "lambda0",
            SweepParam::TimeInit => "time_init",
            SweepParam::Update => "update",
            SweepParam::H => "h",
            SweepParam::Kappa => "kappa",
            SweepParam::Eta => "eta",
            SweepParam::SEff => "s_eff",
        }
    }

    pub fn parse(name: &str) -> Result<Self, CliError> {
        Self::ALL.into_iter().find(|p| p.name() == name).ok_or_else(|| {
            let names: Vec<_> = Self::ALL.iter().map(|p| p.name()).collect();
            CliError::Usage(format!("parameter `{name}` is not sweepable (sweepable: {})", names.join(", ")))
        })
    }

    fn parse_value(self, s: &str) -> Result<SweepValue, CliError> {
        let bad = |what: &str| CliError::Usage(format!("{}: invalid value `{s}` ({what})", self.name()));
        match self {
            SweepParam::TimeInit => s.parse().map(SweepValue::Init).map_err(|e: String| bad(&e)),
            SweepParam::Update => {
                let (suf, sui) = s.split_once(':').ok_or_else(|| bad("expected suf:sui"))?;
                let suf = suf.trim().parse().map_err(|_| bad("suf must be a positive integer"))?;
                let sui = sui.trim().parse().map_err(|_| bad("sui must be a number"))?;
                Ok(SweepValue::Update(suf, sui))
            }
            _ => s.parse().map(SweepValue::Num).map_err(|_| bad("expected a number")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SweepValue {
    Num(f64),
    Init(TimeInitMethod),
    Update(u32, f64),
}

impl fmt::Display for SweepValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SweepValue::Num(v) => write!(f, "{v}"),
            SweepValue::Init(m) => write!(f, "{m}"),
            SweepValue::Update(suf, sui) => write!(f, "{suf}:{sui}"),
        }
    }
}

/// One grid dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub param: SweepParam,
    pub values: Vec<SweepValue>,
}

impl Axis {
    /// Parses `name=v1,v2,...`.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let (name, values) = text
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("grid axis `{text}` must look like name=v1,v2,...")))?;
        let param = SweepParam::parse(name.trim())?;
        let values = values
            .split(',')
            .map(str::trim)
            .filter(|v| !v.is_empty())
            .map(|v| param.parse_value(v))
            .collect::<Result<Vec<_>, _>>()?;
        if values.is_empty() {
            return Err(CliError::Usage(format!("grid axis `{}` has no values", param.name())));
        }
        Ok(Axis { param, values })
    }
}

/// Checks that no parameter appears twice.
pub fn check_axes(axes: &[Axis]) -> Result<(), CliError> {
    for (k, a) in axes.iter().enumerate() {
        if axes[..k].iter().any(|b| b.param == a.param) {
            return Err(CliError::Usage(format!("grid axis `{}` given more than once", a.param.name())));
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridPoint {
    pub index: usize,
    pub settings: Vec<(SweepParam, SweepValue)>,
}

impl GridPoint {
    pub fn apply(&self, cfg: &mut SimConfig) {
        for &(param, value) in &self.settings {
            match (param, value) {
                (SweepParam::Sigma0, SweepValue::Num(v)) => cfg.init_strategy.sigma = v,
                (SweepParam::Mu0, SweepValue::Num(v)) => cfg.init_strategy.mu = v,
                (SweepParam::Lambda0, SweepValue::Num(v)) => cfg.init_strategy.lambda = v,
                (SweepParam::H, SweepValue::Num(v)) => cfg.h = v,
                (SweepParam::Kappa, SweepValue::Num(v)) => cfg.kappa = v,
                (SweepParam::Eta, SweepValue::Num(v)) => cfg.eta = v,
                (SweepParam::SEff, SweepValue::Num(v)) => cfg.s_eff = v,
                (SweepParam::TimeInit, SweepValue::Init(m)) => cfg.time_init = m,
                (SweepParam::Update, SweepValue::Update(suf, sui)) => {
                    cfg.suf = suf;
                    cfg.sui = sui;
                }
                (p, v) => unreachable!("value {v} does not belong to {}", p.name()),
            }
        }
    }
}

/// Cartesian product, last axis varying fastest. No axes, no points.
pub fn grid_points(axes: &[Axis]) -> Vec<GridPoint> {
    if axes.is_empty() {
        return Vec::new();
    }
    let mut combos: Vec<Vec<(SweepParam, SweepValue)>> = vec![Vec::new()];
    for axis in axes {
        combos = combos
            .into_iter()
            .flat_map(|prefix| {
                axis.values.iter().map(move |&v| {
                    let mut c = prefix.clone();
                    c.push((axis.param, v));
                    c
                })
            })
            .collect();
    }
    combos.into_iter().enumerate().map(|(index, settings)| GridPoint { index, settings }).collect()
}
