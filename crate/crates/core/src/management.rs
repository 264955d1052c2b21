//! Monitoring, warnings and the adaptive management strategy.

use std::cmp::Ordering;

use rand::seq::index;
use rand::Rng;

use crate::config::ObsMeanDivisor;
use crate::error::ModelError;
use crate::types::{Employee, ManagementState, Strategy};
use crate::wellbeing::{apply_warning_shock, WarningKind};

/// Catches per written warning.
pub const CATCHES_PER_WRITTEN_WARNING: u32 = 3;

/// Relative tolerance of the "benchmark met" branches.
pub const BENCHMARK_TOLERANCE: f64 = 1e-9;

/// Employees monitored today: `round(sigma * n)` drawn without replacement,
/// returned in ascending order.
pub fn draw_monitoring_set<R: Rng + ?Sized>(sigma: f64, n: usize, rng: &mut R) -> Vec<usize> {
    let k = ((sigma * n as f64).round_ties_even() as usize).min(n);
    let mut picked = index::sample(rng, n, k).into_vec();
    picked.sort_unstable();
    picked
}

/// What the management saw and did during one monitoring round.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct MonitoringOutcome {
    pub warnings: Vec<(usize, WarningKind)>,
    pub mean_obs_shirk: Option<f64>,
    pub mean_obs_coop: Option<f64>,
}

impl MonitoringOutcome {
    pub fn verbal_count(&self) -> u32 {
        self.count(WarningKind::Verbal)
    }

    pub fn written_count(&self) -> u32 {
        self.count(WarningKind::Written)
    }

    fn count(&self, kind: WarningKind) -> u32 {
        self.warnings.iter().filter(|(_, k)| *k == kind).count() as u32
    }
}

/// Checks every monitored employee against `s_max`.
///
/// Shirking strictly above the threshold earns a verbal warning; every
/// third catch additionally earns a written warning dated `t`, after which
/// the catch counter restarts.
pub fn process_monitoring(
    etc: &[usize],
    employees: &mut [Employee],
    s_max: f64,
    t: u32,
    eta: f64,
    divisor: ObsMeanDivisor,
) -> Result<MonitoringOutcome, ModelError> {
    let mut outcome = MonitoringOutcome::default();
    let (mut shirk, mut coop) = (0.0, 0.0);
    for &i in etc {
        let emp = &mut employees[i];
        shirk += emp.alloc.shirk;
        coop += emp.alloc.coop;
        if emp.alloc.shirk <= s_max {
            continue;
        }
        emp.catch_count += 1;
        emp.satisfaction = apply_warning_shock(emp.satisfaction, WarningKind::Verbal, eta)?;
        outcome.warnings.push((i, WarningKind::Verbal));
        if emp.catch_count >= CATCHES_PER_WRITTEN_WARNING {
            emp.catch_count = 0;
            emp.written_warnings.push(t);
            emp.satisfaction = apply_warning_shock(emp.satisfaction, WarningKind::Written, eta)?;
            outcome.warnings.push((i, WarningKind::Written));
        }
    }
    if !etc.is_empty() {
        let d = match divisor {
            ObsMeanDivisor::Etc => etc.len(),
            ObsMeanDivisor::N => employees.len(),
        } as f64;
        outcome.mean_obs_shirk = Some(shirk / d);
        outcome.mean_obs_coop = Some(coop / d);
    }
    Ok(outcome)
}

/// Management's shirking norm, moved towards yesterday's observed mean.
pub fn update_max_shirking(s_max: f64, mean_obs_shirk_prev: Option<f64>, h: f64) -> f64 {
    match mean_obs_shirk_prev {
        Some(obs) => (1.0 - h) * s_max + h * obs,
        None => s_max,
    }
}

/// Cobb-Douglas optimum when `s_max` hours are shirked.
///
/// Evaluated as `alpha * (1-kappa)^(1-kappa) * kappa^kappa` in log space,
/// which is exact for the symmetric case `kappa = 0.5`.
pub fn expected_group_output(s_max: f64, kappa: f64, tau: f64) -> f64 {
    let alpha = tau - s_max;
    let xlnx = |x: f64| if x == 0.0 { 0.0 } else { x * x.ln() };
    alpha * (xlnx(1.0 - kappa) + xlnx(kappa)).exp()
}

/// Benchmark means over the last `len` days.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StrategyWindow {
    pub len: u32,
    pub mean_obs_shirk: Option<f64>,
    pub mean_obs_coop: Option<f64>,
    pub mean_output: Option<f64>,
}

fn mean_present<'a>(values: impl Iterator<Item = &'a Option<f64>>) -> Option<f64> {
    let (sum, count) = values.flatten().fold((0.0, 0usize), |(s, c), v| (s + v, c + 1));
    (count > 0).then(|| sum / count as f64)
}

impl StrategyWindow {
    /// Window over the most recent `len` recorded days; days without
    /// observations are skipped.
    pub fn from_history(mgmt: &ManagementState, len: u32) -> Self {
        let tail = |n: usize| n.saturating_sub(len as usize);
        let shirk = &mgmt.obs_shirk_history[tail(mgmt.obs_shirk_history.len())..];
        let coop = &mgmt.obs_coop_history[tail(mgmt.obs_coop_history.len())..];
        let output = &mgmt.output_history[tail(mgmt.output_history.len())..];
        let mean_output = (!output.is_empty()).then(|| output.iter().sum::<f64>() / output.len() as f64);
        StrategyWindow {
            len,
            mean_obs_shirk: mean_present(shirk.iter()),
            mean_obs_coop: mean_present(coop.iter()),
            mean_output,
        }
    }
}

fn compare_with_tolerance(a: f64, b: f64) -> Ordering {
    if (a - b).abs() <= BENCHMARK_TOLERANCE * a.abs().max(b.abs()) {
        Ordering::Equal
    } else if a < b {
        Ordering::Less
    } else {
        Ordering::Greater
    }
}

/// Multiplicative step; a parameter sitting at zero is re-seeded to `sui`
/// when it should grow.
fn grow_or_shrink(value: f64, order: Ordering, sui: f64, grow_when: Ordering) -> f64 {
    match order {
        Ordering::Equal => value,
        o if o == grow_when => {
            if value == 0.0 {
                sui
            } else {
                value * (1.0 + sui)
            }
        }
        _ => value * (1.0 - sui),
    }
}

/// Strategy revision from the benchmark window.
///
/// * Monitoring grows when observed shirking exceeds `s_max` and shrinks
///   otherwise. From zero it restarts at `(1 - O/EGO) * sui` when output
///   falls short of the expected group output.
/// * Bonus intensity grows while output falls short of the expected group
///   output and shrinks when it exceeds it.
/// * Bonus type moves towards group pay while observed cooperation is below
///   `kappa * (tau - s_max)`.
///
/// All three are clamped into `[0, 1]`.
pub fn update_strategy(
    current: Strategy,
    window: &StrategyWindow,
    s_max: f64,
    sui: f64,
    ego: f64,
    kappa: f64,
    tau: f64,
) -> Strategy {
    let output_vs_ego = window.mean_output.map(|o| compare_with_tolerance(o, ego));

    let sigma = if current.sigma == 0.0 && output_vs_ego == Some(Ordering::Less) {
        let o = window.mean_output.unwrap_or(0.0);
        (1.0 - o / ego) * sui
    } else {
        match window.mean_obs_shirk {
            Some(s) if s > s_max => current.sigma * (1.0 + sui),
            Some(_) => current.sigma * (1.0 - sui),
            None => current.sigma,
        }
    };

    let mu = match output_vs_ego {
        Some(order) => grow_or_shrink(current.mu, order, sui, Ordering::Less),
        None => current.mu,
    };

    let coop_target = kappa * (tau - s_max);
    let lambda = match window.mean_obs_coop {
        Some(c) => grow_or_shrink(current.lambda, compare_with_tolerance(c, coop_target), sui, Ordering::Less),
        None => current.lambda,
    };

    Strategy { sigma, mu, lambda }.clamped()
}
