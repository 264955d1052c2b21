//! Job satisfaction and its effect on productivity.

use crate::error::ModelError;
use crate::types::ValueType;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WarningKind {
    Verbal,
    Written,
}

/// Neutral satisfaction level implied by the management strategy.
pub fn base_satisfaction(vtype: ValueType, sigma: f64, mu: f64, lambda: f64) -> f64 {
    let s = match vtype {
        ValueType::C => sigma,
        ValueType::O => 1.0 - sigma,
        ValueType::SE => 0.5 + mu * (0.5 - lambda),
        ValueType::ST => 0.5 + mu * (lambda - 0.5),
    };
    s.clamp(0.0, 1.0)
}

/// One day of mean reversion: 1% of the current value towards `base`,
/// never crossing it.
pub fn recover_satisfaction(s: f64, base: f64) -> f64 {
    let next = if s > base {
        (0.99 * s).max(base)
    } else if s < base {
        (1.01 * s).min(base)
    } else {
        s
    };
    next.clamp(0.0, 1.0)
}

pub fn apply_warning_shock(s: f64, kind: WarningKind, eta: f64) -> Result<f64, ModelError> {
    match kind {
        WarningKind::Verbal => {
            if !(0.0..=1.0).contains(&eta) {
                return Err(ModelError::InvalidParameter(format!("eta must lie in [0, 1], got {eta}")));
            }
            Ok(s * (1.0 - eta))
        }
        WarningKind::Written => {
            if !(0.0..=1.0 / 3.0).contains(&eta) {
                return Err(ModelError::InvalidParameter(format!(
                    "eta must lie in [0, 1/3] for written warnings, got {eta}"
                )));
            }
            Ok(s * (1.0 - 3.0 * eta))
        }
    }
}

/// Productivity multiplier in `[1 - s_eff, 1 + s_eff]`.
pub fn productivity(s: f64, s_eff: f64) -> f64 {
    (1.0 - s_eff) + 2.0 * s_eff * s
}
