//! Output, bonuses, rewards and profitability.

/// Cobb-Douglas output of one employee.
///
/// `mean_coop_others` is the average cooperation time of everyone else.
pub fn individual_output(p: f64, mean_coop_others: f64, kappa: f64, pi: f64, w: f64) -> f64 {
    // powf already gives 0^0 = 1 and 0^x = 0 for x > 0
    pi * p.powf(1.0 - kappa) * mean_coop_others.powf(kappa) * w
}

/// Average cooperation of the other `n - 1` employees.
pub fn mean_coop_others(total_coop: f64, own_coop: f64, n: usize) -> f64 {
    debug_assert!(n >= 2);
    ((total_coop - own_coop) / (n - 1) as f64).max(0.0)
}

pub fn bonus(o_i: f64, mean_output: f64, lambda: f64) -> f64 {
    (1.0 - lambda) * o_i + lambda * mean_output
}

pub fn bonuses(outputs: &[f64], lambda: f64) -> Vec<f64> {
    let mean = outputs.iter().sum::<f64>() / outputs.len() as f64;
    outputs.iter().map(|&o| bonus(o, mean, lambda)).collect()
}

pub fn reward(base_wage_daily: f64, mu: f64, b_i: f64) -> f64 {
    base_wage_daily + mu * b_i
}

/// Sum of outputs over sum of rewards.
pub fn profitability(outputs: &[f64], rewards: &[f64]) -> f64 {
    let r: f64 = rewards.iter().sum();
    assert!(r > 0.0, "reward sum must be positive");
    outputs.iter().sum::<f64>() / r
}

/// Profitability restricted to the employees in `members`.
pub fn group_profitability(outputs: &[f64], rewards: &[f64], members: &[usize]) -> Option<f64> {
    if members.is_empty() {
        return None;
    }
    let o: f64 = members.iter().map(|&i| outputs[i]).sum();
    let r: f64 = members.iter().map(|&i| rewards[i]).sum();
    Some(o / r)
}
