//! Daily time allocation.
//!
//! Shirking and cooperation are drawn from triangular distributions
//! centred on the employee's personal norms. The mode is shifted by
//! value-type specific offsets (autonomy, cooperativeness, responsiveness
//! to rewards) and the upper shirking bound contracts after written
//! warnings.

use rand::Rng;

use crate::config::TimeInitMethod;
use crate::types::{Employee, Strategy, TimeAllocation, ValueType};

/// Parameters of a triangular distribution: lower bound, mode, upper bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriangularParams {
    pub a: f64,
    pub m: f64,
    pub b: f64,
}

impl TriangularParams {
    pub fn mean(&self) -> f64 {
        (self.a + self.m + self.b) / 3.0
    }
}

/// Width of the deviation from personal norms.
pub fn deviation_delta(vtype: ValueType) -> f64 {
    match vtype {
        ValueType::C => 1.0 / 3.0,
        ValueType::O => 1.0,
        ValueType::SE | ValueType::ST => 2.0 / 3.0,
    }
}

/// +1 below the 0.5 midpoint, -1 above it, 0 exactly on it.
fn side_of_midpoint(x: f64) -> f64 {
    if x < 0.5 {
        1.0
    } else if x > 0.5 {
        -1.0
    } else {
        0.0
    }
}

/// Shift of the shirking mode from the need for autonomy.
///
/// Conservative employees shirk more under trusting management (`sigma <
/// 0.5`) and less under controlling management; open-to-change employees
/// mirror them. The other two groups ignore monitoring.
pub fn autonomy_offset(vtype: ValueType, sigma: f64, s_norm: f64, delta: f64) -> f64 {
    let trusting = side_of_midpoint(sigma);
    let magnitude = 0.5 * s_norm * delta;
    match vtype {
        ValueType::C => trusting * magnitude,
        ValueType::O => -trusting * magnitude,
        ValueType::SE | ValueType::ST => 0.0,
    }
}

/// Shift of the cooperation mode from the degree of cooperativeness.
pub fn cooperativeness_offset(vtype: ValueType, c_norm: f64, delta: f64) -> f64 {
    match vtype {
        ValueType::SE => -0.5 * c_norm * delta,
        ValueType::ST => 0.5 * c_norm * delta,
        ValueType::C | ValueType::O => 0.0,
    }
}

/// Shift of the cooperation mode from responsiveness to rewards.
///
/// `lambda < 0.5` counts as an individual scheme, `lambda > 0.5` as a group
/// scheme. With `mu_scaling` the offset is multiplied by `mu`, so it
/// vanishes when no bonuses are paid.
pub fn rewards_offset(
    vtype: ValueType,
    lambda: f64,
    mu: f64,
    c_norm: f64,
    delta: f64,
    mu_scaling: bool,
) -> f64 {
    let coefficient = match (vtype, side_of_midpoint(lambda)) {
        (_, s) if s == 0.0 => 0.0,
        (ValueType::SE, s) if s > 0.0 => -0.5,
        (ValueType::SE, _) => 0.1,
        (ValueType::ST, s) if s > 0.0 => -0.1,
        (ValueType::ST, _) => 0.5,
        (ValueType::C | ValueType::O, _) => 0.0,
    };
    let scale = if mu_scaling { mu } else { 1.0 };
    coefficient * c_norm * delta * scale
}

/// Contraction factor of the upper shirking bound after written warnings.
///
/// `written_warnings` must hold days strictly before `t`.
pub fn warning_scaling(written_warnings: &[u32], t: u32) -> f64 {
    let Some(&last) = written_warnings.last() else {
        return 1.0;
    };
    debug_assert!(last < t);
    let recency = f64::from(t - last) / f64::from(t);
    let k = written_warnings.len().min(3) as f64;
    (1.0 - k / 3.0) + (k / 3.0) * recency
}

/// Bounds and mode of the triangular distribution around `x_norm`.
///
/// `beta` only stretches the upper bound; the mode is clamped into `[a, b]`.
pub fn triangular_bounds(x_norm: f64, delta: f64, beta: f64, offset: f64) -> TriangularParams {
    let a = x_norm * (1.0 - delta);
    let b = x_norm * (1.0 + beta * delta);
    let m = (x_norm + offset).clamp(a, b);
    TriangularParams { a, m, b }
}

/// Inverse CDF of the triangular distribution at `u` in `[0, 1]`.
pub fn triangular_inverse_cdf(params: TriangularParams, u: f64) -> f64 {
    let TriangularParams { a, m, b } = params;
    let range = b - a;
    if range <= 0.0 {
        return a;
    }
    let split = (m - a) / range;
    let x = if u < split {
        a + (u * range * (m - a)).sqrt()
    } else {
        b - ((1.0 - u) * range * (b - m)).sqrt()
    };
    x.clamp(a, b)
}

pub fn sample_triangular<R: Rng + ?Sized>(params: TriangularParams, rng: &mut R) -> f64 {
    triangular_inverse_cdf(params, rng.random::<f64>())
}

/// Draws today's allocation for `emp`. Returns the allocation together
/// with the warning scaling factor used for the shirking draw.
///
/// Shirking is drawn before cooperation. If the two exceed the budget they
/// are rescaled proportionally so that individual time is zero.
pub fn allocate_time<R: Rng + ?Sized>(
    emp: &Employee,
    strategy: &Strategy,
    t: u32,
    tau: f64,
    rho_mu_scaling: bool,
    rng: &mut R,
) -> (TimeAllocation, f64) {
    let beta = warning_scaling(&emp.written_warnings, t);
    let delta = emp.delta;

    let phi = autonomy_offset(emp.vtype, strategy.sigma, emp.shirk_norm, delta);
    let shirk_params = triangular_bounds(emp.shirk_norm, delta, beta, phi);

    let gamma = cooperativeness_offset(emp.vtype, emp.coop_norm, delta);
    let rho = rewards_offset(
        emp.vtype,
        strategy.lambda,
        strategy.mu,
        emp.coop_norm,
        delta,
        rho_mu_scaling,
    );
    let coop_params = triangular_bounds(emp.coop_norm, delta, 1.0, gamma + rho);

    let mut shirk = sample_triangular(shirk_params, rng);
    let mut coop = sample_triangular(coop_params, rng);
    let used = shirk + coop;
    if used > tau {
        let scale = tau / used;
        shirk *= scale;
        coop *= scale;
    }
    (TimeAllocation::from_shirk_coop(shirk, coop, tau), beta)
}

/// First-day allocation under one of the initialisation methods.
pub fn initial_allocation<R: Rng + ?Sized>(
    method: TimeInitMethod,
    kappa: f64,
    tau: f64,
    s_max0: f64,
    rng: &mut R,
) -> TimeAllocation {
    match method {
        TimeInitMethod::Randomly => {
            // Spacings of two sorted uniforms are uniform on the simplex.
            let u: f64 = rng.random();
            let v: f64 = rng.random();
            let (lo, hi) = if u <= v { (u, v) } else { (v, u) };
            TimeAllocation::from_shirk_coop(tau * lo, tau * (hi - lo), tau)
        }
        TimeInitMethod::Equally => {
            let third = tau / 3.0;
            TimeAllocation { shirk: third, coop: third, individual: third }
        }
        TimeInitMethod::Kappa => {
            let rest = tau - s_max0;
            TimeAllocation { shirk: s_max0, coop: kappa * rest, individual: (1.0 - kappa) * rest }
        }
        TimeInitMethod::KappaNoShirk => {
            TimeAllocation { shirk: 0.0, coop: kappa * tau, individual: (1.0 - kappa) * tau }
        }
    }
}

#[cfg(test)]
mod tests {
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::types::Strategy;

    fn employee(vtype: ValueType, shirk_norm: f64, coop_norm: f64) -> Employee {
        Employee {
            id: 0,
            vtype,
            alloc: TimeAllocation::default(),
            shirk_norm,
            coop_norm,
            satisfaction: 0.5,
            base_satisfaction: 0.5,
            catch_count: 0,
            written_warnings: Vec::new(),
            beta: 1.0,
            cap: 0,
            delta: deviation_delta(vtype),
        }
    }

    #[test]
    fn deltas() {
        assert_eq!(deviation_delta(ValueType::C), 1.0 / 3.0);
        assert_eq!(deviation_delta(ValueType::O), 1.0);
        assert_eq!(deviation_delta(ValueType::SE), 2.0 / 3.0);
        assert_eq!(deviation_delta(ValueType::ST), 2.0 / 3.0);
    }

    #[test]
    fn autonomy() {
        assert_abs_diff_eq!(autonomy_offset(ValueType::C, 1.0, 1.2, 1.0 / 3.0), -0.2, epsilon = 1e-12);
        assert_abs_diff_eq!(autonomy_offset(ValueType::C, 0.0, 1.2, 1.0 / 3.0), 0.2, epsilon = 1e-12);
        assert_eq!(autonomy_offset(ValueType::O, 0.5, 1.2, 1.0), 0.0);
        assert_eq!(autonomy_offset(ValueType::SE, 0.9, 2.0, 2.0 / 3.0), 0.0);
        assert_eq!(autonomy_offset(ValueType::ST, 0.1, 2.0, 2.0 / 3.0), 0.0);
        // O under trusting management shirks less
        assert_abs_diff_eq!(autonomy_offset(ValueType::O, 0.2, 1.2, 1.0), -0.6, epsilon = 1e-12);
    }

    #[test]
    fn cooperativeness() {
        assert_abs_diff_eq!(cooperativeness_offset(ValueType::SE, 2.0, 2.0 / 3.0), -2.0 / 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(cooperativeness_offset(ValueType::ST, 2.0, 2.0 / 3.0), 2.0 / 3.0, epsilon = 1e-12);
        assert_eq!(cooperativeness_offset(ValueType::C, 2.0, 1.0 / 3.0), 0.0);
    }

    #[test]
    fn rewards() {
        let d = 2.0 / 3.0;
        assert_abs_diff_eq!(rewards_offset(ValueType::SE, 0.0, 1.0, 2.0, d, true), -2.0 / 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(rewards_offset(ValueType::ST, 1.0, 1.0, 2.0, d, true), 2.0 / 3.0, epsilon = 1e-12);
        assert_eq!(rewards_offset(ValueType::ST, 1.0, 0.0, 2.0, d, true), 0.0);
        // without the mu gate the base magnitudes apply regardless of mu
        assert_abs_diff_eq!(rewards_offset(ValueType::ST, 1.0, 0.0, 2.0, d, false), 2.0 / 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(rewards_offset(ValueType::SE, 0.9, 1.0, 3.0, d, true), 0.1 * 3.0 * d, epsilon = 1e-12);
        assert_abs_diff_eq!(rewards_offset(ValueType::ST, 0.2, 0.5, 3.0, d, true), -0.1 * 3.0 * d * 0.5, epsilon = 1e-12);
        assert_eq!(rewards_offset(ValueType::SE, 0.5, 1.0, 3.0, d, true), 0.0);
        assert_eq!(rewards_offset(ValueType::C, 1.0, 1.0, 3.0, 1.0 / 3.0, true), 0.0);
    }

    #[test]
    fn beta_values() {
        assert_eq!(warning_scaling(&[], 10), 1.0);
        assert_abs_diff_eq!(warning_scaling(&[50], 100), 0.8333, epsilon = 1e-4);
        assert_abs_diff_eq!(warning_scaling(&[50], 100), 1.0 - 1.0 / 3.0 + 0.5 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(warning_scaling(&[10, 60, 99], 100), 0.01, epsilon = 1e-15);
        assert_abs_diff_eq!(warning_scaling(&[1, 2, 3, 4, 99], 100), 0.01, epsilon = 1e-15);
    }

    #[test]
    fn bounds() {
        assert_eq!(triangular_bounds(1.0, 1.0, 1.0, 0.0), TriangularParams { a: 0.0, m: 1.0, b: 2.0 });
        let p = triangular_bounds(1.0, 1.0, 2.0 / 3.0, 0.0);
        assert_eq!((p.a, p.m), (0.0, 1.0));
        assert_abs_diff_eq!(p.b, 5.0 / 3.0, epsilon = 1e-15);
        let p = triangular_bounds(1.0, 1.0 / 3.0, 1.0, 0.9);
        assert_abs_diff_eq!(p.m, 4.0 / 3.0, epsilon = 1e-15);
        assert_eq!(p.m, p.b);
    }

    #[test]
    fn inverse_cdf() {
        let p = TriangularParams { a: 0.0, m: 1.0, b: 2.0 };
        assert_eq!(triangular_inverse_cdf(p, 0.5), 1.0);
        assert_eq!(triangular_inverse_cdf(p, 0.0), 0.0);
        assert_eq!(triangular_inverse_cdf(p, 1.0), 2.0);
        let degenerate = TriangularParams { a: 1.0, m: 1.0, b: 1.0 };
        for u in [0.0, 0.3, 0.99] {
            assert_eq!(triangular_inverse_cdf(degenerate, u), 1.0);
        }
    }

    #[test]
    fn sampler_mean_matches_moment_formula() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let p = TriangularParams { a: 0.0, m: 1.0, b: 2.0 };
        let draws = 1_000_000;
        let mut sum = 0.0;
        for _ in 0..draws {
            let x = sample_triangular(p, &mut rng);
            assert!((0.0..=2.0).contains(&x));
            sum += x;
        }
        assert_abs_diff_eq!(sum / draws as f64, 1.0, epsilon = 0.01);
    }

    #[test]
    fn skewed_sampler_within_three_standard_errors() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let p = TriangularParams { a: 0.5, m: 0.7, b: 3.0 };
        let var = (p.a * p.a + p.m * p.m + p.b * p.b - p.a * p.m - p.a * p.b - p.m * p.b) / 18.0;
        let draws = 100_000;
        let mean = (0..draws).map(|_| sample_triangular(p, &mut rng)).sum::<f64>() / draws as f64;
        assert!((mean - p.mean()).abs() < 3.0 * (var / draws as f64).sqrt());
    }

    #[test]
    fn zero_norms_allocate_everything_to_individual_work() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let emp = employee(ValueType::O, 0.0, 0.0);
        let (alloc, beta) = allocate_time(&emp, &Strategy::NEUTRAL, 1, 8.0, true, &mut rng);
        assert_eq!(alloc, TimeAllocation { shirk: 0.0, coop: 0.0, individual: 8.0 });
        assert_eq!(beta, 1.0);
    }

    #[test]
    fn neutral_open_type_draws_centre_on_norms() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let emp = employee(ValueType::O, 1.0, 2.0);
        let strategy = Strategy { sigma: 0.5, mu: 0.0, lambda: 0.5 };
        let draws = 200_000;
        let (mut s, mut c, mut p) = (0.0, 0.0, 0.0);
        for _ in 0..draws {
            let (a, _) = allocate_time(&emp, &strategy, 5, 8.0, true, &mut rng);
            s += a.shirk;
            c += a.coop;
            p += a.individual;
        }
        let k = draws as f64;
        assert_abs_diff_eq!(s / k, 1.0, epsilon = 0.02);
        assert_abs_diff_eq!(c / k, 2.0, epsilon = 0.02);
        assert_abs_diff_eq!(p / k, 5.0, epsilon = 0.02);
    }

    #[test]
    fn warnings_contract_upper_shirking_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let mut emp = employee(ValueType::O, 2.0, 1.0);
        emp.written_warnings = vec![8, 9, 10];
        for _ in 0..1000 {
            let (a, beta) = allocate_time(&emp, &Strategy::NEUTRAL, 11, 8.0, true, &mut rng);
            assert_abs_diff_eq!(beta, 1.0 / 11.0, epsilon = 1e-15);
            assert!(a.shirk <= 2.0 * (1.0 + beta) + 1e-12);
        }
    }

    #[test]
    fn initial_allocations() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let eq = initial_allocation(TimeInitMethod::Equally, 0.5, 8.0, 0.8, &mut rng);
        assert_eq!(eq, TimeAllocation { shirk: 8.0 / 3.0, coop: 8.0 / 3.0, individual: 8.0 / 3.0 });
        let k = initial_allocation(TimeInitMethod::Kappa, 0.5, 8.0, 0.8, &mut rng);
        assert_abs_diff_eq!(k.shirk, 0.8);
        assert_abs_diff_eq!(k.coop, 3.6, epsilon = 1e-12);
        assert_abs_diff_eq!(k.individual, 3.6, epsilon = 1e-12);
        let kn = initial_allocation(TimeInitMethod::KappaNoShirk, 0.5, 8.0, 0.8, &mut rng);
        assert_eq!(kn, TimeAllocation { shirk: 0.0, coop: 4.0, individual: 4.0 });
    }

    #[test]
    fn random_initialisation_is_uniform_on_simplex() {
        // Each coordinate of a uniform point on the 2-simplex has mean tau/3
        // and P(s < tau/2) = 1 - (1/2)^2 = 3/4.
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let draws = 100_000;
        let mut sums = [0.0; 3];
        let mut below_half = 0usize;
        for _ in 0..draws {
            let a = initial_allocation(TimeInitMethod::Randomly, 0.5, 8.0, 0.8, &mut rng);
            assert!((a.total() - 8.0).abs() < 1e-12);
            sums[0] += a.shirk;
            sums[1] += a.coop;
            sums[2] += a.individual;
            below_half += usize::from(a.shirk < 4.0);
        }
        for s in sums {
            assert_abs_diff_eq!(s / draws as f64, 8.0 / 3.0, epsilon = 0.03);
        }
        assert_abs_diff_eq!(below_half as f64 / draws as f64, 0.75, epsilon = 0.01);
    }

    proptest! {
        #[test]
        fn bounds_are_ordered(x in 0.0..8.0f64, beta in 0.0..=1.0f64, offset in -10.0..10.0f64,
                              vt in 0usize..4) {
            let delta = deviation_delta(ValueType::ALL[vt]);
            let p = triangular_bounds(x, delta, beta, offset);
            prop_assert!(p.a <= p.m && p.m <= p.b && p.a >= 0.0);
        }

        #[test]
        fn samples_stay_in_support(x in 0.0..8.0f64, beta in 0.0..=1.0f64, offset in -4.0..4.0f64,
                                   u in 0.0..=1.0f64) {
            let p = triangular_bounds(x, 2.0 / 3.0, beta, offset);
            let v = triangular_inverse_cdf(p, u);
            prop_assert!(p.a <= v && v <= p.b);
        }

        #[test]
        fn beta_monotonicity(t in 10u32..1000, gap in 1u32..10, extra in 0usize..4) {
            let last = t - gap;
            let mut fewer: Vec<u32> = vec![last];
            let mut more: Vec<u32> = (0..extra as u32).map(|k| k + 1).filter(|&d| d < last).collect();
            more.push(last);
            fewer.dedup();
            let b_fewer = warning_scaling(&fewer, t);
            let b_more = warning_scaling(&more, t);
            prop_assert!(b_more <= b_fewer + 1e-15);
            prop_assert!(b_fewer > 0.0 && b_fewer <= 1.0);
            // further away from the last warning means closer to 1
            let later = warning_scaling(&fewer, t + 5);
            prop_assert!(later >= b_fewer);
        }

        #[test]
        fn allocation_respects_budget(s in 0.0..8.0f64, c in 0.0..8.0f64, sigma in 0.0..=1.0f64,
                                      mu in 0.0..=1.0f64, lambda in 0.0..=1.0f64,
                                      vt in 0usize..4, seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let emp = employee(ValueType::ALL[vt], s, c);
            let (a, _) = allocate_time(&emp, &Strategy { sigma, mu, lambda }, 3, 8.0, true, &mut rng);
            prop_assert!(a.shirk >= 0.0 && a.coop >= 0.0 && a.individual >= 0.0);
            prop_assert!((a.total() - 8.0).abs() < 1e-9);
        }

        #[test]
        fn autonomy_sign_mirroring(sigma in 0.0..=1.0f64, s in 0.0..8.0f64) {
            // equal s_norm * delta products for both types
            let c = autonomy_offset(ValueType::C, sigma, s, 1.0 / 3.0);
            let o = autonomy_offset(ValueType::O, sigma, s / 3.0, 1.0);
            prop_assert!((c + o).abs() < 1e-12);
        }
    }
}
