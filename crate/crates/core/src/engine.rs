//! Day loop, scenario runner and replicate batches.

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;

use crate::behavior::{allocate_time, deviation_delta, initial_allocation};
use crate::config::{validate_config, NormLag, SimConfig};
use crate::economy::{bonuses, group_profitability, individual_output, mean_coop_others, profitability, reward};
use crate::error::ModelError;
use crate::management::{
    draw_monitoring_set, expected_group_output, process_monitoring, update_max_shirking, update_strategy,
    StrategyWindow,
};
use crate::metrics::{aggregate_replicates, homophily_summary, Ledger};
use crate::network::{run_interaction_phase, update_edges, update_norms, EdgeMatrix};
use crate::record::{series_from_records, AgentSnapshot, DayRecord, SeriesRow};
use crate::rng::{seed_replicate, SimRng, StreamSeed};
use crate::types::{Employee, ManagementState, TimeAllocation, ValueType};
use crate::wellbeing::{base_satisfaction, productivity, recover_satisfaction};

/// Complete mutable state of one firm.
#[derive(Debug, Clone, PartialEq)]
pub struct FirmState {
    /// Last completed day.
    pub t: u32,
    pub employees: Vec<Employee>,
    pub mgmt: ManagementState,
    pub edges: EdgeMatrix,
    /// Expected group output at the last strategy update.
    pub ego: f64,
    pub strategy_updates: u32,
}

/// Exact proportional assignment of value types (largest remainder, ties to
/// the earlier type), in type order before shuffling.
pub fn assign_types(n: usize, dist: &[f64; 4]) -> Vec<ValueType> {
    let quotas: Vec<f64> = dist.iter().map(|p| p * n as f64).collect();
    let mut counts: Vec<usize> = quotas.iter().map(|q| q.floor() as usize).collect();
    let mut left = n.saturating_sub(counts.iter().sum());
    let mut order: Vec<usize> = (0..4).collect();
    order.sort_by(|&a, &b| (quotas[b] - quotas[b].floor()).total_cmp(&(quotas[a] - quotas[a].floor())).then(a.cmp(&b)));
    for &g in order.iter().cycle() {
        if left == 0 {
            break;
        }
        counts[g] += 1;
        left -= 1;
    }
    ValueType::ALL.iter().zip(counts).flat_map(|(&v, c)| std::iter::repeat_n(v, c)).collect()
}

/// A single replicate in progress.
#[derive(Debug, Clone)]
pub struct Simulation {
    cfg: SimConfig,
    state: FirmState,
    rng: SimRng,
    members: [Vec<usize>; 4],
}

impl Simulation {
    pub fn new(cfg: SimConfig, seed: StreamSeed) -> Result<Self, ModelError> {
        let violations = validate_config(&cfg);
        if !violations.is_empty() {
            return Err(ModelError::InvalidConfig(violations));
        }
        let mut rng = seed.rng();
        let mut types = assign_types(cfg.n, &cfg.type_dist);
        types.shuffle(&mut rng);

        let strategy = cfg.init_strategy;
        let s_max0 = cfg.initial_s_max();
        let employees: Vec<Employee> = types
            .iter()
            .enumerate()
            .map(|(id, &vtype)| {
                let alloc = initial_allocation(cfg.time_init, cfg.kappa, cfg.tau, s_max0, &mut rng);
                let base = base_satisfaction(vtype, strategy.sigma, strategy.mu, strategy.lambda);
                Employee {
                    id,
                    vtype,
                    alloc,
                    shirk_norm: alloc.shirk,
                    coop_norm: alloc.coop,
                    satisfaction: base,
                    base_satisfaction: base,
                    catch_count: 0,
                    written_warnings: Vec::new(),
                    beta: 1.0,
                    cap: 0,
                    delta: deviation_delta(vtype),
                }
            })
            .collect();

        let mut members: [Vec<usize>; 4] = Default::default();
        for e in &employees {
            members[e.vtype.index()].push(e.id);
        }
        let state = FirmState {
            t: 0,
            edges: EdgeMatrix::new(cfg.n),
            mgmt: ManagementState::new(strategy, s_max0),
            ego: expected_group_output(s_max0, cfg.kappa, cfg.tau),
            employees,
            strategy_updates: 0,
        };
        Ok(Simulation { cfg, state, rng, members })
    }

    pub fn config(&self) -> &SimConfig {
        &self.cfg
    }

    pub fn state(&self) -> &FirmState {
        &self.state
    }

    pub fn into_state(self) -> FirmState {
        self.state
    }

    /// Advances the firm by one day and reports what happened.
    pub fn step_day(&mut self) -> Result<DayRecord, ModelError> {
        let cfg = &self.cfg;
        let st = &mut self.state;
        let rng = &mut self.rng;
        let t = st.t + 1;
        let n = cfg.n;

        for e in st.employees.iter_mut() {
            e.satisfaction = recover_satisfaction(e.satisfaction, e.base_satisfaction);
        }

        let previous: Vec<TimeAllocation> = st.employees.iter().map(|e| e.alloc).collect();
        let (lo, hi) = cfg.cap_range;
        let strategy = st.mgmt.strategy;
        for e in st.employees.iter_mut() {
            let u: f64 = rng.random();
            e.cap = (lo + (hi - lo) * u).round() as u32;
            let (alloc, beta) = allocate_time(e, &strategy, t, cfg.tau, cfg.rho_mu_scaling, rng);
            e.alloc = alloc;
            e.beta = beta;
        }
        let current: Vec<TimeAllocation> = st.employees.iter().map(|e| e.alloc).collect();
        let caps: Vec<u32> = st.employees.iter().map(|e| e.cap).collect();

        let log = run_interaction_phase(&current, &st.edges, &caps, cfg.tau, rng);
        update_edges(&mut st.edges, &log, t);

        let behaviors = match cfg.norm_lag {
            NormLag::Current => &current,
            NormLag::Previous => &previous,
        };
        for e in st.employees.iter_mut() {
            (e.shirk_norm, e.coop_norm) = update_norms(e, &log, behaviors, cfg.h);
        }

        let update_due = cfg.endogenous_management && t % cfg.suf == 0;
        let window = update_due.then(|| StrategyWindow::from_history(&st.mgmt, cfg.lookback()));
        if cfg.endogenous_management {
            let yesterday = st.mgmt.obs_shirk_history.last().copied().flatten();
            st.mgmt.s_max = update_max_shirking(st.mgmt.s_max, yesterday, cfg.h);
        }
        let etc = draw_monitoring_set(strategy.sigma, n, rng);
        let outcome = process_monitoring(&etc, &mut st.employees, st.mgmt.s_max, t, cfg.eta, cfg.obs_mean_divisor)?;
        st.mgmt.obs_shirk_history.push(outcome.mean_obs_shirk);
        st.mgmt.obs_coop_history.push(outcome.mean_obs_coop);

        let total_coop: f64 = current.iter().map(|a| a.coop).sum();
        let outputs: Vec<f64> = st
            .employees
            .iter()
            .map(|e| {
                let pi = productivity(e.satisfaction, cfg.s_eff);
                let cbar = mean_coop_others(total_coop, e.alloc.coop, n);
                individual_output(e.alloc.individual, cbar, cfg.kappa, pi, cfg.wage_hourly)
            })
            .collect();
        let bonus = bonuses(&outputs, strategy.lambda);
        let wage = cfg.base_wage_daily();
        let rewards: Vec<f64> = bonus.iter().map(|&b| reward(wage, strategy.mu, b)).collect();
        let total_output: f64 = outputs.iter().sum();
        let total_reward: f64 = rewards.iter().sum();
        st.mgmt.output_history.push(total_output / n as f64);

        let mut updated = false;
        if let Some(window) = window {
            st.ego = expected_group_output(st.mgmt.s_max, cfg.kappa, cfg.tau);
            let next = update_strategy(strategy, &window, st.mgmt.s_max, cfg.sui, st.ego, cfg.kappa, cfg.tau);
            st.strategy_updates += 1;
            updated = true;
            if next != strategy {
                st.mgmt.strategy = next;
                for e in st.employees.iter_mut() {
                    e.base_satisfaction = base_satisfaction(e.vtype, next.sigma, next.mu, next.lambda);
                }
            }
        }

        let types: Vec<ValueType> = st.employees.iter().map(|e| e.vtype).collect();
        let (homophily_mean, group_homophily) = homophily_summary(&st.edges, &types);
        let group_satisfaction = std::array::from_fn(|g| {
            let m = &self.members[g];
            (!m.is_empty()).then(|| m.iter().map(|&i| st.employees[i].satisfaction).sum::<f64>() / m.len() as f64)
        });
        let group_prof = std::array::from_fn(|g| group_profitability(&outputs, &rewards, &self.members[g]));
        let mean = |f: &dyn Fn(&Employee) -> f64| st.employees.iter().map(f).sum::<f64>() / n as f64;
        let agents = cfg.record_agents.then(|| {
            st.employees
                .iter()
                .map(|e| AgentSnapshot {
                    id: e.id,
                    vtype: e.vtype,
                    alloc: e.alloc,
                    satisfaction: e.satisfaction,
                    beta: e.beta,
                    output: outputs[e.id],
                    reward: rewards[e.id],
                    interactions: log.count(e.id) as u32,
                })
                .collect()
        });

        st.t = t;
        Ok(DayRecord {
            t,
            strategy: st.mgmt.strategy,
            s_max: st.mgmt.s_max,
            ego: st.ego,
            mean_obs_shirk: outcome.mean_obs_shirk,
            mean_obs_coop: outcome.mean_obs_coop,
            total_output,
            total_reward,
            profitability: profitability(&outputs, &rewards),
            group_profitability: group_prof,
            satisfaction_mean: mean(&|e| e.satisfaction),
            group_satisfaction,
            homophily_mean,
            group_homophily,
            verbal_warnings: outcome.verbal_count(),
            written_warnings: outcome.written_count(),
            interactions_per_agent: 2.0 * log.pair_count() as f64 / n as f64,
            mean_shirk: mean(&|e| e.alloc.shirk),
            mean_coop: mean(&|e| e.alloc.coop),
            mean_individual: mean(&|e| e.alloc.individual),
            mean_beta: mean(&|e| e.beta),
            strategy_updated: updated,
            agents,
        })
    }
}

/// One finished replicate.
#[derive(Debug, Clone)]
pub struct RunResult {
    pub replicate: u32,
    /// State before the first day.
    pub initial: FirmState,
    pub records: Vec<DayRecord>,
    pub final_state: FirmState,
}

impl RunResult {
    pub fn series(&self) -> Vec<SeriesRow> {
        series_from_records(&self.records)
    }

    pub fn ledger(&self) -> Vec<Ledger> {
        self.records.iter().map(|r| Ledger { output: r.total_output, reward: r.total_reward }).collect()
    }
}

pub fn run_scenario(cfg: &SimConfig, replicate: u32) -> Result<RunResult, ModelError> {
    run_with_seed(cfg, seed_replicate(cfg.master_seed, u64::from(replicate)), replicate)
}

pub fn run_with_seed(cfg: &SimConfig, seed: StreamSeed, replicate: u32) -> Result<RunResult, ModelError> {
    let mut sim = Simulation::new(cfg.clone(), seed)?;
    let initial = sim.state().clone();
    let records = (0..cfg.steps).map(|_| sim.step_day()).collect::<Result<Vec<_>, _>>()?;
    Ok(RunResult { replicate, initial, records, final_state: sim.into_state() })
}

/// All replicates of one configuration and their mean series.
#[derive(Debug, Clone)]
pub struct ReplicateSet {
    pub runs: Vec<RunResult>,
    pub mean: Vec<SeriesRow>,
}

impl ReplicateSet {
    /// Mean daily output and reward totals across replicates.
    pub fn mean_ledger(&self) -> Vec<Ledger> {
        use crate::record::col;
        self.mean
            .iter()
            .map(|r| Ledger {
                output: r.get(col::TOTAL_OUTPUT).unwrap_or(0.0),
                reward: r.get(col::TOTAL_REWARD).unwrap_or(0.0),
            })
            .collect()
    }
}

/// Runs every replicate on the current rayon pool.
pub fn run_replicates(cfg: &SimConfig) -> Result<ReplicateSet, ModelError> {
    let runs = (0..cfg.replicates)
        .into_par_iter()
        .map(|k| run_scenario(cfg, k))
        .collect::<Result<Vec<_>, _>>()?;
    collect_set(runs)
}

/// Same as [`run_replicates`] on the calling thread only.
pub fn run_replicates_serial(cfg: &SimConfig) -> Result<ReplicateSet, ModelError> {
    let runs = (0..cfg.replicates).map(|k| run_scenario(cfg, k)).collect::<Result<Vec<_>, _>>()?;
    collect_set(runs)
}

fn collect_set(runs: Vec<RunResult>) -> Result<ReplicateSet, ModelError> {
    if runs.is_empty() {
        let violation = crate::config::Violation {
            field: "replicates",
            message: "at least one replicate is required".into(),
        };
        return Err(ModelError::InvalidConfig(vec![violation]));
    }
    let series: Vec<Vec<SeriesRow>> = runs.iter().map(RunResult::series).collect();
    let mean = aggregate_replicates(&series)?;
    Ok(ReplicateSet { runs, mean })
}
