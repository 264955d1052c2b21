//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Criteria 1-9 are exact properties checked on a 100-agent, 500-day run
//! and small pinned instances. Criteria 10-14 are qualitative targets on
//! full-length runs (100 agents, 3650 days, 30 replicates per scenario).

use std::collections::HashSet;
use std::time::Instant;

use firmsim_cli::app::group_correlations;
use firmsim_cli::run_cli;
use firmsim_core::behavior::{sample_triangular, warning_scaling, TriangularParams};
use firmsim_core::management::expected_group_output;
use firmsim_core::metrics::relative_cumulated_profitability;
use firmsim_core::network::{resolve_interactions, update_norms, InteractionLog};
use firmsim_core::{
    col, run_replicates, run_replicates_serial, seed_replicate, Employee, ReplicateSet, Scenario, SimConfig,
    Simulation, Strategy, TimeAllocation, ValueType,
};

const FULL_STEPS: u32 = 3650;
const FULL_REPLICATES: u32 = 30;

struct Report {
    passed: usize,
    failed: usize,
}

impl Report {
    fn check(&mut self, id: u32, name: &str, pass: bool, detail: String) {
        if pass {
            self.passed += 1;
        } else {
            self.failed += 1;
        }
        println!("{} [{id:>2}] {name}: {detail}", if pass { "PASS" } else { "FAIL" });
    }
}

fn main() {
    let mut report = Report { passed: 0, failed: 0 };
    let start = Instant::now();
    let interactions = property_run(&mut report);
    bonus_conservation(&mut report);
    determinism(&mut report);
    triangular_sampler(&mut report);
    norm_oracle(&mut report);
    interaction_oracle(&mut report);
    closed_forms(&mut report);
    let elapsed = start.elapsed().as_secs_f64();
    report.check(
        9,
        "Interaction volume",
        interactions <= 3.57 + 0.2 && elapsed < 60.0,
        format!("mean interactions per agent-day {interactions:.4} (limit 3.77); property suite took {elapsed:.1} s (limit 60 s)"),
    );

    qualitative(&mut report);

    println!("acceptance: {} passed, {} failed", report.passed, report.failed);
    if report.failed > 0 {
        std::process::exit(1);
    }
}

fn unit(x: f64) -> bool {
    (0.0..=1.0).contains(&x)
}

/// Criteria 1 and 2 on a 500-day Monthly run; returns the mean number of
/// interactions per agent over its second half.
fn property_run(report: &mut Report) -> f64 {
    let cfg = SimConfig { steps: 500, record_agents: true, ..Scenario::Monthly.config() };
    let tau = cfg.tau;
    let mut sim = Simulation::new(cfg, seed_replicate(42, 0)).unwrap();
    let (mut worst_budget, mut agent_days) = (0.0f64, 0usize);
    let mut out_of_bounds = Vec::new();
    let mut interactions = Vec::new();
    for _ in 0..500 {
        let r = sim.step_day().unwrap();
        let s = r.strategy;
        for (name, v) in [("sigma", s.sigma), ("mu", s.mu), ("lambda", s.lambda)] {
            if !unit(v) {
                out_of_bounds.push(format!("{name}={v} at t={}", r.t));
            }
        }
        for h in r.homophily_mean.iter().chain(r.group_homophily.iter().flatten()) {
            if !unit(*h) {
                out_of_bounds.push(format!("homophily={h} at t={}", r.t));
            }
        }
        for a in r.agents.as_ref().unwrap() {
            worst_budget = worst_budget.max((a.alloc.shirk + a.alloc.coop + a.alloc.individual - tau).abs());
            agent_days += 1;
            if !unit(a.satisfaction) || !unit(a.beta) {
                out_of_bounds.push(format!("agent {} S={} beta={} at t={}", a.id, a.satisfaction, a.beta, r.t));
            }
        }
        if let Some(w) = sim.state().edges.weights().into_iter().find(|&w| !unit(w)) {
            out_of_bounds.push(format!("edge weight {w} at t={}", r.t));
        }
        if r.t > 250 {
            interactions.push(r.interactions_per_agent);
        }
    }
    report.check(
        1,
        "Budget conservation",
        worst_budget <= 1e-9,
        format!("max |s+c+p-tau| = {worst_budget:.3e} over {agent_days} agent-days (limit 1e-9)"),
    );
    report.check(
        2,
        "Bounds",
        out_of_bounds.is_empty(),
        match out_of_bounds.first() {
            None => "sigma, mu, lambda, S, beta, edge weights and homophily stayed in [0, 1] for 500 days".into(),
            Some(first) => format!("{} violations, first: {first}", out_of_bounds.len()),
        },
    );
    interactions.iter().sum::<f64>() / interactions.len() as f64
}

/// Criterion 3: with mu = 1 the bonus pool is total reward minus base
/// wages, and it must equal total output every day.
fn bonus_conservation(report: &mut Report) {
    let mut worst = 0.0f64;
    for lambda in [0.0, 0.3, 1.0] {
        let cfg = SimConfig {
            steps: 200,
            record_agents: true,
            init_strategy: Strategy { sigma: 0.5, mu: 1.0, lambda },
            ..Scenario::Base.config()
        };
        let wage = cfg.base_wage_daily();
        let mut sim = Simulation::new(cfg, seed_replicate(3, 0)).unwrap();
        for _ in 0..200 {
            let r = sim.step_day().unwrap();
            let agents = r.agents.unwrap();
            let pool: f64 = agents.iter().map(|a| a.reward - wage).sum();
            let output: f64 = agents.iter().map(|a| a.output).sum();
            worst = worst.max((pool - output).abs());
        }
    }
    report.check(
        3,
        "Bonus conservation",
        worst < 1e-9,
        format!("max daily |sum B - sum O| = {worst:.3e} for lambda in {{0, 0.3, 1}} (limit 1e-9)"),
    );
}

/// Criterion 4: byte-identical exports and order-independent aggregates.
fn determinism(report: &mut Report) {
    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    for d in &dirs {
        let out = d.path().to_str().unwrap();
        let code = run_cli([
            "firmsim", "run", "--scenario", "Monthly", "--seed", "7", "--replicates", "1", "--steps", "300", "--runs",
            "--out", out,
        ]);
        assert_eq!(code, 0);
    }
    let read = |d: &tempfile::TempDir, f: &str| std::fs::read(d.path().join(f)).unwrap();
    let identical = ["monthly.csv", "monthly_runs.csv"].iter().all(|f| read(&dirs[0], f) == read(&dirs[1], f));
    let bytes = read(&dirs[0], "monthly_runs.csv").len();

    let cfg = SimConfig { steps: 200, replicates: 4, master_seed: 7, ..Scenario::Monthly.config() };
    let par = run_replicates(&cfg).unwrap();
    let ser = run_replicates_serial(&cfg).unwrap();
    let same_aggregate = par.mean == ser.mean;
    report.check(
        4,
        "Determinism",
        identical && same_aggregate,
        format!(
            "repeat exports identical: {identical} ({bytes} bytes); serial vs parallel aggregates identical: {same_aggregate}"
        ),
    );
}

/// Criterion 5.
fn triangular_sampler(report: &mut Report) {
    let params = TriangularParams { a: 0.0, m: 1.0, b: 2.0 };
    let mut rng = seed_replicate(2024, 0).rng();
    let draws: Vec<f64> = (0..100_000).map(|_| sample_triangular(params, &mut rng)).collect();
    let mean = draws.iter().sum::<f64>() / draws.len() as f64;
    let inside = draws.iter().all(|x| (0.0..=2.0).contains(x));
    report.check(
        5,
        "Triangular sampler",
        (mean - 1.0).abs() <= 0.01 && inside,
        format!("mean of 1e5 draws {mean:.5} (target 1 +- 0.01); all in [0, 2]: {inside}"),
    );
}

fn symmetric(n: usize, upper: &[(usize, usize, f64)]) -> Vec<f64> {
    let mut m = vec![0.0; n * n];
    for &(i, j, v) in upper {
        m[i * n + j] = v;
        m[j * n + i] = v;
    }
    m
}

fn employee(id: usize, shirk_norm: f64, coop_norm: f64) -> Employee {
    Employee {
        id,
        vtype: ValueType::ALL[id],
        alloc: TimeAllocation::default(),
        shirk_norm,
        coop_norm,
        satisfaction: 0.5,
        base_satisfaction: 0.5,
        catch_count: 0,
        written_warnings: Vec::new(),
        beta: 1.0,
        cap: 0,
        delta: 0.5,
    }
}

/// Criterion 6: agent 0 meets agent 1 (increment 0.5) and agent 2 (0.25).
fn norm_oracle(report: &mut Report) {
    let sim = symmetric(3, &[(0, 1, 0.5), (0, 2, 0.25), (1, 2, 0.9)]);
    let candidates = vec![vec![1, 2], vec![0, 2], vec![0, 1]];
    let log = resolve_interactions(&[0, 1, 2], &candidates, &sim, &[0.0; 9], &[2, 1, 1]);
    let behaviors = [
        TimeAllocation::from_shirk_coop(0.0, 0.0, 8.0),
        TimeAllocation::from_shirk_coop(2.0, 3.0, 8.0),
        TimeAllocation::from_shirk_coop(0.5, 1.0, 8.0),
    ];
    let h = 0.1;
    let (s0, c0) = update_norms(&employee(0, 1.0, 2.0), &log, &behaviors, h);
    let (s1, _) = update_norms(&employee(1, 1.0, 2.0), &log, &behaviors, h);
    let unchanged = update_norms(&employee(2, 1.0, 2.0), &InteractionLog::empty(3), &behaviors, h);
    // hand computation
    let s0_hand = 0.9 * 1.0 + 0.1 * (0.5 * 2.0 + 0.25 * 0.5) / 0.75;
    let c0_hand = 0.9 * 2.0 + 0.1 * (0.5 * 3.0 + 0.25 * 1.0) / 0.75;
    let s1_hand = 0.9 * 1.0 + 0.1 * 0.0;
    let errors = [(s0 - 1.05).abs(), (s0 - s0_hand).abs(), (c0 - c0_hand).abs(), (s1 - s1_hand).abs()];
    let worst = errors.iter().cloned().fold(0.0, f64::max);
    report.check(
        6,
        "Norm-update oracle",
        worst <= 1e-12 && unchanged == (1.0, 2.0),
        format!("two-partner shirking norm {s0:.15} (hand 1.05); max error {worst:.1e}; isolated agent unchanged"),
    );
}

/// Independent walk used as the enumeration oracle.
fn enumerate_walk(order: &[usize], candidates: &[Vec<usize>], sim: &[f64], draws: &[f64], caps: &[u32]) -> Vec<(usize, usize)> {
    let n = caps.len();
    let mut left = caps.to_vec();
    let mut checked = HashSet::new();
    let mut met = Vec::new();
    for &i in order {
        for &j in &candidates[i] {
            if left[i] == 0 {
                break;
            }
            let key = (i.min(j), i.max(j));
            if left[j] == 0 || !checked.insert(key) {
                continue;
            }
            if draws[key.0 * n + key.1] < sim[i * n + j] {
                left[i] -= 1;
                left[j] -= 1;
                met.push(key);
            }
        }
    }
    met.sort();
    met
}

/// Criterion 7: every processing order of a pinned 3-agent instance.
fn interaction_oracle(report: &mut Report) {
    let sim = symmetric(3, &[(0, 1, 0.8), (0, 2, 0.3), (1, 2, 0.6)]);
    let draws = symmetric(3, &[(0, 1, 0.5), (0, 2, 0.4), (1, 2, 0.1)]);
    let candidates = vec![vec![1, 2], vec![2, 0], vec![0, 1]];
    let caps = [1, 1, 2];
    let orders = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let mut mismatches = Vec::new();
    for order in orders {
        let log = resolve_interactions(&order, &candidates, &sim, &draws, &caps);
        let mut got: Vec<(usize, usize)> =
            [(0, 1), (0, 2), (1, 2)].into_iter().filter(|&(i, j)| log.interacted(i, j)).collect();
        got.sort();
        let hand = if order[0] == 0 { vec![(0, 1)] } else { vec![(1, 2)] };
        let symmetric_log = (0..3).all(|i| (0..3).all(|j| log.delta(i, j) == log.delta(j, i)));
        if got != enumerate_walk(&order, &candidates, &sim, &draws, &caps) || got != hand || !symmetric_log {
            mismatches.push(format!("{order:?}"));
        }
    }
    report.check(
        7,
        "Interaction-phase oracle",
        mismatches.is_empty(),
        if mismatches.is_empty() {
            "all 6 processing orders match the enumeration".into()
        } else {
            format!("mismatching orders: {}", mismatches.join(" "))
        },
    );
}

/// Criterion 8.
fn closed_forms(report: &mut Report) {
    let ego = expected_group_output(0.8, 0.5, 8.0);
    let beta = warning_scaling(&[50], 100);
    report.check(
        8,
        "Closed forms",
        ego == 3.6 && (beta - 0.8333).abs() <= 1e-4,
        format!("EGO(0.5, 8, 0.8) = {ego} (exactly 3.6); beta({{50}}, 100) = {beta:.6} (0.8333 +- 1e-4)"),
    );
}

struct ScenarioResult {
    scenario: Scenario,
    set: ReplicateSet,
}

impl ScenarioResult {
    fn last(&self, column: usize) -> f64 {
        self.set.mean.last().and_then(|r| r.get(column)).unwrap_or(f64::NAN)
    }

    fn st_ratio(&self) -> f64 {
        let others: Vec<f64> = [ValueType::C, ValueType::O, ValueType::SE]
            .iter()
            .map(|&g| self.last(col::homophily(g)))
            .collect();
        self.last(col::homophily(ValueType::ST)) / (others.iter().sum::<f64>() / 3.0)
    }
}

fn qualitative(report: &mut Report) {
    let start = Instant::now();
    let results: Vec<ScenarioResult> = Scenario::ALL
        .into_iter()
        .map(|scenario| {
            let cfg = SimConfig { steps: FULL_STEPS, replicates: FULL_REPLICATES, ..scenario.config() };
            ScenarioResult { scenario, set: run_replicates(&cfg).unwrap() }
        })
        .collect();
    println!(
        "      full runs: {} scenarios x {FULL_REPLICATES} replicates x {FULL_STEPS} days in {:.0} s",
        results.len(),
        start.elapsed().as_secs_f64()
    );
    let base = &results[0];
    let adaptive = &results[1..];

    // 10
    let mut ok = true;
    let mut parts = Vec::new();
    for r in adaptive {
        let (s, m, l) = (r.last(col::SIGMA), r.last(col::MU), r.last(col::LAMBDA));
        ok &= s < 0.1 && m > 0.85 && l > 0.8;
        parts.push(format!("{} sigma={s:.3} mu={m:.3} lambda={l:.3}", r.scenario));
    }
    report.check(10, "Long-run strategy (sigma<0.1, mu>0.85, lambda>0.8)", ok, parts.join("; "));

    // 11
    let mut ok = true;
    let mut parts = Vec::new();
    for r in adaptive {
        let ratio = r.st_ratio();
        ok &= (1.6..=2.4).contains(&ratio);
        parts.push(format!("{} {ratio:.3}", r.scenario));
    }
    report.check(11, "ST homophily separation in [1.6, 2.4]", ok, parts.join("; "));

    // 12
    let yearly = adaptive.iter().find(|r| r.scenario == Scenario::Yearly).unwrap();
    let py = yearly.last(col::PROFITABILITY);
    let others: Vec<(Scenario, f64)> = adaptive
        .iter()
        .filter(|r| r.scenario != Scenario::Yearly)
        .map(|r| (r.scenario, r.last(col::PROFITABILITY)))
        .collect();
    let ok = (0.24..=0.31).contains(&py) && others.iter().all(|&(_, p)| py >= p);
    let listed: Vec<String> = others.iter().map(|(s, p)| format!("{s} {p:.4}")).collect();
    report.check(
        12,
        "Yearly final profitability in [0.24, 0.31] and highest",
        ok,
        format!("Yearly {py:.4}; {}; Base {:.4}", listed.join(", "), base.last(col::PROFITABILITY)),
    );

    // 13
    let base_ledger = base.set.mean_ledger();
    let mut ok = true;
    let mut parts = Vec::new();
    for r in adaptive {
        let rel = relative_cumulated_profitability(&r.set.mean_ledger(), &base_ledger).unwrap();
        let last = *rel.last().unwrap();
        ok &= last < 0.8;
        parts.push(format!("{} {:.2}%", r.scenario, 100.0 * last));
    }
    report.check(13, "Relative cumulated profitability vs Base < 80%", ok, parts.join("; "));

    // 14
    let monthly = adaptive.iter().find(|r| r.scenario == Scenario::Monthly).unwrap();
    let corr = |g| group_correlations(&monthly.set, g).map(|c| c.unwrap_or(f64::NAN));
    let [sp_c, _, _] = corr(ValueType::C);
    let [sp_o, _, _] = corr(ValueType::O);
    let [sp_se, _, _] = corr(ValueType::SE);
    let [sp_st, hp_st, _] = corr(ValueType::ST);
    let ok = sp_c > 0.5 && sp_o > 0.5 && sp_se > 0.5 && sp_st < 0.0 && hp_st < -0.5;
    report.check(
        14,
        "Monthly correlation signs",
        ok,
        format!("SP C={sp_c:.3} O={sp_o:.3} SE={sp_se:.3} ST={sp_st:.3}; HP ST={hp_st:.3}"),
    );
}
