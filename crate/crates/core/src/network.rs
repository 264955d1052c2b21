//! Similarity-driven interactions, edge-weight history and diffusion of
//! descriptive norms.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::ModelError;
use crate::types::{Employee, TimeAllocation};

/// Long-run interaction history between every ordered pair of employees.
///
/// The weight after day `t` is the running average of the daily increments
/// `dE_1 .. dE_t`. It is stored as the cumulative increment sum, which makes
/// the daily update proportional to the number of interactions instead of
/// `n^2`; `weight(i, j)` divides by `t` on read.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeMatrix {
    n: usize,
    t: u32,
    cumulative: Vec<f64>,
}

impl EdgeMatrix {
    /// Blank-slate network: `n` vertices, no edges, day 0.
    pub fn new(n: usize) -> Self {
        EdgeMatrix { n, t: 0, cumulative: vec![0.0; n * n] }
    }

    /// Network with the given row-major weights as of day `t`.
    pub fn from_weights(n: usize, weights: &[f64], t: u32) -> Self {
        assert_eq!(weights.len(), n * n);
        let cumulative = weights
            .iter()
            .enumerate()
            .map(|(k, &w)| if k / n == k % n { 0.0 } else { w * f64::from(t) })
            .collect();
        EdgeMatrix { n, t, cumulative }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Last day folded into the weights.
    pub fn day(&self) -> u32 {
        self.t
    }

    pub fn weight(&self, i: usize, j: usize) -> f64 {
        if self.t == 0 {
            0.0
        } else {
            self.cumulative[i * self.n + j] / f64::from(self.t)
        }
    }

    /// Weight scaled by the current day; orders peers like `weight`.
    pub(crate) fn strength(&self, i: usize, j: usize) -> f64 {
        self.cumulative[i * self.n + j]
    }

    pub(crate) fn strength_row(&self, i: usize) -> &[f64] {
        &self.cumulative[i * self.n..(i + 1) * self.n]
    }

    pub fn is_peer(&self, i: usize, j: usize) -> bool {
        self.strength(i, j) > 0.0
    }

    pub fn weights(&self) -> Vec<f64> {
        (0..self.n * self.n).map(|k| self.weight(k / self.n, k % self.n)).collect()
    }
}

/// Today's interactions: symmetric increments and partner lists.
#[derive(Debug, Clone, PartialEq)]
pub struct InteractionLog {
    n: usize,
    delta: Vec<f64>,
    partners: Vec<Vec<usize>>,
}

impl InteractionLog {
    pub fn empty(n: usize) -> Self {
        InteractionLog { n, delta: vec![0.0; n * n], partners: vec![Vec::new(); n] }
    }

    fn record(&mut self, i: usize, j: usize, similarity: f64) {
        self.delta[i * self.n + j] = similarity;
        self.delta[j * self.n + i] = similarity;
        self.partners[i].push(j);
        self.partners[j].push(i);
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn delta(&self, i: usize, j: usize) -> f64 {
        self.delta[i * self.n + j]
    }

    pub fn interacted(&self, i: usize, j: usize) -> bool {
        self.delta(i, j) > 0.0
    }

    /// Partners of `i` in the order the interactions happened.
    pub fn partners(&self, i: usize) -> &[usize] {
        &self.partners[i]
    }

    pub fn count(&self, i: usize) -> usize {
        self.partners[i].len()
    }

    /// Number of interacting pairs.
    pub fn pair_count(&self) -> usize {
        self.partners.iter().map(Vec::len).sum::<usize>() / 2
    }
}

/// Absolute difference of the three activities, in units of the budget.
pub fn activity_difference(a: &TimeAllocation, b: &TimeAllocation, tau: f64) -> Result<f64, ModelError> {
    if !(tau > 0.0) {
        return Err(ModelError::InvalidParameter(format!("tau must be positive, got {tau}")));
    }
    Ok(raw_difference(a, b, tau))
}

fn raw_difference(a: &TimeAllocation, b: &TimeAllocation, tau: f64) -> f64 {
    ((a.shirk - b.shirk).abs() + (a.coop - b.coop).abs() + (a.individual - b.individual).abs()) / tau
}

/// `1 - ad`, floored at zero so it can serve as a meeting probability.
pub fn activity_similarity(ad: f64) -> f64 {
    (1.0 - ad).max(0.0)
}

#[derive(Debug, Clone, Copy)]
struct PeerKey {
    strength: f64,
    id: usize,
}

impl PartialEq for PeerKey {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for PeerKey {}

impl PartialOrd for PeerKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PeerKey {
    fn cmp(&self, other: &Self) -> Ordering {
        self.strength.total_cmp(&other.strength).then_with(|| other.id.cmp(&self.id))
    }
}

/// Lazily produced candidate order for one agent: existing peers by
/// descending weight (equal weights in random order), then everyone else
/// in random order. Only as much randomness is consumed as candidates are
/// actually requested.
struct CandidateOrder {
    heap: BinaryHeap<PeerKey>,
    tied: Vec<usize>,
    strangers: Vec<usize>,
    next_stranger: usize,
}

impl CandidateOrder {
    fn new(i: usize, edges: &EdgeMatrix) -> Self {
        let row = edges.strength_row(i);
        let mut peers = Vec::new();
        let mut strangers = Vec::new();
        for (j, &strength) in row.iter().enumerate() {
            if j == i {
                continue;
            }
            if strength > 0.0 {
                peers.push(PeerKey { strength, id: j });
            } else {
                strangers.push(j);
            }
        }
        CandidateOrder { heap: BinaryHeap::from(peers), tied: Vec::new(), strangers, next_stranger: 0 }
    }

    fn next<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Option<usize> {
        if let Some(j) = self.tied.pop() {
            return Some(j);
        }
        if let Some(top) = self.heap.pop() {
            if self.heap.peek().is_some_and(|k| k.strength == top.strength) {
                self.tied.push(top.id);
                while self.heap.peek().is_some_and(|k| k.strength == top.strength) {
                    self.tied.push(self.heap.pop().unwrap().id);
                }
                self.tied.shuffle(rng);
                return self.tied.pop();
            }
            return Some(top.id);
        }
        let k = self.next_stranger;
        if k >= self.strangers.len() {
            return None;
        }
        let pick = rng.random_range(k..self.strangers.len());
        self.strangers.swap(k, pick);
        self.next_stranger += 1;
        Some(self.strangers[k])
    }
}

/// Full order in which agent `i` checks potential partners.
pub fn interaction_candidates<R: Rng + ?Sized>(i: usize, edges: &EdgeMatrix, rng: &mut R) -> Vec<usize> {
    let mut order = CandidateOrder::new(i, edges);
    std::iter::from_fn(|| order.next(rng)).collect()
}

/// Book-keeping shared by the random and the pinned interaction walks.
struct Walk {
    n: usize,
    caps: Vec<u32>,
    checked: Vec<bool>,
    log: InteractionLog,
}

impl Walk {
    fn new(caps: &[u32]) -> Self {
        let n = caps.len();
        Walk { n, caps: caps.to_vec(), checked: vec![false; n * n], log: InteractionLog::empty(n) }
    }

    fn has_capacity(&self, i: usize) -> bool {
        self.caps[i] > 0
    }

    /// Agent `i` checks `j`. The pair draw is only requested for pairs that
    /// have not been checked today and where both sides have capacity left.
    fn consider(&mut self, i: usize, j: usize, similarity: f64, draw: impl FnOnce() -> f64) {
        if i == j || self.caps[j] == 0 {
            return;
        }
        let (lo, hi) = if i < j { (i, j) } else { (j, i) };
        let slot = lo * self.n + hi;
        if self.checked[slot] {
            return;
        }
        self.checked[slot] = true;
        if draw() < similarity {
            self.caps[i] -= 1;
            self.caps[j] -= 1;
            self.log.record(i, j, similarity);
        }
    }
}

/// Deterministic interaction walk with every random element pinned:
/// processing `order`, per-agent `candidates`, and row-major `similarity`
/// and `draws` matrices (draws are read from the upper triangle).
pub fn resolve_interactions(
    order: &[usize],
    candidates: &[Vec<usize>],
    similarity: &[f64],
    draws: &[f64],
    caps: &[u32],
) -> InteractionLog {
    let mut walk = Walk::new(caps);
    let n = walk.n;
    for &i in order {
        for &j in &candidates[i] {
            if !walk.has_capacity(i) {
                break;
            }
            let (lo, hi) = if i < j { (i, j) } else { (j, i) };
            walk.consider(i, j, similarity[i * n + j], || draws[lo * n + hi]);
        }
    }
    walk.log
}

/// One day of interactions.
///
/// Agents are processed in a fresh random order; each walks its candidate
/// list until its cap is exhausted. A pair meets when its symmetric uniform
/// draw falls below the pair's activity similarity.
pub fn run_interaction_phase<R: Rng + ?Sized>(
    allocs: &[TimeAllocation],
    edges: &EdgeMatrix,
    caps: &[u32],
    tau: f64,
    rng: &mut R,
) -> InteractionLog {
    let n = allocs.len();
    debug_assert_eq!(edges.n(), n);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);

    let mut walk = Walk::new(caps);
    for &i in &order {
        if !walk.has_capacity(i) {
            continue;
        }
        let mut candidates = CandidateOrder::new(i, edges);
        while walk.has_capacity(i) {
            let Some(j) = candidates.next(rng) else { break };
            let similarity = activity_similarity(raw_difference(&allocs[i], &allocs[j], tau));
            walk.consider(i, j, similarity, || rng.random::<f64>());
        }
    }
    walk.log
}

/// Folds day `t`'s increments into the running averages.
///
/// `t` must be the day after the one the matrix currently reflects; day 0
/// leaves the blank slate untouched.
pub fn update_edges(edges: &mut EdgeMatrix, log: &InteractionLog, t: u32) {
    if t == 0 {
        return;
    }
    assert_eq!(t, edges.t + 1, "edge history must advance one day at a time");
    let n = edges.n;
    for i in 0..n {
        for &j in log.partners(i) {
            edges.cumulative[i * n + j] += log.delta(i, j);
        }
    }
    edges.t = t;
}

/// New `(shirk_norm, coop_norm)` for `emp` after today's interactions.
///
/// Partners' behaviour (`behaviors`, indexed by agent) is averaged with
/// today's increments as weights; agents without interactions keep their
/// norms.
pub fn update_norms(emp: &Employee, log: &InteractionLog, behaviors: &[TimeAllocation], h: f64) -> (f64, f64) {
    let partners = log.partners(emp.id);
    if partners.is_empty() {
        return (emp.shirk_norm, emp.coop_norm);
    }
    let (mut weight, mut shirk, mut coop) = (0.0, 0.0, 0.0);
    for &j in partners {
        let w = log.delta(emp.id, j);
        weight += w;
        shirk += w * behaviors[j].shirk;
        coop += w * behaviors[j].coop;
    }
    debug_assert!(weight > 0.0);
    (
        (1.0 - h) * emp.shirk_norm + h * shirk / weight,
        (1.0 - h) * emp.coop_norm + h * coop / weight,
    )
}
