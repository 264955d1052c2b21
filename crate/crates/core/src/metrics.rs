//! Derived observables: homophily, correlations, replicate means and
//! relative cumulated profitability.

use crate::error::ModelError;
use crate::network::EdgeMatrix;
use crate::record::SeriesRow;
use crate::types::ValueType;

/// Share of `i`'s edge weight that points at peers of the same value type.
/// `None` for agents without any edge.
pub fn interaction_homophily(i: usize, edges: &EdgeMatrix, types: &[ValueType]) -> Option<f64> {
    let (mut same, mut total) = (0.0, 0.0);
    for (j, &t) in types.iter().enumerate() {
        if j == i {
            continue;
        }
        let w = edges.weight(i, j);
        total += w;
        if t == types[i] {
            same += w;
        }
    }
    (total > 0.0).then(|| same / total)
}

/// Firm-wide and per-group means of the defined per-agent homophily values.
pub fn homophily_summary(edges: &EdgeMatrix, types: &[ValueType]) -> (Option<f64>, [Option<f64>; 4]) {
    let mut sums = [0.0; 4];
    let mut counts = [0usize; 4];
    for i in 0..types.len() {
        if let Some(h) = interaction_homophily(i, edges, types) {
            let g = types[i].index();
            sums[g] += h;
            counts[g] += 1;
        }
    }
    let total: usize = counts.iter().sum();
    let firm = (total > 0).then(|| sums.iter().sum::<f64>() / total as f64);
    let groups = std::array::from_fn(|g| (counts[g] > 0).then(|| sums[g] / counts[g] as f64));
    (firm, groups)
}

/// Pearson correlation; `None` for mismatched or too short series and for
/// series without variance.
pub fn pearson(xs: &[f64], ys: &[f64]) -> Option<f64> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return None;
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (&x, &y) in xs.iter().zip(ys) {
        let (dx, dy) = (x - mx, y - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return None;
    }
    Some((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

/// Pearson correlation of two columns over the rows where both are present.
pub fn column_correlation(series: &[SeriesRow], x: usize, y: usize) -> Option<f64> {
    let (xs, ys): (Vec<f64>, Vec<f64>) = series
        .iter()
        .filter_map(|r| Some((r.get(x)?, r.get(y)?)))
        .unzip();
    pearson(&xs, &ys)
}

/// Element-wise mean across replicates; missing cells are excluded from
/// their cell's mean.
pub fn aggregate_replicates(runs: &[Vec<SeriesRow>]) -> Result<Vec<SeriesRow>, ModelError> {
    let first = runs.first().ok_or(ModelError::EmptyRunSet)?;
    for run in runs {
        if run.len() != first.len() {
            return Err(ModelError::RunLengthMismatch(first.len(), run.len()));
        }
    }
    let width = first.first().map_or(0, |r| r.values.len());
    let rows = (0..first.len())
        .map(|k| {
            let mut sums = vec![0.0; width];
            let mut counts = vec![0usize; width];
            for run in runs {
                for (c, v) in run[k].values.iter().enumerate() {
                    if let Some(v) = v {
                        sums[c] += v;
                        counts[c] += 1;
                    }
                }
            }
            let values = sums
                .into_iter()
                .zip(counts)
                .map(|(s, c)| (c > 0).then(|| s / c as f64))
                .collect();
            SeriesRow { t: first[k].t, values }
        })
        .collect();
    Ok(rows)
}

/// Output and reward totals of one day.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ledger {
    pub output: f64,
    pub reward: f64,
}

/// Ratio of cumulated output to cumulated rewards, day by day.
pub fn cumulated_profitability(days: &[Ledger]) -> Vec<f64> {
    let (mut o, mut r) = (0.0, 0.0);
    days.iter()
        .map(|d| {
            o += d.output;
            r += d.reward;
            o / r
        })
        .collect()
}

/// Cumulated profitability of `run` divided by that of `baseline`.
pub fn relative_cumulated_profitability(run: &[Ledger], baseline: &[Ledger]) -> Result<Vec<f64>, ModelError> {
    if run.len() != baseline.len() {
        return Err(ModelError::RunLengthMismatch(baseline.len(), run.len()));
    }
    Ok(cumulated_profitability(run)
        .into_iter()
        .zip(cumulated_profitability(baseline))
        .map(|(a, b)| a / b)
        .collect())
}
