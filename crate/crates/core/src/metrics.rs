//! Relative-difference metric and boxplot statistics.
//!
//! Quantiles use inclusive linear interpolation between order statistics:
//! the `p`-quantile of `n` sorted values sits at position `p (n - 1)`.

use serde::Serialize;
use thiserror::Error;

use crate::model::SampleSet;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricsError {
    #[error("cannot summarise an empty list")]
    Empty,
    #[error("baseline sample set is empty")]
    EmptyBaseline,
    #[error("baseline minimum energy is 0; the relative difference is undefined")]
    ZeroBaseline,
    #[error("non-finite value in input")]
    NonFinite,
}

/// Five-number summary plus mean.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Summary {
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub mean: f64,
    pub q3: f64,
    pub max: f64,
}

/// Relative differences of every count-expanded candidate sample.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RlSummary {
    pub rl_values: Vec<f64>,
    #[serde(flatten)]
    pub summary: Summary,
    pub baseline_min: f64,
}

/// Gap statistics of one group relative to the group minimum.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConsistencyRow<K> {
    pub group_key: K,
    pub min_energy: f64,
    pub mean_gap: f64,
    pub q1_gap: f64,
    pub median_gap: f64,
    pub q3_gap: f64,
    pub max_gap: f64,
    pub samples: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConsistencyReport<K> {
    pub rows: Vec<ConsistencyRow<K>>,
    pub skipped: Vec<K>,
}

/// Quantile of sorted data, `p` in `[0, 1]`.
pub fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    let pos = p * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let frac = pos - lo as f64;
    sorted[lo] + (sorted[hi] - sorted[lo]) * frac
}

pub fn summary_stats(values: &[f64]) -> Result<Summary, MetricsError> {
    if values.is_empty() {
        return Err(MetricsError::Empty);
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(MetricsError::NonFinite);
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let mean = v.iter().sum::<f64>() / v.len() as f64;
    Ok(Summary {
        min: v[0],
        q1: quantile_sorted(&v, 0.25),
        median: quantile_sorted(&v, 0.5),
        // summation rounding can push the mean a hair outside the data
        mean: mean.clamp(v[0], v[v.len() - 1]),
        q3: quantile_sorted(&v, 0.75),
        max: v[v.len() - 1],
    })
}

/// `(E_cand - min E_base) / |min E_base|` for each candidate sample.
/// Negative values mean the candidate beat the baseline.
pub fn relative_difference(candidate: &SampleSet, baseline: &SampleSet) -> Result<RlSummary, MetricsError> {
    let base = baseline.min_energy().ok_or(MetricsError::EmptyBaseline)?;
    if base == 0.0 {
        return Err(MetricsError::ZeroBaseline);
    }
    let rl_values: Vec<f64> = candidate.expanded_energies().into_iter().map(|e| (e - base) / base.abs()).collect();
    let summary = summary_stats(&rl_values)?;
    Ok(RlSummary { rl_values, summary, baseline_min: base })
}

/// Per-group gaps from the group's own minimum energy, rows ordered by
/// key. Empty groups are skipped and listed.
pub fn consistency_report<K: Clone + PartialOrd>(groups: &[(K, SampleSet)]) -> ConsistencyReport<K> {
    let mut rows = Vec::new();
    let mut skipped = Vec::new();
    for (key, set) in groups {
        let Some(min) = set.min_energy() else {
            log::warn!("skipping empty group");
            skipped.push(key.clone());
            continue;
        };
        let gaps: Vec<f64> = set.expanded_energies().into_iter().map(|e| e - min).collect();
        let Ok(s) = summary_stats(&gaps) else {
            log::warn!("skipping group with non-finite energies");
            skipped.push(key.clone());
            continue;
        };
        rows.push(ConsistencyRow {
            group_key: key.clone(),
            min_energy: min,
            mean_gap: s.mean,
            q1_gap: s.q1,
            median_gap: s.median,
            q3_gap: s.q3,
            max_gap: s.max,
            samples: set.total_count(),
        });
    }
    rows.sort_by(|a, b| a.group_key.partial_cmp(&b.group_key).unwrap_or(std::cmp::Ordering::Equal));
    ConsistencyReport { rows, skipped }
}
