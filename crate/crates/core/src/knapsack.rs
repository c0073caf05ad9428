//! 0/1 knapsack ingestion, penalty QUBO, coefficient-range analysis and
//! batch hardness statistics.

use rand::Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::model::{population_std, qubo_to_ising, HardnessMode, HardnessReport, Interval, Qubo};
use crate::rng::{substream, Domain};

/// Default limit on `n * (C + 1)` for the dynamic program.
pub const DEFAULT_DP_CAP: u128 = 200_000_000;

/// Default number of histogram bins.
pub const DEFAULT_BINS: usize = 50;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum KnapsackError {
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("invalid instance: {0}")]
    Invalid(String),
    #[error("penalty weight must be positive and finite, got {0}")]
    Lambda(f64),
    #[error("dynamic program needs {work} cells, above the cap of {cap}")]
    WorkCap { work: u128, cap: u128 },
    #[error("no instances given")]
    NoInstances,
    /// Every source failed; `(name, reason)` per source.
    #[error("none of the {} instances could be analysed", .0.len())]
    AllFailed(Vec<(String, String)>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KnapsackInstance {
    pub profits: Vec<u64>,
    pub weights: Vec<u64>,
    pub capacity: u64,
}

impl KnapsackInstance {
    pub fn new(profits: Vec<u64>, weights: Vec<u64>, capacity: u64) -> Result<Self, KnapsackError> {
        if profits.len() != weights.len() {
            return Err(KnapsackError::Invalid(format!("{} profits but {} weights", profits.len(), weights.len())));
        }
        if profits.is_empty() {
            return Err(KnapsackError::Invalid("no items".into()));
        }
        if profits.iter().chain(&weights).any(|&v| v == 0) {
            return Err(KnapsackError::Invalid("profits and weights must be at least 1".into()));
        }
        if capacity == 0 {
            return Err(KnapsackError::Invalid("capacity must be at least 1".into()));
        }
        Ok(KnapsackInstance { profits, weights, capacity })
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn min_weight(&self) -> u64 {
        *self.weights.iter().min().expect("instance has items")
    }

    pub fn max_weight(&self) -> u64 {
        *self.weights.iter().max().expect("instance has items")
    }

    pub fn total_weight(&self) -> u64 {
        self.weights.iter().sum()
    }

    /// No item fits.
    pub fn is_infeasible(&self) -> bool {
        self.capacity < self.min_weight()
    }

    /// Every item fits at once.
    pub fn is_trivial(&self) -> bool {
        self.capacity >= self.total_weight()
    }

    /// `1 + max p`: one unit of constraint violation outweighs any profit.
    pub fn default_lambda(&self) -> f64 {
        1.0 + *self.profits.iter().max().expect("instance has items") as f64
    }

    /// Serializes to the text format read by [`parse_kp`].
    pub fn to_text(&self) -> String {
        let mut s = format!("{}\n", self.len());
        for (i, (p, w)) in self.profits.iter().zip(&self.weights).enumerate() {
            s.push_str(&format!("{} {p} {w}\n", i + 1));
        }
        s.push_str(&format!("{}\n", self.capacity));
        s
    }
}

/// Parses `n`, then `n` lines of `id profit weight`, then the capacity.
/// Blank lines and `#` comments are ignored.
pub fn parse_kp(text: &str) -> Result<KnapsackInstance, KnapsackError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let err = |line, reason: String| KnapsackError::Parse { line, reason };
    let int =
        |line, tok: &str| tok.parse::<u64>().map_err(|_| err(line, format!("not a non-negative integer: {tok:?}")));

    let (line, first) = lines.next().ok_or_else(|| err(1, "empty input".into()))?;
    let fields: Vec<&str> = first.split_whitespace().collect();
    if fields.len() != 1 {
        return Err(err(line, format!("expected item count, found {} fields", fields.len())));
    }
    let n = int(line, fields[0])? as usize;

    let mut profits = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    let mut last_line = line;
    for _ in 0..n {
        let (line, l) =
            lines.next().ok_or_else(|| err(last_line + 1, format!("expected {n} items, found {}", profits.len())))?;
        let fields: Vec<&str> = l.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(err(line, format!("expected `id profit weight`, found {} fields", fields.len())));
        }
        int(line, fields[0])?;
        profits.push(int(line, fields[1])?);
        weights.push(int(line, fields[2])?);
        last_line = line;
    }
    let (line, l) = lines.next().ok_or_else(|| err(last_line + 1, "missing capacity line".into()))?;
    let fields: Vec<&str> = l.split_whitespace().collect();
    if fields.len() != 1 {
        return Err(err(line, format!("expected capacity, found {} fields", fields.len())));
    }
    let capacity = int(line, fields[0])?;
    if let Some((line, _)) = lines.next() {
        return Err(err(line, "trailing content after capacity".into()));
    }
    let inst = KnapsackInstance::new(profits, weights, capacity).map_err(|e| err(line, e.to_string()))?;
    if inst.is_infeasible() {
        log::warn!("capacity {} is below the lightest item", inst.capacity);
    }
    Ok(inst)
}

/// Penalty QUBO `-sum p_i x_i + lambda (sum w_i x_i - C)^2`.
pub fn kp_to_qubo(inst: &KnapsackInstance, lambda: f64) -> Result<Qubo, KnapsackError> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(KnapsackError::Lambda(lambda));
    }
    let n = inst.len();
    let c = inst.capacity as f64;
    let mut q = Qubo::new(n);
    q.set_offset(lambda * c * c);
    for i in 0..n {
        let w = inst.weights[i] as f64;
        q.add_linear(i, -(inst.profits[i] as f64) + lambda * (w * w - 2.0 * c * w)).expect("index in range");
        for k in i + 1..n {
            q.add_quadratic(i, k, 2.0 * lambda * w * inst.weights[k] as f64).expect("distinct indices in range");
        }
    }
    Ok(q)
}

/// Direct evaluation of the penalty objective.
pub fn kp_objective(inst: &KnapsackInstance, lambda: f64, x: &[u8]) -> f64 {
    let (mut profit, mut weight) = (0.0, 0.0);
    for ((&p, &w), &xi) in inst.profits.iter().zip(&inst.weights).zip(x) {
        if xi == 1 {
            profit += p as f64;
            weight += w as f64;
        }
    }
    let slack = weight - inst.capacity as f64;
    -profit + lambda * slack * slack
}

/// Range comparison of the constraint-only coefficients, `w_i w_j` against
/// `C w_i`, in exact integer arithmetic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RangeAnalysis {
    pub r_j: [u128; 2],
    pub r_h: [u128; 2],
    pub len_j: u128,
    pub len_h: u128,
    pub threshold_c: u64,
    pub dominance: bool,
}

pub fn coefficient_ranges(inst: &KnapsackInstance) -> RangeAnalysis {
    let lo = inst.min_weight() as u128;
    let hi = inst.max_weight() as u128;
    let c = inst.capacity as u128;
    let r_j = [lo * lo, hi * hi];
    let r_h = [c * lo, c * hi];
    let len_j = r_j[1] - r_j[0];
    let len_h = r_h[1] - r_h[0];
    RangeAnalysis {
        r_j,
        r_h,
        len_j,
        len_h,
        threshold_c: inst.max_weight() + inst.min_weight(),
        dominance: len_h >= len_j,
    }
}

/// Exact `[min, max]` of the stored linear and quadratic QUBO coefficients.
pub fn qubo_extents(q: &Qubo) -> (Interval, Interval) {
    let span = |it: &mut dyn Iterator<Item = f64>| {
        let (lo, hi) = it.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
        if lo > hi {
            Interval { lo: 0.0, hi: 0.0 }
        } else {
            Interval { lo, hi }
        }
    };
    (span(&mut q.linear().values().copied()), span(&mut q.quadratic().values().copied()))
}

/// Hardness of the penalty QUBO, measured on its own coefficients and on
/// the Ising model it converts to.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KpHardness {
    pub qubo: HardnessReport,
    pub ising: HardnessReport,
}

pub fn kp_hardness(inst: &KnapsackInstance, lambda: f64) -> Result<KpHardness, KnapsackError> {
    if inst.len() < 2 {
        return Err(KnapsackError::Invalid("hardness needs at least two items".into()));
    }
    let q = kp_to_qubo(inst, lambda)?;
    let report = |h: &[f64], j: &[f64]| {
        HardnessReport::from_sigmas(population_std(h), population_std(j), h.len(), j.len(), HardnessMode::Empirical)
    };
    let lin: Vec<f64> = q.linear().values().copied().collect();
    let quad: Vec<f64> = q.quadratic().values().copied().collect();
    let (ising, _) = qubo_to_ising(&q);
    Ok(KpHardness { qubo: report(&lin, &quad), ising: report(ising.h(), ising.j()) })
}

/// Optimal profit and one optimal selection by dynamic programming over
/// capacities.
pub fn solve_kp_exact(inst: &KnapsackInstance) -> Result<(u64, Vec<u8>), KnapsackError> {
    solve_kp_exact_with_cap(inst, DEFAULT_DP_CAP)
}

pub fn solve_kp_exact_with_cap(inst: &KnapsackInstance, cap: u128) -> Result<(u64, Vec<u8>), KnapsackError> {
    let n = inst.len();
    // capacities beyond the total weight add nothing
    let c = inst.capacity.min(inst.total_weight()) as usize;
    let work = n as u128 * (c as u128 + 1);
    if work > cap {
        return Err(KnapsackError::WorkCap { work, cap });
    }
    let mut best = vec![0u64; c + 1];
    // take[i * (c + 1) + r]: item i improves capacity r
    let mut take = vec![false; n * (c + 1)];
    for i in 0..n {
        let w = inst.weights[i] as usize;
        let p = inst.profits[i];
        if w > c {
            continue;
        }
        for r in (w..=c).rev() {
            let cand = best[r - w] + p;
            if cand > best[r] {
                best[r] = cand;
                take[i * (c + 1) + r] = true;
            }
        }
    }
    let mut x = vec![0u8; n];
    let mut r = c;
    for i in (0..n).rev() {
        if take[i * (c + 1) + r] {
            x[i] = 1;
            r -= inst.weights[i] as usize;
        }
    }
    Ok((best[c], x))
}

/// Equal-width histogram. `edges` has one more entry than `counts`; the
/// last bin is closed on the right.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Histogram {
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
}

impl Histogram {
    /// Bins over the observed range. Identical values give one bin.
    pub fn build(values: &[f64], bins: usize) -> Option<Histogram> {
        let finite: Vec<f64> = values.iter().copied().filter(|v| v.is_finite()).collect();
        let lo = finite.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = finite.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if finite.is_empty() || bins == 0 {
            return None;
        }
        if lo == hi {
            return Some(Histogram { edges: vec![lo, hi], counts: vec![finite.len() as u64] });
        }
        let width = (hi - lo) / bins as f64;
        let mut edges: Vec<f64> = (0..bins).map(|k| lo + width * k as f64).collect();
        edges.push(hi);
        let mut counts = vec![0u64; bins];
        for v in finite {
            let k = (((v - lo) / width) as usize).min(bins - 1);
            counts[k] += 1;
        }
        Some(Histogram { edges, counts })
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

/// One analysed instance of a batch.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KpRow {
    pub name: String,
    pub n: usize,
    pub capacity: u64,
    pub lambda: f64,
    pub hardness: KpHardness,
    pub ranges: RangeAnalysis,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BatchReport {
    pub rows: Vec<KpRow>,
    pub failures: Vec<(String, String)>,
    /// Binned Ising-side hardness ratios of instances where it is defined.
    pub histogram: Option<Histogram>,
}

impl BatchReport {
    pub fn warning_count(&self) -> usize {
        self.failures.len()
    }

    /// Fraction of rows whose Ising-side ratio exceeds 1.
    pub fn fraction_ising_above_one(&self) -> f64 {
        let above = self.rows.iter().filter(|r| r.hardness.ising.f.is_some_and(|f| f > 1.0)).count();
        above as f64 / self.rows.len().max(1) as f64
    }
}

/// Analyses `(name, text)` sources in parallel. Unparseable sources are
/// skipped and listed. `lambda = None` uses each instance's default.
pub fn batch_hardness(
    sources: &[(String, String)],
    lambda: Option<f64>,
    bins: usize,
) -> Result<BatchReport, KnapsackError> {
    if sources.is_empty() {
        return Err(KnapsackError::NoInstances);
    }
    let results: Vec<Result<KpRow, (String, String)>> = sources
        .par_iter()
        .map(|(name, text)| {
            let fail = |e: KnapsackError| (name.clone(), e.to_string());
            let inst = parse_kp(text).map_err(fail)?;
            let lam = lambda.unwrap_or_else(|| inst.default_lambda());
            let hardness = kp_hardness(&inst, lam).map_err(fail)?;
            Ok(KpRow {
                name: name.clone(),
                n: inst.len(),
                capacity: inst.capacity,
                lambda: lam,
                hardness,
                ranges: coefficient_ranges(&inst),
            })
        })
        .collect();
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for r in results {
        match r {
            Ok(row) => rows.push(row),
            Err((name, e)) => {
                log::warn!("skipping {name}: {e}");
                failures.push((name, e));
            }
        }
    }
    if rows.is_empty() {
        return Err(KnapsackError::AllFailed(failures));
    }
    let fs: Vec<f64> = rows.iter().filter_map(|r| r.hardness.ising.f).collect();
    let histogram = Histogram::build(&fs, bins);
    Ok(BatchReport { rows, failures, histogram })
}

/// Synthetic instance: weights `round(N(50, 15^2))` clipped to at least 1,
/// profits uniform on `1..=100`, capacity uniform on `(max w, sum w)`.
pub fn synthetic_instance(n: usize, seed: u64, index: u64) -> KnapsackInstance {
    let mut rng = substream(seed, Domain::Knapsack, index);
    let normal = Normal::new(50.0f64, 15.0).expect("valid normal");
    let weights: Vec<u64> = (0..n).map(|_| normal.sample(&mut rng).round().max(1.0) as u64).collect();
    let profits: Vec<u64> = (0..n).map(|_| rng.random_range(1..=100)).collect();
    let max_w = *weights.iter().max().expect("n >= 1");
    let total: u64 = weights.iter().sum();
    let capacity = if total > max_w + 1 { rng.random_range(max_w + 1..total) } else { max_w };
    KnapsackInstance::new(profits, weights, capacity).expect("synthetic instance is valid")
}
