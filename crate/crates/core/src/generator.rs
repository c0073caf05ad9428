//! Coefficient distributions and hardware-native instance generation.

use std::sync::Arc;

use rand::Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{Interval, IsingModel, ModelError, DEFAULT_H_RANGE, DEFAULT_J_RANGE};
use crate::rng::{substream, Domain};
use crate::special::TruncatedNormal;
use crate::topology::HardwareGraph;

/// Probability tables must sum to one within this tolerance.
pub const TABLE_TOLERANCE: f64 = 1e-12;
/// Smallest truncation window mass accepted for rejection sampling.
pub const MIN_TRUNCATED_MASS: f64 = 1e-4;

#[derive(Debug, Error, PartialEq)]
pub enum GeneratorError {
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),
    #[error("hardness ratio {0} must be positive")]
    NonPositiveHardness(f64),
    #[error("hardness ratio {value} exceeds the linear range half-width {limit}")]
    ExceedsRange { value: f64, limit: f64 },
    #[error("{what} distribution support [{lo}, {hi}] exceeds model range {range}")]
    SupportOutsideRange { what: &'static str, lo: f64, hi: f64, range: Interval },
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Law of a single Ising coefficient.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "snake_case")]
#[serde(try_from = "RawDistribution")]
pub enum CoefficientDistribution {
    /// `(value, probability)` pairs. Zero-probability entries are kept.
    DiscreteTable {
        table: Vec<(f64, f64)>,
    },
    Uniform {
        lo: f64,
        hi: f64,
    },
    TruncatedNormal {
        mu: f64,
        sigma: f64,
        lo: f64,
        hi: f64,
    },
}

// Deserialization goes through the same validation as the constructors.
#[derive(Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "snake_case")]
enum RawDistribution {
    DiscreteTable { table: Vec<(f64, f64)> },
    Uniform { lo: f64, hi: f64 },
    TruncatedNormal { mu: f64, sigma: f64, lo: f64, hi: f64 },
}

impl TryFrom<RawDistribution> for CoefficientDistribution {
    type Error = GeneratorError;
    fn try_from(raw: RawDistribution) -> Result<Self, Self::Error> {
        match raw {
            RawDistribution::DiscreteTable { table } => Self::discrete(table),
            RawDistribution::Uniform { lo, hi } => Self::uniform(lo, hi),
            RawDistribution::TruncatedNormal { mu, sigma, lo, hi } => Self::truncated_normal(mu, sigma, lo, hi),
        }
    }
}

fn invalid(msg: impl Into<String>) -> GeneratorError {
    GeneratorError::InvalidDistribution(msg.into())
}

impl CoefficientDistribution {
    pub fn discrete(table: Vec<(f64, f64)>) -> Result<Self, GeneratorError> {
        if table.is_empty() {
            return Err(invalid("empty probability table"));
        }
        for &(v, p) in &table {
            if !v.is_finite() || !(0.0..=1.0).contains(&p) {
                return Err(invalid(format!("bad table entry ({v}, {p})")));
            }
        }
        let total: f64 = table.iter().map(|&(_, p)| p).sum();
        if (total - 1.0).abs() > TABLE_TOLERANCE {
            return Err(invalid(format!("probabilities sum to {total}")));
        }
        Ok(CoefficientDistribution::DiscreteTable { table })
    }

    pub fn uniform(lo: f64, hi: f64) -> Result<Self, GeneratorError> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(invalid(format!("uniform needs lo < hi (got {lo}, {hi})")));
        }
        Ok(CoefficientDistribution::Uniform { lo, hi })
    }

    /// Normal `N(mu, sigma^2)` conditioned on `[lo, hi]`. Bounds must be
    /// finite since samples have to fit a device range.
    pub fn truncated_normal(mu: f64, sigma: f64, lo: f64, hi: f64) -> Result<Self, GeneratorError> {
        if !(mu.is_finite() && sigma.is_finite() && sigma > 0.0) {
            return Err(invalid(format!("truncated normal needs finite mu and sigma > 0 (got {mu}, {sigma})")));
        }
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(invalid(format!("truncated normal needs finite lo < hi (got {lo}, {hi})")));
        }
        let mass = TruncatedNormal { mu, sigma, lo, hi }.mass();
        if mass < MIN_TRUNCATED_MASS {
            return Err(invalid(format!("truncation window holds only {mass:e} of the normal mass")));
        }
        Ok(CoefficientDistribution::TruncatedNormal { mu, sigma, lo, hi })
    }

    /// Smallest interval containing every value with positive probability.
    pub fn support(&self) -> (f64, f64) {
        match self {
            CoefficientDistribution::DiscreteTable { table } => table
                .iter()
                .filter(|&&(_, p)| p > 0.0)
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &(v, _)| (lo.min(v), hi.max(v))),
            CoefficientDistribution::Uniform { lo, hi } | CoefficientDistribution::TruncatedNormal { lo, hi, .. } => {
                (*lo, *hi)
            }
        }
    }

    pub fn mean(&self) -> f64 {
        match self {
            CoefficientDistribution::DiscreteTable { table } => table.iter().map(|&(v, p)| v * p).sum(),
            CoefficientDistribution::Uniform { lo, hi } => 0.5 * (lo + hi),
            &CoefficientDistribution::TruncatedNormal { mu, sigma, lo, hi } => {
                TruncatedNormal { mu, sigma, lo, hi }.mean()
            }
        }
    }

    pub fn variance(&self) -> f64 {
        match self {
            CoefficientDistribution::DiscreteTable { table } => {
                let mean = self.mean();
                table.iter().map(|&(v, p)| p * (v - mean) * (v - mean)).sum()
            }
            CoefficientDistribution::Uniform { lo, hi } => (hi - lo) * (hi - lo) / 12.0,
            &CoefficientDistribution::TruncatedNormal { mu, sigma, lo, hi } => {
                TruncatedNormal { mu, sigma, lo, hi }.variance()
            }
        }
    }

    /// Probability of `value` under a discrete table (0 for continuous kinds).
    pub fn probability_of(&self, value: f64) -> f64 {
        match self {
            CoefficientDistribution::DiscreteTable { table } => {
                table.iter().filter(|&&(v, _)| v == value).map(|&(_, p)| p).sum()
            }
            _ => 0.0,
        }
    }
}

/// Draws one coefficient.
pub fn sample_coefficient<R: Rng + ?Sized>(dist: &CoefficientDistribution, rng: &mut R) -> f64 {
    match dist {
        CoefficientDistribution::DiscreteTable { table } => {
            let u: f64 = rng.random();
            let mut acc = 0.0;
            let mut last_positive = table[0].0;
            for &(v, p) in table {
                if p <= 0.0 {
                    continue;
                }
                acc += p;
                last_positive = v;
                if u < acc {
                    return v;
                }
            }
            // rounding left a sliver above the cumulative sum
            last_positive
        }
        &CoefficientDistribution::Uniform { lo, hi } => {
            let x = lo + (hi - lo) * rng.random::<f64>();
            x.min(hi)
        }
        &CoefficientDistribution::TruncatedNormal { mu, sigma, lo, hi } => {
            let normal = Normal::new(mu, sigma).expect("validated sigma");
            loop {
                let x = normal.sample(rng);
                if (lo..=hi).contains(&x) {
                    return x;
                }
            }
        }
    }
}

/// Discrete laws of the corrupted-bias ferromagnet instance class.
/// Returns `(h_dist, j_dist)`.
pub fn cbfm_distributions() -> (CoefficientDistribution, CoefficientDistribution) {
    let h = CoefficientDistribution::discrete(vec![(0.0, 0.15), (-1.0, 0.85), (1.0, 0.0)]).expect("valid table");
    let j = CoefficientDistribution::discrete(vec![(0.0, 0.35), (-1.0, 0.10), (1.0, 0.55)]).expect("valid table");
    (h, j)
}

/// Uniform biases on `[-F, F]` against couplings uniform on `[-1, 1]`, so
/// the analytic hardness ratio equals `F`. `F` may not exceed the default
/// linear range half-width (4).
pub fn uniform_hardness_family(f: f64) -> Result<(CoefficientDistribution, CoefficientDistribution), GeneratorError> {
    if !(f > 0.0) {
        return Err(GeneratorError::NonPositiveHardness(f));
    }
    if f > DEFAULT_H_RANGE.hi {
        return Err(GeneratorError::ExceedsRange { value: f, limit: DEFAULT_H_RANGE.hi });
    }
    Ok((CoefficientDistribution::uniform(-f, f)?, CoefficientDistribution::uniform(-1.0, 1.0)?))
}

fn check_support(what: &'static str, dist: &CoefficientDistribution, range: Interval) -> Result<(), GeneratorError> {
    let (lo, hi) = dist.support();
    if range.contains(lo) && range.contains(hi) {
        Ok(())
    } else {
        Err(GeneratorError::SupportOutsideRange { what, lo, hi, range })
    }
}

/// Hardware-native instance with default device ranges.
pub fn generate_instance(
    graph: Arc<HardwareGraph>,
    h_dist: &CoefficientDistribution,
    j_dist: &CoefficientDistribution,
    seed: u64,
) -> Result<IsingModel, GeneratorError> {
    generate_instance_in(graph, h_dist, j_dist, seed, DEFAULT_H_RANGE, DEFAULT_J_RANGE)
}

/// One i.i.d. bias per node and coupling per edge. Node `i` draws from
/// substream `(seed, Node, i)` and edge `e` from `(seed, Edge, e)`, so the
/// result is the same however the work is scheduled.
pub fn generate_instance_in(
    graph: Arc<HardwareGraph>,
    h_dist: &CoefficientDistribution,
    j_dist: &CoefficientDistribution,
    seed: u64,
    h_range: Interval,
    j_range: Interval,
) -> Result<IsingModel, GeneratorError> {
    check_support("h", h_dist, h_range)?;
    check_support("J", j_dist, j_range)?;
    let h: Vec<f64> = (0..graph.num_nodes() as u64)
        .into_par_iter()
        .map(|i| sample_coefficient(h_dist, &mut substream(seed, Domain::Node, i)))
        .collect();
    let j: Vec<f64> = (0..graph.num_edges() as u64)
        .into_par_iter()
        .map(|e| sample_coefficient(j_dist, &mut substream(seed, Domain::Edge, e)))
        .collect();
    Ok(IsingModel::with_ranges(graph, h, j, h_range, j_range)?)
}

/// A model clamped into target ranges, with the number of changed values.
#[derive(Debug, Clone)]
pub struct ClippedModel {
    pub model: IsingModel,
    pub clipped_h: usize,
    pub clipped_j: usize,
}

impl ClippedModel {
    pub fn clip_count(&self) -> usize {
        self.clipped_h + self.clipped_j
    }
}

/// Clamps every coefficient of `model` into `h_range` / `j_range` and
/// returns a model carrying those ranges.
pub fn clip_to_ranges(
    model: &IsingModel,
    h_range: Interval,
    j_range: Interval,
) -> Result<ClippedModel, GeneratorError> {
    let mut clipped_h = 0;
    let h: Vec<f64> = model
        .h()
        .iter()
        .map(|&v| {
            let c = h_range.clamp(v);
            clipped_h += usize::from(c != v);
            c
        })
        .collect();
    let mut clipped_j = 0;
    let j: Vec<f64> = model
        .j()
        .iter()
        .map(|&v| {
            let c = j_range.clamp(v);
            clipped_j += usize::from(c != v);
            c
        })
        .collect();
    let model = IsingModel::with_ranges(model.shared_graph().clone(), h, j, h_range, j_range)?;
    Ok(ClippedModel { model, clipped_h, clipped_j })
}
