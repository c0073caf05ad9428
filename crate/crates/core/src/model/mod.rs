//! Ising and QUBO models, energies and the hardness ratio.

mod hardness;
mod qubo;
mod samples;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::topology::HardwareGraph;

pub use hardness::{
    analytic_hardness_ratio, hardness_from_values, hardness_ratio, population_std, HardnessMode, HardnessReport,
};
pub use qubo::{qubo_energy, qubo_to_ising, Qubo};
pub use samples::{SampleMismatch, SampleRecord, SampleSet};

#[derive(Debug, Error, PartialEq)]
pub enum ModelError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("entry {index} has value {value}; expected {allowed}")]
    InvalidValue { index: usize, value: i64, allowed: &'static str },
    #[error("{what} coefficient {value} at {location} is outside {range}")]
    OutOfRange { what: &'static str, location: String, value: f64, range: Interval },
    #[error("coupling ({0}, {1}) is not an edge of the graph")]
    NotAnEdge(usize, usize),
    #[error("variable index {index} out of bounds for {n} variables")]
    IndexOutOfBounds { index: usize, n: usize },
    #[error("pair ({0}, {0}) is not a quadratic term")]
    DiagonalPair(usize),
    #[error("need at least 2 {what} coefficients, found {found}")]
    InsufficientCoefficients { what: &'static str, found: usize },
    #[error("non-finite {what} coefficient")]
    NonFinite { what: &'static str },
    #[error("invalid range [{lo}, {hi}]")]
    InvalidRange { lo: f64, hi: f64 },
}

/// Closed real interval `[lo, hi]`, serialized as a two-element array.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub const fn new(lo: f64, hi: f64) -> Self {
        Interval { lo, hi }
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn clamp(&self, x: f64) -> f64 {
        x.clamp(self.lo, self.hi)
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    fn validate(self) -> Result<Self, ModelError> {
        if self.lo.is_finite() && self.hi.is_finite() && self.lo <= self.hi {
            Ok(self)
        } else {
            Err(ModelError::InvalidRange { lo: self.lo, hi: self.hi })
        }
    }
}

impl From<[f64; 2]> for Interval {
    fn from(v: [f64; 2]) -> Self {
        Interval::new(v[0], v[1])
    }
}

impl From<Interval> for [f64; 2] {
    fn from(i: Interval) -> Self {
        [i.lo, i.hi]
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// Default device range for linear biases.
pub const DEFAULT_H_RANGE: Interval = Interval::new(-4.0, 4.0);
/// Default device range for couplings.
pub const DEFAULT_J_RANGE: Interval = Interval::new(-1.0, 1.0);

/// Classical spin configuration with entries in `{-1, +1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<i8>", into = "Vec<i8>")]
pub struct SpinState(Vec<i8>);

impl SpinState {
    pub fn new(spins: Vec<i8>) -> Result<Self, ModelError> {
        if let Some((index, &value)) = spins.iter().enumerate().find(|(_, &s)| s != 1 && s != -1) {
            return Err(ModelError::InvalidValue { index, value: value.into(), allowed: "-1 or +1" });
        }
        Ok(SpinState(spins))
    }

    pub fn all_up(n: usize) -> Self {
        SpinState(vec![1; n])
    }

    /// Spin configuration encoded by the low `n` bits of `bits`
    /// (bit set means +1).
    pub fn from_bits(bits: u64, n: usize) -> Self {
        SpinState((0..n).map(|i| if bits >> i & 1 == 1 { 1 } else { -1 }).collect())
    }

    /// Binary view under `x = (1 + s) / 2`.
    pub fn to_binary(&self) -> Vec<u8> {
        self.0.iter().map(|&s| u8::from(s > 0)).collect()
    }

    pub fn from_binary(x: &[u8]) -> Result<Self, ModelError> {
        x.iter()
            .enumerate()
            .map(|(index, &b)| match b {
                0 => Ok(-1),
                1 => Ok(1),
                _ => Err(ModelError::InvalidValue { index, value: b.into(), allowed: "0 or 1" }),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(SpinState)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[i8] {
        &self.0
    }
}

impl TryFrom<Vec<i8>> for SpinState {
    type Error = ModelError;
    fn try_from(v: Vec<i8>) -> Result<Self, Self::Error> {
        SpinState::new(v)
    }
}

impl From<SpinState> for Vec<i8> {
    fn from(s: SpinState) -> Self {
        s.0
    }
}

/// Ising model over a hardware graph: one bias per node, one coupling per
/// edge (aligned with `graph.edges()`).
///
/// Coefficients outside `h_range` / `j_range` are rejected at construction;
/// use [`crate::generator::clip_to_ranges`] to clamp explicitly.
#[derive(Debug, Clone)]
pub struct IsingModel {
    graph: Arc<HardwareGraph>,
    h: Vec<f64>,
    j: Vec<f64>,
    h_range: Interval,
    j_range: Interval,
    csr: Csr,
}

// Symmetric compressed adjacency with coupling weights, used by the
// local-field computations in the solvers.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Csr {
    pub offsets: Vec<usize>,
    pub neighbors: Vec<usize>,
    pub weights: Vec<f64>,
}

impl Csr {
    fn build(graph: &HardwareGraph, j: &[f64]) -> Self {
        let n = graph.num_nodes();
        let mut deg = vec![0usize; n];
        for &(a, b) in graph.edges() {
            deg[a] += 1;
            deg[b] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &deg {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut fill = offsets[..n].to_vec();
        let mut neighbors = vec![0; offsets[n]];
        let mut weights = vec![0.0; offsets[n]];
        for (&(a, b), &w) in graph.edges().iter().zip(j) {
            neighbors[fill[a]] = b;
            weights[fill[a]] = w;
            fill[a] += 1;
            neighbors[fill[b]] = a;
            weights[fill[b]] = w;
            fill[b] += 1;
        }
        Csr { offsets, neighbors, weights }
    }

    #[inline]
    pub fn row(&self, i: usize) -> (&[usize], &[f64]) {
        let (s, e) = (self.offsets[i], self.offsets[i + 1]);
        (&self.neighbors[s..e], &self.weights[s..e])
    }
}

impl IsingModel {
    /// Model with default device ranges.
    pub fn new(graph: Arc<HardwareGraph>, h: Vec<f64>, j: Vec<f64>) -> Result<Self, ModelError> {
        Self::with_ranges(graph, h, j, DEFAULT_H_RANGE, DEFAULT_J_RANGE)
    }

    pub fn with_ranges(
        graph: Arc<HardwareGraph>,
        h: Vec<f64>,
        j: Vec<f64>,
        h_range: Interval,
        j_range: Interval,
    ) -> Result<Self, ModelError> {
        let h_range = h_range.validate()?;
        let j_range = j_range.validate()?;
        if h.len() != graph.num_nodes() {
            return Err(ModelError::DimensionMismatch { expected: graph.num_nodes(), found: h.len() });
        }
        if j.len() != graph.num_edges() {
            return Err(ModelError::DimensionMismatch { expected: graph.num_edges(), found: j.len() });
        }
        for (i, &v) in h.iter().enumerate() {
            if !v.is_finite() {
                return Err(ModelError::NonFinite { what: "h" });
            }
            if !h_range.contains(v) {
                return Err(ModelError::OutOfRange {
                    what: "h",
                    location: format!("node {i}"),
                    value: v,
                    range: h_range,
                });
            }
        }
        for (&(a, b), &v) in graph.edges().iter().zip(&j) {
            if !v.is_finite() {
                return Err(ModelError::NonFinite { what: "J" });
            }
            if !j_range.contains(v) {
                return Err(ModelError::OutOfRange {
                    what: "J",
                    location: format!("edge ({a}, {b})"),
                    value: v,
                    range: j_range,
                });
            }
        }
        let csr = Csr::build(&graph, &j);
        Ok(IsingModel { graph, h, j, h_range, j_range, csr })
    }

    /// Builds a model from sparse coefficient maps; missing entries are 0.
    pub fn from_maps(
        graph: Arc<HardwareGraph>,
        h: &BTreeMap<usize, f64>,
        j: &BTreeMap<(usize, usize), f64>,
        h_range: Interval,
        j_range: Interval,
    ) -> Result<Self, ModelError> {
        let mut hv = vec![0.0; graph.num_nodes()];
        for (&i, &v) in h {
            if i >= hv.len() {
                return Err(ModelError::IndexOutOfBounds { index: i, n: hv.len() });
            }
            hv[i] = v;
        }
        let mut jv = vec![0.0; graph.num_edges()];
        for (&(a, b), &v) in j {
            let key = (a.min(b), a.max(b));
            let pos = graph.edges().binary_search(&key).map_err(|_| ModelError::NotAnEdge(a, b))?;
            jv[pos] = v;
        }
        Self::with_ranges(graph, hv, jv, h_range, j_range)
    }

    pub fn graph(&self) -> &HardwareGraph {
        &self.graph
    }

    pub fn shared_graph(&self) -> &Arc<HardwareGraph> {
        &self.graph
    }

    pub fn num_spins(&self) -> usize {
        self.h.len()
    }

    pub fn h(&self) -> &[f64] {
        &self.h
    }

    /// Couplings aligned with `graph().edges()`.
    pub fn j(&self) -> &[f64] {
        &self.j
    }

    pub fn couplings(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.graph.edges().iter().zip(&self.j).map(|(&(a, b), &v)| (a, b, v))
    }

    pub fn h_range(&self) -> Interval {
        self.h_range
    }

    pub fn j_range(&self) -> Interval {
        self.j_range
    }

    pub(crate) fn csr(&self) -> &Csr {
        &self.csr
    }

    /// `h_i + sum_j J_ij s_j`.
    #[inline]
    pub fn local_field(&self, spins: &[i8], i: usize) -> f64 {
        let (nbrs, ws) = self.csr.row(i);
        let mut f = self.h[i];
        for (&k, &w) in nbrs.iter().zip(ws) {
            f += w * f64::from(spins[k]);
        }
        f
    }

    /// Same model with every coefficient multiplied by `factor`; ranges are
    /// scaled along.
    pub fn scaled(&self, h_factor: f64, j_factor: f64) -> Result<Self, ModelError> {
        let scale_range = |r: Interval, c: f64| {
            let (a, b) = (r.lo * c, r.hi * c);
            Interval::new(a.min(b), a.max(b))
        };
        Self::with_ranges(
            self.graph.clone(),
            self.h.iter().map(|v| v * h_factor).collect(),
            self.j.iter().map(|v| v * j_factor).collect(),
            scale_range(self.h_range, h_factor),
            scale_range(self.j_range, j_factor),
        )
    }
}

impl PartialEq for IsingModel {
    fn eq(&self, other: &Self) -> bool {
        self.graph == other.graph
            && self.h == other.h
            && self.j == other.j
            && self.h_range == other.h_range
            && self.j_range == other.j_range
    }
}

/// `sum_i h_i s_i + sum_(i,j) J_ij s_i s_j`, one term per undirected edge.
pub fn ising_energy(model: &IsingModel, state: &SpinState) -> Result<f64, ModelError> {
    if state.len() != model.num_spins() {
        return Err(ModelError::DimensionMismatch { expected: model.num_spins(), found: state.len() });
    }
    Ok(energy_of_spins(model, state.as_slice()))
}

pub(crate) fn energy_of_spins(model: &IsingModel, s: &[i8]) -> f64 {
    let linear: f64 = model.h.iter().zip(s).map(|(h, &si)| h * f64::from(si)).sum();
    let quadratic: f64 = model.couplings().map(|(a, b, v)| v * f64::from(s[a] * s[b])).sum();
    linear + quadratic
}
