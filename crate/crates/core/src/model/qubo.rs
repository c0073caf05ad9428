use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{Interval, IsingModel, ModelError};
use crate::topology::HardwareGraph;

/// Quadratic objective over binary variables:
/// `offset + sum_i q_i x_i + sum_{i<j} q_ij x_i x_j`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(try_from = "QuboRepr", into = "QuboRepr")]
pub struct Qubo {
    n: usize,
    linear: BTreeMap<usize, f64>,
    quadratic: BTreeMap<(usize, usize), f64>,
    offset: f64,
}

impl Qubo {
    pub fn new(n: usize) -> Self {
        Qubo { n, ..Default::default() }
    }

    pub fn num_variables(&self) -> usize {
        self.n
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn set_offset(&mut self, offset: f64) {
        self.offset = offset;
    }

    pub fn linear(&self) -> &BTreeMap<usize, f64> {
        &self.linear
    }

    /// Quadratic terms keyed by `(i, j)` with `i < j`.
    pub fn quadratic(&self) -> &BTreeMap<(usize, usize), f64> {
        &self.quadratic
    }

    pub fn add_linear(&mut self, i: usize, value: f64) -> Result<(), ModelError> {
        self.check(i)?;
        *self.linear.entry(i).or_insert(0.0) += value;
        Ok(())
    }

    /// Adds to the coefficient of `x_i x_j`; the pair is stored once
    /// regardless of argument order.
    pub fn add_quadratic(&mut self, i: usize, j: usize, value: f64) -> Result<(), ModelError> {
        self.check(i)?;
        self.check(j)?;
        if i == j {
            return Err(ModelError::DiagonalPair(i));
        }
        *self.quadratic.entry((i.min(j), i.max(j))).or_insert(0.0) += value;
        Ok(())
    }

    fn check(&self, i: usize) -> Result<(), ModelError> {
        if i < self.n {
            Ok(())
        } else {
            Err(ModelError::IndexOutOfBounds { index: i, n: self.n })
        }
    }

    /// Objective value of a binary assignment.
    pub fn energy(&self, x: &[u8]) -> Result<f64, ModelError> {
        if x.len() != self.n {
            return Err(ModelError::DimensionMismatch { expected: self.n, found: x.len() });
        }
        if let Some((index, &v)) = x.iter().enumerate().find(|(_, &v)| v > 1) {
            return Err(ModelError::InvalidValue { index, value: v.into(), allowed: "0 or 1" });
        }
        let mut e = self.offset;
        for (&i, &q) in &self.linear {
            if x[i] == 1 {
                e += q;
            }
        }
        for (&(i, j), &q) in &self.quadratic {
            if x[i] == 1 && x[j] == 1 {
                e += q;
            }
        }
        Ok(e)
    }
}

/// Energy of a QUBO at a binary assignment.
pub fn qubo_energy(qubo: &Qubo, x: &[u8]) -> Result<f64, ModelError> {
    qubo.energy(x)
}

/// Converts a QUBO to an Ising model under `x_i = (1 + s_i) / 2`.
///
/// The graph has one node per variable and one edge per stored quadratic
/// term. Returns the model and the constant such that
/// `qubo_energy(x) == ising_energy(s) + offset`. Ranges are set to the
/// symmetric extent of the produced coefficients.
pub fn qubo_to_ising(qubo: &Qubo) -> (IsingModel, f64) {
    let n = qubo.n;
    let mut h = vec![0.0; n];
    let mut offset = qubo.offset;
    for (&i, &q) in &qubo.linear {
        h[i] += q / 2.0;
        offset += q / 2.0;
    }
    let mut edges = Vec::with_capacity(qubo.quadratic.len());
    let mut j = Vec::with_capacity(qubo.quadratic.len());
    for (&(a, b), &q) in &qubo.quadratic {
        let quarter = q / 4.0;
        h[a] += quarter;
        h[b] += quarter;
        offset += quarter;
        edges.push((a, b));
        j.push(quarter);
    }
    // quadratic keys are already sorted with a < b, so j stays aligned
    let graph = HardwareGraph::custom(n, edges).expect("QUBO pairs are valid edges");
    let extent = |vals: &[f64]| {
        let m = vals.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
        Interval::new(-m, m)
    };
    let (hr, jr) = (extent(&h), extent(&j));
    let model = IsingModel::with_ranges(Arc::new(graph), h, j, hr, jr).expect("ranges cover coefficients");
    (model, offset)
}

#[derive(Serialize, Deserialize)]
struct QuboRepr {
    format: String,
    n: usize,
    linear: Vec<(usize, f64)>,
    quadratic: Vec<(usize, usize, f64)>,
    offset: f64,
}

impl From<Qubo> for QuboRepr {
    fn from(q: Qubo) -> Self {
        QuboRepr {
            format: "qubo-v1".into(),
            n: q.n,
            linear: q.linear.into_iter().collect(),
            quadratic: q.quadratic.into_iter().map(|((i, j), v)| (i, j, v)).collect(),
            offset: q.offset,
        }
    }
}

impl TryFrom<QuboRepr> for Qubo {
    type Error = ModelError;
    fn try_from(r: QuboRepr) -> Result<Self, Self::Error> {
        let mut q = Qubo::new(r.n);
        q.offset = r.offset;
        for (i, v) in r.linear {
            q.add_linear(i, v)?;
        }
        for (i, j, v) in r.quadratic {
            q.add_quadratic(i, j, v)?;
        }
        Ok(q)
    }
}
