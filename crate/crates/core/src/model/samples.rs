use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{energy_of_spins, IsingModel, ModelError, SpinState};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleRecord {
    pub state: SpinState,
    pub energy: f64,
    pub count: u64,
}

/// Solver output: states with their energies and multiplicities.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSet {
    pub records: Vec<SampleRecord>,
    pub solver_name: String,
    pub solver_params: BTreeMap<String, serde_json::Value>,
    pub seed: u64,
}

impl SampleSet {
    pub fn new(
        solver_name: impl Into<String>,
        solver_params: BTreeMap<String, serde_json::Value>,
        seed: u64,
        records: Vec<SampleRecord>,
    ) -> Result<Self, ModelError> {
        if let Some(index) = records.iter().position(|r| r.count == 0) {
            return Err(ModelError::InvalidValue { index, value: 0, allowed: "count >= 1" });
        }
        Ok(SampleSet { records, solver_name: solver_name.into(), solver_params, seed })
    }

    /// Records built from raw states, energies evaluated against `model`.
    pub fn from_states(
        model: &IsingModel,
        solver_name: impl Into<String>,
        solver_params: BTreeMap<String, serde_json::Value>,
        seed: u64,
        states: Vec<SpinState>,
    ) -> Self {
        let records = states
            .into_iter()
            .map(|state| {
                let energy = energy_of_spins(model, state.as_slice());
                SampleRecord { state, energy, count: 1 }
            })
            .collect();
        SampleSet { records, solver_name: solver_name.into(), solver_params, seed }
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn num_records(&self) -> usize {
        self.records.len()
    }

    /// Number of samples after expanding multiplicities.
    pub fn total_count(&self) -> u64 {
        self.records.iter().map(|r| r.count).sum()
    }

    pub fn min_energy(&self) -> Option<f64> {
        self.records.iter().map(|r| r.energy).min_by(f64::total_cmp)
    }

    pub fn best(&self) -> Option<&SampleRecord> {
        self.records.iter().min_by(|a, b| a.energy.total_cmp(&b.energy))
    }

    /// One energy per sample, each record repeated `count` times.
    pub fn expanded_energies(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.total_count() as usize);
        for r in &self.records {
            out.extend(std::iter::repeat_n(r.energy, r.count as usize));
        }
        out
    }

    /// Re-evaluates every stored state. Returns the index and recomputed
    /// energy of the first record off by more than `tol`.
    pub fn verify(&self, model: &IsingModel, tol: f64) -> Result<(), SampleMismatch> {
        for (index, r) in self.records.iter().enumerate() {
            if r.state.len() != model.num_spins() {
                return Err(SampleMismatch::Dimension { index, expected: model.num_spins(), found: r.state.len() });
            }
            let recomputed = energy_of_spins(model, r.state.as_slice());
            if !((recomputed - r.energy).abs() <= tol) {
                return Err(SampleMismatch::Energy { index, stored: r.energy, recomputed });
            }
        }
        Ok(())
    }

    /// Merges identical states, summing their counts. Records are ordered
    /// by energy, ties by state.
    pub fn aggregated(&self) -> SampleSet {
        let mut merged: BTreeMap<&SpinState, (f64, u64)> = BTreeMap::new();
        for r in &self.records {
            let e = merged.entry(&r.state).or_insert((r.energy, 0));
            e.1 += r.count;
        }
        let mut records: Vec<SampleRecord> =
            merged.into_iter().map(|(s, (energy, count))| SampleRecord { state: s.clone(), energy, count }).collect();
        records.sort_by(|a, b| a.energy.total_cmp(&b.energy).then_with(|| a.state.cmp(&b.state)));
        SampleSet { records, ..self.clone() }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SampleMismatch {
    #[error("record {index}: state has {found} spins, model has {expected}")]
    Dimension { index: usize, expected: usize, found: usize },
    #[error("record {index}: stored energy {stored} but state evaluates to {recomputed}")]
    Energy { index: usize, stored: f64, recomputed: f64 },
}
