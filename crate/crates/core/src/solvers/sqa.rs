use std::collections::BTreeMap;
use std::sync::atomic::{AtomicBool, Ordering};

use rand::Rng;
use rayon::prelude::*;

use super::SolverError;
use crate::model::{energy_of_spins, IsingModel, SampleRecord, SampleSet, SpinState};
use crate::rng::{substream, Domain};

/// Path-integral Monte Carlo settings.
#[derive(Debug, Clone, PartialEq)]
pub struct SqaConfig {
    pub num_reads: usize,
    pub sweeps: usize,
    pub trotter_slices: usize,
    pub temperature: f64,
    pub gamma_initial: f64,
    pub gamma_final: f64,
    pub seed: u64,
}

impl Default for SqaConfig {
    fn default() -> Self {
        SqaConfig {
            num_reads: 100,
            sweeps: 1000,
            trotter_slices: 32,
            temperature: 0.05,
            gamma_initial: 3.0,
            gamma_final: 0.01,
            seed: 0,
        }
    }
}

impl SqaConfig {
    pub fn validate(&self) -> Result<(), SolverError> {
        if self.num_reads == 0 || self.sweeps == 0 || self.trotter_slices == 0 {
            return Err(SolverError::InvalidConfig("num_reads, sweeps and trotter_slices must be positive".into()));
        }
        let positive = |x: f64| x > 0.0 && x.is_finite();
        if !positive(self.temperature) || !positive(self.gamma_initial) || !positive(self.gamma_final) {
            return Err(SolverError::InvalidConfig("temperature and gamma must be positive".into()));
        }
        if self.gamma_final >= self.gamma_initial {
            return Err(SolverError::InvalidConfig(format!(
                "gamma_final {} must be below gamma_initial {}",
                self.gamma_final, self.gamma_initial
            )));
        }
        Ok(())
    }
}

/// Ferromagnetic coupling between neighbouring Trotter slices,
/// `-(P T / 2) ln tanh(gamma / (P T))`. The flag is set when `tanh`
/// underflowed and the logarithm was clamped.
pub fn inter_slice_coupling(gamma: f64, slices: usize, temperature: f64) -> (f64, bool) {
    let pt = slices as f64 * temperature;
    let th = (gamma / pt).tanh();
    if th > 0.0 {
        (-0.5 * pt * th.ln(), false)
    } else {
        (-0.5 * pt * f64::MIN_POSITIVE.ln(), true)
    }
}

/// One record per read: the lowest-energy replica after the last sweep.
pub fn simulated_quantum_annealing(model: &IsingModel, config: &SqaConfig) -> Result<SampleSet, SolverError> {
    config.validate()?;
    let p = config.trotter_slices;
    let clamped = AtomicBool::new(false);
    let couplings: Vec<f64> = (0..config.sweeps)
        .map(|k| {
            let t = if config.sweeps == 1 { 1.0 } else { k as f64 / (config.sweeps - 1) as f64 };
            let gamma = config.gamma_initial + (config.gamma_final - config.gamma_initial) * t;
            let (jp, c) = inter_slice_coupling(gamma, p, config.temperature);
            if c {
                clamped.store(true, Ordering::Relaxed);
            }
            if p == 1 {
                0.0
            } else {
                jp
            }
        })
        .collect();
    if clamped.load(Ordering::Relaxed) {
        log::warn!("tanh(gamma / (P T)) underflowed; inter-slice coupling clamped");
    }

    let beta = 1.0 / (p as f64 * config.temperature);
    let records: Vec<SampleRecord> = (0..config.num_reads)
        .into_par_iter()
        .map(|read| {
            let mut rng = substream(config.seed, Domain::Read, read as u64);
            let spins = path_integral(model, p, beta, &couplings, &mut rng);
            let energy = energy_of_spins(model, &spins);
            SampleRecord { state: SpinState::new(spins).expect("spins are ±1"), energy, count: 1 }
        })
        .collect();

    let params = BTreeMap::from([
        ("num_reads".to_string(), serde_json::json!(config.num_reads)),
        ("sweeps".to_string(), serde_json::json!(config.sweeps)),
        ("trotter_slices".to_string(), serde_json::json!(p)),
        ("temperature".to_string(), serde_json::json!(config.temperature)),
        ("gamma_initial".to_string(), serde_json::json!(config.gamma_initial)),
        ("gamma_final".to_string(), serde_json::json!(config.gamma_final)),
    ]);
    Ok(SampleSet::new("sqa", params, config.seed, records)?)
}

fn path_integral<R: Rng>(model: &IsingModel, p: usize, beta: f64, couplings: &[f64], rng: &mut R) -> Vec<i8> {
    let n = model.num_spins();
    let csr = model.csr();
    // slice-major layout: spin i of slice k at k * n + i
    let mut spins: Vec<i8> = (0..n * p).map(|_| if rng.random::<bool>() { 1 } else { -1 }).collect();
    let mut fields = vec![0.0; n * p];
    for k in 0..p {
        for i in 0..n {
            fields[k * n + i] = model.local_field(&spins[k * n..(k + 1) * n], i);
        }
    }
    for &jp in couplings {
        for k in 0..p {
            let prev = (k + p - 1) % p;
            let next = (k + 1) % p;
            for i in 0..n {
                let at = k * n + i;
                let s = f64::from(spins[at]);
                let neighbours = f64::from(spins[prev * n + i]) + f64::from(spins[next * n + i]);
                let delta = -2.0 * s * fields[at] + 2.0 * jp * s * neighbours;
                if delta <= 0.0 || rng.random::<f64>() < (-beta * delta).exp() {
                    spins[at] = -spins[at];
                    let (nbrs, ws) = csr.row(i);
                    for (&m, &w) in nbrs.iter().zip(ws) {
                        fields[k * n + m] -= 2.0 * s * w;
                    }
                }
            }
        }
    }
    (0..p)
        .map(|k| &spins[k * n..(k + 1) * n])
        .map(|s| (energy_of_spins(model, s), s))
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .map(|(_, s)| s.to_vec())
        .unwrap_or_default()
}
