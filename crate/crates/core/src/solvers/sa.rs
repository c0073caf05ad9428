use std::collections::BTreeMap;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::SolverError;
use crate::model::{energy_of_spins, IsingModel, SampleRecord, SampleSet, SpinState};
use crate::rng::{substream, Domain};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BetaSchedule {
    Geometric,
    Linear,
}

/// Simulated annealing settings. Unset `beta_hot`/`beta_cold` are derived
/// from the model by [`default_beta_range`].
#[derive(Debug, Clone, PartialEq)]
pub struct SaConfig {
    pub num_reads: usize,
    pub sweeps: usize,
    pub beta_schedule: BetaSchedule,
    pub beta_hot: Option<f64>,
    pub beta_cold: Option<f64>,
    pub seed: u64,
}

impl Default for SaConfig {
    fn default() -> Self {
        SaConfig {
            num_reads: 100,
            sweeps: 1000,
            beta_schedule: BetaSchedule::Geometric,
            beta_hot: None,
            beta_cold: None,
            seed: 0,
        }
    }
}

impl SaConfig {
    pub fn validate(&self) -> Result<(), SolverError> {
        if self.num_reads == 0 || self.sweeps == 0 {
            return Err(SolverError::InvalidConfig("num_reads and sweeps must be positive".into()));
        }
        for b in [self.beta_hot, self.beta_cold].into_iter().flatten() {
            if !(b > 0.0 && b.is_finite()) {
                return Err(SolverError::InvalidConfig(format!("beta {b} must be positive and finite")));
            }
        }
        if let (Some(hot), Some(cold)) = (self.beta_hot, self.beta_cold) {
            if hot >= cold {
                return Err(SolverError::InvalidConfig(format!("beta_hot {hot} must be below beta_cold {cold}")));
            }
        }
        Ok(())
    }
}

/// `(beta_hot, beta_cold)`: the largest single-flip change is accepted with
/// probability 1/2 at `beta_hot`, the smallest nonzero coefficient change
/// with probability 1/100 at `beta_cold`.
pub fn default_beta_range(model: &IsingModel) -> (f64, f64) {
    let csr = model.csr();
    let mut max_delta: f64 = 0.0;
    for (i, &h) in model.h().iter().enumerate() {
        let (_, ws) = csr.row(i);
        let field = h.abs() + ws.iter().map(|w| w.abs()).sum::<f64>();
        max_delta = max_delta.max(2.0 * field);
    }
    let min_coef =
        model.h().iter().chain(model.j()).map(|c| c.abs()).filter(|&c| c > 0.0).fold(f64::INFINITY, f64::min);
    if max_delta == 0.0 {
        return (0.1, 1.0);
    }
    let hot = std::f64::consts::LN_2 / max_delta;
    let cold = 100f64.ln() / (2.0 * min_coef);
    if cold > hot {
        (hot, cold)
    } else {
        (hot, hot * 10.0)
    }
}

pub(crate) fn schedule(kind: BetaSchedule, hot: f64, cold: f64, steps: usize) -> Vec<f64> {
    if steps == 1 {
        return vec![cold];
    }
    let last = (steps - 1) as f64;
    (0..steps)
        .map(|k| {
            let t = k as f64 / last;
            match kind {
                BetaSchedule::Geometric => hot * (cold / hot).powf(t),
                BetaSchedule::Linear => hot + (cold - hot) * t,
            }
        })
        .collect()
}

/// Independent Metropolis restarts, one record per read in read order.
pub fn simulated_annealing(model: &IsingModel, config: &SaConfig) -> Result<SampleSet, SolverError> {
    config.validate()?;
    let (dh, dc) = default_beta_range(model);
    let hot = config.beta_hot.unwrap_or(dh);
    let cold = config.beta_cold.unwrap_or(dc.max(hot * (1.0 + 1e-12)));
    if hot >= cold {
        return Err(SolverError::InvalidConfig(format!("beta_hot {hot} must be below beta_cold {cold}")));
    }
    let betas = schedule(config.beta_schedule, hot, cold, config.sweeps);

    let records: Vec<SampleRecord> = (0..config.num_reads)
        .into_par_iter()
        .map(|read| {
            let mut rng = substream(config.seed, Domain::Read, read as u64);
            let spins = anneal(model, &betas, &mut rng);
            let energy = energy_of_spins(model, &spins);
            SampleRecord { state: SpinState::new(spins).expect("spins are ±1"), energy, count: 1 }
        })
        .collect();

    let params = BTreeMap::from([
        ("num_reads".to_string(), serde_json::json!(config.num_reads)),
        ("sweeps".to_string(), serde_json::json!(config.sweeps)),
        ("beta_schedule".to_string(), serde_json::json!(config.beta_schedule)),
        ("beta_hot".to_string(), serde_json::json!(hot)),
        ("beta_cold".to_string(), serde_json::json!(cold)),
    ]);
    Ok(SampleSet::new("sa", params, config.seed, records)?)
}

fn anneal<R: Rng>(model: &IsingModel, betas: &[f64], rng: &mut R) -> Vec<i8> {
    let n = model.num_spins();
    let csr = model.csr();
    let mut spins: Vec<i8> = (0..n).map(|_| if rng.random::<bool>() { 1 } else { -1 }).collect();
    let mut fields: Vec<f64> = (0..n).map(|i| model.local_field(&spins, i)).collect();
    for &beta in betas {
        for i in 0..n {
            let s = f64::from(spins[i]);
            let delta = -2.0 * s * fields[i];
            if delta <= 0.0 || rng.random::<f64>() < (-beta * delta).exp() {
                spins[i] = -spins[i];
                let (nbrs, ws) = csr.row(i);
                for (&k, &w) in nbrs.iter().zip(ws) {
                    fields[k] -= 2.0 * s * w;
                }
            }
        }
    }
    spins
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::HardwareGraph;
    use std::sync::Arc;

    #[test]
    fn geometric_schedule_endpoints() {
        let b = schedule(BetaSchedule::Geometric, 0.1, 10.0, 5);
        assert_eq!(b.len(), 5);
        assert!((b[0] - 0.1).abs() < 1e-15 && (b[4] - 10.0).abs() < 1e-12);
        assert!((b[2] - 1.0).abs() < 1e-12);
        assert_eq!(schedule(BetaSchedule::Linear, 1.0, 3.0, 3), vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn default_range_acceptance_probabilities() {
        let g = Arc::new(HardwareGraph::custom(3, [(0, 1), (1, 2)]).unwrap());
        let m = IsingModel::new(g, vec![0.5, 0.0, 0.0], vec![1.0, -0.25]).unwrap();
        let (hot, cold) = default_beta_range(&m);
        // max flip change 2 * (0.5 + 1) at node 0, min nonzero change 2 * 0.25
        assert!(((-hot * 3.0f64).exp() - 0.5).abs() < 1e-12);
        assert!(((-cold * 0.5f64).exp() - 0.01).abs() < 1e-12);
    }

    #[test]
    fn rejects_inverted_betas() {
        let c = SaConfig { beta_hot: Some(2.0), beta_cold: Some(1.0), ..SaConfig::default() };
        assert!(c.validate().is_err());
        let c = SaConfig { num_reads: 0, ..SaConfig::default() };
        assert!(c.validate().is_err());
    }
}
