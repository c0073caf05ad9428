use serde::{Deserialize, Serialize};

use super::{IsingModel, ModelError};
use crate::generator::CoefficientDistribution;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HardnessMode {
    Empirical,
    Analytic,
}

/// Dispersion of linear biases relative to couplings, `F = sigma_h / sigma_J`.
///
/// `f` is `None` when `sigma_J == 0`; no division is attempted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HardnessReport {
    pub sigma_h: f64,
    #[serde(rename = "sigma_J")]
    pub sigma_j: f64,
    #[serde(rename = "F")]
    pub f: Option<f64>,
    pub h_count: usize,
    #[serde(rename = "J_count")]
    pub j_count: usize,
    pub mode: HardnessMode,
}

impl HardnessReport {
    pub(crate) fn from_sigmas(sigma_h: f64, sigma_j: f64, h_count: usize, j_count: usize, mode: HardnessMode) -> Self {
        let f = (sigma_j > 0.0).then(|| sigma_h / sigma_j);
        HardnessReport { sigma_h, sigma_j, f, h_count, j_count, mode }
    }

    pub fn is_undefined(&self) -> bool {
        self.f.is_none()
    }
}

/// Population standard deviation (divides by `n`). Two-pass.
pub fn population_std(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
    (ss / n).sqrt()
}

/// Empirical hardness ratio of raw coefficient sets.
pub fn hardness_from_values(h: &[f64], j: &[f64]) -> Result<HardnessReport, ModelError> {
    if h.len() < 2 {
        return Err(ModelError::InsufficientCoefficients { what: "linear", found: h.len() });
    }
    if j.len() < 2 {
        return Err(ModelError::InsufficientCoefficients { what: "quadratic", found: j.len() });
    }
    Ok(HardnessReport::from_sigmas(population_std(h), population_std(j), h.len(), j.len(), HardnessMode::Empirical))
}

/// Empirical hardness ratio of a model's realized coefficients.
pub fn hardness_ratio(model: &IsingModel) -> Result<HardnessReport, ModelError> {
    hardness_from_values(model.h(), model.j())
}

/// Hardness ratio from the closed-form standard deviations of the
/// coefficient laws. A nonzero mean is logged, not rejected.
pub fn analytic_hardness_ratio(h_dist: &CoefficientDistribution, j_dist: &CoefficientDistribution) -> HardnessReport {
    for (name, d) in [("h", h_dist), ("J", j_dist)] {
        let mu = d.mean();
        if mu.abs() > 1e-12 {
            log::warn!("{name} distribution has mean {mu}; hardness ratio assumes zero-mean coefficients");
        }
    }
    HardnessReport::from_sigmas(h_dist.variance().sqrt(), j_dist.variance().sqrt(), 0, 0, HardnessMode::Analytic)
}
