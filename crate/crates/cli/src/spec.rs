//! Parsers for the short textual specs accepted on the command line.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use isingbench::generator::{cbfm_distributions, uniform_hardness_family, CoefficientDistribution};
use isingbench::model::{IsingModel, SampleSet};
use isingbench::orderstats::ContinuousDistribution;
use isingbench::solvers::{
    external_solver, simulated_annealing, simulated_quantum_annealing, solve_exact, BetaSchedule, SaConfig,
    SolverError, SqaConfig,
};
use isingbench::topology::{build_from_spec, load_graph, HardwareGraph};
use serde::Deserialize;

/// Sweeps per microsecond of nominal annealing time.
pub const DEFAULT_SWEEPS_PER_US: f64 = 10.0;

/// `chimera:M,N,T`, `pegasus:M`, `zephyr:M,T`, `complete:N`, or
/// `file:PATH` for an edge list.
pub fn parse_topology(spec: &str) -> Result<HardwareGraph, String> {
    if let Some(path) = spec.strip_prefix("file:") {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))?;
        let loaded = load_graph(&text).map_err(|e| format!("{path}: {e}"))?;
        if loaded.duplicate_edges > 0 {
            log::warn!("{path}: dropped {} repeated edges", loaded.duplicate_edges);
        }
        return Ok(loaded.graph);
    }
    build_from_spec(spec).map_err(|e| e.to_string())
}

/// Laws for the biases and couplings of generated instances.
#[derive(Debug, Clone)]
pub struct DistSpec {
    pub label: String,
    pub h: CoefficientDistribution,
    pub j: CoefficientDistribution,
    pub target_f: Option<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DistConfig {
    h: CoefficientDistribution,
    #[serde(rename = "J")]
    j: CoefficientDistribution,
}

impl FromStr for DistSpec {
    type Err = String;

    /// `cbfm`, `hardness:F`, an inline JSON object with `h` and `J`
    /// entries, or a path to such a file.
    fn from_str(s: &str) -> Result<Self, String> {
        if s == "cbfm" {
            let (h, j) = cbfm_distributions();
            return Ok(DistSpec { label: "cbfm".into(), h, j, target_f: None });
        }
        if let Some(f) = s.strip_prefix("hardness:") {
            let f: f64 = f.parse().map_err(|e| format!("bad hardness ratio `{f}`: {e}"))?;
            let (h, j) = uniform_hardness_family(f).map_err(|e| e.to_string())?;
            return Ok(DistSpec { label: s.into(), h, j, target_f: Some(f) });
        }
        let text = if s.trim_start().starts_with('{') {
            s.to_string()
        } else if Path::new(s).is_file() {
            std::fs::read_to_string(s).map_err(|e| format!("{s}: {e}"))?
        } else {
            return Err(format!("unknown distribution `{s}` (expected cbfm, hardness:F, JSON or a file)"));
        };
        let cfg: DistConfig = serde_json::from_str(&text).map_err(|e| format!("distribution config: {e}"))?;
        Ok(DistSpec { label: "custom".into(), h: cfg.h, j: cfg.j, target_f: None })
    }
}

/// Weight or capacity law for the order-statistics commands.
#[derive(Debug, Clone)]
pub struct ContinuousSpec(pub ContinuousDistribution);

impl FromStr for ContinuousSpec {
    type Err = String;

    /// `uniform:LO,HI`, `tnormal:MU,SIGMA,LO,HI` (bounds may be `inf`),
    /// `exponential:RATE`, or `{"kind": ..., "params": ...}`.
    fn from_str(s: &str) -> Result<Self, String> {
        if s.trim_start().starts_with('{') {
            let d: ContinuousDistribution = serde_json::from_str(s).map_err(|e| e.to_string())?;
            return d.validated().map(ContinuousSpec).map_err(|e| e.to_string());
        }
        let (name, args) = s.split_once(':').ok_or_else(|| format!("expected KIND:PARAMS, got `{s}`"))?;
        let nums: Vec<f64> = args
            .split(',')
            .map(|a| a.trim().parse::<f64>().map_err(|e| format!("bad number `{a}`: {e}")))
            .collect::<Result<_, _>>()?;
        let d = match (name, nums.as_slice()) {
            ("uniform", &[lo, hi]) => ContinuousDistribution::uniform(lo, hi),
            ("tnormal", &[mu, sigma, lo, hi]) => ContinuousDistribution::truncated_normal(mu, sigma, lo, hi),
            ("exponential", &[rate]) => ContinuousDistribution::exponential(rate),
            _ => return Err(format!("unknown distribution `{s}`")),
        };
        d.map(ContinuousSpec).map_err(|e| e.to_string())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SolverKind {
    Exact,
    Sa(SaConfig),
    Sqa(SqaConfig),
    External(Vec<String>),
}

/// A solver with its parameters and a label for reports.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverSpec {
    pub label: String,
    pub kind: SolverKind,
}

impl SolverSpec {
    /// Replaces the read count of sampling solvers.
    pub fn with_reads(mut self, reads: usize) -> Self {
        match &mut self.kind {
            SolverKind::Sa(c) => c.num_reads = reads,
            SolverKind::Sqa(c) => c.num_reads = reads,
            SolverKind::Exact | SolverKind::External(_) => {}
        }
        self
    }

    pub fn run(&self, model: &IsingModel, seed: u64) -> Result<SampleSet, SolverError> {
        match &self.kind {
            SolverKind::Exact => solve_exact(model),
            SolverKind::Sa(c) => simulated_annealing(model, &SaConfig { seed, ..c.clone() }),
            SolverKind::Sqa(c) => simulated_quantum_annealing(model, &SqaConfig { seed, ..c.clone() }),
            SolverKind::External(cmd) => external_solver(model, cmd),
        }
    }

    /// The label with characters outside `[A-Za-z0-9._-]` replaced.
    pub fn file_label(&self) -> String {
        self.label.chars().map(|c| if c.is_ascii_alphanumeric() || "._-".contains(c) { c } else { '_' }).collect()
    }
}

impl fmt::Display for SolverSpec {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str(&self.label)
    }
}

fn number<T: FromStr>(key: &str, v: &str) -> Result<T, String>
where
    T::Err: fmt::Display,
{
    v.parse().map_err(|e| format!("bad value for {key}: `{v}`: {e}"))
}

// Resolves `sweeps` against `anneal_us * sweeps_per_us`.
fn resolve_sweeps(sweeps: Option<usize>, anneal_us: Option<f64>, per_us: f64, default: usize) -> Result<usize, String> {
    match (sweeps, anneal_us) {
        (Some(_), Some(_)) => Err("give either sweeps or anneal_us, not both".into()),
        (Some(s), None) => Ok(s),
        (None, Some(t)) => {
            let s = (t * per_us).round();
            if !(s >= 1.0) {
                return Err(format!("anneal_us={t} maps to fewer than one sweep"));
            }
            Ok(s as usize)
        }
        (None, None) => Ok(default),
    }
}

impl FromStr for SolverSpec {
    type Err = String;

    /// `exact`, `sa[:key=value,...]`, `sqa[:key=value,...]` or
    /// `external:COMMAND ARGS...`.
    fn from_str(s: &str) -> Result<Self, String> {
        let (name, rest) = s.split_once(':').unwrap_or((s, ""));
        if name == "external" {
            let cmd: Vec<String> = rest.split_whitespace().map(String::from).collect();
            if cmd.is_empty() {
                return Err("external solver needs a command".into());
            }
            return Ok(SolverSpec { label: s.to_string(), kind: SolverKind::External(cmd) });
        }
        let mut pairs = Vec::new();
        for item in rest.split(',').filter(|p| !p.trim().is_empty()) {
            let (k, v) = item.split_once('=').ok_or_else(|| format!("expected key=value, got `{item}`"))?;
            pairs.push((k.trim(), v.trim()));
        }
        let mut label = None;
        let mut sweeps = None;
        let mut anneal_us = None;
        let mut per_us = DEFAULT_SWEEPS_PER_US;
        let kind = match name {
            "exact" => {
                for (k, v) in pairs {
                    match k {
                        "label" => label = Some(v.to_string()),
                        _ => return Err(format!("exact takes no parameter `{k}`")),
                    }
                }
                SolverKind::Exact
            }
            "sa" => {
                let mut c = SaConfig::default();
                for (k, v) in pairs {
                    match k {
                        "reads" => c.num_reads = number(k, v)?,
                        "sweeps" => sweeps = Some(number(k, v)?),
                        "anneal_us" => anneal_us = Some(number(k, v)?),
                        "sweeps_per_us" => per_us = number(k, v)?,
                        "schedule" => {
                            c.beta_schedule = match v {
                                "geometric" => BetaSchedule::Geometric,
                                "linear" => BetaSchedule::Linear,
                                _ => return Err(format!("unknown schedule `{v}`")),
                            }
                        }
                        "beta_hot" => c.beta_hot = Some(number(k, v)?),
                        "beta_cold" => c.beta_cold = Some(number(k, v)?),
                        "label" => label = Some(v.to_string()),
                        _ => return Err(format!("unknown sa parameter `{k}`")),
                    }
                }
                c.sweeps = resolve_sweeps(sweeps, anneal_us, per_us, c.sweeps)?;
                c.validate().map_err(|e| e.to_string())?;
                SolverKind::Sa(c)
            }
            "sqa" => {
                let mut c = SqaConfig::default();
                for (k, v) in pairs {
                    match k {
                        "reads" => c.num_reads = number(k, v)?,
                        "sweeps" => sweeps = Some(number(k, v)?),
                        "anneal_us" => anneal_us = Some(number(k, v)?),
                        "sweeps_per_us" => per_us = number(k, v)?,
                        "slices" => c.trotter_slices = number(k, v)?,
                        "temperature" => c.temperature = number(k, v)?,
                        "gamma_initial" => c.gamma_initial = number(k, v)?,
                        "gamma_final" => c.gamma_final = number(k, v)?,
                        "label" => label = Some(v.to_string()),
                        _ => return Err(format!("unknown sqa parameter `{k}`")),
                    }
                }
                c.sweeps = resolve_sweeps(sweeps, anneal_us, per_us, c.sweeps)?;
                c.validate().map_err(|e| e.to_string())?;
                SolverKind::Sqa(c)
            }
            _ => return Err(format!("unknown solver `{name}` (expected exact, sa, sqa or external)")),
        };
        Ok(SolverSpec { label: label.unwrap_or_else(|| s.to_string()), kind })
    }
}
