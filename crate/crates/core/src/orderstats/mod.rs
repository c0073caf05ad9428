//! Distributions of extremes and ranges of i.i.d. samples: the range
//! `max - min`, the capacity-scaled range `C (max - min)` and the
//! squared-weight range `max w^2 - min w^2`.
//!
//! Densities are evaluated by adaptive quadrature over the (possibly
//! truncated) support; [`monte_carlo_range`] draws the same statistics
//! directly and serves as the oracle.

mod quadrature;

use std::cell::Cell;

use rand::Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rng::{substream, Domain};
use crate::special::TruncatedNormal;

pub use quadrature::{integrate, ConvergenceError, QuadratureConfig};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OrderStatsError {
    #[error("sample size {n} is below the minimum of {min}")]
    SampleSize { n: usize, min: usize },
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),
    #[error("{0} requires a distribution supported on nonnegative reals")]
    NegativeSupport(&'static str),
    #[error("scaled range needs a capacity distribution")]
    MissingScale,
    #[error("invalid quadrature configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Convergence(#[from] ConvergenceError),
}

/// Law of an individual weight or capacity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "snake_case")]
pub enum ContinuousDistribution {
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
    Exponential {
        rate: f64,
    },
    /// Point mass. Only meaningful for simulation; it has no density.
    Degenerate {
        value: f64,
    },
}

impl ContinuousDistribution {
    pub fn uniform(lo: f64, hi: f64) -> Result<Self, OrderStatsError> {
        Self::Uniform { lo, hi }.validated()
    }

    /// Normal law restricted to `[lo, hi]`; `hi` may be `+inf`.
    pub fn truncated_normal(mu: f64, sigma: f64, lo: f64, hi: f64) -> Result<Self, OrderStatsError> {
        Self::TruncatedNormal { mu, sigma, lo, hi }.validated()
    }

    pub fn exponential(rate: f64) -> Result<Self, OrderStatsError> {
        Self::Exponential { rate }.validated()
    }

    pub fn validated(self) -> Result<Self, OrderStatsError> {
        let bad = |m: String| Err(OrderStatsError::InvalidDistribution(m));
        match self {
            Self::Uniform { lo, hi } if !(lo.is_finite() && hi.is_finite() && lo < hi) => {
                bad(format!("uniform needs finite lo < hi, got [{lo}, {hi}]"))
            }
            Self::TruncatedNormal { mu, sigma, lo, hi } => {
                if !(mu.is_finite() && sigma > 0.0 && sigma.is_finite() && lo < hi && !lo.is_nan() && !hi.is_nan()) {
                    return bad(format!(
                        "truncated normal needs sigma > 0 and lo < hi, got ({mu}, {sigma}, {lo}, {hi})"
                    ));
                }
                if self.normal().mass() < 1e-12 {
                    return bad("truncation window carries no probability mass".into());
                }
                Ok(self)
            }
            Self::Exponential { rate } if !(rate > 0.0 && rate.is_finite()) => {
                bad(format!("exponential rate must be positive, got {rate}"))
            }
            Self::Degenerate { value } if !value.is_finite() => bad("point mass must be finite".into()),
            _ => Ok(self),
        }
    }

    fn normal(&self) -> TruncatedNormal {
        match *self {
            Self::TruncatedNormal { mu, sigma, lo, hi } => TruncatedNormal { mu, sigma, lo, hi },
            _ => unreachable!("only called on truncated normals"),
        }
    }

    /// Nominal support; `hi` may be infinite.
    pub fn support(&self) -> (f64, f64) {
        match *self {
            Self::Uniform { lo, hi } | Self::TruncatedNormal { lo, hi, .. } => (lo, hi),
            Self::Exponential { .. } => (0.0, f64::INFINITY),
            Self::Degenerate { value } => (value, value),
        }
    }

    /// Support with an infinite upper end replaced by the cutoff quantile.
    pub fn effective_support(&self, cutoff: f64) -> (f64, f64) {
        let (lo, hi) = self.support();
        if hi.is_finite() {
            (lo, hi)
        } else {
            (lo, self.quantile(cutoff))
        }
    }

    pub fn pdf(&self, x: f64) -> f64 {
        match *self {
            Self::Uniform { lo, hi } => {
                if (lo..=hi).contains(&x) {
                    1.0 / (hi - lo)
                } else {
                    0.0
                }
            }
            Self::TruncatedNormal { .. } => self.normal().pdf(x),
            Self::Exponential { rate } => {
                if x >= 0.0 {
                    rate * (-rate * x).exp()
                } else {
                    0.0
                }
            }
            Self::Degenerate { .. } => 0.0,
        }
    }

    pub fn cdf(&self, x: f64) -> f64 {
        match *self {
            Self::Uniform { lo, hi } => ((x - lo) / (hi - lo)).clamp(0.0, 1.0),
            Self::TruncatedNormal { .. } => self.normal().cdf(x),
            Self::Exponential { rate } => {
                if x > 0.0 {
                    -(-rate * x).exp_m1()
                } else {
                    0.0
                }
            }
            Self::Degenerate { value } => {
                if x >= value {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }

    pub fn sf(&self, x: f64) -> f64 {
        match *self {
            Self::TruncatedNormal { .. } => self.normal().sf(x),
            Self::Exponential { rate } => {
                if x > 0.0 {
                    (-rate * x).exp()
                } else {
                    1.0
                }
            }
            _ => 1.0 - self.cdf(x),
        }
    }

    /// Smallest `x` with `cdf(x) >= p`.
    pub fn quantile(&self, p: f64) -> f64 {
        let p = p.clamp(0.0, 1.0);
        match *self {
            Self::Uniform { lo, hi } => lo + (hi - lo) * p,
            Self::Exponential { rate } => -(-p).ln_1p() / rate,
            Self::Degenerate { value } => value,
            Self::TruncatedNormal { mu, sigma, lo, hi } => {
                let mut a = lo.max(mu - 40.0 * sigma);
                let mut b = hi.min(mu + 40.0 * sigma);
                let tail = 1.0 - p;
                for _ in 0..200 {
                    let m = 0.5 * (a + b);
                    // compare in the tail that keeps precision
                    let below = if p > 0.5 { self.sf(m) > tail } else { self.cdf(m) < p };
                    if below {
                        a = m;
                    } else {
                        b = m;
                    }
                    if b - a <= 4.0 * f64::EPSILON * m.abs().max(1.0) {
                        break;
                    }
                }
                0.5 * (a + b)
            }
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            Self::Uniform { lo, hi } => lo + (hi - lo) * rng.random::<f64>(),
            Self::Exponential { rate } => -(-rng.random::<f64>()).ln_1p() / rate,
            Self::Degenerate { value } => value,
            Self::TruncatedNormal { mu, sigma, lo, hi } => {
                if self.normal().mass() > 1e-3 {
                    let normal = Normal::new(mu, sigma).expect("validated sigma");
                    loop {
                        let x = normal.sample(rng);
                        if (lo..=hi).contains(&x) {
                            return x;
                        }
                    }
                }
                self.quantile(rng.random::<f64>())
            }
        }
    }

    fn require_density(&self) -> Result<(), OrderStatsError> {
        match self {
            Self::Degenerate { .. } => Err(OrderStatsError::InvalidDistribution("a point mass has no density".into())),
            _ => Ok(()),
        }
    }
}

/// Which statistic of the sample to evaluate or simulate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Statistic {
    Range,
    ScaledRange,
    SquaredRange,
}

impl Statistic {
    pub fn name(self) -> &'static str {
        match self {
            Statistic::Range => "range",
            Statistic::ScaledRange => "scaled_range",
            Statistic::SquaredRange => "squared_range",
        }
    }
}

/// `P(max <= x) = P(x)^n`.
pub fn cdf_max(dist: &ContinuousDistribution, n: usize, x: f64) -> f64 {
    dist.cdf(x).powi(n as i32)
}

/// `P(min <= x) = 1 - (1 - P(x))^n`.
pub fn cdf_min(dist: &ContinuousDistribution, n: usize, x: f64) -> f64 {
    1.0 - dist.sf(x).powi(n as i32)
}

/// Density of the sample minimum, `n p(y) (1 - P(y))^(n-1)`.
pub fn pdf_min(dist: &ContinuousDistribution, n: usize, y: f64) -> f64 {
    let p = dist.pdf(y);
    if p == 0.0 {
        return 0.0;
    }
    n as f64 * p * dist.sf(y).powi(n as i32 - 1)
}

/// Joint density of the minimum `y` and the range `x`,
/// `n (n-1) p(y) p(y+x) (P(y+x) - P(y))^(n-2)`.
pub fn joint_pdf_min_range(dist: &ContinuousDistribution, n: usize, y: f64, x: f64) -> f64 {
    if n < 2 || x < 0.0 {
        return 0.0;
    }
    let (p, q) = (dist.pdf(y), dist.pdf(y + x));
    if p == 0.0 || q == 0.0 {
        return 0.0;
    }
    let gap = (dist.cdf(y + x) - dist.cdf(y)).max(0.0);
    (n * (n - 1)) as f64 * p * q * gap.powi(n as i32 - 2)
}

// Collects failures of inner integrals so the outer result can report them.
struct Nested {
    inner_error: Cell<f64>,
}

impl Nested {
    fn new() -> Self {
        Nested { inner_error: Cell::new(0.0) }
    }

    fn inner(&self, r: Result<f64, ConvergenceError>) -> f64 {
        match r {
            Ok(v) => v,
            Err(e) => {
                self.inner_error.set(self.inner_error.get().max(e.error));
                e.estimate
            }
        }
    }

    fn finish(&self, r: Result<f64, ConvergenceError>) -> Result<f64, OrderStatsError> {
        let v = r?;
        let e = self.inner_error.get();
        if e > 0.0 {
            Err(ConvergenceError { estimate: v, error: e }.into())
        } else {
            Ok(v)
        }
    }
}

fn check(dist: &ContinuousDistribution, n: usize, cfg: &QuadratureConfig) -> Result<(f64, f64), OrderStatsError> {
    if n < 2 {
        return Err(OrderStatsError::SampleSize { n, min: 2 });
    }
    dist.require_density()?;
    cfg.validate().map_err(OrderStatsError::Config)?;
    Ok(dist.effective_support(cfg.infinite_tail_cutoff))
}

// Integrates `f` over [a, b] split at `cut` when it lies inside.
fn integrate_split<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    cut: f64,
    cfg: &QuadratureConfig,
) -> Result<f64, ConvergenceError> {
    if cut > a && cut < b {
        let l = integrate(&f, a, cut, cfg);
        let r = integrate(&f, cut, b, cfg);
        match (l, r) {
            (Ok(l), Ok(r)) => Ok(l + r),
            (l, r) => {
                let part = |x: Result<f64, ConvergenceError>| match x {
                    Ok(v) => (v, 0.0),
                    Err(e) => (e.estimate, e.error),
                };
                let (lv, le) = part(l);
                let (rv, re) = part(r);
                Err(ConvergenceError { estimate: lv + rv, error: le + re })
            }
        }
    } else {
        integrate(f, a, b, cfg)
    }
}

/// `P(max - min <= x)`: the joint density of `(min, max)` integrated over
/// `y <= z <= y + x`, inner integral over `z`, outer over `y`.
pub fn cdf_range(
    dist: &ContinuousDistribution,
    n: usize,
    x: f64,
    cfg: &QuadratureConfig,
) -> Result<f64, OrderStatsError> {
    let (lo, hi) = check(dist, n, cfg)?;
    if x <= 0.0 {
        return Ok(0.0);
    }
    if x >= hi - lo {
        return Ok(1.0);
    }
    let nested = Nested::new();
    let outer = |y: f64| {
        let top = (y + x).min(hi);
        let inner = integrate(|z| joint_pdf_min_range(dist, n, y, z - y), y, top, cfg);
        nested.inner(inner)
    };
    nested.finish(integrate_split(outer, lo, hi, hi - x, cfg)).map(|v| v.clamp(0.0, 1.0))
}

/// Density of `max - min`.
pub fn pdf_range(
    dist: &ContinuousDistribution,
    n: usize,
    x: f64,
    cfg: &QuadratureConfig,
) -> Result<f64, OrderStatsError> {
    let (lo, hi) = check(dist, n, cfg)?;
    if x < 0.0 || x > hi - lo {
        return Ok(0.0);
    }
    Ok(integrate(|y| joint_pdf_min_range(dist, n, y, x), lo, hi - x, cfg)?.max(0.0))
}

fn check_nonnegative(dist: &ContinuousDistribution, what: &'static str) -> Result<(), OrderStatsError> {
    if dist.support().0 < 0.0 {
        Err(OrderStatsError::NegativeSupport(what))
    } else {
        Ok(())
    }
}

// Integration window in x for C x = z: x in [z / c_hi, z / c_lo], within
// the range support.
fn scaled_window(z: f64, c: (f64, f64), r_max: f64) -> (f64, f64) {
    let a = (z / c.1).min(r_max);
    let b = if c.0 > 0.0 { (z / c.0).min(r_max) } else { r_max };
    (a, b)
}

/// Density of `C (max - min)` with `C` independent of the weights:
/// `∫ p_R(x) p_C(z / x) / x dx`.
pub fn pdf_scaled_range(
    dist_w: &ContinuousDistribution,
    dist_c: &ContinuousDistribution,
    n: usize,
    z: f64,
    cfg: &QuadratureConfig,
) -> Result<f64, OrderStatsError> {
    let (lo, hi) = check(dist_w, n, cfg)?;
    dist_c.require_density()?;
    check_nonnegative(dist_c, "the capacity law")?;
    if z <= 0.0 {
        return Ok(0.0);
    }
    let c = dist_c.effective_support(cfg.infinite_tail_cutoff);
    let (a, b) = scaled_window(z, c, hi - lo);
    let nested = Nested::new();
    let f = |x: f64| {
        if x <= 0.0 {
            return 0.0;
        }
        let pc = dist_c.pdf(z / x);
        if pc == 0.0 {
            return 0.0;
        }
        let pr = pdf_range(dist_w, n, x, cfg).unwrap_or_else(|e| match e {
            OrderStatsError::Convergence(c) => nested.inner(Err(c)),
            _ => 0.0,
        });
        pr * pc / x
    };
    nested.finish(integrate(f, a, b, cfg)).map(|v| v.max(0.0))
}

/// `P(C (max - min) <= z) = P_R(z / c_hi) + ∫ p_R(x) P_C(z / x) dx` over
/// the window where `P_C(z / x) < 1`.
pub fn cdf_scaled_range(
    dist_w: &ContinuousDistribution,
    dist_c: &ContinuousDistribution,
    n: usize,
    z: f64,
    cfg: &QuadratureConfig,
) -> Result<f64, OrderStatsError> {
    let (lo, hi) = check(dist_w, n, cfg)?;
    dist_c.require_density()?;
    check_nonnegative(dist_c, "the capacity law")?;
    if z <= 0.0 {
        return Ok(0.0);
    }
    let c = dist_c.effective_support(cfg.infinite_tail_cutoff);
    let (a, b) = scaled_window(z, c, hi - lo);
    let nested = Nested::new();
    let head = match cdf_range(dist_w, n, a, cfg) {
        Ok(v) => v,
        Err(OrderStatsError::Convergence(e)) => nested.inner(Err(e)),
        Err(e) => return Err(e),
    };
    let f = |x: f64| {
        if x <= 0.0 {
            return 0.0;
        }
        let pr = pdf_range(dist_w, n, x, cfg).unwrap_or_else(|e| match e {
            OrderStatsError::Convergence(c) => nested.inner(Err(c)),
            _ => 0.0,
        });
        pr * dist_c.cdf(z / x)
    };
    let tail = integrate(f, a, b, cfg);
    nested.finish(tail.map(|t| head + t)).map(|v| v.clamp(0.0, 1.0))
}

/// `P(max w^2 - min w^2 <= x)` for nonnegative weights. Written in the
/// weight variables `w = u`, `w' = v` (the `y = u^2` substitution), so the
/// integrand stays bounded at the origin.
pub fn cdf_squared_range(
    dist: &ContinuousDistribution,
    n: usize,
    x: f64,
    cfg: &QuadratureConfig,
) -> Result<f64, OrderStatsError> {
    let (lo, hi) = check(dist, n, cfg)?;
    check_nonnegative(dist, "the squared range")?;
    if x <= 0.0 {
        return Ok(0.0);
    }
    if x >= hi * hi - lo * lo {
        return Ok(1.0);
    }
    let nested = Nested::new();
    let outer = |u: f64| {
        let top = (u * u + x).sqrt().min(hi);
        nested.inner(integrate(|v| joint_pdf_min_range(dist, n, u, v - u), u, top, cfg))
    };
    let kink = (hi * hi - x).sqrt();
    nested.finish(integrate_split(outer, lo, hi, kink, cfg)).map(|v| v.clamp(0.0, 1.0))
}

/// Density of `max w^2 - min w^2`:
/// `∫ n(n-1) p(u) p(v) (P(v) - P(u))^(n-2) / (2 v) du`, `v = sqrt(u^2 + x)`.
pub fn pdf_squared_range(
    dist: &ContinuousDistribution,
    n: usize,
    x: f64,
    cfg: &QuadratureConfig,
) -> Result<f64, OrderStatsError> {
    let (lo, hi) = check(dist, n, cfg)?;
    check_nonnegative(dist, "the squared range")?;
    if x <= 0.0 || x > hi * hi - lo * lo {
        return Ok(0.0);
    }
    let top = (hi * hi - x).sqrt();
    let f = |u: f64| {
        let v = (u * u + x).sqrt();
        joint_pdf_min_range(dist, n, u, v - u) / (2.0 * v)
    };
    Ok(integrate(f, lo, top, cfg)?.max(0.0))
}

/// C.d.f. of the chosen statistic.
pub fn cdf_statistic(
    stat: Statistic,
    dist_w: &ContinuousDistribution,
    dist_c: Option<&ContinuousDistribution>,
    n: usize,
    x: f64,
    cfg: &QuadratureConfig,
) -> Result<f64, OrderStatsError> {
    match stat {
        Statistic::Range => cdf_range(dist_w, n, x, cfg),
        Statistic::SquaredRange => cdf_squared_range(dist_w, n, x, cfg),
        Statistic::ScaledRange => cdf_scaled_range(dist_w, dist_c.ok_or(OrderStatsError::MissingScale)?, n, x, cfg),
    }
}

/// Density of the chosen statistic.
pub fn pdf_statistic(
    stat: Statistic,
    dist_w: &ContinuousDistribution,
    dist_c: Option<&ContinuousDistribution>,
    n: usize,
    x: f64,
    cfg: &QuadratureConfig,
) -> Result<f64, OrderStatsError> {
    match stat {
        Statistic::Range => pdf_range(dist_w, n, x, cfg),
        Statistic::SquaredRange => pdf_squared_range(dist_w, n, x, cfg),
        Statistic::ScaledRange => pdf_scaled_range(dist_w, dist_c.ok_or(OrderStatsError::MissingScale)?, n, x, cfg),
    }
}

/// Largest value the statistic takes on the effective supports.
pub fn statistic_upper_bound(
    stat: Statistic,
    dist_w: &ContinuousDistribution,
    dist_c: Option<&ContinuousDistribution>,
    cfg: &QuadratureConfig,
) -> Result<f64, OrderStatsError> {
    let (lo, hi) = dist_w.effective_support(cfg.infinite_tail_cutoff);
    Ok(match stat {
        Statistic::Range => hi - lo,
        Statistic::SquaredRange => hi * hi - lo * lo,
        Statistic::ScaledRange => {
            let c = dist_c.ok_or(OrderStatsError::MissingScale)?;
            c.effective_support(cfg.infinite_tail_cutoff).1 * (hi - lo)
        }
    })
}

const MC_CHUNK: usize = 1 << 14;

/// Simulated draws of the statistic, sorted ascending. Chunks of draws use
/// independent substreams, so the result does not depend on thread count.
pub fn monte_carlo_range(
    dist_w: &ContinuousDistribution,
    dist_c: Option<&ContinuousDistribution>,
    n: usize,
    stat: Statistic,
    samples: usize,
    seed: u64,
) -> Result<Vec<f64>, OrderStatsError> {
    if samples < 1000 {
        return Err(OrderStatsError::SampleSize { n: samples, min: 1000 });
    }
    if n < 2 {
        return Err(OrderStatsError::SampleSize { n, min: 2 });
    }
    if stat == Statistic::SquaredRange {
        check_nonnegative(dist_w, "the squared range")?;
    }
    let dist_c = match stat {
        Statistic::ScaledRange => Some(dist_c.ok_or(OrderStatsError::MissingScale)?),
        _ => None,
    };
    let chunks = samples.div_ceil(MC_CHUNK);
    let mut draws: Vec<f64> = (0..chunks)
        .into_par_iter()
        .flat_map_iter(|k| {
            let mut rng = substream(seed, Domain::MonteCarlo, k as u64);
            let count = MC_CHUNK.min(samples - k * MC_CHUNK);
            (0..count)
                .map(|_| {
                    let (mut mn, mut mx) = (f64::INFINITY, f64::NEG_INFINITY);
                    for _ in 0..n {
                        let w = dist_w.sample(&mut rng);
                        mn = mn.min(w);
                        mx = mx.max(w);
                    }
                    match stat {
                        Statistic::Range => mx - mn,
                        Statistic::SquaredRange => mx * mx - mn * mn,
                        Statistic::ScaledRange => dist_c.expect("checked above").sample(&mut rng) * (mx - mn),
                    }
                })
                .collect::<Vec<_>>()
        })
        .collect();
    draws.sort_by(f64::total_cmp);
    Ok(draws)
}

/// Fraction of sorted draws not exceeding `x`.
pub fn empirical_cdf(sorted: &[f64], x: f64) -> f64 {
    sorted.partition_point(|&d| d <= x) as f64 / sorted.len() as f64
}

/// Smallest grid-resolved `x` with `cdf(x) >= p`, by bisection on `[0, upper]`.
pub fn quantile_by_bisection<F>(cdf: F, p: f64, upper: f64) -> Result<f64, OrderStatsError>
where
    F: Fn(f64) -> Result<f64, OrderStatsError>,
{
    let (mut a, mut b) = (0.0, upper);
    for _ in 0..60 {
        let m = 0.5 * (a + b);
        if cdf(m)? < p {
            a = m;
        } else {
            b = m;
        }
        if b - a <= 1e-9 * upper {
            break;
        }
    }
    Ok(0.5 * (a + b))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WiderTail {
    ScaledRange,
    SquaredRange,
    Equal,
}

/// Tail widths, measured as `q99 / q50`, of the two range statistics.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TailReport {
    pub scaled_q50: f64,
    pub scaled_q99: f64,
    pub scaled_range_tail_width: f64,
    pub squared_q50: f64,
    pub squared_q99: f64,
    pub squared_range_tail_width: f64,
    pub comparison: WiderTail,
}

pub fn tail_behavior_report(
    dist_w: &ContinuousDistribution,
    dist_c: &ContinuousDistribution,
    n: usize,
    cfg: &QuadratureConfig,
) -> Result<TailReport, OrderStatsError> {
    let up_s = statistic_upper_bound(Statistic::ScaledRange, dist_w, Some(dist_c), cfg)?;
    let up_q = statistic_upper_bound(Statistic::SquaredRange, dist_w, None, cfg)?;
    let scaled = |x| cdf_scaled_range(dist_w, dist_c, n, x, cfg);
    let squared = |x| cdf_squared_range(dist_w, n, x, cfg);
    let scaled_q50 = quantile_by_bisection(scaled, 0.5, up_s)?;
    let scaled_q99 = quantile_by_bisection(scaled, 0.99, up_s)?;
    let squared_q50 = quantile_by_bisection(squared, 0.5, up_q)?;
    let squared_q99 = quantile_by_bisection(squared, 0.99, up_q)?;
    let s = scaled_q99 / scaled_q50;
    let q = squared_q99 / squared_q50;
    let comparison = if (s - q).abs() <= 1e-9 * s.max(q) {
        WiderTail::Equal
    } else if s > q {
        WiderTail::ScaledRange
    } else {
        WiderTail::SquaredRange
    };
    Ok(TailReport {
        scaled_q50,
        scaled_q99,
        scaled_range_tail_width: s,
        squared_q50,
        squared_q99,
        squared_range_tail_width: q,
        comparison,
    })
}
