use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Adaptive Simpson settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_depth: u32,
    /// Quantile at which semi-infinite supports are cut.
    pub infinite_tail_cutoff: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig { abs_tol: 1e-8, rel_tol: 1e-6, max_depth: 40, infinite_tail_cutoff: 1.0 - 1e-10 }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<(), String> {
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0) {
            return Err("quadrature tolerances must be positive".into());
        }
        if !(self.infinite_tail_cutoff > 0.5 && self.infinite_tail_cutoff < 1.0) {
            return Err("tail cutoff must lie in (0.5, 1)".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Error)]
#[error("quadrature did not converge: estimate {estimate}, error bound {error}")]
pub struct ConvergenceError {
    pub estimate: f64,
    pub error: f64,
}

const PANELS: usize = 16;

/// `∫_a^b f`, refined panel by panel until the Richardson error estimate
/// is within `max(abs_tol, rel_tol |I|)`. An empty or reversed interval
/// integrates to 0.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<f64, ConvergenceError> {
    if !(b > a) {
        return Ok(0.0);
    }
    let width = (b - a) / PANELS as f64;
    let mut panels = Vec::with_capacity(PANELS);
    let mut coarse = 0.0;
    let mut fa = f(a);
    for k in 0..PANELS {
        let lo = a + width * k as f64;
        let hi = if k + 1 == PANELS { b } else { lo + width };
        let mid = 0.5 * (lo + hi);
        let (fm, fb) = (f(mid), f(hi));
        let s = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
        coarse += s;
        panels.push((lo, hi, fa, fm, fb, s));
        fa = fb;
    }
    let tol = cfg.abs_tol.max(cfg.rel_tol * coarse.abs());
    let mut total = 0.0;
    let mut err = 0.0;
    let mut failed = false;
    for (lo, hi, fa, fm, fb, s) in panels {
        let local = tol * (hi - lo) / (b - a);
        let r = refine(&f, lo, hi, fa, fm, fb, s, local, cfg.max_depth);
        total += r.0;
        err += r.1;
        failed |= r.2;
    }
    if failed && err > tol {
        Err(ConvergenceError { estimate: total, error: err })
    } else {
        Ok(total)
    }
}

// Returns (estimate, error estimate, hit depth cap).
#[allow(clippy::too_many_arguments)]
fn refine<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> (f64, f64, bool) {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let diff = left + right - whole;
    if diff.abs() <= 15.0 * tol {
        return (left + right + diff / 15.0, diff.abs() / 15.0, false);
    }
    if depth == 0 || !(m > a && b > m) {
        return (left + right, diff.abs() / 15.0, true);
    }
    let l = refine(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1);
    let r = refine(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
    (l.0 + r.0, l.1 + r.1, l.2 || r.2)
}
