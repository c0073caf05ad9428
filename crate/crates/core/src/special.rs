//! Normal-law helpers shared by the coefficient samplers and the
//! order-statistics densities.

use libm::erfc;

const INV_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

/// Standard normal density.
pub fn std_normal_pdf(z: f64) -> f64 {
    INV_SQRT_2PI * (-0.5 * z * z).exp()
}

/// Standard normal c.d.f., accurate in both tails.
pub fn std_normal_cdf(z: f64) -> f64 {
    if z == f64::INFINITY {
        1.0
    } else if z == f64::NEG_INFINITY {
        0.0
    } else {
        0.5 * erfc(-z / std::f64::consts::SQRT_2)
    }
}

/// Standard normal survival function `1 - Phi(z)`.
pub fn std_normal_sf(z: f64) -> f64 {
    std_normal_cdf(-z)
}

/// Normal law `N(mu, sigma^2)` restricted to `[lo, hi]` (either bound may
/// be infinite).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncatedNormal {
    pub mu: f64,
    pub sigma: f64,
    pub lo: f64,
    pub hi: f64,
}

impl TruncatedNormal {
    fn alpha(&self) -> f64 {
        (self.lo - self.mu) / self.sigma
    }

    fn beta(&self) -> f64 {
        (self.hi - self.mu) / self.sigma
    }

    /// Probability mass of the window under the untruncated law.
    pub fn mass(&self) -> f64 {
        let (a, b) = (self.alpha(), self.beta());
        // work in the tail that keeps precision
        if a > 0.0 {
            std_normal_sf(a) - std_normal_sf(b)
        } else {
            std_normal_cdf(b) - std_normal_cdf(a)
        }
    }

    pub fn pdf(&self, x: f64) -> f64 {
        if x < self.lo || x > self.hi {
            return 0.0;
        }
        std_normal_pdf((x - self.mu) / self.sigma) / (self.sigma * self.mass())
    }

    pub fn cdf(&self, x: f64) -> f64 {
        if x <= self.lo {
            return 0.0;
        }
        if x >= self.hi {
            return 1.0;
        }
        let (a, z) = (self.alpha(), (x - self.mu) / self.sigma);
        let num = if a > 0.0 { std_normal_sf(a) - std_normal_sf(z) } else { std_normal_cdf(z) - std_normal_cdf(a) };
        (num / self.mass()).clamp(0.0, 1.0)
    }

    /// Survival function, computed without cancellation in the upper tail.
    pub fn sf(&self, x: f64) -> f64 {
        if x <= self.lo {
            return 1.0;
        }
        if x >= self.hi {
            return 0.0;
        }
        let (b, z) = (self.beta(), (x - self.mu) / self.sigma);
        let num = if z > 0.0 { std_normal_sf(z) - std_normal_sf(b) } else { std_normal_cdf(b) - std_normal_cdf(z) };
        (num / self.mass()).clamp(0.0, 1.0)
    }

    pub fn mean(&self) -> f64 {
        let (a, b) = (self.alpha(), self.beta());
        let z = self.mass();
        self.mu + self.sigma * (phi_or_zero(a) - phi_or_zero(b)) / z
    }

    pub fn variance(&self) -> f64 {
        let (a, b) = (self.alpha(), self.beta());
        let z = self.mass();
        let (pa, pb) = (phi_or_zero(a), phi_or_zero(b));
        let t1 = (x_phi(a, pa) - x_phi(b, pb)) / z;
        let t2 = (pa - pb) / z;
        self.sigma * self.sigma * (1.0 + t1 - t2 * t2)
    }
}

fn phi_or_zero(z: f64) -> f64 {
    if z.is_finite() {
        std_normal_pdf(z)
    } else {
        0.0
    }
}

// z * phi(z), taken as 0 at infinite z
fn x_phi(z: f64, pz: f64) -> f64 {
    if z.is_finite() {
        z * pz
    } else {
        0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normal_cdf_reference_values() {
        assert!((std_normal_cdf(0.0) - 0.5).abs() < 1e-15);
        let v = std_normal_cdf(1.96);
        assert!((v - 0.975_002_104_851_78).abs() < 1e-12, "{v}");
        assert!((std_normal_sf(8.0) - 6.220_960_574_271_78e-16).abs() < 1e-25);
    }

    #[test]
    fn untruncated_limits() {
        let t = TruncatedNormal { mu: 2.0, sigma: 3.0, lo: f64::NEG_INFINITY, hi: f64::INFINITY };
        assert!((t.mean() - 2.0).abs() < 1e-12);
        assert!((t.variance() - 9.0).abs() < 1e-12);
    }

    #[test]
    fn symmetric_window_moments() {
        // N(0,1) on [-1,1]: variance 1 - 2 phi(1) / (2 Phi(1) - 1)
        let t = TruncatedNormal { mu: 0.0, sigma: 1.0, lo: -1.0, hi: 1.0 };
        let expected = 1.0 - 2.0 * std_normal_pdf(1.0) / (2.0 * std_normal_cdf(1.0) - 1.0);
        assert!(t.mean().abs() < 1e-15);
        assert!((t.variance() - expected).abs() < 1e-14);
        assert!((t.cdf(0.0) - 0.5).abs() < 1e-14);
        assert!((t.cdf(0.3) + t.sf(0.3) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn pdf_integrates_to_one() {
        let t = TruncatedNormal { mu: 50.0, sigma: 15.0, lo: 1.0, hi: 200.0 };
        let n = 20_000;
        let h = (t.hi - t.lo) / n as f64;
        let s: f64 = (0..n).map(|i| t.pdf(t.lo + (i as f64 + 0.5) * h) * h).sum();
        assert!((s - 1.0).abs() < 1e-8);
    }
}
