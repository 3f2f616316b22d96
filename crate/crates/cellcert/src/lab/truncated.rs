use std::f64::consts::SQRT_2;

use crate::error::{invalid, Error, Result};
use crate::numeric::special::{gauss_density, gauss_tail};
use crate::numeric::GaussianSampler;

/// Law of `X ~ N(0, variance)` conditioned on `X > threshold`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncatedGaussianSpec {
    pub threshold: f64,
    pub variance: f64,
}

impl TruncatedGaussianSpec {
    /// Variance `1/d`, the per-coordinate law of the frame rows.
    pub fn for_dim(threshold: f64, d: usize) -> Result<Self> {
        if d == 0 {
            return Err(invalid("d must be positive"));
        }
        Self::new(threshold, 1.0 / d as f64)
    }

    pub fn new(threshold: f64, variance: f64) -> Result<Self> {
        if !threshold.is_finite() {
            return Err(invalid("threshold must be finite"));
        }
        if !(variance > 0.0 && variance.is_finite()) {
            return Err(invalid("variance must be > 0"));
        }
        Ok(Self { threshold, variance })
    }

    /// Threshold in units of the standard deviation.
    pub fn standardized(&self) -> f64 {
        self.threshold / self.variance.sqrt()
    }
}

/// Second moment `E[X² | X > a]` for `X ~ N(0, v)`:
/// `v + √v·a·φ(a/√v)/Q(a/√v)`. With `v = 1/d` this is
/// `1/d + √(1/d)·a·e^{−a²d/2}/(√(2π)·Q(a√d))`.
pub fn truncated_covariance_alpha(spec: &TruncatedGaussianSpec) -> Result<f64> {
    let c = spec.standardized();
    if c > 38.0 {
        return Err(Error::Domain(format!(
            "standardized threshold {c} underflows the Gaussian tail"
        )));
    }
    let v = spec.variance;
    Ok(v + v.sqrt() * spec.threshold * gauss_density(c) / gauss_tail(c))
}

/// `√2·Q(a/√2)/Q(a)` on `[0, 1/2]`.
pub fn psi2_ratio(a: f64) -> Result<f64> {
    if !(0.0..=0.5).contains(&a) {
        return Err(Error::Domain(format!(
            "psi2 ratio is only defined on [0, 0.5], got {a}"
        )));
    }
    Ok(SQRT_2 * gauss_tail(a / SQRT_2) / gauss_tail(a))
}

/// Exact sampler for [`TruncatedGaussianSpec`]: plain rejection for low
/// thresholds, Robert's translated-exponential proposal above.
#[derive(Debug, Clone, Copy)]
pub struct TruncatedSampler {
    sd: f64,
    c: f64,
    lambda: f64,
}

impl TruncatedSampler {
    pub fn new(spec: &TruncatedGaussianSpec) -> Self {
        let c = spec.standardized();
        Self {
            sd: spec.variance.sqrt(),
            c,
            lambda: 0.5 * (c + (c * c + 4.0).sqrt()),
        }
    }

    pub fn sample(&self, g: &mut GaussianSampler) -> f64 {
        self.sd * self.standard(g)
    }

    fn standard(&self, g: &mut GaussianSampler) -> f64 {
        if self.c < 0.5 {
            loop {
                let z = g.standard();
                if z > self.c {
                    return z;
                }
            }
        }
        loop {
            let z = self.c - g.uniform().ln() / self.lambda;
            let accept = (-0.5 * (z - self.lambda) * (z - self.lambda)).exp();
            if g.uniform() <= accept {
                return z;
            }
        }
    }
}
