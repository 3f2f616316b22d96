//! Deterministic randomness, special functions and dense spectral primitives.

pub mod linalg;
pub mod rng;
pub mod special;

pub use linalg::{min_singular_value, operator_norm, Matrix};
pub use rng::{gaussian, GaussianSampler, RngStream};
pub use special::{erf, erfc, gauss_tail};

use crate::error::{invalid, Result};

/// Point on the unit sphere; the constructor normalizes.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitVector {
    coords: Vec<f64>,
}

impl UnitVector {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.len() < 2 {
            return Err(invalid("unit vectors need dimension >= 2"));
        }
        if coords.iter().any(|v| !v.is_finite()) {
            return Err(invalid("coordinates must be finite"));
        }
        let n = linalg::norm(&coords);
        if n <= 1e-300 {
            return Err(invalid("cannot normalize the zero vector"));
        }
        let mut coords: Vec<f64> = coords.into_iter().map(|c| c / n).collect();
        // second pass removes the residual rounding of the first division
        let n2 = linalg::norm(&coords);
        coords.iter_mut().for_each(|c| *c /= n2);
        Ok(Self { coords })
    }

    /// Standard basis vector `e_{axis}`.
    pub fn basis(dim: usize, axis: usize) -> Result<Self> {
        if axis >= dim {
            return Err(invalid("axis out of range"));
        }
        let mut c = vec![0.0; dim];
        c[axis] = 1.0;
        Self::new(c)
    }

    pub fn random(dim: usize, sampler: &mut GaussianSampler) -> Result<Self> {
        Self::new(sampler.unit_vector(dim))
    }

    /// Point at angle `theta` on the unit circle.
    pub fn from_angle(theta: f64) -> Self {
        Self {
            coords: vec![theta.cos(), theta.sin()],
        }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn dot(&self, v: &[f64]) -> f64 {
        linalg::dot(&self.coords, v)
    }

    pub fn negated(&self) -> Self {
        Self {
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }

    /// Chordal distance `‖self − other‖₂`.
    pub fn distance(&self, other: &UnitVector) -> f64 {
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_vector_normalizes() {
        let u = UnitVector::new(vec![3.0, 4.0, 12.0]).unwrap();
        assert!((linalg::norm(u.coords()) - 1.0).abs() <= 1e-12);
        assert!(UnitVector::new(vec![0.0, 0.0]).is_err());
        assert!(UnitVector::new(vec![1.0]).is_err());
    }
}
