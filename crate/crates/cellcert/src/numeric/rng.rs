//! Counter-based deterministic randomness.
//!
//! A [`RngStream`] is an immutable `(master_seed, stream_id)` descriptor. Every
//! consumer builds a fresh ChaCha8 keystream from it, so two equal descriptors
//! always yield the same sequence and descriptors can be shared freely between
//! worker threads.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

/// SplitMix64 finalizer.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RngStream {
    pub master_seed: u64,
    pub stream_id: u64,
}

impl RngStream {
    pub fn new(master_seed: u64, stream_id: u64) -> Self {
        Self { master_seed, stream_id }
    }

    /// Root stream of an experiment.
    pub fn root(master_seed: u64) -> Self {
        Self::new(master_seed, 0)
    }

    /// Child stream for a given purpose tag and index (usually a trial id).
    pub fn derive(&self, tag: u64, index: u64) -> Self {
        let id = splitmix64(self.stream_id ^ splitmix64(tag.wrapping_mul(GOLDEN) ^ index));
        Self::new(self.master_seed, splitmix64(id.wrapping_add(index)))
    }

    /// Fresh generator positioned at counter zero.
    pub fn rng(&self) -> ChaCha8Rng {
        let mut seed = [0u8; 32];
        let mut state = self.master_seed;
        for chunk in seed.chunks_exact_mut(8) {
            state = splitmix64(state);
            chunk.copy_from_slice(&state.to_le_bytes());
        }
        let mut rng = ChaCha8Rng::from_seed(seed);
        rng.set_stream(self.stream_id);
        rng
    }

    pub fn sampler(&self) -> GaussianSampler {
        GaussianSampler::new(self.rng())
    }
}

/// Uniform draw in (0, 1], 53 bits of resolution.
pub fn uniform_open01<R: RngCore>(rng: &mut R) -> f64 {
    ((rng.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Box-Muller standard normals drawn in pairs from a uniform stream.
#[derive(Debug, Clone)]
pub struct GaussianSampler {
    rng: ChaCha8Rng,
    spare: Option<f64>,
}

impl GaussianSampler {
    pub fn new(rng: ChaCha8Rng) -> Self {
        Self { rng, spare: None }
    }

    pub fn standard(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        let u1 = uniform_open01(&mut self.rng);
        let u2 = uniform_open01(&mut self.rng);
        let r = (-2.0 * u1.ln()).sqrt();
        let theta = 2.0 * std::f64::consts::PI * u2;
        self.spare = Some(r * theta.sin());
        r * theta.cos()
    }

    pub fn uniform(&mut self) -> f64 {
        uniform_open01(&mut self.rng)
    }

    pub fn index(&mut self, upper: usize) -> usize {
        self.rng.random_range(0..upper)
    }

    pub fn rng_mut(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    /// Standard normal vector of length `n`.
    pub fn vector(&mut self, n: usize) -> Vec<f64> {
        (0..n).map(|_| self.standard()).collect()
    }

    /// Uniform point on the unit sphere in dimension `dim`.
    pub fn unit_vector(&mut self, dim: usize) -> Vec<f64> {
        loop {
            let v = self.vector(dim);
            let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
            if norm > 1e-300 {
                return v.into_iter().map(|a| a / norm).collect();
            }
        }
    }
}

/// `n` i.i.d. N(0, variance) samples from the start of `stream`.
pub fn gaussian(stream: &RngStream, n: usize, variance: f64) -> Result<Vec<f64>> {
    if !variance.is_finite() || variance <= 0.0 {
        return Err(invalid(format!("variance must be finite and positive, got {variance}")));
    }
    let scale = variance.sqrt();
    let mut sampler = stream.sampler();
    Ok((0..n).map(|_| sampler.standard() * scale).collect())
}
