//! Variable-rate one-bit codec: a vector is stored as the rank of its band
//! subset plus the signs on that subset; the frame is regenerated from a shared
//! seed, so seed bytes are not counted in the bit cost.

mod rank;

use num_bigint::BigUint;
use serde::Serialize;

pub use rank::{bit_cost, ceil_log2, subset_rank, subset_unrank};

use crate::certifier::{cell_witnesses, certify_cell, interior_point, Cell, CellCertificate, SolverOptions};
use crate::error::{invalid, Error, Result};
use crate::lab::{least_squares, median, run_trials, tags};
use crate::numeric::{RngStream, UnitVector};
use crate::tessellation::io::{pack_bits, unpack_bits, Reader};
use crate::tessellation::{make_frame, select_subsets, sign_encode_strict, tau_of, ConstantsConfig};

pub const ENCODED_MAGIC: &[u8; 4] = b"CCE1";

/// Witnesses averaged by the decoder.
pub const DECODER_WITNESSES: usize = 32;

const FIXED_TAG: u64 = 0xf1;
const DECODE_TAG: u64 = 0xdc;

#[derive(Debug, Clone, PartialEq)]
pub struct EncodedVector {
    pub frame_seed: RngStream,
    pub d: usize,
    pub m: usize,
    pub k: usize,
    pub subset_rank: BigUint,
    pub sign_bits: Vec<bool>,
    pub tau: f64,
}

impl EncodedVector {
    pub fn bit_cost(&self) -> u64 {
        bit_cost(self.m, self.k).expect("k <= M by construction")
    }

    pub fn indices(&self) -> Result<Vec<usize>> {
        subset_unrank(&self.subset_rank, self.m, self.k)
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let rank = if self.subset_rank == BigUint::ZERO {
            Vec::new()
        } else {
            self.subset_rank.to_bytes_be()
        };
        let mut out = Vec::with_capacity(4 + 32 + 2 + rank.len() + self.k.div_ceil(8) + 16);
        out.extend_from_slice(ENCODED_MAGIC);
        out.extend_from_slice(&(self.d as u64).to_le_bytes());
        out.extend_from_slice(&(self.m as u64).to_le_bytes());
        out.extend_from_slice(&self.tau.to_le_bytes());
        out.extend_from_slice(&(self.k as u64).to_le_bytes());
        out.extend_from_slice(&(rank.len() as u16).to_le_bytes());
        out.extend_from_slice(&rank);
        out.extend_from_slice(&pack_bits(&self.sign_bits));
        out.extend_from_slice(&self.frame_seed.master_seed.to_le_bytes());
        out.extend_from_slice(&self.frame_seed.stream_id.to_le_bytes());
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut r = Reader::new(bytes);
        r.magic(ENCODED_MAGIC)?;
        let d = to_usize(r.u64()?)?;
        let m = to_usize(r.u64()?)?;
        let tau = r.f64()?;
        let k = to_usize(r.u64()?)?;
        if k > m {
            return Err(Error::CorruptInput(format!("k={k} exceeds M={m}")));
        }
        let len = r.u16()? as usize;
        let rank_bytes = r.take(len)?;
        if rank_bytes.first() == Some(&0) {
            return Err(Error::CorruptInput("rank bytes are not minimal".into()));
        }
        let subset_rank = BigUint::from_bytes_be(rank_bytes);
        let sign_bits = unpack_bits(r.take(k.div_ceil(8))?, k);
        let frame_seed = RngStream::new(r.u64()?, r.u64()?);
        r.finish()?;
        let e = Self {
            frame_seed,
            d,
            m,
            k,
            subset_rank,
            sign_bits,
            tau,
        };
        e.indices().map_err(|err| Error::CorruptInput(err.to_string()))?;
        Ok(e)
    }
}

fn to_usize(v: u64) -> Result<usize> {
    usize::try_from(v).map_err(|_| Error::CorruptInput(format!("{v} does not fit in usize")))
}

/// Encodes `x` by the rank of `S = V ∪ 𝒲` and the signs of `x` on `S` (index order).
pub fn encode(x: &UnitVector, d: usize, m: usize, cfg: &ConstantsConfig, stream: RngStream) -> Result<EncodedVector> {
    if x.dim() != d {
        return Err(invalid(format!("x has dimension {}, expected {d}", x.dim())));
    }
    cfg.validate()?;
    let frame = make_frame(d, m, stream)?;
    let tau = tau_of(d, m, cfg)?;
    let signs = sign_encode_strict(&frame, x)?;
    let sel = select_subsets(&frame, x, tau, cfg, stream.derive(FIXED_TAG, 0))?;
    Ok(EncodedVector {
        frame_seed: stream,
        d,
        m,
        k: sel.s.len(),
        subset_rank: subset_rank(&sel.s, m)?,
        sign_bits: signs.restrict(&sel.s),
        tau,
    })
}

#[derive(Debug, Clone)]
pub struct Decoded {
    pub x_hat: UnitVector,
    /// Radius of the transmitted cell around `x_hat`; any vector with the
    /// transmitted signs is within `radius_upper` (or `radius` when no upper
    /// bound is available) of `x_hat`.
    pub certificate: CellCertificate,
}

/// Rebuilds the cell from the seed and signs and returns the normalized mean of
/// far points reached from an interior anchor in random directions.
pub fn decode(e: &EncodedVector, opts: &SolverOptions) -> Result<Decoded> {
    if e.sign_bits.len() != e.k {
        return Err(Error::CorruptInput("sign bit count differs from k".into()));
    }
    let indices = e.indices()?;
    let frame = make_frame(e.d, e.m, e.frame_seed)?;
    let cell = Cell::from_signs(&frame, &indices, &e.sign_bits)?;
    if cell.is_empty() {
        let x_hat = UnitVector::basis(e.d, 0)?;
        let certificate = certify_cell(&cell, &x_hat, opts, &[])?;
        return Ok(Decoded { x_hat, certificate });
    }
    let (anchor, _) = interior_point(&cell)?;
    let mut s = e.frame_seed.derive(DECODE_TAG, 0).sampler();
    let dirs: Vec<Vec<f64>> = (0..DECODER_WITNESSES).map(|_| s.unit_vector(e.d - 1)).collect();
    let witnesses = cell_witnesses(&cell, &anchor, &dirs, opts)?;
    let mut sum = vec![0.0; e.d];
    for w in &witnesses {
        sum.iter_mut().zip(w.coords()).for_each(|(a, b)| *a += b);
    }
    let x_hat = match UnitVector::new(sum) {
        Ok(v) if cell.contains(&v, 1e-9) => v,
        _ => anchor,
    };
    let certificate = certify_cell(&cell, &x_hat, opts, &witnesses)?;
    Ok(Decoded { x_hat, certificate })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CodecTrial {
    pub trial_id: u64,
    pub m: usize,
    pub k: usize,
    pub bits: u64,
    pub error: f64,
    pub cell_radius: f64,
}

/// One frame per `M`; per trial a random `x` is encoded and decoded.
pub fn codec_experiment(
    d: usize,
    m: usize,
    cfg: &ConstantsConfig,
    trials: usize,
    stream: RngStream,
    opts: &SolverOptions,
) -> Result<Vec<CodecTrial>> {
    if trials == 0 {
        return Err(invalid("trials must be >= 1"));
    }
    let frame_stream = stream.derive(tags::FRAME, m as u64);
    run_trials(trials, |t| {
        let x = UnitVector::random(d, &mut stream.derive(tags::X, t).sampler())?;
        let e = encode(&x, d, m, cfg, frame_stream)?;
        let dec = decode(&e, opts)?;
        Ok(CodecTrial {
            trial_id: t,
            m,
            k: e.k,
            bits: e.bit_cost(),
            error: x.distance(&dec.x_hat),
            cell_radius: dec.certificate.radius_upper.unwrap_or(dec.certificate.radius),
        })
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct RatePoint {
    pub m: usize,
    pub median_bits: f64,
    pub median_error: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct RateDistortion {
    pub points: Vec<RatePoint>,
    /// Fit of `ln(error)` against `√bits`.
    pub root_slope: f64,
    pub root_r2: f64,
    /// Fit of `ln(error)` against `ln M`.
    pub log_m_slope: f64,
    /// Fit of `ln(error)` against `ln(bits)`.
    pub log_bits_slope: f64,
}

impl RateDistortion {
    pub fn errors_decreasing(&self) -> bool {
        self.points.windows(2).all(|w| w[1].median_error < w[0].median_error)
    }

    pub fn bits_increasing(&self) -> bool {
        self.points.windows(2).all(|w| w[1].median_bits > w[0].median_bits)
    }

    pub fn assertions(&self) -> Vec<crate::lab::Assertion> {
        use crate::lab::Assertion;
        vec![
            Assertion::new(
                "median error decreasing in M",
                self.errors_decreasing(),
                format!("{:?}", self.medians()),
            ),
            Assertion::new("median bits increasing in M", self.bits_increasing(), String::new()),
            Assertion::new(
                "error slope in ln M",
                (self.log_m_slope + 1.0).abs() <= 0.2,
                format!("slope {:.4}", self.log_m_slope),
            ),
        ]
    }

    fn medians(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.median_error).collect()
    }
}

/// Median error and bit cost per `M`, with log-scale fits across `M`.
pub fn rate_distortion_experiment(
    d: usize,
    m_list: &[usize],
    cfg: &ConstantsConfig,
    trials: usize,
    stream: RngStream,
    opts: &SolverOptions,
) -> Result<(RateDistortion, Vec<CodecTrial>)> {
    if m_list.len() < 2 || m_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(invalid("M list must hold at least two increasing values"));
    }
    let mut rows = Vec::new();
    let mut points = Vec::new();
    for &m in m_list {
        let trials_m = codec_experiment(d, m, cfg, trials, stream, opts)?;
        let bits: Vec<f64> = trials_m.iter().map(|t| t.bits as f64).collect();
        let errs: Vec<f64> = trials_m.iter().map(|t| t.error).collect();
        points.push(RatePoint {
            m,
            median_bits: median(&bits),
            median_error: median(&errs),
        });
        rows.extend(trials_m);
    }
    let le: Vec<f64> = points.iter().map(|p| p.median_error.ln()).collect();
    let root: Vec<f64> = points.iter().map(|p| p.median_bits.sqrt()).collect();
    let lm: Vec<f64> = points.iter().map(|p| (p.m as f64).ln()).collect();
    let lb: Vec<f64> = points.iter().map(|p| p.median_bits.ln()).collect();
    let root_fit = least_squares(&root, &le)?;
    Ok((
        RateDistortion {
            root_slope: root_fit.slope,
            root_r2: root_fit.r2,
            log_m_slope: least_squares(&lm, &le)?.slope,
            log_bits_slope: least_squares(&lb, &le)?.slope,
            points,
        },
        rows,
    ))
}

#[cfg(test)]
mod tests;
