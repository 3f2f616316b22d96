use std::f64::consts::SQRT_2;

use serde::Serialize;

use super::stats::{least_squares, median};
use super::truncated::{truncated_covariance_alpha, TruncatedGaussianSpec, TruncatedSampler};
use super::{run_trials, tags, Assertion, TrialStatistics};
use crate::certifier::{cell_radius, cell_witnesses, certify_cell, theorem_radius_bound, Cell, Regime, SolverOptions};
use crate::error::{invalid, Result};
use crate::numeric::linalg::{dot, norm};
use crate::numeric::special::{erf, gauss_tail};
use crate::numeric::{gaussian, min_singular_value, operator_norm, Matrix, RngStream, UnitVector};
use crate::tessellation::{
    draw_fixed_indices, make_frame, select_half_band, select_margin_band, select_subsets, sorted_union, tau_of,
    ConstantsConfig,
};

/// `E|𝒲| = (M/2)·erf(τ·√d/√2)`.
pub fn expected_band_size(d: usize, m: usize, tau: f64) -> Result<f64> {
    if !(tau > 0.0) {
        return Err(invalid("tau must be > 0"));
    }
    Ok(0.5 * m as f64 * erf(tau * (d as f64).sqrt() / SQRT_2))
}

/// `η = C5·ln M / M²`.
pub fn margin_eta(m: usize, cfg: &ConstantsConfig) -> f64 {
    let mf = m as f64;
    cfg.c5 * mf.ln() / (mf * mf)
}

/// Uniform `y` on the sphere, redrawn until `‖y_{[−1]}‖₂² ≥ 1/M²`.
pub fn sample_direction(d: usize, m: usize, stream: RngStream) -> Result<UnitVector> {
    let mut s = stream.sampler();
    let floor = 1.0 / (m as f64 * m as f64);
    loop {
        let y = UnitVector::random(d, &mut s)?;
        if y.coords()[1..].iter().map(|v| v * v).sum::<f64>() >= floor {
            return Ok(y);
        }
    }
}

fn check_grid(d: usize, m: usize, trials: usize) -> Result<()> {
    if trials == 0 {
        return Err(invalid("trials must be >= 1"));
    }
    if d < 3 || m <= 2 * d {
        return Err(invalid(format!("need d >= 3 and M > 2d, got d={d}, M={m}")));
    }
    Ok(())
}

fn base_stats(trial_id: u64, d: usize, m: usize, tau: f64) -> TrialStatistics {
    TrialStatistics {
        trial_id,
        d,
        m,
        tau,
        ..Default::default()
    }
}

// ---------------------------------------------------------------- band sizes

/// Fresh frame per trial, `x = e₁`; records `|V|`, `|𝒲|`, `|S|`.
pub fn subset_size_experiment(
    d: usize,
    m: usize,
    cfg: &ConstantsConfig,
    trials: usize,
    stream: RngStream,
) -> Result<Vec<TrialStatistics>> {
    check_grid(d, m, trials)?;
    cfg.validate()?;
    let tau = tau_of(d, m, cfg)?;
    let x = UnitVector::basis(d, 0)?;
    run_trials(trials, |t| {
        let frame = make_frame(d, m, stream.derive(tags::FRAME, t))?;
        let sel = select_subsets(&frame, &x, tau, cfg, stream.derive(tags::FIXED, t))?;
        Ok(TrialStatistics {
            size_v: Some(sel.v.len()),
            size_w: Some(sel.w.len()),
            size_s: Some(sel.s.len()),
            ..base_stats(t, d, m, tau)
        })
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct BandOutcome {
    pub s: f64,
    pub out_of_band: f64,
    pub chernoff_bound: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SubsetSizeSummary {
    pub expected_w: f64,
    pub mean_w: f64,
    pub standard_error: f64,
    pub mean_s: f64,
    pub size_v: usize,
    pub bands: Vec<BandOutcome>,
}

impl SubsetSizeSummary {
    pub fn new(rows: &[TrialStatistics], cfg: &ConstantsConfig) -> Result<Self> {
        let first = rows.first().ok_or_else(|| invalid("no trials"))?;
        let (d, m, tau) = (first.d, first.m, first.tau);
        let expected = expected_band_size(d, m, tau)?;
        let n = rows.len() as f64;
        let w: Vec<f64> = rows.iter().map(|r| r.size_w.unwrap_or(0) as f64).collect();
        let mean_w = w.iter().sum::<f64>() / n;
        let p = expected / m as f64;
        let standard_error = (m as f64 * p * (1.0 - p) / n).sqrt();
        let bands = cfg
            .chernoff_bands
            .iter()
            .map(|&s| BandOutcome {
                s,
                out_of_band: w
                    .iter()
                    .filter(|&&v| v < (1.0 - s) * expected || v > (1.0 + s) * expected)
                    .count() as f64
                    / n,
                chernoff_bound: (2.0 * (-s * s * expected / 3.0).exp()).min(1.0),
            })
            .collect();
        Ok(Self {
            expected_w: expected,
            mean_w,
            standard_error,
            mean_s: rows.iter().map(|r| r.size_s.unwrap_or(0) as f64).sum::<f64>() / n,
            size_v: first.size_v.unwrap_or(0),
            bands,
        })
    }

    pub fn assertions(&self, trials: usize) -> Vec<Assertion> {
        let mut out = vec![
            Assertion::new(
                "band mean within 3 standard errors",
                (self.mean_w - self.expected_w).abs() <= 3.0 * self.standard_error,
                format!(
                    "mean {:.4}, expected {:.4}, se {:.4}",
                    self.mean_w, self.expected_w, self.standard_error
                ),
            ),
            Assertion::new(
                "union at least as large as fixed set",
                self.mean_s >= self.size_v as f64,
                format!("mean |S| {:.2}, |V| {}", self.mean_s, self.size_v),
            ),
        ];
        for b in &self.bands {
            let slack = 3.0 * (b.chernoff_bound * (1.0 - b.chernoff_bound) / trials as f64).sqrt();
            out.push(Assertion::new(
                format!("out-of-band fraction at s={}", b.s),
                b.out_of_band <= b.chernoff_bound + slack,
                format!("fraction {:.4}, chernoff {:.3e}", b.out_of_band, b.chernoff_bound),
            ));
        }
        out
    }
}

// ------------------------------------------------------------- margin counts

/// Fresh frame, `x = e₁`, random `y`; records `|𝒲|` and `|S̃|` with `η = C5·ln M/M²`.
pub fn margin_count_experiment(
    d: usize,
    m: usize,
    cfg: &ConstantsConfig,
    trials: usize,
    stream: RngStream,
) -> Result<Vec<TrialStatistics>> {
    check_grid(d, m, trials)?;
    cfg.validate()?;
    let tau = tau_of(d, m, cfg)?;
    let eta = margin_eta(m, cfg);
    let x = UnitVector::basis(d, 0)?;
    run_trials(trials, |t| {
        let frame = make_frame(d, m, stream.derive(tags::FRAME, t))?;
        let y = sample_direction(d, m, stream.derive(tags::Y, t))?;
        let sel = select_margin_band(&frame, &x, tau, &y, eta)?;
        Ok(TrialStatistics {
            eta,
            size_w: Some(sel.w.len()),
            size_stilde: Some(sel.s.len()),
            ..base_stats(t, d, m, tau)
        })
    })
}

/// Probability that one band row clears the margin: `Q(η·√d/‖y_{[−1]}‖)`.
pub fn margin_pass_probability(d: usize, eta: f64, y: &UnitVector) -> f64 {
    let tail = norm(&y.coords()[1..]);
    gauss_tail(eta * (d as f64).sqrt() / tail)
}

#[derive(Debug, Clone, Serialize)]
pub struct MarginSummary {
    pub mean_ratio: f64,
    pub pooled_ratio: f64,
    pub expected_ratio: f64,
    pub pooled_se: f64,
}

impl MarginSummary {
    /// `expected_ratio` is the mean analytic pass probability of the trials' directions.
    pub fn new(rows: &[TrialStatistics], stream: RngStream) -> Result<Self> {
        let first = rows.first().ok_or_else(|| invalid("no trials"))?;
        let mut ratios = Vec::new();
        let (mut sw, mut st, mut expected) = (0.0, 0.0, 0.0);
        for r in rows {
            let w = r.size_w.unwrap_or(0) as f64;
            let s = r.size_stilde.unwrap_or(0) as f64;
            if w > 0.0 {
                ratios.push(s / w);
            }
            sw += w;
            st += s;
            let y = sample_direction(r.d, r.m, stream.derive(tags::Y, r.trial_id))?;
            expected += w * margin_pass_probability(r.d, first.eta, &y);
        }
        let pooled = if sw > 0.0 { st / sw } else { f64::NAN };
        Ok(Self {
            mean_ratio: ratios.iter().sum::<f64>() / ratios.len().max(1) as f64,
            pooled_ratio: pooled,
            expected_ratio: expected / sw.max(1.0),
            pooled_se: (0.25 / sw.max(1.0)).sqrt(),
        })
    }

    pub fn assertions(&self) -> Vec<Assertion> {
        vec![
            Assertion::new(
                "mean margin ratio in [0.45, 0.55]",
                (0.45..=0.55).contains(&self.mean_ratio),
                format!("mean ratio {:.4}", self.mean_ratio),
            ),
            Assertion::new(
                "pooled margin ratio matches Gaussian tail",
                (self.pooled_ratio - self.expected_ratio).abs() <= 4.0 * self.pooled_se,
                format!(
                    "pooled {:.4}, analytic {:.4}, se {:.4}",
                    self.pooled_ratio, self.expected_ratio, self.pooled_se
                ),
            ),
        ]
    }
}

// ------------------------------------------------------- smallest singular value

/// `σ_min(G)²` of the matrix with the given rows.
pub fn min_singular_sq(rows: &[Vec<f64>]) -> Result<f64> {
    let g = Matrix::from_rows(rows)?;
    Ok(min_singular_value(&g)?.powi(2))
}

/// Fresh frame, `x = e₁`, random `y`; `σ_min²` of the tangential rows `g_{[−1]}`
/// over `S̃`. Trials with `|S̃| < d` are degenerate and carry no `sigma_min_sq`.
pub fn gram_min_singular_experiment(
    d: usize,
    m: usize,
    cfg: &ConstantsConfig,
    trials: usize,
    stream: RngStream,
) -> Result<Vec<TrialStatistics>> {
    check_grid(d, m, trials)?;
    cfg.validate()?;
    let tau = tau_of(d, m, cfg)?;
    let eta = margin_eta(m, cfg);
    let x = UnitVector::basis(d, 0)?;
    run_trials(trials, |t| {
        let frame = make_frame(d, m, stream.derive(tags::FRAME, t))?;
        let y = sample_direction(d, m, stream.derive(tags::Y, t))?;
        let sel = select_margin_band(&frame, &x, tau, &y, eta)?;
        let sigma = if sel.s.len() < d {
            None
        } else {
            let rows: Vec<Vec<f64>> = sel.s.iter().map(|&i| frame.row(i)[1..].to_vec()).collect();
            Some(min_singular_sq(&rows)?)
        };
        Ok(TrialStatistics {
            eta,
            size_w: Some(sel.w.len()),
            size_stilde: Some(sel.s.len()),
            sigma_min_sq: sigma,
            ..base_stats(t, d, m, tau)
        })
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct GramSummary {
    /// `min σ_min²/(ln d·ln M)` over non-degenerate trials.
    pub c_hat: f64,
    pub median_ratio: f64,
    pub degenerate_fraction: f64,
    pub all_positive: bool,
}

impl GramSummary {
    pub fn new(rows: &[TrialStatistics]) -> Result<Self> {
        let first = rows.first().ok_or_else(|| invalid("no trials"))?;
        let scale = (first.d as f64).ln() * (first.m as f64).ln();
        let ratios: Vec<f64> = rows.iter().filter_map(|r| r.sigma_min_sq).map(|s| s / scale).collect();
        Ok(Self {
            c_hat: ratios.iter().copied().fold(f64::INFINITY, f64::min),
            median_ratio: median(&ratios),
            degenerate_fraction: (rows.len() - ratios.len()) as f64 / rows.len() as f64,
            all_positive: ratios.iter().all(|r| *r > 0.0),
        })
    }

    pub fn assertions(&self) -> Vec<Assertion> {
        vec![
            Assertion::new(
                "smallest singular value positive",
                self.all_positive && self.c_hat > 0.0 && self.c_hat.is_finite(),
                format!("c_hat {:.4}", self.c_hat),
            ),
            Assertion::new(
                "degenerate trials below 1%",
                self.degenerate_fraction < 0.01,
                format!("fraction {:.4}", self.degenerate_fraction),
            ),
        ]
    }
}

// --------------------------------------------------------------- covariance

/// `n × (d−1)` rows: first coordinate from the truncated law, the rest N(0, 1/d).
pub fn sample_truncated_rows(n: usize, d: usize, spec: &TruncatedGaussianSpec, stream: RngStream) -> Result<Matrix> {
    if d < 2 {
        return Err(invalid("need d >= 2"));
    }
    let k = d - 1;
    let rest = gaussian(&stream.derive(tags::ROWS, 0), n * (k - 1), 1.0 / d as f64)?;
    let trunc = TruncatedSampler::new(spec);
    let mut g = stream.derive(tags::ROWS, 1).sampler();
    let mut data = Vec::with_capacity(n * k);
    for r in 0..n {
        data.push(trunc.sample(&mut g));
        data.extend_from_slice(&rest[r * (k - 1)..(r + 1) * (k - 1)]);
    }
    Matrix::new(n, k, data)
}

/// `diag(α, 1/d, …, 1/d)` of size `d−1`.
pub fn truncated_covariance(d: usize, spec: &TruncatedGaussianSpec) -> Result<Matrix> {
    let mut diag = vec![1.0 / d as f64; d - 1];
    diag[0] = truncated_covariance_alpha(spec)?;
    Ok(Matrix::diag(&diag))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CovarianceTrial {
    pub deviation: f64,
    pub bound: f64,
    pub delta: f64,
}

/// Constant in `δ = C(√((d−1)/n) + t/√n)`.
pub const COVARIANCE_C: f64 = 4.0;

/// `K² = 4/d`, the sub-gaussian scale of a truncated coordinate.
pub fn covariance_k_sq(d: usize) -> f64 {
    4.0 / d as f64
}

pub fn covariance_delta(n: usize, d: usize, t: f64, c: f64) -> f64 {
    c * (((d - 1) as f64 / n as f64).sqrt() + t / (n as f64).sqrt())
}

/// Per trial, `‖n⁻¹GᵀG − Σ‖_op` against `K²·max(δ, δ²)`.
pub fn covariance_concentration_experiment(
    n: usize,
    d: usize,
    spec: &TruncatedGaussianSpec,
    t: f64,
    trials: usize,
    stream: RngStream,
) -> Result<Vec<CovarianceTrial>> {
    if d < 2 || n < d || trials == 0 || !(t > 0.0) {
        return Err(invalid(format!(
            "need d >= 2, n >= d, t > 0, trials >= 1 (n={n}, d={d})"
        )));
    }
    let sigma = truncated_covariance(d, spec)?;
    let delta = covariance_delta(n, d, t, COVARIANCE_C);
    let bound = covariance_k_sq(d) * delta.max(delta * delta);
    run_trials(trials, |i| {
        let g = sample_truncated_rows(n, d, spec, stream.derive(tags::FRAME, i))?;
        let emp = g.gram().scaled(1.0 / n as f64);
        let deviation = operator_norm(&emp.sub(&sigma)?)?;
        Ok(CovarianceTrial {
            deviation,
            bound,
            delta,
        })
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct CovarianceSummary {
    pub violations: usize,
    pub violation_fraction: f64,
    pub allowed_fraction: f64,
    /// Smallest `C` for which every trial would satisfy the bound.
    pub smallest_c: f64,
}

impl CovarianceSummary {
    pub fn new(rows: &[CovarianceTrial], n: usize, d: usize, t: f64) -> Self {
        let k = rows.len().max(1) as f64;
        let violations = rows.iter().filter(|r| r.deviation > r.bound).count();
        let p = (2.0 * (-t * t).exp()).min(1.0);
        let base = covariance_delta(n, d, t, 1.0);
        let smallest_c = rows
            .iter()
            .map(|r| {
                let q = r.deviation / covariance_k_sq(d);
                (if q <= 1.0 { q } else { q.sqrt() }) / base
            })
            .fold(0.0, f64::max);
        Self {
            violations,
            violation_fraction: violations as f64 / k,
            allowed_fraction: p + 3.0 * (p * (1.0 - p) / k).sqrt(),
            smallest_c,
        }
    }

    pub fn assertions(&self) -> Vec<Assertion> {
        vec![Assertion::new(
            "covariance bound violations within tail allowance",
            self.violation_fraction <= self.allowed_fraction,
            format!(
                "violations {} ({:.4}), allowed {:.4}, smallest C {:.3}",
                self.violations, self.violation_fraction, self.allowed_fraction, self.smallest_c
            ),
        )]
    }
}

// ---------------------------------------------------------------- hemisphere

#[derive(Debug, Clone, Serialize)]
pub struct HalfspaceReport {
    pub trials: usize,
    pub v_size: usize,
    pub violations: usize,
    /// Smallest `⟨x, y⟩` seen over all trials and witnesses.
    pub min_inner: f64,
}

impl HalfspaceReport {
    /// A trial violates the hemisphere property when its farthest cell point is
    /// at chordal distance `≥ √2`, i.e. `⟨x, y⟩ ≤ 0`.
    pub fn new(rows: &[TrialStatistics]) -> Self {
        let inner: Vec<f64> = rows
            .iter()
            .filter_map(|r| r.certified_radius)
            .map(|r| 1.0 - 0.5 * r * r)
            .collect();
        Self {
            trials: rows.len(),
            v_size: rows.first().and_then(|r| r.size_v).unwrap_or(0),
            violations: inner.iter().filter(|v| **v <= 0.0).count(),
            min_inner: inner.iter().copied().fold(f64::INFINITY, f64::min),
        }
    }

    pub fn assertions(&self) -> Vec<Assertion> {
        vec![Assertion::new(
            "sign-consistent points stay in the open hemisphere",
            self.violations == 0,
            format!(
                "{} violations in {} trials, |V| = {}",
                self.violations, self.trials, self.v_size
            ),
        )]
    }
}

/// Probability that `n` i.i.d. symmetric points in general position in `ℝᵏ` lie
/// in a common half-space: `2^{−n+1}·Σ_{i<k} C(n−1, i)`.
pub fn wendel_probability(n: usize, k: usize) -> f64 {
    if n <= k {
        return 1.0;
    }
    let mut term = 1.0f64;
    let mut sum = 0.0;
    for i in 0..k {
        sum += term;
        term *= (n - 1 - i) as f64 / (i + 1) as f64;
    }
    sum * 0.5f64.powi(n as i32 - 1)
}

/// Per trial: `|V| = round(C1·d·ln d)` fresh Gaussian rows and a random `x`.
/// The certified radius of the sign-consistent cell is recorded; a cell that
/// reaches the great circle of `x` is detected exactly (radius `≥ √2`).
pub fn halfspace_consistency_experiment(
    d: usize,
    cfg: &ConstantsConfig,
    trials: usize,
    stream: RngStream,
    opts: &SolverOptions,
) -> Result<Vec<TrialStatistics>> {
    if d < 3 || trials == 0 {
        return Err(invalid("need d >= 3 and trials >= 1"));
    }
    cfg.validate()?;
    let k = cfg.v_size(d);
    run_trials(trials, |t| {
        let rows = gaussian(&stream.derive(tags::FRAME, t), k * d, 1.0 / d as f64)?;
        let mut s = stream.derive(tags::X, t).sampler();
        let x = UnitVector::random(d, &mut s)?;
        let normals: Vec<Vec<f64>> = rows
            .chunks(d)
            .map(|g| {
                let sign = if dot(g, x.coords()) >= 0.0 { 1.0 } else { -1.0 };
                g.iter().map(|v| sign * v).collect()
            })
            .collect();
        let cell = Cell::from_normals(d, normals)?;
        let cert = certify_cell(&cell, &x, opts, &[])?;
        let mut radius = cert.radius;
        if cert.regime == Regime::Hemisphere {
            let dirs: Vec<Vec<f64>> = (0..opts.restarts).map(|_| s.unit_vector(d - 1)).collect();
            for y in cell_witnesses(&cell, &x, &dirs, opts)? {
                radius = radius.max(x.distance(&y));
            }
        }
        Ok(TrialStatistics {
            size_v: Some(k),
            certified_radius: Some(radius),
            ..base_stats(t, d, k, 0.0)
        })
    })
}

// ------------------------------------------------------------------ radii

/// One frame and fixed set `V`; for each random `x` the cell of `Ŝ ∪ V` is certified.
pub fn uniform_radius_experiment(
    d: usize,
    m: usize,
    cfg: &ConstantsConfig,
    x_count: usize,
    stream: RngStream,
    opts: &SolverOptions,
) -> Result<Vec<TrialStatistics>> {
    check_grid(d, m, x_count)?;
    cfg.validate()?;
    let tau = tau_of(d, m, cfg)?;
    let bound = theorem_radius_bound(d, m, cfg)?;
    let frame = make_frame(d, m, stream.derive(tags::FRAME, 0))?;
    let v = draw_fixed_indices(m, cfg.v_size(d), stream.derive(tags::FIXED, 0))?;
    run_trials(x_count, |t| {
        let x = UnitVector::random(d, &mut stream.derive(tags::X, t).sampler())?;
        let hat = select_half_band(&frame, &x, tau)?;
        let ips = frame.inner_products(&x)?;
        let w = ips.iter().filter(|p| -tau < **p && **p < 0.0).count();
        let full = ips
            .iter()
            .enumerate()
            .filter(|(i, p)| (-tau < **p && **p < 0.0) || v.binary_search(i).is_ok())
            .count();
        let subset = sorted_union(&hat.s, &v);
        let cert = cell_radius(&frame, &subset, &x, opts)?;
        Ok(TrialStatistics {
            size_v: Some(v.len()),
            size_w: Some(w),
            size_s: Some(full),
            size_shat: Some(hat.s.len()),
            theorem_bound: Some(bound),
            certified_radius: Some(cert.radius),
            ..base_stats(t, d, m, tau)
        })
    })
}

/// Largest `radius / bound` over the rows that carry both.
pub fn max_radius_ratio(rows: &[TrialStatistics]) -> f64 {
    rows.iter()
        .filter_map(|r| Some(r.certified_radius? / r.theorem_bound?))
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Fresh frame and `x` per trial on the `d × M` grid; certifies the cell of `S = V ∪ 𝒲`.
/// Trial ids run over the grid in row-major order.
pub fn radius_scaling_experiment(
    d_list: &[usize],
    m_list: &[usize],
    cfg: &ConstantsConfig,
    trials: usize,
    stream: RngStream,
    opts: &SolverOptions,
) -> Result<Vec<TrialStatistics>> {
    if d_list.is_empty() || m_list.is_empty() {
        return Err(invalid("grid lists must be non-empty"));
    }
    for &d in d_list {
        for &m in m_list {
            check_grid(d, m, trials)?;
        }
    }
    cfg.validate()?;
    let cells: Vec<(usize, usize)> = d_list
        .iter()
        .flat_map(|&d| m_list.iter().map(move |&m| (d, m)))
        .collect();
    run_trials(cells.len() * trials, |id| {
        let (d, m) = cells[id as usize / trials];
        theorem_trial(id, d, m, cfg, stream, opts)
    })
}

/// One fixed-`x` trial: frame, `S = V ∪ 𝒲`, certified radius, bound.
pub fn theorem_trial(
    id: u64,
    d: usize,
    m: usize,
    cfg: &ConstantsConfig,
    stream: RngStream,
    opts: &SolverOptions,
) -> Result<TrialStatistics> {
    let tau = tau_of(d, m, cfg)?;
    let frame = make_frame(d, m, stream.derive(tags::FRAME, id))?;
    let x = UnitVector::random(d, &mut stream.derive(tags::X, id).sampler())?;
    let sel = select_subsets(&frame, &x, tau, cfg, stream.derive(tags::FIXED, id))?;
    let cert = cell_radius(&frame, &sel.s, &x, opts)?;
    Ok(TrialStatistics {
        size_v: Some(sel.v.len()),
        size_w: Some(sel.w.len()),
        size_s: Some(sel.s.len()),
        theorem_bound: Some(theorem_radius_bound(d, m, cfg)?),
        certified_radius: Some(cert.radius),
        ..base_stats(id, d, m, tau)
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct SlopeFit {
    pub d: usize,
    pub slope: f64,
    pub r2: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScalingSummary {
    /// Smallest `C5` with every radius below its bound (bounds computed with `C5 = 1`).
    pub c5_hat: f64,
    /// Smallest / largest `|S|/(d·ln d·ln M)`.
    pub c3_hat: f64,
    pub c4_hat: f64,
    pub slopes: Vec<SlopeFit>,
}

impl ScalingSummary {
    pub fn new(rows: &[TrialStatistics]) -> Result<Self> {
        if rows.is_empty() {
            return Err(invalid("no trials"));
        }
        let mut c5: f64 = 0.0;
        let (mut c3, mut c4) = (f64::INFINITY, 0.0f64);
        for r in rows {
            let unit = unit_bound(r.d, r.m);
            if let Some(rad) = r.certified_radius {
                c5 = c5.max(rad / unit);
            }
            if let Some(s) = r.size_s {
                let q = s as f64 / log_scale(r.d, r.m);
                c3 = c3.min(q);
                c4 = c4.max(q);
            }
        }
        let mut ds: Vec<usize> = rows.iter().map(|r| r.d).collect();
        ds.sort_unstable();
        ds.dedup();
        let mut slopes = Vec::new();
        for d in ds {
            let mut ms: Vec<usize> = rows.iter().filter(|r| r.d == d).map(|r| r.m).collect();
            ms.sort_unstable();
            ms.dedup();
            if ms.len() < 2 {
                continue;
            }
            let (mut lx, mut ly) = (Vec::new(), Vec::new());
            for m in ms {
                let radii: Vec<f64> = rows
                    .iter()
                    .filter(|r| r.d == d && r.m == m)
                    .filter_map(|r| r.certified_radius)
                    .collect();
                lx.push((m as f64).ln());
                ly.push(median(&radii).ln());
            }
            let fit = least_squares(&lx, &ly)?;
            slopes.push(SlopeFit {
                d,
                slope: fit.slope,
                r2: fit.r2,
            });
        }
        Ok(Self {
            c5_hat: c5,
            c3_hat: c3,
            c4_hat: c4,
            slopes,
        })
    }

    /// Fraction of rows with radius ≤ bound at constant `c5`.
    pub fn coverage(rows: &[TrialStatistics], c5: f64) -> f64 {
        let hits = rows
            .iter()
            .filter(|r| r.certified_radius.is_some_and(|rad| rad <= c5 * unit_bound(r.d, r.m)))
            .count();
        hits as f64 / rows.len().max(1) as f64
    }

    pub fn assertions(&self) -> Vec<Assertion> {
        self.slopes
            .iter()
            .map(|s| {
                Assertion::new(
                    format!("radius slope in ln M at d={}", s.d),
                    (s.slope + 1.0).abs() <= 0.2,
                    format!("slope {:.4}, r2 {:.4}", s.slope, s.r2),
                )
            })
            .collect()
    }
}

/// `d·ln d·ln M`.
pub fn log_scale(d: usize, m: usize) -> f64 {
    let df = d as f64;
    df * df.ln() * (m as f64).ln()
}

fn unit_bound(d: usize, m: usize) -> f64 {
    let n = log_scale(d, m);
    let mf = m as f64;
    n / (mf * mf + n * n).sqrt()
}

/// Whether every value lies within `±tol` (relative) of the mean of all values.
pub fn within_band(values: &[f64], tol: f64) -> bool {
    let mean = values.iter().sum::<f64>() / values.len().max(1) as f64;
    mean > 0.0 && values.iter().all(|v| (v - mean).abs() <= tol * mean)
}
