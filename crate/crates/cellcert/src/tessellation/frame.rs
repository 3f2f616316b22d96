use rand::seq::index;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::numeric::linalg::dot;
use crate::numeric::{gaussian, RngStream, UnitVector};

/// The absolute constants left unnamed in the selection scheme, plus the
/// Chernoff band widths used when checking subset sizes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ConstantsConfig {
    #[serde(rename = "C1")]
    pub c1: f64,
    #[serde(rename = "C2")]
    pub c2: f64,
    #[serde(rename = "C3")]
    pub c3: f64,
    #[serde(rename = "C4")]
    pub c4: f64,
    #[serde(rename = "C5")]
    pub c5: f64,
    pub chernoff_bands: Vec<f64>,
}

impl Default for ConstantsConfig {
    fn default() -> Self {
        Self {
            c1: 1.0,
            c2: 1.0,
            c3: 1.0,
            c4: 1.0,
            c5: 1.0,
            chernoff_bands: vec![0.25, 0.5],
        }
    }
}

impl ConstantsConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("C1", self.c1),
            ("C2", self.c2),
            ("C3", self.c3),
            ("C4", self.c4),
            ("C5", self.c5),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(invalid(format!("{name} must be finite and > 0, got {v}")));
            }
        }
        if self.chernoff_bands.iter().any(|s| !(*s > 0.0 && *s <= 1.0)) {
            return Err(invalid("chernoff bands must lie in (0, 1]"));
        }
        Ok(())
    }

    /// `round(C1·d·ln d)`, halves rounded up.
    pub fn v_size(&self, d: usize) -> usize {
        let df = d as f64;
        (self.c1 * df * df.ln()).round() as usize
    }
}

/// `M × d` matrix of measurement vectors plus the stream that generated it.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianFrame {
    d: usize,
    m: usize,
    rows: Vec<f64>,
    seed: RngStream,
}

impl GaussianFrame {
    /// Frame from explicit rows; no distributional or size preconditions.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let d = rows.first().map_or(0, Vec::len);
        if d == 0 || rows.iter().any(|r| r.len() != d) {
            return Err(invalid("frame rows must be non-empty and equally long"));
        }
        let flat = rows.concat();
        if flat.iter().any(|v| !v.is_finite()) {
            return Err(invalid("frame entries must be finite"));
        }
        Ok(Self {
            d,
            m: rows.len(),
            rows: flat,
            seed: RngStream::new(0, 0),
        })
    }

    pub(crate) fn from_flat(d: usize, m: usize, rows: Vec<f64>, seed: RngStream) -> Result<Self> {
        if d == 0 || rows.len() != d * m {
            return Err(invalid("frame data length does not match d·M"));
        }
        if rows.iter().any(|v| !v.is_finite()) {
            return Err(invalid("frame entries must be finite"));
        }
        Ok(Self { d, m, rows, seed })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn seed(&self) -> RngStream {
        self.seed
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.rows[i * self.d..(i + 1) * self.d]
    }

    pub fn data(&self) -> &[f64] {
        &self.rows
    }

    pub fn inner_products(&self, x: &UnitVector) -> Result<Vec<f64>> {
        self.check_dim(x)?;
        Ok((0..self.m).map(|i| x.dot(self.row(i))).collect())
    }

    pub(crate) fn check_dim(&self, x: &UnitVector) -> Result<()> {
        if x.dim() != self.d {
            return Err(invalid(format!(
                "vector has dimension {}, frame has {}",
                x.dim(),
                self.d
            )));
        }
        Ok(())
    }
}

/// Draws an `M × d` frame with i.i.d. N(0, 1/d) entries.
pub fn make_frame(d: usize, m: usize, stream: RngStream) -> Result<GaussianFrame> {
    if d < 3 {
        return Err(invalid(format!("frame dimension must be >= 3, got {d}")));
    }
    if m <= 2 * d {
        return Err(invalid(format!("need M > 2d, got M={m}, d={d}")));
    }
    let rows = gaussian(&stream, m * d, 1.0 / d as f64)?;
    GaussianFrame::from_flat(d, m, rows, stream)
}

/// One-bit measurements `sign(⟨g⁽ⁱ⁾, x⟩)`; `true` encodes +1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignPattern {
    pub bits: Vec<bool>,
    /// Indices whose inner product was exactly zero (mapped to +1).
    pub zeros: Vec<usize>,
}

impl SignPattern {
    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn sign(&self, i: usize) -> f64 {
        if self.bits[i] {
            1.0
        } else {
            -1.0
        }
    }

    pub fn restrict(&self, indices: &[usize]) -> Vec<bool> {
        indices.iter().map(|&i| self.bits[i]).collect()
    }
}

pub fn sign_encode(frame: &GaussianFrame, x: &UnitVector) -> Result<SignPattern> {
    let ips = frame.inner_products(x)?;
    let zeros = ips
        .iter()
        .enumerate()
        .filter(|(_, v)| **v == 0.0)
        .map(|(i, _)| i)
        .collect();
    Ok(SignPattern {
        bits: ips.iter().map(|v| *v >= 0.0).collect(),
        zeros,
    })
}

/// Like [`sign_encode`] but refuses exact-zero inner products.
pub fn sign_encode_strict(frame: &GaussianFrame, x: &UnitVector) -> Result<SignPattern> {
    let p = sign_encode(frame, x)?;
    if let Some(i) = p.zeros.first() {
        return Err(Error::DegenerateInput(format!("x lies on hyperplane {i}")));
    }
    Ok(p)
}

/// `τ = C2·√d·ln d·ln M / M`.
pub fn tau_of(d: usize, m: usize, cfg: &ConstantsConfig) -> Result<f64> {
    if d < 3 || m < 8 {
        return Err(invalid(format!("tau needs d >= 3 and M >= 8, got d={d}, M={m}")));
    }
    if !(cfg.c2 > 0.0 && cfg.c2.is_finite()) {
        return Err(invalid("C2 must be > 0"));
    }
    let (df, mf) = (d as f64, m as f64);
    Ok(cfg.c2 * df.sqrt() * df.ln() * mf.ln() / mf)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SubsetVariant {
    /// `|⟨g, x⟩| < τ`
    FullBand,
    /// `−τ < ⟨g, x⟩ < 0`, united with the fixed index set `V`
    NegativeBand,
    /// `−τ < ⟨g, x⟩ < −τ/2`
    HalfBand,
    /// negative band with tangential margin `> η` along `y`
    MarginBand,
    /// negative band with positive tangential component along `y`
    Oriented,
}

/// Index sets produced by one selection rule. All indices are 0-based and sorted.
#[derive(Debug, Clone, PartialEq)]
pub struct SubsetSelection {
    pub tau: f64,
    pub eta: f64,
    pub v: Vec<usize>,
    pub w: Vec<usize>,
    pub s: Vec<usize>,
    pub variant: SubsetVariant,
}

impl SubsetSelection {
    /// `|V ∩ W|`.
    pub fn overlap(&self) -> usize {
        sorted_intersection_len(&self.v, &self.w)
    }

    fn banded(tau: f64, eta: f64, band: Vec<usize>, variant: SubsetVariant) -> Self {
        Self {
            tau,
            eta,
            v: Vec::new(),
            s: band.clone(),
            w: band,
            variant,
        }
    }
}

fn sorted_intersection_len(a: &[usize], b: &[usize]) -> usize {
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}

pub(crate) fn sorted_union(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out: Vec<usize> = a.iter().chain(b).copied().collect();
    out.sort_unstable();
    out.dedup();
    out
}

fn check_tau(tau: f64) -> Result<()> {
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(invalid(format!("tau must be finite and > 0, got {tau}")));
    }
    Ok(())
}

/// Draws `size` distinct indices from `[0, m)` using only `stream`.
pub fn draw_fixed_indices(m: usize, size: usize, stream: RngStream) -> Result<Vec<usize>> {
    if size > m {
        return Err(invalid(format!("cannot draw {size} indices from {m}")));
    }
    let mut rng = stream.rng();
    let mut v = index::sample(&mut rng, m, size).into_vec();
    v.sort_unstable();
    Ok(v)
}

/// Default selection `S = V ∪ W` with `|V| = round(C1·d·ln d)`.
pub fn select_subsets(
    frame: &GaussianFrame,
    x: &UnitVector,
    tau: f64,
    cfg: &ConstantsConfig,
    stream: RngStream,
) -> Result<SubsetSelection> {
    select_subsets_sized(frame, x, tau, cfg.v_size(frame.d()), stream)
}

/// [`select_subsets`] with an explicit `|V|`.
pub fn select_subsets_sized(
    frame: &GaussianFrame,
    x: &UnitVector,
    tau: f64,
    v_size: usize,
    stream: RngStream,
) -> Result<SubsetSelection> {
    check_tau(tau)?;
    let ips = frame.inner_products(x)?;
    let v = draw_fixed_indices(frame.m(), v_size, stream)?;
    let w = band(&ips, |p| -tau < p && p < 0.0);
    let s = sorted_union(&v, &w);
    Ok(SubsetSelection {
        tau,
        eta: 0.0,
        v,
        w,
        s,
        variant: SubsetVariant::NegativeBand,
    })
}

fn band(ips: &[f64], keep: impl Fn(f64) -> bool) -> Vec<usize> {
    ips.iter()
        .enumerate()
        .filter(|(_, p)| keep(**p))
        .map(|(i, _)| i)
        .collect()
}

/// `T_{τ,x} = {i : |⟨g⁽ⁱ⁾, x⟩| < τ}`.
pub fn select_full_band(frame: &GaussianFrame, x: &UnitVector, tau: f64) -> Result<SubsetSelection> {
    check_tau(tau)?;
    let ips = frame.inner_products(x)?;
    Ok(SubsetSelection::banded(
        tau,
        0.0,
        band(&ips, |p| p.abs() < tau),
        SubsetVariant::FullBand,
    ))
}

/// `Ŝ_{τ,x} = {i : −τ < ⟨g⁽ⁱ⁾, x⟩ < −τ/2}`.
pub fn select_half_band(frame: &GaussianFrame, x: &UnitVector, tau: f64) -> Result<SubsetSelection> {
    check_tau(tau)?;
    let ips = frame.inner_products(x)?;
    let half = 0.5 * tau;
    Ok(SubsetSelection::banded(
        tau,
        0.0,
        band(&ips, |p| -tau < p && p < -half),
        SubsetVariant::HalfBand,
    ))
}

/// Tangential inner product `⟨P_{x⊥} g, P_{x⊥} y⟩`; for `x = e₁` this is `⟨g_{[−1]}, y_{[−1]}⟩`.
pub fn tangential_inner(g: &[f64], x: &UnitVector, y: &[f64]) -> f64 {
    dot(g, y) - x.dot(g) * x.dot(y)
}

/// `S̃ = {i ∈ 𝒲 : ⟨g⁽ⁱ⁾_{[−1]}, y_{[−1]}⟩ > η}` where `𝒲` is the negative band of `x`.
pub fn select_margin_band(
    frame: &GaussianFrame,
    x: &UnitVector,
    tau: f64,
    y: &UnitVector,
    eta: f64,
) -> Result<SubsetSelection> {
    check_tau(tau)?;
    if !(eta >= 0.0) {
        return Err(invalid("eta must be >= 0"));
    }
    frame.check_dim(y)?;
    let ips = frame.inner_products(x)?;
    let w = band(&ips, |p| -tau < p && p < 0.0);
    let s: Vec<usize> = w
        .iter()
        .copied()
        .filter(|&i| tangential_inner(frame.row(i), x, y.coords()) > eta)
        .collect();
    let variant = if eta == 0.0 {
        SubsetVariant::Oriented
    } else {
        SubsetVariant::MarginBand
    };
    Ok(SubsetSelection {
        tau,
        eta,
        v: Vec::new(),
        w,
        s,
        variant,
    })
}

/// `Sʸ = {i ∈ 𝒲 : ⟨g⁽ⁱ⁾_{[−1]}, y_{[−1]}⟩ > 0}`.
pub fn select_oriented(frame: &GaussianFrame, x: &UnitVector, tau: f64, y: &UnitVector) -> Result<SubsetSelection> {
    select_margin_band(frame, x, tau, y, 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn four_rows() -> GaussianFrame {
        GaussianFrame::from_rows(&[vec![-0.1, 0.9], vec![0.5, -0.2], vec![-0.05, 0.3], vec![0.7, 0.1]]).unwrap()
    }

    fn e1() -> UnitVector {
        UnitVector::new(vec![1.0, 0.0]).unwrap()
    }

    #[test]
    fn make_frame_gates_sizes() {
        assert!(make_frame(3, 5, RngStream::root(1)).is_err());
        assert!(make_frame(3, 6, RngStream::root(1)).is_err());
        assert!(make_frame(2, 100, RngStream::root(1)).is_err());
        assert!(make_frame(3, 7, RngStream::root(1)).is_ok());
    }

    #[test]
    fn make_frame_row_norms_and_determinism() {
        let f = make_frame(4, 1024, RngStream::root(1)).unwrap();
        let mean: f64 = (0..f.m()).map(|i| dot(f.row(i), f.row(i)).sqrt()).sum::<f64>() / f.m() as f64;
        assert!((0.9..=1.1).contains(&mean), "{mean}");
        assert_eq!(f, make_frame(4, 1024, RngStream::root(1)).unwrap());
    }

    #[test]
    fn sign_encode_examples() {
        let f = four_rows();
        let p = sign_encode(&f, &e1()).unwrap();
        assert_eq!(p.bits, vec![false, true, false, true]);
        let neg = sign_encode(&f, &e1().negated()).unwrap();
        assert!(p.bits.iter().zip(&neg.bits).all(|(a, b)| a != b));
        let single = GaussianFrame::from_rows(&[vec![0.6, 0.8]]).unwrap();
        let x = UnitVector::new(vec![0.6, 0.8]).unwrap();
        assert_eq!(sign_encode(&single, &x).unwrap().bits, vec![true]);
        let bad = UnitVector::new(vec![1.0, 0.0, 0.0]).unwrap();
        assert!(sign_encode(&f, &bad).is_err());
    }

    #[test]
    fn zero_inner_product_is_flagged() {
        let f = GaussianFrame::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let p = sign_encode(&f, &e1()).unwrap();
        assert_eq!(p.bits, vec![true, true]);
        assert_eq!(p.zeros, vec![0]);
        assert!(matches!(sign_encode_strict(&f, &e1()), Err(Error::DegenerateInput(_))));
    }

    #[test]
    fn tau_examples() {
        let cfg = ConstantsConfig::default();
        let t = tau_of(4, 1024, &cfg).unwrap();
        assert!((t - 2.0 * 4f64.ln() * 1024f64.ln() / 1024.0).abs() < 1e-15);
        assert!((t - 0.0187676).abs() < 1e-6);
        let zero = ConstantsConfig { c2: 0.0, ..cfg.clone() };
        assert!(tau_of(4, 1024, &zero).is_err());
        assert!(zero.validate().is_err());
        for m in [8usize, 16, 100, 1000, 4096] {
            assert!(tau_of(5, 2 * m, &cfg).unwrap() < tau_of(5, m, &cfg).unwrap());
        }
    }

    #[test]
    fn negative_band_example() {
        let f = four_rows();
        let sel = select_subsets_sized(&f, &e1(), 0.2, 0, RngStream::root(3)).unwrap();
        assert_eq!(sel.w, vec![0, 2]);
        assert_eq!(sel.s, vec![0, 2]);
        let tiny = select_subsets_sized(&f, &e1(), 1e-300, 0, RngStream::root(3)).unwrap();
        assert!(tiny.w.is_empty());
    }

    #[test]
    fn v_is_deterministic_and_independent_of_x() {
        let f = make_frame(8, 512, RngStream::root(5)).unwrap();
        let cfg = ConstantsConfig::default();
        let x = UnitVector::basis(8, 0).unwrap();
        let y = UnitVector::basis(8, 3).unwrap();
        let a = select_subsets(&f, &x, 0.05, &cfg, RngStream::new(5, 9)).unwrap();
        let b = select_subsets(&f, &y, 0.05, &cfg, RngStream::new(5, 9)).unwrap();
        assert_eq!(a.v, b.v);
        assert_eq!(a.v.len(), cfg.v_size(8));
        assert_eq!(a, select_subsets(&f, &x, 0.05, &cfg, RngStream::new(5, 9)).unwrap());
        assert_eq!(a.s, sorted_union(&a.v, &a.w));
    }

    #[test]
    fn oversized_v_is_rejected() {
        let f = make_frame(3, 7, RngStream::root(1)).unwrap();
        let cfg = ConstantsConfig {
            c1: 10.0,
            ..Default::default()
        };
        let x = UnitVector::basis(3, 0).unwrap();
        assert!(select_subsets(&f, &x, 0.1, &cfg, RngStream::root(2)).is_err());
    }

    #[test]
    fn half_band_examples() {
        let f = four_rows();
        assert_eq!(select_half_band(&f, &e1(), 0.12).unwrap().s, vec![0]);
        assert!(select_half_band(&f, &e1(), 0.2).unwrap().s.is_empty());
    }

    #[test]
    fn v_size_rounds_half_up() {
        let cfg = ConstantsConfig::default();
        assert_eq!(cfg.v_size(4), (4.0 * 4f64.ln()).round() as usize);
        assert_eq!(cfg.v_size(8), 17);
    }
}
