//! Radius of the spherical cell cut out by a subset of hyperplanes.
//!
//! The cell of `x` under index set `S` is `{y ∈ S^{d−1} : σᵢ⟨g⁽ⁱ⁾, y⟩ ≥ 0, i ∈ S}` with
//! `σᵢ = sign⟨g⁽ⁱ⁾, x⟩`; its chordal radius is `max ‖x − y‖₂` over the cell. Two
//! regimes are handled:
//!
//! * the cell lies in the open hemisphere around `x`. Writing `y ∝ x + w` with
//!   `w ⊥ x` turns the cell into the polytope `{w : −σᵢ⟨g⁽ⁱ⁾_⊥, w⟩ ≤ |⟨g⁽ⁱ⁾, x⟩|}` and
//!   `⟨x, y⟩ = (1 + ‖w‖²)^{−1/2}`, so the radius comes from the largest `‖w‖`. That
//!   maximum is found by successive linear programs from many start directions;
//!   the coordinate-wise maxima of the first round give an upper bound.
//! * the cell reaches the great circle `⟨x, y⟩ = 0` (the polytope is unbounded).
//!   Then `min ⟨x, y⟩` over cone ∩ unit ball is attained on the sphere and equals
//!   `−‖P_K(−x)‖`; the projection is computed with Dykstra's method.
//!
//! Geodesic radius, if needed, is `2·arcsin(r/2)` for chordal radius `r`.

mod dykstra;
pub mod simplex;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::numeric::linalg::{dot, norm};
use crate::numeric::{RngStream, UnitVector};
use crate::tessellation::{ConstantsConfig, GaussianFrame};

pub use dykstra::{project as dykstra_project, DykstraResult};
use simplex::{maximize, LpOutcome};

/// Stream used for restart directions; fixed so certificates are reproducible.
const RESTART_SEED: u64 = 0xce11_ce27;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverOptions {
    /// Dykstra cycle budget.
    pub max_iterations: usize,
    /// Objective drift tolerance for Dykstra stopping.
    pub tolerance: f64,
    /// Random start directions on top of the `2(d−1)` coordinate directions.
    pub restarts: usize,
    /// Cap on successive-LP steps from one start.
    pub max_ascent_steps: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            max_iterations: 50_000,
            tolerance: 1e-10,
            restarts: 8,
            max_ascent_steps: 200,
        }
    }
}

impl SolverOptions {
    pub fn validate(&self) -> Result<()> {
        if !(self.tolerance > 0.0) || self.max_iterations == 0 || self.max_ascent_steps == 0 {
            return Err(invalid("solver needs tolerance > 0 and positive iteration budgets"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// No constraints: the whole sphere.
    Unconstrained,
    /// Cell inside the open hemisphere of the anchor.
    Hemisphere,
    /// Cell reaches the anchor's great circle or beyond.
    Beyond,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CellCertificate {
    /// A point of the (closed) cell at distance `radius` from the anchor.
    pub witness: UnitVector,
    /// `‖x − witness‖₂`, a certified lower bound on the cell radius.
    pub radius: f64,
    /// Upper bound on the cell radius when the cell is inside the hemisphere.
    pub radius_upper: Option<f64>,
    pub iterations: usize,
    /// Largest constraint violation of the witness before normalization.
    pub residual: f64,
    pub converged: bool,
    /// `min σᵢ⟨g⁽ⁱ⁾, witness⟩` over the constraints (`+∞` when unconstrained).
    pub worst_margin: f64,
    pub regime: Regime,
}

/// The cone `{y : nᵢ·y ≥ 0}` with `nᵢ = σᵢ g⁽ⁱ⁾`.
#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    d: usize,
    normals: Vec<Vec<f64>>,
}

impl Cell {
    pub fn from_normals(d: usize, normals: Vec<Vec<f64>>) -> Result<Self> {
        if d < 2 {
            return Err(invalid("cells need dimension >= 2"));
        }
        if normals.iter().any(|n| n.len() != d || n.iter().any(|v| !v.is_finite())) {
            return Err(invalid("cell normals must be finite and of length d"));
        }
        Ok(Self { d, normals })
    }

    /// Cell of `x` under the rows `indices`; signs are taken from `x` (zero maps to +1).
    pub fn from_subset(frame: &GaussianFrame, indices: &[usize], x: &UnitVector) -> Result<Self> {
        if x.dim() != frame.d() {
            return Err(invalid("x dimension does not match frame"));
        }
        let bits: Vec<bool> = indices
            .iter()
            .map(|&i| {
                if i >= frame.m() {
                    Err(invalid(format!("index {i} out of range for M={}", frame.m())))
                } else {
                    Ok(x.dot(frame.row(i)) >= 0.0)
                }
            })
            .collect::<Result<_>>()?;
        Self::from_signs(frame, indices, &bits)
    }

    /// Cell described by explicit sign bits (`true` = +1) on `indices`.
    pub fn from_signs(frame: &GaussianFrame, indices: &[usize], bits: &[bool]) -> Result<Self> {
        if indices.len() != bits.len() {
            return Err(invalid("one sign bit per index required"));
        }
        let normals = indices
            .iter()
            .zip(bits)
            .map(|(&i, &b)| {
                if i >= frame.m() {
                    return Err(invalid(format!("index {i} out of range for M={}", frame.m())));
                }
                let s = if b { 1.0 } else { -1.0 };
                Ok(frame.row(i).iter().map(|v| s * v).collect())
            })
            .collect::<Result<_>>()?;
        Self::from_normals(frame.d(), normals)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.normals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.normals.is_empty()
    }

    pub fn normals(&self) -> &[Vec<f64>] {
        &self.normals
    }

    /// `min nᵢ·y`, `+∞` for an empty cell.
    pub fn worst_margin(&self, y: &[f64]) -> f64 {
        self.normals.iter().map(|n| dot(n, y)).fold(f64::INFINITY, f64::min)
    }

    pub fn contains(&self, y: &UnitVector, tol: f64) -> bool {
        self.worst_margin(y.coords()) >= -tol
    }
}

/// Orthonormal basis of `x⊥` from the Householder reflector that maps `x` to `∓e₁`.
struct TangentBasis {
    v: Vec<f64>,
    vv: f64,
}

impl TangentBasis {
    fn new(x: &[f64]) -> Self {
        let mut v = x.to_vec();
        v[0] += if x[0] >= 0.0 { 1.0 } else { -1.0 };
        let vv = dot(&v, &v);
        Self { v, vv }
    }

    /// Coordinates of `u` along the basis vectors `q_1 … q_{d−1}`.
    fn coords(&self, u: &[f64]) -> Vec<f64> {
        let f = 2.0 * dot(u, &self.v) / self.vv;
        (1..u.len()).map(|j| u[j] - f * self.v[j]).collect()
    }

    /// `Σ_j w_j q_j` as an ambient vector.
    fn lift(&self, w: &[f64]) -> Vec<f64> {
        let d = w.len() + 1;
        let mut e = vec![0.0; d];
        e[1..].copy_from_slice(w);
        let f = 2.0 * dot(&e, &self.v) / self.vv;
        e.iter().zip(&self.v).map(|(a, b)| a - f * b).collect()
    }
}

/// Chordal distance between `x` and `(x + w)/‖x + w‖` given `s = ‖w‖`.
fn gnomonic_radius(s: f64) -> f64 {
    let h = (1.0 + s * s).sqrt();
    (2.0 * s * s / (h * (h + 1.0))).sqrt()
}

struct Ascent<'a> {
    a: &'a [Vec<f64>],
    b: &'a [f64],
    steps: usize,
    lp_pivots: usize,
    capped: bool,
}

enum AscentEnd {
    Point(Vec<f64>),
    Ray(Vec<f64>),
}

impl Ascent<'_> {
    fn lp(&mut self, dir: &[f64]) -> Result<LpOutcome> {
        let (out, pivots) = maximize(dir, self.a, self.b)?;
        self.lp_pivots += pivots;
        self.steps += 1;
        Ok(out)
    }

    /// Successive linearization of `max ‖w‖` from direction `dir`. Returns the
    /// first LP point too (for coordinate upper bounds).
    fn run(&mut self, dir: &[f64], max_steps: usize) -> Result<(AscentEnd, Option<Vec<f64>>)> {
        let mut u = dir.to_vec();
        let mut best: Option<Vec<f64>> = None;
        let mut first = None;
        for step in 0..max_steps {
            match self.lp(&u)? {
                LpOutcome::Unbounded { ray } => return Ok((AscentEnd::Ray(ray), first)),
                LpOutcome::Optimal { point, .. } => {
                    if step == 0 {
                        first = Some(point.clone());
                    }
                    let s = norm(&point);
                    let prev = best.as_ref().map_or(-1.0, |p| norm(p));
                    if s <= prev * (1.0 + 1e-12) || s == 0.0 {
                        return Ok((AscentEnd::Point(best.unwrap_or(point)), first));
                    }
                    u = point.iter().map(|v| v / s).collect();
                    best = Some(point);
                }
            }
        }
        self.capped = true;
        Ok((AscentEnd::Point(best.expect("at least one step")), first))
    }
}

/// Start directions in tangent coordinates: `±e_j`, then seeded random ones.
fn start_directions(n: usize, restarts: usize) -> Vec<Vec<f64>> {
    let mut dirs = Vec::with_capacity(2 * n + restarts);
    for j in 0..n {
        for s in [1.0, -1.0] {
            let mut e = vec![0.0; n];
            e[j] = s;
            dirs.push(e);
        }
    }
    let mut sampler = RngStream::new(RESTART_SEED, n as u64).sampler();
    for _ in 0..restarts {
        dirs.push(if n == 1 {
            vec![if sampler.uniform() < 0.5 { 1.0 } else { -1.0 }]
        } else {
            sampler.unit_vector(n)
        });
    }
    dirs
}

/// Certifies the radius of `cell` around `anchor`. `hints` are known cell points
/// used as extra starts; the result is never smaller than their distance.
pub fn certify_cell(
    cell: &Cell,
    anchor: &UnitVector,
    opts: &SolverOptions,
    hints: &[UnitVector],
) -> Result<CellCertificate> {
    opts.validate()?;
    let d = cell.d();
    if anchor.dim() != d {
        return Err(invalid("anchor dimension does not match cell"));
    }
    if cell.is_empty() {
        return Ok(CellCertificate {
            witness: anchor.negated(),
            radius: 2.0,
            radius_upper: Some(2.0),
            iterations: 0,
            residual: 0.0,
            converged: true,
            worst_margin: f64::INFINITY,
            regime: Regime::Unconstrained,
        });
    }
    let x = anchor.coords();
    let mut b = Vec::with_capacity(cell.len());
    for (i, n) in cell.normals().iter().enumerate() {
        let m = dot(n, x);
        if m < -1e-9 {
            return Err(Error::InconsistentInput(format!(
                "anchor violates constraint {i} by {:.3e}",
                -m
            )));
        }
        b.push(m.max(0.0));
    }
    let basis = TangentBasis::new(x);
    let a: Vec<Vec<f64>> = cell
        .normals()
        .iter()
        .map(|n| basis.coords(n).into_iter().map(|v| -v).collect())
        .collect();

    let mut dirs = start_directions(d - 1, opts.restarts);
    for h in hints {
        if h.dim() != d || !cell.contains(h, 1e-9) {
            continue;
        }
        let t = basis.coords(h.coords());
        let nt = norm(&t);
        if nt > 0.0 {
            dirs.push(t.iter().map(|v| v / nt).collect());
        }
    }

    let mut ascent = Ascent {
        a: &a,
        b: &b,
        steps: 0,
        lp_pivots: 0,
        capped: false,
    };
    let mut best: Vec<f64> = vec![0.0; d - 1];
    let mut coord_max = vec![0.0f64; d - 1];
    let mut ray = None;
    for (k, dir) in dirs.iter().enumerate() {
        let (end, first) = ascent.run(dir, opts.max_ascent_steps)?;
        if k < 2 * (d - 1) {
            if let Some(p) = first {
                let j = k / 2;
                coord_max[j] = coord_max[j].max(p[j].abs());
            }
        }
        match end {
            AscentEnd::Ray(r) => {
                ray = Some(r);
                break;
            }
            AscentEnd::Point(p) => {
                if norm(&p) > norm(&best) {
                    best = p;
                }
            }
        }
    }

    if let Some(r) = ray {
        return certify_beyond(cell, anchor, &basis, &r, opts, ascent.steps);
    }

    let lifted = basis.lift(&best);
    let raw: Vec<f64> = x.iter().zip(&lifted).map(|(a, b)| a + b).collect();
    let residual = cell
        .normals()
        .iter()
        .map(|n| (-dot(n, &raw)).max(0.0))
        .fold(0.0f64, f64::max);
    let witness = UnitVector::new(raw)?;
    let radius = anchor.distance(&witness);
    let upper = gnomonic_radius(coord_max.iter().map(|v| v * v).sum::<f64>().sqrt());
    Ok(CellCertificate {
        worst_margin: cell.worst_margin(witness.coords()),
        witness,
        radius,
        radius_upper: Some(upper.max(radius)),
        iterations: ascent.steps,
        residual,
        converged: !ascent.capped,
        regime: Regime::Hemisphere,
    })
}

fn certify_beyond(
    cell: &Cell,
    anchor: &UnitVector,
    basis: &TangentBasis,
    ray: &[f64],
    opts: &SolverOptions,
    lp_steps: usize,
) -> Result<CellCertificate> {
    // A recession direction of the tangent polytope is a cell point on the great circle.
    let equator = UnitVector::new(basis.lift(ray))?;
    let neg: Vec<f64> = anchor.coords().iter().map(|v| -v).collect();
    let proj = dykstra_project(cell.normals(), &neg, &neg, opts.tolerance, opts.max_iterations);
    let mut witness = equator;
    let mut residual = 0.0;
    if norm(&proj.point) > 1e-12 {
        let mut p = proj.point.clone();
        // one clean-up sweep of plain projections before normalizing
        for _ in 0..10 {
            for n in cell.normals() {
                let s = dot(n, &p);
                if s < 0.0 {
                    let nn = dot(n, n);
                    p.iter_mut().zip(n).for_each(|(a, b)| *a -= s / nn * b);
                }
            }
        }
        if let Ok(candidate) = UnitVector::new(p) {
            if cell.contains(&candidate, 1e-9) && anchor.distance(&candidate) > anchor.distance(&witness) {
                witness = candidate;
                residual = proj.residual;
            }
        }
    }
    let radius = anchor.distance(&witness);
    Ok(CellCertificate {
        worst_margin: cell.worst_margin(witness.coords()),
        witness,
        radius,
        radius_upper: None,
        iterations: lp_steps + proj.cycles,
        residual,
        converged: proj.converged,
        regime: Regime::Beyond,
    })
}

/// Radius of the cell of `x` cut out by the frame rows in `subset`.
pub fn cell_radius(
    frame: &GaussianFrame,
    subset: &[usize],
    x: &UnitVector,
    opts: &SolverOptions,
) -> Result<CellCertificate> {
    let cell = Cell::from_subset(frame, subset, x)?;
    certify_cell(&cell, x, opts, &[])
}

/// [`cell_radius`] with known cell points used as additional starts.
pub fn cell_radius_with_hints(
    frame: &GaussianFrame,
    subset: &[usize],
    x: &UnitVector,
    opts: &SolverOptions,
    hints: &[UnitVector],
) -> Result<CellCertificate> {
    let cell = Cell::from_subset(frame, subset, x)?;
    certify_cell(&cell, x, opts, hints)
}

/// Far points of the cell reached by the ascent from each given tangent direction.
pub fn cell_witnesses(
    cell: &Cell,
    anchor: &UnitVector,
    directions: &[Vec<f64>],
    opts: &SolverOptions,
) -> Result<Vec<UnitVector>> {
    let d = cell.d();
    if cell.is_empty() {
        return Ok(vec![anchor.negated(); directions.len()]);
    }
    let x = anchor.coords();
    let b: Vec<f64> = cell.normals().iter().map(|n| dot(n, x).max(0.0)).collect();
    if cell.worst_margin(x) < -1e-9 {
        return Err(Error::InconsistentInput("anchor outside the cell".into()));
    }
    let basis = TangentBasis::new(x);
    let a: Vec<Vec<f64>> = cell
        .normals()
        .iter()
        .map(|n| basis.coords(n).into_iter().map(|v| -v).collect())
        .collect();
    let mut ascent = Ascent {
        a: &a,
        b: &b,
        steps: 0,
        lp_pivots: 0,
        capped: false,
    };
    let mut out = Vec::with_capacity(directions.len());
    for dir in directions {
        if dir.len() != d - 1 {
            return Err(invalid("directions live in the (d−1)-dimensional tangent space"));
        }
        let (end, _) = ascent.run(dir, opts.max_ascent_steps)?;
        let v = match end {
            AscentEnd::Point(p) => {
                let lifted = basis.lift(&p);
                x.iter().zip(&lifted).map(|(a, b)| a + b).collect()
            }
            AscentEnd::Ray(r) => basis.lift(&r),
        };
        out.push(UnitVector::new(v)?);
    }
    Ok(out)
}

/// A strictly interior point of the cell: maximizes the smallest normalized
/// margin over the box `‖y‖_∞ ≤ 1`. Returns the point and its margin.
pub fn interior_point(cell: &Cell) -> Result<(UnitVector, f64)> {
    let d = cell.d();
    if cell.is_empty() {
        return Ok((UnitVector::basis(d, 0)?, f64::INFINITY));
    }
    let mut a = Vec::with_capacity(cell.len() + 2 * d + 1);
    let mut b = Vec::with_capacity(a.capacity());
    for n in cell.normals() {
        let nn = norm(n);
        if nn == 0.0 {
            continue;
        }
        let mut row: Vec<f64> = n.iter().map(|v| -v / nn).collect();
        row.push(1.0);
        a.push(row);
        b.push(0.0);
    }
    for j in 0..d {
        for s in [1.0, -1.0] {
            let mut row = vec![0.0; d + 1];
            row[j] = s;
            a.push(row);
            b.push(1.0);
        }
    }
    let mut top = vec![0.0; d + 1];
    top[d] = 1.0;
    a.push(top.clone());
    b.push(1.0);
    match maximize(&top, &a, &b)?.0 {
        LpOutcome::Optimal { point, value } if value > 1e-12 => {
            let y = UnitVector::new(point[..d].to_vec())?;
            let margin = cell
                .normals()
                .iter()
                .map(|n| dot(n, y.coords()) / norm(n))
                .fold(f64::INFINITY, f64::min);
            Ok((y, margin))
        }
        LpOutcome::Optimal { .. } => Err(Error::CorruptInput("sign constraints describe an empty cell".into())),
        LpOutcome::Unbounded { .. } => Err(Error::Solver("interior LP cannot be unbounded".into())),
    }
}

/// Strict sign agreement of `y` with `x` on `subset`, and the smallest signed margin.
pub fn check_sign_consistency(
    frame: &GaussianFrame,
    subset: &[usize],
    x: &UnitVector,
    y: &UnitVector,
) -> Result<(bool, f64)> {
    let cell = Cell::from_subset(frame, subset, x)?;
    if y.dim() != frame.d() {
        return Err(invalid("y dimension does not match frame"));
    }
    let worst = cell.worst_margin(y.coords());
    Ok((worst > 0.0, worst))
}

/// `C5·d·ln d·ln M / √(M² + d²·ln²d·ln²M)`.
pub fn theorem_radius_bound(d: usize, m: usize, cfg: &ConstantsConfig) -> Result<f64> {
    if d < 3 || m < 8 {
        return Err(invalid(format!("bound needs d >= 3 and M >= 8, got d={d}, M={m}")));
    }
    let (df, mf) = (d as f64, m as f64);
    let num = df * df.ln() * mf.ln();
    Ok(cfg.c5 * num / (mf * mf + num * num).sqrt())
}

/// Radius implied by `y₁² ≥ 1 − τ²/(q² + τ²)`: `√(2 − 2·√(1 − τ²/(q² + τ²)))`.
pub fn margin_radius_bound(tau: f64, q: f64) -> Result<f64> {
    if !(tau > 0.0 && tau.is_finite()) || !(q >= 0.0 && q.is_finite()) {
        return Err(invalid("need tau > 0 and q >= 0"));
    }
    let y1 = q / (q * q + tau * tau).sqrt();
    Ok((2.0 - 2.0 * y1).max(0.0).sqrt())
}

#[cfg(test)]
mod tests;
