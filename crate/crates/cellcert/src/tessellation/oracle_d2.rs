//! Exact cell geometry on the circle.
//!
//! In the plane every normal at angle `θ` cuts the circle at `θ ± π/2`; the cell
//! holding `x` is the arc between the nearest cut points on either side.

use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct D2Cell {
    /// Clockwise endpoint of the arc, as an angle in `[0, 2π)`.
    pub start: f64,
    /// Counter-clockwise endpoint, as an angle in `[0, 2π)`.
    pub end: f64,
    /// Angular distances from `x` to `start` and `end`.
    pub offsets: (f64, f64),
    /// Chordal radius `2·sin(Δθ_max/2)`.
    pub radius: f64,
}

impl D2Cell {
    /// Whether angle `theta` lies strictly inside the arc.
    pub fn contains(&self, theta: f64) -> bool {
        let span = (self.end - self.start).rem_euclid(TAU);
        let off = (theta - self.start).rem_euclid(TAU);
        off > 0.0 && off < span
    }
}

fn cut_points(angles: &[f64]) -> impl Iterator<Item = f64> + '_ {
    angles
        .iter()
        .flat_map(|t| [(t + 0.5 * PI).rem_euclid(TAU), (t - 0.5 * PI).rem_euclid(TAU)])
}

pub fn exact_cell_d2(angles: &[f64], x_angle: f64) -> Result<D2Cell> {
    if angles.is_empty() {
        return Err(Error::InvalidArgument("need at least one normal".into()));
    }
    if angles.iter().chain(std::iter::once(&x_angle)).any(|a| !a.is_finite()) {
        return Err(Error::InvalidArgument("angles must be finite".into()));
    }
    let x = x_angle.rem_euclid(TAU);
    let mut ccw = f64::INFINITY;
    let mut cw = f64::INFINITY;
    let mut end = 0.0;
    let mut start = 0.0;
    for b in cut_points(angles) {
        let up = (b - x).rem_euclid(TAU);
        let down = (x - b).rem_euclid(TAU);
        if up.min(down) < 1e-15 {
            return Err(Error::DegenerateInput(format!("x at angle {x} lies on a boundary")));
        }
        if up < ccw {
            ccw = up;
            end = b;
        }
        if down < cw {
            cw = down;
            start = b;
        }
    }
    Ok(D2Cell {
        start,
        end,
        offsets: (cw, ccw),
        radius: 2.0 * (0.5 * cw.max(ccw)).sin(),
    })
}

/// Number of arcs the normals cut the circle into (distinct cut points).
pub fn arc_count_d2(angles: &[f64]) -> usize {
    let mut pts: Vec<f64> = cut_points(angles).collect();
    pts.sort_by(|a, b| a.total_cmp(b));
    if pts.is_empty() {
        return 0;
    }
    let wrap = TAU - pts[pts.len() - 1] + pts[0];
    pts.windows(2).filter(|w| w[1] - w[0] > 1e-12).count() + usize::from(wrap > 1e-12)
}
