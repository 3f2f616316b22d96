//! Dykstra's alternating projections onto an intersection of closed halfspaces
//! `{y : n_i·y ≥ 0}` and the unit ball.

use crate::numeric::linalg::{dot, norm};

#[derive(Debug, Clone)]
pub struct DykstraResult {
    pub point: Vec<f64>,
    pub cycles: usize,
    /// Largest violation of a (unit-normalized) halfspace or of the ball.
    pub residual: f64,
    pub converged: bool,
}

pub fn residual(normals: &[Vec<f64>], y: &[f64]) -> f64 {
    let hs = normals
        .iter()
        .map(|n| (-dot(n, y) / norm(n)).max(0.0))
        .fold(0.0f64, f64::max);
    hs.max(norm(y) - 1.0)
}

/// Projects `start` onto `∩ {n_i·y ≥ 0} ∩ B(0, 1)`.
///
/// Stops once the tracked objective `⟨target, y⟩` moved less than `tolerance`
/// over the last 100 cycles and the residual is below `1e-10`.
pub fn project(
    normals: &[Vec<f64>],
    start: &[f64],
    target: &[f64],
    tolerance: f64,
    max_cycles: usize,
) -> DykstraResult {
    let d = start.len();
    let k = normals.len();
    let units: Vec<(Vec<f64>, f64)> = normals.iter().map(|n| (n.clone(), dot(n, n))).collect();
    let mut y = start.to_vec();
    let mut incr = vec![vec![0.0; d]; k + 1];
    let mut z = vec![0.0; d];
    let mut history: Vec<f64> = Vec::new();
    let mut cycles = 0;
    let mut converged = false;
    while cycles < max_cycles {
        cycles += 1;
        for (i, (n, nn)) in units.iter().enumerate() {
            for j in 0..d {
                z[j] = y[j] + incr[i][j];
            }
            let s = dot(n, &z);
            let shift = if s < 0.0 && *nn > 0.0 { -s / nn } else { 0.0 };
            for j in 0..d {
                let p = z[j] + shift * n[j];
                incr[i][j] = z[j] - p;
                y[j] = p;
            }
        }
        for j in 0..d {
            z[j] = y[j] + incr[k][j];
        }
        let nz = norm(&z);
        let f = if nz > 1.0 { 1.0 / nz } else { 1.0 };
        for j in 0..d {
            let p = z[j] * f;
            incr[k][j] = z[j] - p;
            y[j] = p;
        }
        history.push(dot(target, &y));
        if history.len() > 100 {
            let drift = (history[history.len() - 1] - history[history.len() - 101]).abs();
            if drift < tolerance && residual(normals, &y) < 1e-10 {
                converged = true;
                break;
            }
        }
    }
    let res = residual(normals, &y);
    DykstraResult {
        point: y,
        cycles,
        residual: res,
        converged,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn projects_onto_quadrant() {
        let normals = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
        let r = project(&normals, &[-0.3, 0.5], &[-0.3, 0.5], 1e-14, 10_000);
        assert!(r.converged);
        assert!(r.point[0].abs() < 1e-12 && (r.point[1] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn projects_onto_cone_ball() {
        // cone y1 ≥ |y0|·(something) via two halfspaces; far point lands on the ball
        let normals = vec![vec![1.0, 1.0], vec![-1.0, 1.0]];
        let r = project(&normals, &[0.0, 5.0], &[0.0, 5.0], 1e-14, 10_000);
        assert!((r.point[1] - 1.0).abs() < 1e-12);
        let r = project(&normals, &[3.0, 0.0], &[3.0, 0.0], 1e-14, 10_000);
        // P_K(3, 0) = (1.5, 1.5), then scaled into the ball
        let s = 1.0 / 2f64.sqrt();
        assert!(
            (r.point[0] - s).abs() < 1e-9 && (r.point[1] - s).abs() < 1e-9,
            "{:?}",
            r.point
        );
    }
}
