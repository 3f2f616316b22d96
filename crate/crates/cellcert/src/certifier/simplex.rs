//! Dense two-phase simplex on the dual of `max cᵀw s.t. Aw ≤ b, b ≥ 0`.
//!
//! The dual `min bᵀλ s.t. Aᵀλ = c, λ ≥ 0` has one row per primal variable, so the
//! tableau stays `n × (m + n)` with `n` the (small) dimension. Primal optima are
//! read off the simplex multipliers; primal unboundedness shows up as dual
//! infeasibility and the phase-one multipliers are the recession ray.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal {
        point: Vec<f64>,
        value: f64,
    },
    /// A ray `r` with `Ar ≤ 0` and `cᵀr > 0`.
    Unbounded {
        ray: Vec<f64>,
    },
}

const PIVOT_TOL: f64 = 1e-11;
const COST_TOL: f64 = 1e-11;

struct Tableau {
    n: usize,
    m: usize,
    width: usize,
    t: Vec<f64>,
    obj: Vec<f64>,
    basis: Vec<usize>,
    flip: Vec<f64>,
    pivots: usize,
}

impl Tableau {
    fn at(&self, r: usize, c: usize) -> f64 {
        self.t[r * self.width + c]
    }

    fn rhs(&self, r: usize) -> f64 {
        self.at(r, self.width - 1)
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let w = self.width;
        let p = self.t[row * w + col];
        for c in 0..w {
            self.t[row * w + c] /= p;
        }
        let (before, rest) = self.t.split_at_mut(row * w);
        let (prow, after) = rest.split_at_mut(w);
        for other in before.chunks_exact_mut(w).chain(after.chunks_exact_mut(w)) {
            let f = other[col];
            if f != 0.0 {
                for (o, p) in other.iter_mut().zip(prow.iter()) {
                    *o -= f * p;
                }
            }
        }
        let f = self.obj[col];
        if f != 0.0 {
            for (o, p) in self.obj.iter_mut().zip(prow.iter()) {
                *o -= f * p;
            }
        }
        self.basis[row] = col;
        self.pivots += 1;
    }

    fn price(&mut self, cost: &[f64]) {
        let w = self.width;
        self.obj = cost.to_vec();
        self.obj.push(0.0);
        for r in 0..self.n {
            let cb = cost[self.basis[r]];
            if cb != 0.0 {
                for c in 0..w {
                    self.obj[c] -= cb * self.t[r * w + c];
                }
            }
        }
    }

    /// Runs simplex iterations on the current objective. Both phases minimize a
    /// bounded objective (`b ≥ 0`, `λ ≥ 0`), so a column without a pivot row is
    /// rounding noise and is skipped until the next pivot.
    fn run(&mut self) -> Result<()> {
        let budget = 50 * (self.m + self.n) + 1000;
        let bland_after = 10 * (self.m + self.n) + 100;
        let mut skip = vec![false; self.m];
        for iter in 0..budget {
            let bland = iter >= bland_after;
            let mut enter = None;
            let mut best = -COST_TOL;
            for c in 0..self.m {
                let r = self.obj[c];
                if r < best && !skip[c] {
                    enter = Some(c);
                    if bland {
                        break;
                    }
                    best = r;
                }
            }
            let Some(col) = enter else {
                return Ok(());
            };
            let mut leave: Option<(usize, f64)> = None;
            for r in 0..self.n {
                let a = self.at(r, col);
                if a > PIVOT_TOL {
                    let ratio = self.rhs(r) / a;
                    let better = match leave {
                        None => true,
                        Some((lr, lratio)) => {
                            ratio < lratio - 1e-15 || (ratio <= lratio + 1e-15 && self.basis[r] < self.basis[lr])
                        }
                    };
                    if better {
                        leave = Some((r, ratio));
                    }
                }
            }
            match leave {
                Some((row, _)) => {
                    self.pivot(row, col);
                    skip.iter_mut().for_each(|s| *s = false);
                }
                None => skip[col] = true,
            }
        }
        Err(Error::Solver("simplex iteration budget exhausted".into()))
    }

    fn multipliers(&self, cost: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|l| {
                let yf: f64 = (0..self.n).map(|r| cost[self.basis[r]] * self.at(r, self.m + l)).sum();
                yf * self.flip[l]
            })
            .collect()
    }
}

/// Solves `max cᵀw s.t. a_i·w ≤ b_i` for rows `a` (each of length `c.len()`) with `b ≥ 0`.
pub fn maximize(c: &[f64], a: &[Vec<f64>], b: &[f64]) -> Result<(LpOutcome, usize)> {
    let n = c.len();
    if a.len() != b.len() || a.iter().any(|r| r.len() != n) {
        return Err(Error::InvalidArgument("LP shape mismatch".into()));
    }
    if b.iter().any(|v| !(*v >= 0.0)) {
        return Err(Error::InvalidArgument("LP right-hand side must be non-negative".into()));
    }
    // normalize rows, drop rows that only bind beyond |w| = 1e12, scale b to max 1
    let mut rows = Vec::with_capacity(a.len());
    let mut rhs = Vec::with_capacity(a.len());
    for (r, &bi) in a.iter().zip(b) {
        let nr = r.iter().map(|v| v * v).sum::<f64>().sqrt();
        if nr > 1e-12 * bi && nr > 0.0 {
            rows.push(r.iter().map(|v| v / nr).collect::<Vec<_>>());
            rhs.push(bi / nr);
        }
    }
    let scale = rhs.iter().fold(0.0f64, |s, v| s.max(*v));
    let scale = if scale > 0.0 { scale } else { 1.0 };
    rhs.iter_mut().for_each(|v| *v /= scale);
    let m = rows.len();

    let width = m + n + 1;
    let flip: Vec<f64> = c.iter().map(|v| if *v < 0.0 { -1.0 } else { 1.0 }).collect();
    let mut t = vec![0.0; n * width];
    for l in 0..n {
        for (i, row) in rows.iter().enumerate() {
            t[l * width + i] = flip[l] * row[l];
        }
        t[l * width + m + l] = 1.0;
        t[l * width + width - 1] = flip[l] * c[l];
    }
    let mut tab = Tableau {
        n,
        m,
        width,
        t,
        obj: Vec::new(),
        basis: (m..m + n).collect(),
        flip,
        pivots: 0,
    };

    let phase1: Vec<f64> = (0..m + n).map(|k| if k < m { 0.0 } else { 1.0 }).collect();
    tab.price(&phase1);
    tab.run()?;
    let infeasibility: f64 = (0..n).map(|r| phase1[tab.basis[r]] * tab.rhs(r)).sum();
    let cmax = c.iter().fold(0.0f64, |s, v| s.max(v.abs()));
    if infeasibility > 1e-10 * cmax.max(1e-300) {
        let ray = tab.multipliers(&phase1);
        return Ok((LpOutcome::Unbounded { ray }, tab.pivots));
    }
    // drive zero-level artificials out of the basis where possible
    for r in 0..n {
        if tab.basis[r] >= m {
            if let Some(col) = (0..m).find(|&col| tab.at(r, col).abs() > 1e-9) {
                tab.pivot(r, col);
            }
        }
    }
    let phase2: Vec<f64> = (0..m + n).map(|k| if k < m { rhs[k] } else { 0.0 }).collect();
    tab.price(&phase2);
    tab.run()?;
    let point: Vec<f64> = tab.multipliers(&phase2).into_iter().map(|v| v * scale).collect();
    let value = c.iter().zip(&point).map(|(a, b)| a * b).sum();
    Ok((LpOutcome::Optimal { point, value }, tab.pivots))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn optimal(out: LpOutcome) -> (Vec<f64>, f64) {
        match out {
            LpOutcome::Optimal { point, value } => (point, value),
            other => panic!("expected optimum, got {other:?}"),
        }
    }

    #[test]
    fn box_corner() {
        let a = vec![vec![1.0, 0.0], vec![-1.0, 0.0], vec![0.0, 1.0], vec![0.0, -1.0]];
        let b = vec![2.0, 1.0, 3.0, 0.5];
        let (p, v) = optimal(maximize(&[1.0, 1.0], &a, &b).unwrap().0);
        assert!((p[0] - 2.0).abs() < 1e-12 && (p[1] - 3.0).abs() < 1e-12);
        assert!((v - 5.0).abs() < 1e-12);
        let (p, _) = optimal(maximize(&[-1.0, -2.0], &a, &b).unwrap().0);
        assert!((p[0] + 1.0).abs() < 1e-12 && (p[1] + 0.5).abs() < 1e-12);
    }

    #[test]
    fn triangle_vertex() {
        // x + y ≤ 1, −x ≤ 0, −y ≤ 0 ; max 2x + y → (1, 0)
        let a = vec![vec![1.0, 1.0], vec![-1.0, 0.0], vec![0.0, -1.0]];
        let (p, v) = optimal(maximize(&[2.0, 1.0], &a, &[1.0, 0.0, 0.0]).unwrap().0);
        assert!((p[0] - 1.0).abs() < 1e-12 && p[1].abs() < 1e-12);
        assert!((v - 2.0).abs() < 1e-12);
    }

    #[test]
    fn unbounded_ray() {
        let a = vec![vec![-1.0, 0.0], vec![0.0, 1.0]];
        let c = [1.0, 0.5];
        match maximize(&c, &a, &[1.0, 1.0]).unwrap().0 {
            LpOutcome::Unbounded { ray } => {
                for row in &a {
                    assert!(row[0] * ray[0] + row[1] * ray[1] <= 1e-12);
                }
                assert!(c[0] * ray[0] + c[1] * ray[1] > 0.0);
            }
            other => panic!("expected unbounded, got {other:?}"),
        }
    }

    #[test]
    fn rejects_negative_rhs() {
        assert!(maximize(&[1.0], &[vec![1.0]], &[-1.0]).is_err());
    }

    #[test]
    fn random_polytopes_satisfy_kkt() {
        use crate::numeric::RngStream;
        let mut s = RngStream::root(17).sampler();
        for _ in 0..200 {
            let n = 2 + s.index(6);
            let m = n + 1 + s.index(40);
            let a: Vec<Vec<f64>> = (0..m).map(|_| s.vector(n)).collect();
            let b: Vec<f64> = (0..m).map(|_| s.uniform()).collect();
            let c = s.vector(n);
            match maximize(&c, &a, &b).unwrap().0 {
                LpOutcome::Optimal { point, value } => {
                    for (row, bi) in a.iter().zip(&b) {
                        let lhs: f64 = row.iter().zip(&point).map(|(x, y)| x * y).sum();
                        assert!(lhs <= bi + 1e-9);
                    }
                    // no feasible random point beats the optimum
                    for _ in 0..200 {
                        let dir = s.vector(n);
                        let step = a
                            .iter()
                            .zip(&b)
                            .filter_map(|(row, bi)| {
                                let r: f64 = row.iter().zip(&dir).map(|(x, y)| x * y).sum();
                                (r > 0.0).then(|| bi / r)
                            })
                            .fold(f64::INFINITY, f64::min);
                        if step.is_finite() {
                            let v: f64 = c.iter().zip(&dir).map(|(x, y)| x * y * step).sum();
                            assert!(v <= value + 1e-9);
                        }
                    }
                }
                LpOutcome::Unbounded { ray } => {
                    for row in &a {
                        let r: f64 = row.iter().zip(&ray).map(|(x, y)| x * y).sum();
                        assert!(r <= 1e-9);
                    }
                    assert!(c.iter().zip(&ray).map(|(x, y)| x * y).sum::<f64>() > 0.0);
                }
            }
        }
    }

    #[test]
    fn near_null_rows_do_not_swamp_scaling() {
        let a = vec![vec![1e-17, 0.0], vec![1.0, 0.0], vec![0.0, 1.0], vec![-1.0, -1.0]];
        let b = [0.7, 1.0, 2.0, 0.5];
        let (p, v) = optimal(maximize(&[1.0, 1.0], &a, &b).unwrap().0);
        assert!((p[0] - 1.0).abs() < 1e-12 && (p[1] - 2.0).abs() < 1e-12);
        assert!((v - 3.0).abs() < 1e-12);
    }
}
