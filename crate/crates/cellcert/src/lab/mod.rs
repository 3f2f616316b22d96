//! Monte Carlo checks of the concentration estimates: band sizes, margin
//! counts, smallest singular values, covariance concentration, hemisphere
//! containment and radius scaling.

mod experiments;
mod stats;
mod truncated;

use std::io::Write;

use rayon::prelude::*;

use crate::error::Result;

pub use experiments::*;
pub use stats::{least_squares, median, quantile, LineFit};
pub use truncated::{psi2_ratio, truncated_covariance_alpha, TruncatedGaussianSpec, TruncatedSampler};

/// Purpose tags for child streams; every trial derives its randomness from
/// `(root, tag, trial_id)` so results do not depend on scheduling.
pub(crate) mod tags {
    pub const FRAME: u64 = 1;
    pub const FIXED: u64 = 2;
    pub const X: u64 = 3;
    pub const Y: u64 = 4;
    pub const ROWS: u64 = 5;
}

pub const CSV_HEADER: &str = "trial_id,d,M,tau,eta,size_V,size_W,size_S,size_Stilde,size_Shat,sigma_min_sq,op_norm_dev,theorem_bound,certified_radius";

/// One row of experiment output. Quantities an experiment does not measure stay `None`
/// and are written as empty CSV fields.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TrialStatistics {
    pub trial_id: u64,
    pub d: usize,
    pub m: usize,
    pub tau: f64,
    pub eta: f64,
    pub size_v: Option<usize>,
    pub size_w: Option<usize>,
    pub size_s: Option<usize>,
    pub size_stilde: Option<usize>,
    pub size_shat: Option<usize>,
    pub sigma_min_sq: Option<f64>,
    pub op_norm_dev: Option<f64>,
    pub theorem_bound: Option<f64>,
    pub certified_radius: Option<f64>,
}

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(ToString::to_string).unwrap_or_default()
}

impl TrialStatistics {
    pub fn csv_row(&self) -> String {
        [
            self.trial_id.to_string(),
            self.d.to_string(),
            self.m.to_string(),
            self.tau.to_string(),
            self.eta.to_string(),
            opt(&self.size_v),
            opt(&self.size_w),
            opt(&self.size_s),
            opt(&self.size_stilde),
            opt(&self.size_shat),
            opt(&self.sigma_min_sq),
            opt(&self.op_norm_dev),
            opt(&self.theorem_bound),
            opt(&self.certified_radius),
        ]
        .join(",")
    }
}

/// Writes `#`-prefixed comment lines, the fixed header, then one row per trial.
pub fn write_csv<W: Write>(out: &mut W, comments: &[String], rows: &[TrialStatistics]) -> Result<()> {
    for c in comments {
        writeln!(out, "# {c}")?;
    }
    writeln!(out, "{CSV_HEADER}")?;
    for r in rows {
        writeln!(out, "{}", r.csv_row())?;
    }
    Ok(())
}

/// Named pass/fail outcome of a summary check.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct Assertion {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Assertion {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

/// Runs `f(trial_id)` for every id on the current rayon pool; output is in id order.
pub(crate) fn run_trials<T: Send>(trials: usize, f: impl Fn(u64) -> Result<T> + Sync + Send) -> Result<Vec<T>> {
    (0..trials as u64).into_par_iter().map(f).collect()
}
