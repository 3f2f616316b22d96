//! Config-driven experiment runs: CSV output, a JSON summary and exit codes.

pub mod cli;
mod config;

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use serde_json::json;

use crate::codec::rate_distortion_experiment;
use crate::error::{invalid, Result};
use crate::lab::{
    covariance_concentration_experiment, gram_min_singular_experiment, halfspace_consistency_experiment,
    margin_count_experiment, max_radius_ratio, radius_scaling_experiment, subset_size_experiment,
    uniform_radius_experiment, wendel_probability, within_band, write_csv, Assertion, CovarianceSummary, GramSummary,
    HalfspaceReport, MarginSummary, ScalingSummary, SubsetSizeSummary, TrialStatistics, TruncatedGaussianSpec,
};
use crate::numeric::RngStream;

pub use config::{ExperimentConfig, ExperimentName};

pub const SUMMARY_SCHEMA: u32 = 1;
pub const COVARIANCE_HEADER: &str = "trial_id,d,n,threshold,t,deviation,bound,delta";
pub const RATE_HEADER: &str = "M,median_bits,median_error";

/// Exit code for a run whose assertions all hold.
pub const EXIT_PASS: i32 = 0;
/// Exit code for a completed run with a failed assertion.
pub const EXIT_ASSERTION: i32 = 1;
/// Exit code for bad configuration, usage or a runtime error.
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub schema: u32,
    pub experiment: String,
    pub master_seed: u64,
    pub fitted: BTreeMap<String, f64>,
    pub assertions: Vec<Assertion>,
    pub details: serde_json::Value,
    pub wall_time_s: f64,
}

impl Summary {
    pub fn passed(&self) -> bool {
        self.assertions.iter().all(|a| a.passed)
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            EXIT_PASS
        } else {
            EXIT_ASSERTION
        }
    }
}

#[derive(Debug, Clone)]
pub struct Report {
    /// Comment lines, fixed header and one row per trial. Deterministic for a given config.
    pub csv: String,
    pub summary: Summary,
}

struct Outcome {
    csv: String,
    fitted: BTreeMap<String, f64>,
    assertions: Vec<Assertion>,
    details: serde_json::Value,
}

/// Runs the experiment described by `cfg` on the current rayon pool.
pub fn run(cfg: &ExperimentConfig) -> Result<Report> {
    cfg.validate()?;
    let start = Instant::now();
    let out = match cfg.experiment {
        ExperimentName::SubsetSize => subset_size(cfg)?,
        ExperimentName::MarginCount => margin_count(cfg)?,
        ExperimentName::GramSigmaMin => gram(cfg)?,
        ExperimentName::Covariance => covariance(cfg)?,
        ExperimentName::Halfspace => halfspace(cfg)?,
        ExperimentName::UniformRadius => uniform(cfg)?,
        ExperimentName::RadiusScaling => scaling(cfg)?,
        ExperimentName::RateDistortion => rate(cfg)?,
    };
    Ok(Report {
        csv: out.csv,
        summary: Summary {
            schema: SUMMARY_SCHEMA,
            experiment: cfg.experiment.as_str().to_string(),
            master_seed: cfg.master_seed,
            fitted: out.fitted,
            assertions: out.assertions,
            details: out.details,
            wall_time_s: start.elapsed().as_secs_f64(),
        },
    })
}

/// Path of the summary written next to a CSV output.
pub fn summary_path(csv: &Path) -> PathBuf {
    csv.with_extension("summary.json")
}

/// Writes the CSV to `cfg.output_path` (and the summary beside it) when set.
pub fn write_outputs(cfg: &ExperimentConfig, report: &Report) -> Result<()> {
    if let Some(path) = &cfg.output_path {
        std::fs::write(path, &report.csv)?;
        let text = serde_json::to_string_pretty(&report.summary).map_err(|e| invalid(e.to_string()))?;
        std::fs::write(summary_path(path), text + "\n")?;
    }
    Ok(())
}

/// Builds the global rayon pool. `CELLCERT_THREADS` overrides `threads`.
pub fn configure_threads(threads: Option<usize>) -> Result<()> {
    let env = match std::env::var("CELLCERT_THREADS") {
        Ok(v) => Some(
            v.trim()
                .parse::<usize>()
                .map_err(|_| invalid(format!("CELLCERT_THREADS must be a positive integer, got {v:?}")))?,
        ),
        Err(_) => None,
    };
    let n = env.or(threads).unwrap_or(0);
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| invalid(format!("thread pool: {e}")))
}

fn comments(cfg: &ExperimentConfig) -> Vec<String> {
    let c = &cfg.constants;
    vec![
        format!("experiment={} master_seed={}", cfg.experiment.as_str(), cfg.master_seed),
        format!("C1={} C2={} C3={} C4={} C5={}", c.c1, c.c2, c.c3, c.c4, c.c5),
    ]
}

fn stats_csv(cfg: &ExperimentConfig, rows: &[TrialStatistics]) -> Result<String> {
    let mut buf = Vec::new();
    write_csv(&mut buf, &comments(cfg), rows)?;
    String::from_utf8(buf).map_err(|e| invalid(e.to_string()))
}

fn to_value<T: Serialize>(v: &T) -> serde_json::Value {
    serde_json::to_value(v).unwrap_or(serde_json::Value::Null)
}

fn root(cfg: &ExperimentConfig) -> RngStream {
    RngStream::root(cfg.master_seed)
}

fn subset_size(cfg: &ExperimentConfig) -> Result<Outcome> {
    let (d, trials) = (cfg.require_d()?, cfg.require_trials()?);
    let mut rows = Vec::new();
    let mut assertions = Vec::new();
    let mut details = Vec::new();
    let mut fitted = BTreeMap::new();
    for m in cfg.m_values()? {
        let r = subset_size_experiment(d, m, &cfg.constants, trials, root(cfg))?;
        let s = SubsetSizeSummary::new(&r, &cfg.constants)?;
        assertions.extend(tagged(m, s.assertions(trials)));
        fitted.insert(format!("mean_W_M{m}"), s.mean_w);
        details.push(json!({"M": m, "summary": to_value(&s)}));
        rows.extend(r);
    }
    Ok(Outcome {
        csv: stats_csv(cfg, &rows)?,
        fitted,
        assertions,
        details: json!(details),
    })
}

fn margin_count(cfg: &ExperimentConfig) -> Result<Outcome> {
    let (d, trials) = (cfg.require_d()?, cfg.require_trials()?);
    let mut rows = Vec::new();
    let mut assertions = Vec::new();
    let mut details = Vec::new();
    let mut fitted = BTreeMap::new();
    for m in cfg.m_values()? {
        let r = margin_count_experiment(d, m, &cfg.constants, trials, root(cfg))?;
        let s = MarginSummary::new(&r, root(cfg))?;
        assertions.extend(tagged(m, s.assertions()));
        fitted.insert(format!("mean_ratio_M{m}"), s.mean_ratio);
        details.push(json!({"M": m, "summary": to_value(&s)}));
        rows.extend(r);
    }
    Ok(Outcome {
        csv: stats_csv(cfg, &rows)?,
        fitted,
        assertions,
        details: json!(details),
    })
}

fn gram(cfg: &ExperimentConfig) -> Result<Outcome> {
    let (d, trials) = (cfg.require_d()?, cfg.require_trials()?);
    let ms = cfg.m_values()?;
    let mut rows = Vec::new();
    let mut assertions = Vec::new();
    let mut details = Vec::new();
    let mut fitted = BTreeMap::new();
    let mut c_hats = Vec::new();
    for &m in &ms {
        let r = gram_min_singular_experiment(d, m, &cfg.constants, trials, root(cfg))?;
        let s = GramSummary::new(&r)?;
        assertions.extend(tagged(m, s.assertions()));
        fitted.insert(format!("c_hat_M{m}"), s.c_hat);
        c_hats.push(s.c_hat);
        details.push(json!({"M": m, "summary": to_value(&s)}));
        rows.extend(r);
    }
    if c_hats.len() > 1 {
        assertions.push(Assertion::new(
            "c_hat stable across M within 20%",
            within_band(&c_hats, 0.2),
            format!("{c_hats:?}"),
        ));
    }
    Ok(Outcome {
        csv: stats_csv(cfg, &rows)?,
        fitted,
        assertions,
        details: json!(details),
    })
}

fn covariance(cfg: &ExperimentConfig) -> Result<Outcome> {
    let trials = cfg.require_trials()?;
    let t = cfg.t.ok_or_else(|| invalid("config: covariance requires `t`"))?;
    let a = cfg
        .threshold
        .ok_or_else(|| invalid("config: covariance requires `threshold`"))?;
    let mut csv = String::new();
    for c in comments(cfg) {
        let _ = writeln!(csv, "# {c}");
    }
    let _ = writeln!(csv, "{COVARIANCE_HEADER}");
    let mut assertions = Vec::new();
    let mut details = Vec::new();
    let mut worst_c: f64 = 0.0;
    for d in cfg.d_values()? {
        for n in cfg.n_values()? {
            let spec = TruncatedGaussianSpec::for_dim(a, d)?;
            let stream = root(cfg).derive(d as u64, n as u64);
            let r = covariance_concentration_experiment(n, d, &spec, t, trials, stream)?;
            for (i, row) in r.iter().enumerate() {
                let _ = writeln!(csv, "{i},{d},{n},{a},{t},{},{},{}", row.deviation, row.bound, row.delta);
            }
            let s = CovarianceSummary::new(&r, n, d, t);
            worst_c = worst_c.max(s.smallest_c);
            for mut x in s.assertions() {
                x.name = format!("{} (d={d}, n={n})", x.name);
                assertions.push(x);
            }
            details.push(json!({"d": d, "n": n, "summary": to_value(&s)}));
        }
    }
    let fitted = BTreeMap::from([("smallest_C".to_string(), worst_c)]);
    Ok(Outcome {
        csv,
        fitted,
        assertions,
        details: json!(details),
    })
}

fn halfspace(cfg: &ExperimentConfig) -> Result<Outcome> {
    let (d, trials) = (cfg.require_d()?, cfg.require_trials()?);
    let rows = halfspace_consistency_experiment(d, &cfg.constants, trials, root(cfg), &cfg.solver)?;
    let rep = HalfspaceReport::new(&rows);
    let predicted = wendel_probability(rep.v_size, d - 1);
    let fitted = BTreeMap::from([
        ("violation_rate".to_string(), rep.violations as f64 / rep.trials as f64),
        ("predicted_rate".to_string(), predicted),
    ]);
    Ok(Outcome {
        csv: stats_csv(cfg, &rows)?,
        fitted,
        assertions: rep.assertions(),
        details: to_value(&rep),
    })
}

fn uniform(cfg: &ExperimentConfig) -> Result<Outcome> {
    let (d, m) = (cfg.require_d()?, cfg.require_m()?);
    let xs = cfg
        .x_count
        .ok_or_else(|| invalid("config: uniform-radius requires `x_count`"))?;
    let rows = uniform_radius_experiment(d, m, &cfg.constants, xs, root(cfg), &cfg.solver)?;
    let ratio = max_radius_ratio(&rows);
    let mut fitted = BTreeMap::from([("C_hat".to_string(), ratio)]);
    let hemisphere = rows.iter().all(|r| r.certified_radius.is_some_and(|v| v < 2f64.sqrt()));
    let mut assertions = vec![Assertion::new(
        "every certified cell inside the open hemisphere",
        hemisphere,
        format!("max ratio {ratio:.4}"),
    )];
    if let Some(seed) = cfg.validation_seed {
        let other = uniform_radius_experiment(d, m, &cfg.constants, xs, RngStream::root(seed), &cfg.solver)?;
        let r2 = max_radius_ratio(&other);
        fitted.insert("C_hat_validation".to_string(), r2);
        assertions.push(Assertion::new(
            "C_hat stable across seeds within 30%",
            within_band(&[ratio, r2], 0.3),
            format!("{ratio:.4} vs {r2:.4}"),
        ));
    }
    Ok(Outcome {
        csv: stats_csv(cfg, &rows)?,
        fitted,
        assertions,
        details: json!({"size_V": rows.first().and_then(|r| r.size_v)}),
    })
}

fn scaling(cfg: &ExperimentConfig) -> Result<Outcome> {
    let (ds, ms, trials) = (cfg.d_values()?, cfg.m_values()?, cfg.require_trials()?);
    let rows = radius_scaling_experiment(&ds, &ms, &cfg.constants, trials, root(cfg), &cfg.solver)?;
    let s = ScalingSummary::new(&rows)?;
    let mut fitted = BTreeMap::from([
        ("C5_hat".to_string(), s.c5_hat),
        ("C3_hat".to_string(), s.c3_hat),
        ("C4_hat".to_string(), s.c4_hat),
    ]);
    let mut assertions = s.assertions();
    let mut details = json!({"fit": to_value(&s)});
    if let Some(seed) = cfg.validation_seed {
        let other = radius_scaling_experiment(&ds, &ms, &cfg.constants, trials, RngStream::root(seed), &cfg.solver)?;
        let v = ScalingSummary::new(&other)?;
        let coverage = ScalingSummary::coverage(&other, s.c5_hat);
        fitted.insert("coverage_validation".to_string(), coverage);
        assertions.push(Assertion::new(
            "fitted C5 covers 99% of validation trials",
            coverage >= 0.99,
            format!("coverage {coverage:.4} at C5 {:.4}", s.c5_hat),
        ));
        assertions.push(Assertion::new(
            "C3 and C4 stable across seeds within 30%",
            within_band(&[s.c3_hat, v.c3_hat], 0.3) && within_band(&[s.c4_hat, v.c4_hat], 0.3),
            format!("C3 {:.4}/{:.4}, C4 {:.4}/{:.4}", s.c3_hat, v.c3_hat, s.c4_hat, v.c4_hat),
        ));
        details["validation"] = to_value(&v);
    }
    Ok(Outcome {
        csv: stats_csv(cfg, &rows)?,
        fitted,
        assertions,
        details,
    })
}

fn rate(cfg: &ExperimentConfig) -> Result<Outcome> {
    let (d, trials) = (cfg.require_d()?, cfg.require_trials()?);
    let ms = cfg.m_values()?;
    let (rd, _) = rate_distortion_experiment(d, &ms, &cfg.constants, trials, root(cfg), &cfg.solver)?;
    let mut csv = String::new();
    for c in comments(cfg) {
        let _ = writeln!(csv, "# {c}");
    }
    let _ = writeln!(csv, "{RATE_HEADER}");
    for p in &rd.points {
        let _ = writeln!(csv, "{},{},{}", p.m, p.median_bits, p.median_error);
    }
    let fitted = BTreeMap::from([
        ("log_M_slope".to_string(), rd.log_m_slope),
        ("log_bits_slope".to_string(), rd.log_bits_slope),
        ("root_bits_slope".to_string(), rd.root_slope),
    ]);
    Ok(Outcome {
        csv,
        fitted,
        assertions: rd.assertions(),
        details: to_value(&rd),
    })
}

fn tagged(m: usize, list: Vec<Assertion>) -> Vec<Assertion> {
    list.into_iter()
        .map(|mut a| {
            a.name = format!("{} (M={m})", a.name);
            a
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(name: ExperimentName) -> ExperimentConfig {
        let mut c = ExperimentConfig::defaults(name, 5);
        c.trials = c.trials.map(|_| 8);
        c.x_count = c.x_count.map(|_| 4);
        c
    }

    #[test]
    fn csv_is_deterministic_and_headed() {
        let c = small(ExperimentName::SubsetSize);
        let a = run(&c).unwrap();
        let b = run(&c).unwrap();
        assert_eq!(a.csv, b.csv);
        let lines: Vec<&str> = a.csv.lines().filter(|l| !l.starts_with('#')).collect();
        assert_eq!(lines[0], crate::lab::CSV_HEADER);
        assert_eq!(lines.len(), 9);
        assert_eq!(a.summary.schema, 1);
    }

    #[test]
    fn covariance_and_rate_use_their_own_headers() {
        let c = small(ExperimentName::Covariance);
        let r = run(&c).unwrap();
        assert!(r.csv.lines().any(|l| l == COVARIANCE_HEADER));
        let mut c = small(ExperimentName::RateDistortion);
        c.m_list = Some(vec![256, 1024]);
        let r = run(&c).unwrap();
        assert!(r.csv.lines().any(|l| l == RATE_HEADER));
        assert_eq!(r.csv.lines().filter(|l| !l.starts_with('#')).count(), 3);
    }

    #[test]
    fn failed_assertion_maps_to_exit_one() {
        let s = Summary {
            schema: 1,
            experiment: "x".into(),
            master_seed: 0,
            fitted: BTreeMap::new(),
            assertions: vec![Assertion::new("a", true, ""), Assertion::new("b", false, "")],
            details: json!(null),
            wall_time_s: 0.0,
        };
        assert_eq!(s.exit_code(), EXIT_ASSERTION);
    }

    #[test]
    fn writes_csv_and_summary() {
        let dir = tempfile::tempdir().unwrap();
        let mut c = small(ExperimentName::Halfspace);
        c.output_path = Some(dir.path().join("h.csv"));
        let r = run(&c).unwrap();
        write_outputs(&c, &r).unwrap();
        assert_eq!(std::fs::read_to_string(dir.path().join("h.csv")).unwrap(), r.csv);
        let s: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(dir.path().join("h.summary.json")).unwrap()).unwrap();
        assert_eq!(s["experiment"], "halfspace");
    }
}
