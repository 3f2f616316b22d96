use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::certifier::SolverOptions;
use crate::error::{invalid, Result};
use crate::tessellation::ConstantsConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentName {
    SubsetSize,
    MarginCount,
    GramSigmaMin,
    Covariance,
    Halfspace,
    UniformRadius,
    RadiusScaling,
    RateDistortion,
}

impl ExperimentName {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::SubsetSize => "subset-size",
            Self::MarginCount => "margin-count",
            Self::GramSigmaMin => "gram-sigma-min",
            Self::Covariance => "covariance",
            Self::Halfspace => "halfspace",
            Self::UniformRadius => "uniform-radius",
            Self::RadiusScaling => "radius-scaling",
            Self::RateDistortion => "rate-distortion",
        }
    }
}

/// One experiment run. Fields an experiment does not use must be absent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentName,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    #[serde(rename = "M", default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(rename = "M_list", default, skip_serializing_if = "Option::is_none")]
    pub m_list: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d_list: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    pub master_seed: u64,
    /// Second seed for cross-seed fits (radius-scaling, uniform-radius).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub validation_seed: Option<u64>,
    #[serde(default)]
    pub constants: ConstantsConfig,
    #[serde(default)]
    pub solver: SolverOptions,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_path: Option<PathBuf>,
    /// Covariance sample size(s).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_list: Option<Vec<usize>>,
    /// Covariance deviation parameter.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<f64>,
    /// Truncation threshold of the first coordinate in the covariance experiment.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threshold: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x_count: Option<usize>,
}

impl ExperimentConfig {
    /// Defaults used by `experiment <name>` when no config file is given.
    pub fn defaults(experiment: ExperimentName, master_seed: u64) -> Self {
        let mut c = Self {
            experiment,
            d: None,
            m: None,
            m_list: None,
            d_list: None,
            trials: None,
            master_seed,
            validation_seed: None,
            constants: ConstantsConfig::default(),
            solver: SolverOptions::default(),
            output_path: None,
            n: None,
            n_list: None,
            t: None,
            threshold: None,
            x_count: None,
        };
        let powers = |lo: u32, hi: u32, step: usize| (lo..=hi).step_by(step).map(|k| 1usize << k).collect::<Vec<_>>();
        match experiment {
            ExperimentName::SubsetSize | ExperimentName::MarginCount => {
                c.d = Some(16);
                c.m = Some(16384);
                c.trials = Some(200);
            }
            ExperimentName::GramSigmaMin => {
                c.d = Some(8);
                c.m = Some(4096);
                c.trials = Some(100);
            }
            ExperimentName::Covariance => {
                c.d = Some(4);
                c.n = Some(1000);
                c.t = Some(3.0);
                c.threshold = Some(0.05);
                c.trials = Some(100);
            }
            ExperimentName::Halfspace => {
                c.d = Some(8);
                c.trials = Some(500);
            }
            ExperimentName::UniformRadius => {
                c.d = Some(8);
                c.m = Some(8192);
                c.x_count = Some(200);
            }
            ExperimentName::RadiusScaling => {
                c.d_list = Some(vec![4, 8, 16]);
                c.m_list = Some(powers(10, 16, 1));
                c.trials = Some(50);
            }
            ExperimentName::RateDistortion => {
                c.d = Some(8);
                c.m_list = Some(powers(10, 16, 2));
                c.trials = Some(50);
            }
        }
        c
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| invalid(format!("config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    fn need<T: Copy>(&self, v: Option<T>, field: &str) -> Result<T> {
        v.ok_or_else(|| {
            invalid(format!(
                "config: experiment {} requires field `{field}`",
                self.experiment.as_str()
            ))
        })
    }

    pub fn require_d(&self) -> Result<usize> {
        self.need(self.d, "d")
    }

    pub fn require_m(&self) -> Result<usize> {
        self.need(self.m, "M")
    }

    pub fn require_trials(&self) -> Result<usize> {
        self.need(self.trials, "trials")
    }

    pub fn m_values(&self) -> Result<Vec<usize>> {
        match (&self.m_list, self.m) {
            (Some(l), _) if !l.is_empty() => Ok(l.clone()),
            (_, Some(m)) => Ok(vec![m]),
            _ => Err(invalid("config: `M` or `M_list` required")),
        }
    }

    pub fn d_values(&self) -> Result<Vec<usize>> {
        match (&self.d_list, self.d) {
            (Some(l), _) if !l.is_empty() => Ok(l.clone()),
            (_, Some(d)) => Ok(vec![d]),
            _ => Err(invalid("config: `d` or `d_list` required")),
        }
    }

    pub fn n_values(&self) -> Result<Vec<usize>> {
        match (&self.n_list, self.n) {
            (Some(l), _) if !l.is_empty() => Ok(l.clone()),
            (_, Some(n)) => Ok(vec![n]),
            _ => Err(invalid("config: `n` or `n_list` required")),
        }
    }

    /// Checks the preconditions of the selected experiment before anything runs.
    pub fn validate(&self) -> Result<()> {
        self.constants.validate()?;
        self.solver.validate()?;
        let grid = |d: usize, m: usize| -> Result<()> {
            if d < 3 || m <= 2 * d {
                return Err(invalid(format!("config: need d >= 3 and M > 2d, got d={d}, M={m}")));
            }
            Ok(())
        };
        let positive = |v: usize, f: &str| -> Result<()> {
            if v == 0 {
                return Err(invalid(format!("config: `{f}` must be >= 1")));
            }
            Ok(())
        };
        use ExperimentName::*;
        match self.experiment {
            SubsetSize | MarginCount | GramSigmaMin => {
                let d = self.require_d()?;
                for m in self.m_values()? {
                    grid(d, m)?;
                }
                positive(self.require_trials()?, "trials")?;
            }
            Covariance => {
                positive(self.require_trials()?, "trials")?;
                let t = self.need(self.t, "t")?;
                let a = self.need(self.threshold, "threshold")?;
                if !(t > 0.0) || !a.is_finite() {
                    return Err(invalid("config: need t > 0 and a finite threshold"));
                }
                for d in self.d_values()? {
                    for n in self.n_values()? {
                        if d < 2 || n < d {
                            return Err(invalid(format!("config: need d >= 2 and n >= d, got d={d}, n={n}")));
                        }
                    }
                }
            }
            Halfspace => {
                if self.require_d()? < 3 {
                    return Err(invalid("config: halfspace needs d >= 3"));
                }
                positive(self.require_trials()?, "trials")?;
            }
            UniformRadius => {
                grid(self.require_d()?, self.require_m()?)?;
                positive(self.need(self.x_count, "x_count")?, "x_count")?;
            }
            RadiusScaling => {
                for d in self.d_values()? {
                    for m in self.m_values()? {
                        grid(d, m)?;
                    }
                }
                positive(self.require_trials()?, "trials")?;
            }
            RateDistortion => {
                let d = self.require_d()?;
                let ms = self.need(self.m_list.as_ref(), "M_list")?;
                if ms.len() < 2 || ms.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(invalid("config: `M_list` must be increasing with at least two entries"));
                }
                for &m in ms {
                    grid(d, m)?;
                }
                positive(self.require_trials()?, "trials")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_minimal_config() {
        let c = ExperimentConfig::from_json(
            r#"{"experiment": "subset-size", "d": 16, "M": 16384, "trials": 200, "master_seed": 1}"#,
        )
        .unwrap();
        assert_eq!(c.m, Some(16384));
        assert_eq!(c.constants, ConstantsConfig::default());
    }

    #[test]
    fn rejects_unknown_and_missing_fields() {
        let err =
            ExperimentConfig::from_json(r#"{"experiment": "subset-size", "dd": 3, "master_seed": 1}"#).unwrap_err();
        assert!(err.to_string().contains("dd"), "{err}");
        let err =
            ExperimentConfig::from_json(r#"{"experiment": "subset-size", "M": 100, "trials": 2, "master_seed": 1}"#)
                .unwrap_err();
        assert!(err.to_string().contains("`d`"), "{err}");
        assert!(ExperimentConfig::from_json(
            r#"{"experiment": "subset-size", "d": 8, "M": 16, "trials": 2, "master_seed": 1}"#
        )
        .is_err());
        assert!(ExperimentConfig::from_json(r#"{"experiment": "nope", "master_seed": 1}"#).is_err());
    }

    #[test]
    fn defaults_are_valid() {
        for name in [
            ExperimentName::SubsetSize,
            ExperimentName::MarginCount,
            ExperimentName::GramSigmaMin,
            ExperimentName::Covariance,
            ExperimentName::Halfspace,
            ExperimentName::UniformRadius,
            ExperimentName::RadiusScaling,
            ExperimentName::RateDistortion,
        ] {
            let c = ExperimentConfig::defaults(name, 3);
            c.validate().unwrap();
            let text = serde_json::to_string(&c).unwrap();
            assert_eq!(ExperimentConfig::from_json(&text).unwrap(), c);
        }
    }
}
