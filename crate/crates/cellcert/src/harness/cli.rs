//! Command-line front end. The `cellcert` binary only calls [`main`].

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use super::{configure_threads, run, summary_path, write_outputs, ExperimentConfig, ExperimentName, EXIT_ERROR};
use crate::certifier::{cell_radius, SolverOptions};
use crate::codec::{decode, encode, EncodedVector};
use crate::error::{invalid, Result};
use crate::numeric::{RngStream, UnitVector};
use crate::tessellation::io::{frame_from_bytes, frame_to_bytes};
use crate::tessellation::{
    arc_count_d2, exact_cell_d2, make_frame, schlafli_cell_count, ConstantsConfig, GaussianFrame,
};

#[derive(Debug, Parser)]
#[command(
    name = "cellcert",
    version,
    about = "Certified cell radii of Gaussian hyperplane tessellations"
)]
pub struct Cli {
    /// Master seed.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output file.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// JSON experiment config.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Worker threads (`CELLCERT_THREADS` takes precedence).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct FrameArgs {
    /// Read the frame from a file written by `gen-frame`.
    #[arg(long)]
    pub frame: Option<PathBuf>,
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long = "M")]
    pub m: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample a Gaussian frame and write it in binary form.
    GenFrame {
        #[arg(long)]
        d: usize,
        #[arg(long = "M")]
        m: usize,
    },
    /// Encode a unit vector as subset rank plus signs.
    Encode {
        #[arg(long)]
        d: usize,
        #[arg(long = "M")]
        m: usize,
        /// Comma-separated coordinates; normalized. Random when omitted.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        x: Option<Vec<f64>>,
    },
    /// Decode a file written by `encode`.
    Decode { input: PathBuf },
    /// Certify the cell of `x` cut out by a subset of frame rows.
    Certify {
        #[command(flatten)]
        frame: FrameArgs,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        x: Option<Vec<f64>>,
        /// Comma-separated row indices; empty for the whole sphere.
        #[arg(long, default_value = "")]
        subset: String,
    },
    /// Number of cells of M hyperplanes in general position through the origin of R^d.
    CountCells {
        #[arg(long = "M")]
        m: u64,
        #[arg(long)]
        d: u64,
    },
    /// Run one experiment with its default parameters.
    Experiment { name: ExperimentName },
    /// Exact circle cell next to the certified radius.
    OracleD2 {
        /// Normal angles in radians.
        #[arg(
            long,
            value_delimiter = ',',
            allow_hyphen_values = true,
            default_value = "0,1.5707963267948966"
        )]
        angles: Vec<f64>,
        #[arg(long, allow_hyphen_values = true, default_value_t = std::f64::consts::FRAC_PI_4)]
        x_angle: f64,
    },
    /// Run an experiment config file.
    Run { config: PathBuf },
}

/// Parses the process arguments, runs the command and returns the exit code.
pub fn main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_ERROR } else { 0 };
        }
    };
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_ERROR
        }
    }
}

fn seed(cli: &Cli) -> u64 {
    cli.seed.unwrap_or(0)
}

fn print_json(v: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(v).unwrap_or_default());
}

fn unit(x: Option<Vec<f64>>, d: usize, stream: RngStream) -> Result<UnitVector> {
    match x {
        Some(v) if v.len() != d => Err(invalid(format!("--x has {} coordinates, expected {d}", v.len()))),
        Some(v) => UnitVector::new(v),
        None => UnitVector::random(d, &mut stream.sampler()),
    }
}

fn require_out(cli: &Cli) -> Result<&Path> {
    cli.out.as_deref().ok_or_else(|| invalid("--out is required"))
}

fn load_frame(args: &FrameArgs, seed: u64) -> Result<GaussianFrame> {
    match (&args.frame, args.d, args.m) {
        (Some(p), _, _) => frame_from_bytes(&std::fs::read(p)?),
        (None, Some(d), Some(m)) => make_frame(d, m, RngStream::root(seed)),
        _ => Err(invalid("give --frame or both --d and --M")),
    }
}

fn parse_subset(text: &str) -> Result<Vec<usize>> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<usize>()
                .map_err(|_| invalid(format!("bad index {s:?} in --subset")))
        })
        .collect()
}

fn load_config(cli: &Cli, path: &Path) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| invalid(format!("{}: {e}", path.display())))?;
    let mut cfg = ExperimentConfig::from_json(&text)?;
    if let Some(s) = cli.seed {
        cfg.master_seed = s;
    }
    if let Some(o) = &cli.out {
        cfg.output_path = Some(o.clone());
    }
    Ok(cfg)
}

fn run_config(cfg: &ExperimentConfig) -> Result<i32> {
    let report = run(cfg)?;
    write_outputs(cfg, &report)?;
    let summary = serde_json::to_string_pretty(&report.summary).map_err(|e| invalid(e.to_string()))?;
    match &cfg.output_path {
        Some(p) => {
            println!("{summary}");
            eprintln!("wrote {} and {}", p.display(), summary_path(p).display());
        }
        None => {
            print!("{}", report.csv);
            eprintln!("{summary}");
        }
    }
    for a in &report.summary.assertions {
        eprintln!("{} {}: {}", if a.passed { "PASS" } else { "FAIL" }, a.name, a.detail);
    }
    Ok(report.summary.exit_code())
}

fn execute(cli: Cli) -> Result<i32> {
    configure_threads(cli.threads)?;
    let opts = SolverOptions::default();
    match &cli.command {
        Command::GenFrame { d, m } => {
            let frame = make_frame(*d, *m, RngStream::root(seed(&cli)))?;
            let out = require_out(&cli)?;
            std::fs::write(out, frame_to_bytes(&frame))?;
            print_json(&json!({"d": d, "M": m, "seed": seed(&cli), "path": out}));
        }
        Command::Encode { d, m, x } => {
            let root = RngStream::root(seed(&cli));
            let x = unit(x.clone(), *d, root.derive(0x78, 0))?;
            let e = encode(&x, *d, *m, &ConstantsConfig::default(), root)?;
            std::fs::write(require_out(&cli)?, e.to_bytes())?;
            print_json(&json!({"d": d, "M": m, "k": e.k, "bits": e.bit_cost(), "tau": e.tau, "x": x.coords()}));
        }
        Command::Decode { input } => {
            let e = EncodedVector::from_bytes(&std::fs::read(input)?)?;
            let dec = decode(&e, &opts)?;
            let c = &dec.certificate;
            print_json(&json!({
                "x_hat": dec.x_hat.coords(),
                "radius": c.radius,
                "radius_upper": c.radius_upper,
                "regime": c.regime,
            }));
        }
        Command::Certify { frame, x, subset } => {
            let s = seed(&cli);
            let f = load_frame(frame, s)?;
            let x = unit(x.clone(), f.d(), RngStream::root(s).derive(0x78, 0))?;
            let sub = parse_subset(subset)?;
            let c = cell_radius(&f, &sub, &x, &opts)?;
            print_json(&json!({
                "radius": c.radius,
                "radius_upper": c.radius_upper,
                "regime": c.regime,
                "converged": c.converged,
                "iterations": c.iterations,
                "witness": c.witness.coords(),
            }));
        }
        Command::CountCells { m, d } => {
            println!("{}", schlafli_cell_count(*m, *d)?);
        }
        Command::Experiment { name } => {
            let mut cfg = match &cli.config {
                Some(p) => load_config(&cli, p)?,
                None => ExperimentConfig::defaults(*name, seed(&cli)),
            };
            if cfg.experiment != *name {
                return Err(invalid(format!(
                    "config names experiment {}, command asked for {}",
                    cfg.experiment.as_str(),
                    name.as_str()
                )));
            }
            if cli.config.is_none() {
                cfg.output_path = cli.out.clone();
            }
            return run_config(&cfg);
        }
        Command::OracleD2 { angles, x_angle } => {
            let exact = exact_cell_d2(angles, *x_angle)?;
            let rows: Vec<Vec<f64>> = angles.iter().map(|t| vec![t.cos(), t.sin()]).collect();
            let frame = GaussianFrame::from_rows(&rows)?;
            let all: Vec<usize> = (0..angles.len()).collect();
            let c = cell_radius(&frame, &all, &UnitVector::from_angle(*x_angle), &opts)?;
            println!("arcs {}", arc_count_d2(angles));
            println!("exact {:.7}", exact.radius);
            println!("certified {:.7}", c.radius);
        }
        Command::Run { config } => {
            let cfg = load_config(&cli, config)?;
            return run_config(&cfg);
        }
    }
    Ok(0)
}
