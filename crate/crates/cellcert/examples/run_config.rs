//! Drive an experiment from a JSON config, as the `run` subcommand does.

use cellcert::harness::{run, ExperimentConfig};

fn main() -> cellcert::Result<()> {
    let cfg = ExperimentConfig::from_json(
        r#"{
            "experiment": "gram-sigma-min",
            "d": 8,
            "M": 4096,
            "trials": 50,
            "master_seed": 12
        }"#,
    )?;
    let report = run(&cfg)?;
    println!("{} CSV lines", report.csv.lines().count());
    println!(
        "{}",
        serde_json::to_string_pretty(&report.summary).expect("summary serializes")
    );
    Ok(())
}
