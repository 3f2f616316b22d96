//! One frame, many points: the largest certified radius over the half band
//! against the closed-form bound.

use cellcert::certifier::SolverOptions;
use cellcert::lab::{max_radius_ratio, median, uniform_radius_experiment};
use cellcert::numeric::RngStream;
use cellcert::tessellation::ConstantsConfig;

fn main() -> cellcert::Result<()> {
    let cfg = ConstantsConfig {
        c2: 3.0,
        ..Default::default()
    };
    let opts = SolverOptions::default();
    for seed in [1, 2] {
        let rows = uniform_radius_experiment(8, 8192, &cfg, 100, RngStream::root(seed), &opts)?;
        let radii: Vec<f64> = rows.iter().filter_map(|r| r.certified_radius).collect();
        println!(
            "seed {seed}: |Shat| ~ {}, median radius {:.5}, max radius/bound {:.4}",
            rows[0].size_shat.unwrap_or(0),
            median(&radii),
            max_radius_ratio(&rows)
        );
    }
    Ok(())
}
