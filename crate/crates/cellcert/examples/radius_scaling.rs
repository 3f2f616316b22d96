//! Certified radius across a (d, M) grid and its log-log slope in M.

use cellcert::certifier::SolverOptions;
use cellcert::lab::{radius_scaling_experiment, ScalingSummary};
use cellcert::numeric::RngStream;
use cellcert::tessellation::ConstantsConfig;

fn main() -> cellcert::Result<()> {
    let ms: Vec<usize> = (10..=14).map(|k| 1 << k).collect();
    let rows = radius_scaling_experiment(
        &[4, 8],
        &ms,
        &ConstantsConfig::default(),
        30,
        RngStream::root(6),
        &SolverOptions::default(),
    )?;
    let s = ScalingSummary::new(&rows)?;
    println!("C5_hat {:.4}  C3_hat {:.4}  C4_hat {:.4}", s.c5_hat, s.c3_hat, s.c4_hat);
    for f in &s.slopes {
        println!("d={:>2}: slope {:.4} (r2 {:.4})", f.d, f.slope, f.r2);
    }
    Ok(())
}
