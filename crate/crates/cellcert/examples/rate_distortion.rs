//! Median decoding error against bit cost as M grows.

use cellcert::certifier::SolverOptions;
use cellcert::codec::rate_distortion_experiment;
use cellcert::numeric::RngStream;
use cellcert::tessellation::ConstantsConfig;

fn main() -> cellcert::Result<()> {
    let ms = [1 << 10, 1 << 12, 1 << 14];
    let (rd, _) = rate_distortion_experiment(
        8,
        &ms,
        &ConstantsConfig::default(),
        30,
        RngStream::root(8),
        &SolverOptions::default(),
    )?;
    for p in &rd.points {
        println!("M={:>6}: bits {:>7.1}, error {:.5}", p.m, p.median_bits, p.median_error);
    }
    println!(
        "slope in ln M {:.3}, in ln bits {:.3}",
        rd.log_m_slope, rd.log_bits_slope
    );
    Ok(())
}
