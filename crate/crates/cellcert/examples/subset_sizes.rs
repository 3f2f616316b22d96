//! Band sizes against their Gaussian-integral expectation.

use cellcert::lab::{subset_size_experiment, SubsetSizeSummary};
use cellcert::numeric::RngStream;
use cellcert::tessellation::ConstantsConfig;

fn main() -> cellcert::Result<()> {
    let cfg = ConstantsConfig::default();
    let rows = subset_size_experiment(16, 16384, &cfg, 200, RngStream::root(1))?;
    let s = SubsetSizeSummary::new(&rows, &cfg)?;
    println!(
        "E|W| = {:.3}, mean {:.3} (se {:.3}), mean |S| {:.2}",
        s.expected_w, s.mean_w, s.standard_error, s.mean_s
    );
    for a in s.assertions(rows.len()) {
        println!("{} {}: {}", if a.passed { "ok  " } else { "FAIL" }, a.name, a.detail);
    }
    Ok(())
}
