//! Fraction of band rows whose tangential component clears the margin.

use cellcert::lab::{margin_count_experiment, MarginSummary};
use cellcert::numeric::RngStream;
use cellcert::tessellation::ConstantsConfig;

fn main() -> cellcert::Result<()> {
    let root = RngStream::root(2);
    let rows = margin_count_experiment(16, 16384, &ConstantsConfig::default(), 200, root)?;
    let s = MarginSummary::new(&rows, root)?;
    println!(
        "mean ratio {:.4}, pooled {:.4}, analytic {:.4}",
        s.mean_ratio, s.pooled_ratio, s.expected_ratio
    );
    for a in s.assertions() {
        println!("{} {}: {}", if a.passed { "ok  " } else { "FAIL" }, a.name, a.detail);
    }
    Ok(())
}
