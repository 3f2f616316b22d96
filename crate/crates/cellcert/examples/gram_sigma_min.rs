//! Smallest singular value of the tangential band rows, normalized by ln d·ln M.

use cellcert::lab::{gram_min_singular_experiment, GramSummary};
use cellcert::numeric::RngStream;
use cellcert::tessellation::ConstantsConfig;

fn main() -> cellcert::Result<()> {
    for m in [2048, 4096, 8192] {
        let rows = gram_min_singular_experiment(8, m, &ConstantsConfig::default(), 100, RngStream::root(3))?;
        let s = GramSummary::new(&rows)?;
        println!(
            "M={m:>5}: c_hat {:.4}, median ratio {:.4}, degenerate {:.2}",
            s.c_hat, s.median_ratio, s.degenerate_fraction
        );
    }
    Ok(())
}
