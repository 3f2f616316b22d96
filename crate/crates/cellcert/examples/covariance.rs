//! Empirical covariance of rows with a truncated first coordinate.

use cellcert::lab::{
    covariance_concentration_experiment, psi2_ratio, truncated_covariance_alpha, CovarianceSummary,
    TruncatedGaussianSpec,
};
use cellcert::numeric::RngStream;

fn main() -> cellcert::Result<()> {
    for a in [0.0, 0.1, 0.25, 0.5] {
        println!("psi2 ratio at a={a}: {:.4}", psi2_ratio(a)?);
    }
    let (t, trials) = (3.0, 100);
    for d in [4, 16] {
        let spec = TruncatedGaussianSpec::for_dim(0.05, d)?;
        println!(
            "d={d}: alpha {:.5} vs 1/d {:.5}",
            truncated_covariance_alpha(&spec)?,
            1.0 / d as f64
        );
        for n in [1000, 10000] {
            let rows = covariance_concentration_experiment(n, d, &spec, t, trials, RngStream::root(4))?;
            let s = CovarianceSummary::new(&rows, n, d, t);
            println!(
                "  n={n:>5}: violations {}/{trials}, smallest C {:.3}, bound {:.4}",
                s.violations, s.smallest_c, rows[0].bound
            );
        }
    }
    Ok(())
}
