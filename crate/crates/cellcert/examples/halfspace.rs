//! How often sign agreement on the fixed set alone fails to keep a point in
//! the hemisphere of x, next to the closed-form prediction.

use cellcert::certifier::SolverOptions;
use cellcert::lab::{halfspace_consistency_experiment, wendel_probability, HalfspaceReport};
use cellcert::numeric::RngStream;
use cellcert::tessellation::ConstantsConfig;

fn main() -> cellcert::Result<()> {
    let d = 8;
    let opts = SolverOptions::default();
    for c1 in [1.0, 2.0, 3.0] {
        let cfg = ConstantsConfig {
            c1,
            ..Default::default()
        };
        let rows = halfspace_consistency_experiment(d, &cfg, 300, RngStream::root(5), &opts)?;
        let r = HalfspaceReport::new(&rows);
        println!(
            "C1={c1}: |V|={:>3} violations {:>3}/{} predicted rate {:.2e} min <x,y> {:.4}",
            r.v_size,
            r.violations,
            r.trials,
            wendel_probability(r.v_size, d - 1),
            r.min_inner
        );
    }
    Ok(())
}
