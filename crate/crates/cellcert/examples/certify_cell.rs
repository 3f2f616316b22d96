//! Certify the cell of a random point under a band subset, then reuse the
//! witness as a hint for a sub-cell.

use cellcert::certifier::{cell_radius, cell_radius_with_hints, check_sign_consistency, SolverOptions};
use cellcert::numeric::{RngStream, UnitVector};
use cellcert::tessellation::{make_frame, select_subsets, tau_of, ConstantsConfig};

fn main() -> cellcert::Result<()> {
    let (d, m) = (8, 4096);
    let root = RngStream::root(11);
    let cfg = ConstantsConfig::default();
    let opts = SolverOptions::default();
    let frame = make_frame(d, m, root)?;
    let x = UnitVector::random(d, &mut root.derive(3, 0).sampler())?;
    let sel = select_subsets(&frame, &x, tau_of(d, m, &cfg)?, &cfg, root.derive(2, 0))?;

    let cert = cell_radius(&frame, &sel.s, &x, &opts)?;
    println!(
        "|S|={} radius={:.5} upper={:?} regime={:?} iterations={}",
        sel.s.len(),
        cert.radius,
        cert.radius_upper,
        cert.regime,
        cert.iterations
    );
    let (_, worst) = check_sign_consistency(&frame, &sel.s, &x, &cert.witness)?;
    println!("witness lies on the closed cell boundary: worst margin {worst:.2e}");

    let half = &sel.s[..sel.s.len() / 2];
    let sub = cell_radius_with_hints(&frame, half, &x, &opts, &[cert.witness.clone()])?;
    println!(
        "half the constraints: radius={:.5} (never below {:.5})",
        sub.radius, cert.radius
    );
    Ok(())
}
