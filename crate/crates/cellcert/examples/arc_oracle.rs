//! On the circle the cell is an arc with a closed-form radius; compare it with
//! the general certifier.

use std::f64::consts::TAU;

use cellcert::certifier::{cell_radius, SolverOptions};
use cellcert::numeric::{RngStream, UnitVector};
use cellcert::tessellation::{exact_cell_d2, GaussianFrame};

fn main() -> cellcert::Result<()> {
    let mut s = RngStream::root(4).sampler();
    let opts = SolverOptions::default();
    let mut worst: f64 = 0.0;
    for count in [1, 2, 5, 20, 100] {
        let angles: Vec<f64> = (0..count).map(|_| s.uniform() * TAU).collect();
        let xa = s.uniform() * TAU;
        let rows: Vec<Vec<f64>> = angles.iter().map(|t| vec![t.cos(), t.sin()]).collect();
        let frame = GaussianFrame::from_rows(&rows)?;
        let all: Vec<usize> = (0..count).collect();
        let exact = exact_cell_d2(&angles, xa)?;
        let cert = cell_radius(&frame, &all, &UnitVector::from_angle(xa), &opts)?;
        worst = worst.max((exact.radius - cert.radius).abs());
        println!(
            "{count:>4} lines: exact {:.7} certified {:.7}",
            exact.radius, cert.radius
        );
    }
    println!("largest gap {worst:.2e}");
    Ok(())
}
