//! Cell counts of central arrangements and the binomial tail estimate.

use cellcert::tessellation::combinatorics::rational_to_f64;
use cellcert::tessellation::{binom_tail_ratio_bound, expected_face_count, schlafli_cell_count};

fn main() -> cellcert::Result<()> {
    println!("{:>6} {:>3} {:>28} {:>10} {:>6}", "M", "d", "cells", "faces", "tail");
    for (m, d) in [(4, 3), (10, 3), (64, 4), (1024, 8), (1 << 16, 16)] {
        let cells = schlafli_cell_count(m, d)?;
        let faces = rational_to_f64(&expected_face_count(m, d)?);
        let tail = binom_tail_ratio_bound(m, d).map_or("-".to_string(), |b| b.holds().to_string());
        println!("{m:>6} {d:>3} {cells:>28} {faces:>10.4} {tail:>6}");
    }
    Ok(())
}
