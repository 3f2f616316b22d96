use nalgebra::DMatrix;

use cellcert::numeric::linalg::{min_singular_value, operator_norm, singular_values, symmetric_eigenvalues, Matrix};
use cellcert::numeric::RngStream;

fn random(rows: usize, cols: usize, seed: u64) -> (Matrix, DMatrix<f64>) {
    let data = RngStream::root(seed).sampler().vector(rows * cols);
    let ours = Matrix::new(rows, cols, data.clone()).unwrap();
    (ours, DMatrix::from_row_slice(rows, cols, &data))
}

#[test]
fn singular_values_match_nalgebra() {
    for (seed, (r, c)) in [(3, 3), (10, 4), (50, 7), (200, 16), (31, 30)].into_iter().enumerate() {
        let (ours, theirs) = random(r, c, seed as u64);
        let mut expected: Vec<f64> = theirs.singular_values().iter().copied().collect();
        expected.sort_by(|a, b| b.total_cmp(a));
        let mut got = singular_values(&ours).unwrap();
        got.sort_by(|a, b| b.total_cmp(a));
        for (g, e) in got.iter().zip(&expected) {
            assert!((g - e).abs() <= 1e-9 * expected[0], "{r}x{c}: {g} vs {e}");
        }
        let min = min_singular_value(&ours).unwrap();
        assert!((min - expected[c - 1]).abs() <= 1e-9 * expected[0]);
    }
}

#[test]
fn symmetric_spectrum_matches_nalgebra() {
    for seed in 0..5u64 {
        let n = 3 + 4 * seed as usize;
        let (a, b) = random(n, n, 100 + seed);
        let sym = a.gram();
        let theirs = b.transpose() * &b;
        let mut expected: Vec<f64> = theirs.symmetric_eigenvalues().iter().copied().collect();
        expected.sort_by(|x, y| x.total_cmp(y));
        let mut got = symmetric_eigenvalues(&sym).unwrap();
        got.sort_by(|x, y| x.total_cmp(y));
        let scale = expected[n - 1];
        for (g, e) in got.iter().zip(&expected) {
            assert!((g - e).abs() <= 1e-9 * scale, "{g} vs {e}");
        }
        let op = operator_norm(&sym).unwrap();
        assert!((op - scale).abs() <= 1e-9 * scale);
    }
}
