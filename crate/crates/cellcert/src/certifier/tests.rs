use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, TAU};

use super::*;
use crate::numeric::RngStream;
use crate::tessellation::{exact_cell_d2, make_frame};

fn frame_from_angles(angles: &[f64]) -> GaussianFrame {
    let rows: Vec<Vec<f64>> = angles.iter().map(|t| vec![t.cos(), t.sin()]).collect();
    GaussianFrame::from_rows(&rows).unwrap()
}

fn all(m: usize) -> Vec<usize> {
    (0..m).collect()
}

#[test]
fn empty_subset_is_whole_sphere() {
    let x = UnitVector::new(vec![1.0, 2.0, 3.0]).unwrap();
    let frame = make_frame(3, 8, RngStream::root(1)).unwrap();
    let cert = cell_radius(&frame, &[], &x, &SolverOptions::default()).unwrap();
    assert_eq!(cert.radius, 2.0);
    assert_eq!(cert.witness, x.negated());
    assert_eq!(cert.regime, Regime::Unconstrained);
}

#[test]
fn quarter_arc_in_plane() {
    let frame = frame_from_angles(&[0.0, FRAC_PI_2]);
    let x = UnitVector::from_angle(FRAC_PI_4);
    let cert = cell_radius(&frame, &all(2), &x, &SolverOptions::default()).unwrap();
    assert!((cert.radius - 0.7653669).abs() < 1e-6, "{}", cert.radius);
    assert!(cert.converged);
}

#[test]
fn matches_exact_arc_oracle() {
    let opts = SolverOptions::default();
    let mut s = RngStream::new(31, 2).sampler();
    let mut checked = 0;
    for trial in 0..1000 {
        let count = 1 + trial % 100;
        let angles: Vec<f64> = (0..count).map(|_| s.uniform() * TAU).collect();
        let frame = frame_from_angles(&angles);
        let xa = s.uniform() * TAU;
        let Ok(exact) = exact_cell_d2(&angles, xa) else {
            continue;
        };
        let cert = cell_radius(&frame, &all(count), &UnitVector::from_angle(xa), &opts).unwrap();
        assert!(
            (cert.radius - exact.radius).abs() < 1e-6,
            "trial {trial}: {} vs {}",
            cert.radius,
            exact.radius
        );
        checked += 1;
    }
    assert!(checked > 990);
}

#[test]
fn hundred_normals_twenty_points() {
    let mut s = RngStream::new(5, 0).sampler();
    let angles: Vec<f64> = (0..100).map(|_| s.uniform() * TAU).collect();
    let frame = frame_from_angles(&angles);
    for _ in 0..20 {
        let xa = s.uniform() * TAU;
        let exact = exact_cell_d2(&angles, xa).unwrap();
        let cert = cell_radius(
            &frame,
            &all(100),
            &UnitVector::from_angle(xa),
            &SolverOptions::default(),
        )
        .unwrap();
        assert!((cert.radius - exact.radius).abs() < 1e-6);
    }
}

#[test]
fn witnesses_are_sign_consistent_and_radius_in_range() {
    let opts = SolverOptions::default();
    for seed in 0..20 {
        let d = 3 + seed as usize % 5;
        let frame = make_frame(d, 12 * d, RngStream::root(seed)).unwrap();
        let mut s = RngStream::new(seed, 9).sampler();
        let x = UnitVector::random(d, &mut s).unwrap();
        let k = 1 + s.index(frame.m());
        let subset: Vec<usize> = (0..k).collect();
        let cert = cell_radius(&frame, &subset, &x, &opts).unwrap();
        let (_, worst) = check_sign_consistency(&frame, &subset, &x, &cert.witness).unwrap();
        assert!(worst >= -1e-9, "seed {seed}: margin {worst}");
        assert!((0.0..=2.0).contains(&cert.radius));
        assert!((cert.radius - x.distance(&cert.witness)).abs() < 1e-12);
        if let Some(up) = cert.radius_upper {
            assert!(up >= cert.radius);
        }
    }
}

#[test]
fn antipodal_cell_reaches_beyond_equator() {
    // Only two constraints in R^3: the cell is a wedge containing points with ⟨x, y⟩ < 0.
    let frame = GaussianFrame::from_rows(&[vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]]).unwrap();
    let x = UnitVector::new(vec![1.0, 1.0, 1.0]).unwrap();
    let cert = cell_radius(&frame, &[0, 1], &x, &SolverOptions::default()).unwrap();
    assert_eq!(cert.regime, Regime::Beyond);
    // farthest point of the closed wedge {y1 ≥ 0, y2 ≥ 0} from x is (0, 0, −1)
    let expect = x.distance(&UnitVector::new(vec![0.0, 0.0, -1.0]).unwrap());
    assert!((cert.radius - expect).abs() < 1e-6, "{} vs {expect}", cert.radius);
}

#[test]
fn nested_subsets_shrink_radius() {
    let opts = SolverOptions::default();
    for seed in 0..10 {
        let frame = make_frame(5, 80, RngStream::root(100 + seed)).unwrap();
        let x = UnitVector::random(5, &mut RngStream::new(seed, 1).sampler()).unwrap();
        let mut inner: Option<CellCertificate> = None;
        for k in [80, 40, 20, 10] {
            let subset: Vec<usize> = (0..k).collect();
            let hints: Vec<UnitVector> = inner.iter().map(|c| c.witness.clone()).collect();
            let cert = cell_radius_with_hints(&frame, &subset, &x, &opts, &hints).unwrap();
            if let Some(p) = &inner {
                assert!(cert.radius >= p.radius - 1e-12, "k={k}: {} < {}", cert.radius, p.radius);
            }
            inner = Some(cert);
        }
    }
}

#[test]
fn anchor_outside_cell_is_rejected() {
    let frame = frame_from_angles(&[0.0]);
    let cell = Cell::from_signs(&frame, &[0], &[false]).unwrap();
    let err = certify_cell(&cell, &UnitVector::from_angle(0.0), &SolverOptions::default(), &[]).unwrap_err();
    assert!(matches!(err, Error::InconsistentInput(_)));
}

#[test]
fn interior_point_has_positive_margin() {
    let frame = make_frame(4, 40, RngStream::root(3)).unwrap();
    let x = UnitVector::random(4, &mut RngStream::new(3, 3).sampler()).unwrap();
    let cell = Cell::from_subset(&frame, &all(40), &x).unwrap();
    let (y, margin) = interior_point(&cell).unwrap();
    assert!(margin > 0.0);
    assert!(cell.worst_margin(y.coords()) > 0.0);
}

#[test]
fn contradictory_signs_have_no_interior() {
    let frame = frame_from_angles(&[0.0, 0.0]);
    let cell = Cell::from_signs(&frame, &[0, 1], &[true, false]).unwrap();
    assert!(matches!(interior_point(&cell), Err(Error::CorruptInput(_))));
}

#[test]
fn sign_consistency_examples() {
    let frame =
        GaussianFrame::from_rows(&[vec![-0.1, 0.9], vec![0.5, -0.2], vec![-0.05, 0.3], vec![0.7, 0.1]]).unwrap();
    let x = UnitVector::new(vec![1.0, 0.0]).unwrap();
    let (ok, worst) = check_sign_consistency(&frame, &[0, 2], &x, &x).unwrap();
    assert!(ok);
    assert!((worst - 0.05).abs() < 1e-15);
    let (ok, _) = check_sign_consistency(&frame, &[0, 2], &x, &x.negated()).unwrap();
    assert!(!ok);
    // σ = (−1, −1): margins 0.1·0.9 − 0.9·0.436 and 0.05·0.9 − 0.3·0.436
    let y = UnitVector::new(vec![0.9, 0.436]).unwrap();
    let (ok, worst) = check_sign_consistency(&frame, &[0, 2], &x, &y).unwrap();
    let n = (0.81f64 + 0.436 * 0.436).sqrt();
    let expect = ((0.1 * 0.9 - 0.9 * 0.436) / n).min((0.05 * 0.9 - 0.3 * 0.436) / n);
    assert!(!ok);
    assert!((worst - expect).abs() < 1e-12);
}

#[test]
fn closed_form_bounds() {
    let cfg = ConstantsConfig::default();
    let b = theorem_radius_bound(4, 1024, &cfg).unwrap();
    assert!((b - 0.0375086).abs() < 1e-6, "{b}");
    let b4 = theorem_radius_bound(4, 4096, &cfg).unwrap();
    let ratio = b4 / b;
    let expect = (4096f64.ln() / 1024f64.ln()) / 4.0;
    assert!((ratio - expect).abs() < 0.01, "{ratio}");
    let big = theorem_radius_bound(1000, 8, &cfg).unwrap();
    assert!((big - 1.0).abs() < 1e-3);
    assert!(theorem_radius_bound(2, 1024, &cfg).is_err());

    assert!((margin_radius_bound(0.1, 1.0).unwrap() - 0.099628).abs() < 1e-6);
    assert!((margin_radius_bound(0.3, 0.0).unwrap() - 2f64.sqrt()).abs() < 1e-15);
    assert!(margin_radius_bound(1e-9, 1.0).unwrap() < 1e-8);
    assert!(margin_radius_bound(0.0, 1.0).is_err());
}

#[test]
fn options_validate() {
    let mut o = SolverOptions::default();
    assert!(o.validate().is_ok());
    o.tolerance = 0.0;
    assert!(o.validate().is_err());
    let parsed: SolverOptions = serde_json::from_str(r#"{"restarts": 2}"#).unwrap();
    assert_eq!(parsed.restarts, 2);
    assert!(serde_json::from_str::<SolverOptions>(r#"{"step": 1}"#).is_err());
}

#[test]
fn radius_dominates_sampled_cell_points() {
    let opts = SolverOptions::default();
    for seed in 0..6 {
        let frame = make_frame(3, 40, RngStream::root(200 + seed)).unwrap();
        let mut s = RngStream::new(seed, 4).sampler();
        let x = UnitVector::random(3, &mut s).unwrap();
        let cell = Cell::from_subset(&frame, &all(40), &x).unwrap();
        let cert = certify_cell(&cell, &x, &opts, &[]).unwrap();
        let mut sampled: f64 = 0.0;
        let mut hits = 0;
        for _ in 0..400_000 {
            let y = UnitVector::random(3, &mut s).unwrap();
            if cell.contains(&y, 0.0) {
                hits += 1;
                sampled = sampled.max(x.distance(&y));
            }
        }
        assert!(hits > 0);
        assert!(
            cert.radius >= sampled - 1e-12,
            "seed {seed}: {} < {sampled}",
            cert.radius
        );
        assert!(
            cert.radius - sampled < 0.05,
            "seed {seed}: {} vs {sampled}",
            cert.radius
        );
        assert!(cert.radius_upper.unwrap() >= cert.radius);
    }
}
