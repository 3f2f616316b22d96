use proptest::prelude::*;

use cellcert::certifier::{cell_radius, cell_radius_with_hints, check_sign_consistency, SolverOptions};
use cellcert::codec::{encode, subset_rank, subset_unrank, EncodedVector};
use cellcert::numeric::{RngStream, UnitVector};
use cellcert::tessellation::{make_frame, ConstantsConfig};

fn subset(m: usize, mask_seed: u64) -> Vec<usize> {
    let mut s = RngStream::root(mask_seed).sampler();
    (0..m).filter(|_| s.uniform() < 0.3).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn rank_round_trip(m in 1usize..300, seed in any::<u64>()) {
        let s = subset(m, seed);
        let r = subset_rank(&s, m).unwrap();
        prop_assert_eq!(subset_unrank(&r, m, s.len()).unwrap(), s);
    }

    #[test]
    fn witness_is_a_cell_point_at_the_reported_distance(
        d in 3usize..7,
        extra in 0usize..40,
        seed in any::<u64>(),
    ) {
        let m = 2 * d + 1 + extra;
        let frame = make_frame(d, m, RngStream::new(seed, 0)).unwrap();
        let x = UnitVector::random(d, &mut RngStream::new(seed, 1).sampler()).unwrap();
        let s = subset(m, seed ^ 0x55);
        let cert = cell_radius(&frame, &s, &x, &SolverOptions::default()).unwrap();
        let norm: f64 = cert.witness.coords().iter().map(|v| v * v).sum::<f64>().sqrt();
        prop_assert!((norm - 1.0).abs() < 1e-9);
        prop_assert!((x.distance(&cert.witness) - cert.radius).abs() < 1e-9);
        let (_, worst) = check_sign_consistency(&frame, &s, &x, &cert.witness).unwrap();
        prop_assert!(worst >= -1e-8, "worst margin {}", worst);
        if let Some(u) = cert.radius_upper {
            prop_assert!(cert.radius <= u + 1e-9);
        }
    }

    #[test]
    fn dropping_constraints_never_shrinks_the_radius(d in 3usize..6, seed in any::<u64>()) {
        let m = 60;
        let opts = SolverOptions::default();
        let frame = make_frame(d, m, RngStream::new(seed, 2)).unwrap();
        let x = UnitVector::random(d, &mut RngStream::new(seed, 3).sampler()).unwrap();
        let all: Vec<usize> = (0..m).collect();
        let big = cell_radius(&frame, &all, &x, &opts).unwrap();
        let half: Vec<usize> = (0..m).step_by(2).collect();
        let small = cell_radius_with_hints(&frame, &half, &x, &opts, std::slice::from_ref(&big.witness)).unwrap();
        prop_assert!(small.radius >= big.radius - 1e-12);
    }

    #[test]
    fn encoded_vector_wire_round_trip(d in 3usize..8, k in 6u32..11, seed in any::<u64>()) {
        let m = 1usize << k;
        prop_assume!(m > 2 * d);
        let x = UnitVector::random(d, &mut RngStream::new(seed, 4).sampler()).unwrap();
        let e = encode(&x, d, m, &ConstantsConfig::default(), RngStream::new(seed, 5)).unwrap();
        let back = EncodedVector::from_bytes(&e.to_bytes()).unwrap();
        prop_assert_eq!(back, e);
    }
}
