use super::*;
use crate::certifier::check_sign_consistency;
use crate::tessellation::{combinatorics::binomial, sign_encode};

fn sample_x(d: usize, seed: u64) -> UnitVector {
    UnitVector::random(d, &mut RngStream::new(seed, 77).sampler()).unwrap()
}

#[test]
fn signs_are_the_restricted_pattern() {
    let cfg = ConstantsConfig::default();
    let x = sample_x(8, 1);
    let stream = RngStream::new(4, 4);
    let e = encode(&x, 8, 4096, &cfg, stream).unwrap();
    let frame = make_frame(8, 4096, stream).unwrap();
    let idx = e.indices().unwrap();
    assert_eq!(e.sign_bits, sign_encode(&frame, &x).unwrap().restrict(&idx));
    let oracle = ceil_log2(&binomial(4096, e.k as u64)) + e.k as u64;
    assert_eq!(e.bit_cost(), oracle);
    assert_eq!(encode(&x, 8, 4096, &cfg, stream).unwrap(), e);
}

#[test]
fn wire_round_trip_and_layout() {
    let cfg = ConstantsConfig::default();
    let e = encode(&sample_x(6, 2), 6, 1024, &cfg, RngStream::new(9, 1)).unwrap();
    let bytes = e.to_bytes();
    assert_eq!(&bytes[..4], b"CCE1");
    assert_eq!(u64::from_le_bytes(bytes[4..12].try_into().unwrap()), 6);
    assert_eq!(u64::from_le_bytes(bytes[12..20].try_into().unwrap()), 1024);
    assert_eq!(f64::from_le_bytes(bytes[20..28].try_into().unwrap()), e.tau);
    assert_eq!(u64::from_le_bytes(bytes[28..36].try_into().unwrap()) as usize, e.k);
    let len = u16::from_le_bytes(bytes[36..38].try_into().unwrap()) as usize;
    assert_eq!(BigUint::from_bytes_be(&bytes[38..38 + len]), e.subset_rank);
    assert_eq!(bytes.len(), 38 + len + e.k.div_ceil(8) + 16);
    assert_eq!(EncodedVector::from_bytes(&bytes).unwrap(), e);

    let mut bad = bytes.clone();
    bad[0] = b'X';
    assert!(matches!(EncodedVector::from_bytes(&bad), Err(Error::CorruptInput(_))));
    assert!(EncodedVector::from_bytes(&bytes[..bytes.len() - 1]).is_err());
}

#[test]
fn decoded_point_lies_in_cell() {
    let cfg = ConstantsConfig::default();
    let opts = SolverOptions::default();
    for seed in 0..6 {
        let x = sample_x(6, seed);
        let stream = RngStream::new(seed, 3);
        let e = encode(&x, 6, 2048, &cfg, stream).unwrap();
        let dec = decode(&e, &opts).unwrap();
        let frame = make_frame(6, 2048, stream).unwrap();
        let idx = e.indices().unwrap();
        let (_, worst) = check_sign_consistency(&frame, &idx, &x, &dec.x_hat).unwrap();
        assert!(worst >= -1e-9);
        let err = x.distance(&dec.x_hat);
        assert!(
            err <= dec.certificate.radius_upper.unwrap() + 1e-9,
            "{err} vs {:?}",
            dec.certificate
        );
        let again = decode(&e, &opts).unwrap();
        assert_eq!(again.x_hat, dec.x_hat);
    }
}

#[test]
fn empty_code_decodes_somewhere() {
    let e = EncodedVector {
        frame_seed: RngStream::new(1, 1),
        d: 4,
        m: 64,
        k: 0,
        subset_rank: BigUint::ZERO,
        sign_bits: Vec::new(),
        tau: 0.1,
    };
    assert_eq!(e.bit_cost(), 0);
    let dec = decode(&e, &SolverOptions::default()).unwrap();
    assert_eq!(dec.certificate.radius, 2.0);
    assert_eq!(EncodedVector::from_bytes(&e.to_bytes()).unwrap(), e);
}

#[test]
fn contradictory_signs_are_corrupt() {
    let cfg = ConstantsConfig::default();
    let x = sample_x(5, 3);
    let mut e = encode(&x, 5, 512, &cfg, RngStream::new(2, 2)).unwrap();
    // all signs flipped is the antipodal cell, still valid
    e.sign_bits.iter_mut().for_each(|b| *b = !*b);
    assert!(decode(&e, &SolverOptions::default()).is_ok());
    // a row and its negation can never both be positive
    let frame = make_frame(5, 512, RngStream::new(2, 2)).unwrap();
    let cell = Cell::from_normals(
        5,
        vec![frame.row(0).to_vec(), frame.row(0).iter().map(|v| -v).collect()],
    )
    .unwrap();
    assert!(matches!(interior_point(&cell), Err(Error::CorruptInput(_))));
}

#[test]
fn rate_distortion_small() {
    let cfg = ConstantsConfig::default();
    let (rd, rows) = rate_distortion_experiment(
        4,
        &[256, 1024, 4096],
        &cfg,
        20,
        RngStream::root(3),
        &SolverOptions::default(),
    )
    .unwrap();
    assert_eq!(rows.len(), 60);
    assert!(rd.bits_increasing());
    assert!(rd.errors_decreasing(), "{rd:?}");
}
