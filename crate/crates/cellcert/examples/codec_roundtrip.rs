//! Encode a vector as subset rank plus signs, serialize, decode.

use cellcert::certifier::SolverOptions;
use cellcert::codec::{decode, encode, EncodedVector};
use cellcert::numeric::{RngStream, UnitVector};
use cellcert::tessellation::ConstantsConfig;

fn main() -> cellcert::Result<()> {
    let (d, m) = (8, 4096);
    let frame_seed = RngStream::root(21);
    let x = UnitVector::random(d, &mut RngStream::root(22).sampler())?;
    let e = encode(&x, d, m, &ConstantsConfig::default(), frame_seed)?;
    let bytes = e.to_bytes();
    let back = EncodedVector::from_bytes(&bytes)?;
    assert_eq!(back, e);
    let dec = decode(&back, &SolverOptions::default())?;
    println!("k={} bits={} wire bytes={}", e.k, e.bit_cost(), bytes.len());
    println!(
        "error {:.5}, cell radius {:.5} (upper {:?})",
        x.distance(&dec.x_hat),
        dec.certificate.radius,
        dec.certificate.radius_upper
    );
    Ok(())
}
