//! Sample a frame, take one-bit measurements of a vector and round-trip both
//! through their binary formats.

use cellcert::numeric::{RngStream, UnitVector};
use cellcert::tessellation::io::{frame_from_bytes, frame_to_bytes, signs_from_bytes, signs_to_bytes};
use cellcert::tessellation::{make_frame, select_subsets, sign_encode, tau_of, ConstantsConfig};

fn main() -> cellcert::Result<()> {
    let (d, m) = (6, 512);
    let root = RngStream::root(7);
    let frame = make_frame(d, m, root)?;
    let x = UnitVector::random(d, &mut root.derive(9, 0).sampler())?;
    let signs = sign_encode(&frame, &x)?;
    let positive = signs.bits.iter().filter(|b| **b).count();
    println!("d={d} M={m}: {positive} positive signs, {} zeros", signs.zeros.len());

    let cfg = ConstantsConfig::default();
    let tau = tau_of(d, m, &cfg)?;
    let sel = select_subsets(&frame, &x, tau, &cfg, root.derive(2, 0))?;
    println!(
        "tau={tau:.4} |V|={} |W|={} |S|={} overlap={}",
        sel.v.len(),
        sel.w.len(),
        sel.s.len(),
        sel.overlap()
    );

    let fb = frame_to_bytes(&frame);
    let sb = signs_to_bytes(&signs);
    assert_eq!(frame_from_bytes(&fb)?, frame);
    assert_eq!(signs_from_bytes(&sb)?.bits, signs.bits);
    println!("frame {} bytes, signs {} bytes", fb.len(), sb.len());
    Ok(())
}
