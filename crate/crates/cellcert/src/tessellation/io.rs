//! Binary frame (`CCF1`) and sign pattern (`CCS1`) files.
//!
//! Frame: magic, `d`, `M`, seed master and stream id (all u64 LE), then `M·d`
//! f64 LE row-major. Signs: magic, `M` (u64 LE), bits packed LSB-first with
//! 1 meaning +1.

use crate::error::{Error, Result};
use crate::numeric::RngStream;

use super::frame::{GaussianFrame, SignPattern};

pub const FRAME_MAGIC: &[u8; 4] = b"CCF1";
pub const SIGNS_MAGIC: &[u8; 4] = b"CCS1";

pub(crate) struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    pub(crate) fn new(buf: &'a [u8]) -> Self {
        Self { buf, pos: 0 }
    }

    pub(crate) fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        if self.pos + n > self.buf.len() {
            return Err(Error::CorruptInput("unexpected end of data".into()));
        }
        let s = &self.buf[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }

    pub(crate) fn magic(&mut self, magic: &[u8; 4]) -> Result<()> {
        if self.take(4)? != magic {
            return Err(Error::CorruptInput(format!(
                "bad magic, expected {}",
                String::from_utf8_lossy(magic)
            )));
        }
        Ok(())
    }

    pub(crate) fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().expect("8 bytes")))
    }

    pub(crate) fn u16(&mut self) -> Result<u16> {
        Ok(u16::from_le_bytes(self.take(2)?.try_into().expect("2 bytes")))
    }

    pub(crate) fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().expect("8 bytes")))
    }

    pub(crate) fn finish(&self) -> Result<()> {
        if self.pos != self.buf.len() {
            return Err(Error::CorruptInput(format!(
                "{} trailing bytes",
                self.buf.len() - self.pos
            )));
        }
        Ok(())
    }
}

pub(crate) fn pack_bits(bits: &[bool]) -> Vec<u8> {
    let mut out = vec![0u8; bits.len().div_ceil(8)];
    for (i, b) in bits.iter().enumerate() {
        if *b {
            out[i / 8] |= 1 << (i % 8);
        }
    }
    out
}

pub(crate) fn unpack_bits(bytes: &[u8], n: usize) -> Vec<bool> {
    (0..n).map(|i| bytes[i / 8] >> (i % 8) & 1 == 1).collect()
}

pub fn frame_to_bytes(frame: &GaussianFrame) -> Vec<u8> {
    let mut out = Vec::with_capacity(36 + 8 * frame.data().len());
    out.extend_from_slice(FRAME_MAGIC);
    out.extend_from_slice(&(frame.d() as u64).to_le_bytes());
    out.extend_from_slice(&(frame.m() as u64).to_le_bytes());
    out.extend_from_slice(&frame.seed().master_seed.to_le_bytes());
    out.extend_from_slice(&frame.seed().stream_id.to_le_bytes());
    for v in frame.data() {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

pub fn frame_from_bytes(bytes: &[u8]) -> Result<GaussianFrame> {
    let mut r = Reader::new(bytes);
    r.magic(FRAME_MAGIC)?;
    let d = r.u64()? as usize;
    let m = r.u64()? as usize;
    let seed = RngStream::new(r.u64()?, r.u64()?);
    let count = d
        .checked_mul(m)
        .filter(|c| c.checked_mul(8).is_some_and(|b| b <= bytes.len()))
        .ok_or_else(|| Error::CorruptInput("frame size does not match data".into()))?;
    let data = (0..count).map(|_| r.f64()).collect::<Result<Vec<_>>>()?;
    r.finish()?;
    GaussianFrame::from_flat(d, m, data, seed).map_err(|e| Error::CorruptInput(e.to_string()))
}

pub fn signs_to_bytes(p: &SignPattern) -> Vec<u8> {
    let mut out = Vec::new();
    out.extend_from_slice(SIGNS_MAGIC);
    out.extend_from_slice(&(p.len() as u64).to_le_bytes());
    out.extend(pack_bits(&p.bits));
    out
}

pub fn signs_from_bytes(bytes: &[u8]) -> Result<SignPattern> {
    let mut r = Reader::new(bytes);
    r.magic(SIGNS_MAGIC)?;
    let m = r.u64()? as usize;
    if m.div_ceil(8) > bytes.len() {
        return Err(Error::CorruptInput("sign count exceeds data".into()));
    }
    let packed = r.take(m.div_ceil(8))?;
    r.finish()?;
    Ok(SignPattern {
        bits: unpack_bits(packed, m),
        zeros: Vec::new(),
    })
}
