//! Binary containers for maps and volumes.
//!
//! All formats narrow to little-endian `f32` on disk and widen back to `f64`
//! on read.

mod epm;
mod etv;
mod pfm;

pub use epm::{read_epm, read_epm_file, write_epm, write_epm_file, EPM_MAGIC};
pub use etv::{read_etv, read_etv_file, write_etv, write_etv_file, ETV_MAGIC};
pub use pfm::{read_pfm, read_pfm_file, write_pfm, write_pfm_file};

use std::io::Read;

use crate::error::{Error, Result};

pub(crate) fn read_exact_or_format<R: Read>(src: &mut R, buf: &mut [u8], what: &str) -> Result<()> {
    src.read_exact(buf).map_err(|e| match e.kind() {
        std::io::ErrorKind::UnexpectedEof => Error::Format(format!("truncated {what}")),
        _ => Error::Io(e),
    })
}

pub(crate) fn read_u32<R: Read>(src: &mut R, what: &str) -> Result<u32> {
    let mut b = [0u8; 4];
    read_exact_or_format(src, &mut b, what)?;
    Ok(u32::from_le_bytes(b))
}

/// Reads `n` little-endian `f32` values, widened to `f64`.
pub(crate) fn read_f32_plane<R: Read>(src: &mut R, n: usize, what: &str) -> Result<Vec<f64>> {
    let bytes = n
        .checked_mul(4)
        .ok_or_else(|| Error::Format(format!("{what} dimensions overflow")))?;
    let mut buf = vec![0u8; bytes];
    read_exact_or_format(src, &mut buf, what)?;
    Ok(buf
        .chunks_exact(4)
        .map(|c| f32::from_le_bytes([c[0], c[1], c[2], c[3]]) as f64)
        .collect())
}

pub(crate) fn expect_eof<R: Read>(src: &mut R, what: &str) -> Result<()> {
    let mut extra = [0u8; 1];
    match src.read(&mut extra)? {
        0 => Ok(()),
        _ => Err(Error::Format(format!("trailing bytes after {what}"))),
    }
}

pub(crate) fn dim(v: u32) -> Result<usize> {
    usize::try_from(v).map_err(|_| Error::Format(format!("dimension {v} too large")))
}
