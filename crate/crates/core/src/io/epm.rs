//! EPM: `"EPM1"`, u32 width, u32 height, then δ, γ, α, β planes of
//! row-major `f32`, all little-endian, no padding.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use super::{dim, expect_eof, read_exact_or_format, read_f32_plane, read_u32};
use crate::error::{Error, Result};
use crate::maps::EvidentialMap;
use crate::nig::NigParams;

pub const EPM_MAGIC: &[u8; 4] = b"EPM1";

/// Writes the map in single precision.
///
/// Narrowing can push a pixel onto a domain boundary (e.g. α = 1 + 1e-12
/// rounds to 1.0); such maps are rejected instead of written.
pub fn write_epm<W: Write>(map: &EvidentialMap, sink: &mut W) -> Result<()> {
    let (w, h) = map.dims();
    for (i, p) in map.pixels().enumerate() {
        let narrowed = NigParams {
            delta: p.delta as f32 as f64,
            gamma: p.gamma as f32 as f64,
            alpha: p.alpha as f32 as f64,
            beta: p.beta as f32 as f64,
        };
        narrowed.validate().map_err(|e| Error::at_pixel(e, i % w, i / w))?;
    }
    let header_dim = |v: usize| {
        u32::try_from(v).map_err(|_| Error::Format(format!("dimension {v} exceeds u32")))
    };
    sink.write_all(EPM_MAGIC)?;
    sink.write_all(&header_dim(w)?.to_le_bytes())?;
    sink.write_all(&header_dim(h)?.to_le_bytes())?;
    for plane in map.planes() {
        for &v in plane {
            sink.write_all(&(v as f32).to_le_bytes())?;
        }
    }
    Ok(())
}

/// Reads and validates every pixel. Trailing bytes are a format error.
pub fn read_epm<R: Read>(source: &mut R) -> Result<EvidentialMap> {
    let mut magic = [0u8; 4];
    read_exact_or_format(source, &mut magic, "EPM header")?;
    if &magic != EPM_MAGIC {
        return Err(Error::Format(format!("bad EPM magic {:?}", String::from_utf8_lossy(&magic))));
    }
    let w = dim(read_u32(source, "EPM header")?)?;
    let h = dim(read_u32(source, "EPM header")?)?;
    let n = w
        .checked_mul(h)
        .ok_or_else(|| Error::Format("EPM dimensions overflow".into()))?;
    let mut planes: [Vec<f64>; 4] = Default::default();
    for plane in planes.iter_mut() {
        *plane = read_f32_plane(source, n, "EPM plane")?;
    }
    expect_eof(source, "EPM planes")?;
    EvidentialMap::from_planes(w, h, planes)
}

pub fn write_epm_file(map: &EvidentialMap, path: impl AsRef<Path>) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    write_epm(map, &mut out)?;
    out.flush()?;
    Ok(())
}

pub fn read_epm_file(path: impl AsRef<Path>) -> Result<EvidentialMap> {
    read_epm(&mut BufReader::new(File::open(path)?))
}
