//! ETV: 16-byte header (`"ETV1"`, u32 width, height, dmax) then the V_δ, V_γ,
//! V_α, V_β planes of `f32`, each level-major then row-major, little-endian.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use super::{dim, expect_eof, read_exact_or_format, read_f32_plane, read_u32};
use crate::error::{Error, Result};
use crate::head::{Channel, TrustworthyVolume};

pub const ETV_MAGIC: &[u8; 4] = b"ETV1";

pub fn write_etv<W: Write>(volume: &TrustworthyVolume, sink: &mut W) -> Result<()> {
    sink.write_all(ETV_MAGIC)?;
    for v in [volume.width(), volume.height(), volume.dmax()] {
        let v = u32::try_from(v).map_err(|_| Error::Format(format!("dimension {v} exceeds u32")))?;
        sink.write_all(&v.to_le_bytes())?;
    }
    for c in [Channel::Delta, Channel::Gamma, Channel::Alpha, Channel::Beta] {
        for &v in volume.plane(c) {
            let narrowed = v as f32;
            if !narrowed.is_finite() {
                return Err(Error::NonFinite("volume value overflows f32"));
            }
            sink.write_all(&narrowed.to_le_bytes())?;
        }
    }
    Ok(())
}

pub fn read_etv<R: Read>(source: &mut R) -> Result<TrustworthyVolume> {
    let mut magic = [0u8; 4];
    read_exact_or_format(source, &mut magic, "ETV header")?;
    if &magic != ETV_MAGIC {
        return Err(Error::Format(format!("bad ETV magic {:?}", String::from_utf8_lossy(&magic))));
    }
    let w = dim(read_u32(source, "ETV header")?)?;
    let h = dim(read_u32(source, "ETV header")?)?;
    let d = dim(read_u32(source, "ETV header")?)?;
    let n = w
        .checked_mul(h)
        .and_then(|v| v.checked_mul(d))
        .ok_or_else(|| Error::Format("ETV dimensions overflow".into()))?;
    let mut planes: [Vec<f64>; 4] = Default::default();
    for plane in planes.iter_mut() {
        *plane = read_f32_plane(source, n, "ETV plane")?;
    }
    expect_eof(source, "ETV planes")?;
    TrustworthyVolume::new(w, h, d, planes)
}

pub fn write_etv_file(volume: &TrustworthyVolume, path: impl AsRef<Path>) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    write_etv(volume, &mut out)?;
    out.flush()?;
    Ok(())
}

pub fn read_etv_file(path: impl AsRef<Path>) -> Result<TrustworthyVolume> {
    read_etv(&mut BufReader::new(File::open(path)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layout_is_level_major() {
        let vol = TrustworthyVolume::from_fn(2, 1, 2, |c, k, x, _| {
            (c as usize * 100 + k * 10 + x) as f64
        })
        .unwrap();
        let mut buf = Vec::new();
        write_etv(&vol, &mut buf).unwrap();
        assert_eq!(buf.len(), 16 + 4 * 4 * 4);
        assert_eq!(&buf[..4], b"ETV1");
        let floats: Vec<f32> = buf[16..]
            .chunks_exact(4)
            .map(|c| f32::from_le_bytes(c.try_into().unwrap()))
            .collect();
        assert_eq!(&floats[..4], &[0.0, 1.0, 10.0, 11.0]);
        assert_eq!(&floats[12..], &[300.0, 301.0, 310.0, 311.0]);
        assert_eq!(read_etv(&mut buf.as_slice()).unwrap(), vol);
    }

    #[test]
    fn rejects_bad_streams() {
        assert!(matches!(read_etv(&mut &b"ETV2"[..]), Err(Error::Format(_))));
        let mut buf = b"ETV1".to_vec();
        buf.extend([1u32, 1, 0].iter().flat_map(|v| v.to_le_bytes()));
        assert!(matches!(read_etv(&mut buf.as_slice()), Err(Error::EmptyInput(_))));
        let mut buf = b"ETV1".to_vec();
        buf.extend([1u32, 1, 2].iter().flat_map(|v| v.to_le_bytes()));
        buf.extend([0u8; 12]);
        assert!(matches!(read_etv(&mut buf.as_slice()), Err(Error::Format(_))));
    }
}
