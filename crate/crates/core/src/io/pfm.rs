//! Grayscale portable float maps (`Pf`), Middlebury convention.
//!
//! Header: `Pf\n<width> <height>\n<scale>\n`. A negative scale means a
//! little-endian payload, positive big-endian; the magnitude is ignored.
//! Rows are stored bottom to top. Non-finite samples mark invalid pixels.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::maps::DisparityMap;

/// Writes a little-endian PFM. Invalid pixels are stored as +∞.
pub fn write_pfm<W: Write>(map: &DisparityMap, sink: &mut W) -> Result<()> {
    let (w, h) = map.dims();
    write!(sink, "Pf\n{w} {h}\n-1.0\n")?;
    for y in (0..h).rev() {
        for x in 0..w {
            let v = map.get(x, y).map_or(f32::INFINITY, |v| v as f32);
            sink.write_all(&v.to_le_bytes())?;
        }
    }
    Ok(())
}

pub fn read_pfm<R: BufRead>(source: &mut R) -> Result<DisparityMap> {
    let magic = header_token(source)?;
    match magic.as_str() {
        "Pf" => {}
        "PF" => return Err(Error::UnsupportedFormat("color PFM (PF)".into())),
        other => return Err(Error::Format(format!("bad PFM magic {other:?}"))),
    }
    let width = parse_dim(&header_token(source)?)?;
    let height = parse_dim(&header_token(source)?)?;
    let scale: f64 = header_token(source)?
        .parse()
        .map_err(|_| Error::Format("unparseable PFM scale".into()))?;
    if scale == 0.0 || !scale.is_finite() {
        return Err(Error::Format(format!("invalid PFM scale {scale}")));
    }
    let little_endian = scale < 0.0;

    let n = width
        .checked_mul(height)
        .ok_or_else(|| Error::Format("PFM dimensions overflow".into()))?;
    let mut buf = vec![0u8; n * 4];
    super::read_exact_or_format(source, &mut buf, "PFM payload")?;
    let mut values = vec![0.0; n];
    for (i, c) in buf.chunks_exact(4).enumerate() {
        let bytes = [c[0], c[1], c[2], c[3]];
        let v = if little_endian { f32::from_le_bytes(bytes) } else { f32::from_be_bytes(bytes) };
        let (x, stored_row) = (i % width, i / width);
        let y = height - 1 - stored_row;
        values[y * width + x] = if v.is_finite() { v as f64 } else { f64::INFINITY };
    }
    DisparityMap::new(width, height, values)
}

/// Reads one whitespace-delimited header token and the single whitespace
/// byte that terminates it.
fn header_token<R: BufRead>(source: &mut R) -> Result<String> {
    let mut token = Vec::new();
    let mut byte = [0u8; 1];
    loop {
        if source.read(&mut byte)? == 0 {
            return Err(Error::Format("truncated PFM header".into()));
        }
        if byte[0].is_ascii_whitespace() {
            if token.is_empty() {
                continue;
            }
            break;
        }
        token.push(byte[0]);
        if token.len() > 64 {
            return Err(Error::Format("PFM header token too long".into()));
        }
    }
    String::from_utf8(token).map_err(|_| Error::Format("non-ASCII PFM header".into()))
}

fn parse_dim(s: &str) -> Result<usize> {
    s.parse().map_err(|_| Error::Format(format!("bad PFM dimension {s:?}")))
}

pub fn write_pfm_file(map: &DisparityMap, path: impl AsRef<Path>) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    write_pfm(map, &mut out)?;
    out.flush()?;
    Ok(())
}

pub fn read_pfm_file(path: impl AsRef<Path>) -> Result<DisparityMap> {
    read_pfm(&mut BufReader::new(File::open(path)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_and_row_order() {
        let map = DisparityMap::new(2, 2, vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        let mut buf = Vec::new();
        write_pfm(&map, &mut buf).unwrap();
        assert!(buf.starts_with(b"Pf\n2 2\n-1.0\n"));
        let payload: Vec<f32> = buf[12..]
            .chunks_exact(4)
            .map(|c| f32::from_le_bytes(c.try_into().unwrap()))
            .collect();
        // bottom row first
        assert_eq!(payload, vec![3.0, 4.0, 1.0, 2.0]);
        assert_eq!(read_pfm(&mut buf.as_slice()).unwrap(), map);
    }

    #[test]
    fn big_endian_payload() {
        let mut buf = b"Pf\n3 1\n1.0\n".to_vec();
        for v in [0.5f32, -2.0, 7.25] {
            buf.extend(v.to_be_bytes());
        }
        let map = read_pfm(&mut buf.as_slice()).unwrap();
        assert_eq!(map.values(), &[0.5, -2.0, 7.25]);
    }

    #[test]
    fn little_endian_with_scale_magnitude() {
        let mut buf = b"Pf\n1 2\n-0.0039\n".to_vec();
        for v in [10.0f32, 20.0] {
            buf.extend(v.to_le_bytes());
        }
        let map = read_pfm(&mut buf.as_slice()).unwrap();
        assert_eq!(map.values(), &[20.0, 10.0]);
    }

    #[test]
    fn infinity_is_invalid() {
        let mut buf = b"Pf\n2 1\n-1\n".to_vec();
        buf.extend(1.5f32.to_le_bytes());
        buf.extend(f32::INFINITY.to_le_bytes());
        let map = read_pfm(&mut buf.as_slice()).unwrap();
        assert_eq!(map.mask(), &[true, false]);
        assert_eq!(map.get(0, 0), Some(1.5));
    }

    #[test]
    fn color_pfm_unsupported() {
        let buf = b"PF\n1 1\n-1\n\0\0\0\0\0\0\0\0\0\0\0\0".to_vec();
        assert!(matches!(read_pfm(&mut buf.as_slice()), Err(Error::UnsupportedFormat(_))));
    }

    #[test]
    fn malformed_headers() {
        for bad in [&b"P5\n1 1\n-1\n"[..], b"Pf\nx 1\n-1\n", b"Pf\n1 1\n0\n", b"Pf\n1"] {
            assert!(matches!(read_pfm(&mut &bad[..]), Err(Error::Format(_))), "{bad:?}");
        }
        let short = b"Pf\n2 1\n-1\n\0\0\0\0".to_vec();
        assert!(matches!(read_pfm(&mut short.as_slice()), Err(Error::Format(_))));
    }
}
