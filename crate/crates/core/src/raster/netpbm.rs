//! Binary PGM (P5) label maps and PPM (P6) renderings.
//!
//! Label maps are written with maxval 65535 and big-endian 16-bit samples.
//! The reader also accepts 8-bit PGM (maxval < 256).

use std::path::Path;

use crate::error::{Error, Result};
use crate::ontology::LabelSet;
use crate::raster::LabelMap;

struct Header {
    magic: [u8; 2],
    width: usize,
    height: usize,
    maxval: u32,
    data_start: usize,
}

fn parse_header(bytes: &[u8]) -> Result<Header> {
    if bytes.len() < 2 {
        return Err(Error::Format("truncated header".into()));
    }
    let magic = [bytes[0], bytes[1]];
    let mut pos = 2;
    let mut fields = [0u64; 3];
    for field in fields.iter_mut() {
        loop {
            match bytes.get(pos) {
                Some(b) if b.is_ascii_whitespace() => pos += 1,
                Some(b'#') => {
                    while bytes.get(pos).is_some_and(|&b| b != b'\n' && b != b'\r') {
                        pos += 1;
                    }
                }
                Some(_) => break,
                None => return Err(Error::Format("truncated header".into())),
            }
        }
        let start = pos;
        while bytes.get(pos).is_some_and(u8::is_ascii_digit) {
            pos += 1;
        }
        if start == pos {
            return Err(Error::Format(format!("expected a number at byte {start}")));
        }
        *field = std::str::from_utf8(&bytes[start..pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::Format("header number out of range".into()))?;
    }
    // exactly one whitespace byte separates the header from the raster
    match bytes.get(pos) {
        Some(b) if b.is_ascii_whitespace() => pos += 1,
        _ => return Err(Error::Format("missing whitespace after maxval".into())),
    }
    let [width, height, maxval] = fields;
    if maxval == 0 || maxval > 65535 {
        return Err(Error::Format(format!("maxval {maxval} outside 1..=65535")));
    }
    Ok(Header {
        magic,
        width: width as usize,
        height: height as usize,
        maxval: maxval as u32,
        data_start: pos,
    })
}

pub fn decode_pgm(bytes: &[u8], tag: LabelSet) -> Result<LabelMap> {
    let h = parse_header(bytes)?;
    if &h.magic != b"P5" {
        return Err(Error::Format("not a binary PGM (expected P5)".into()));
    }
    let n = h
        .width
        .checked_mul(h.height)
        .ok_or_else(|| Error::Format("image dimensions overflow".into()))?;
    let wide = h.maxval > 255;
    let sample_bytes = if wide { 2 } else { 1 };
    let raster = &bytes[h.data_start..];
    if raster.len() < n * sample_bytes {
        return Err(Error::Format(format!(
            "expected {} raster bytes, found {}",
            n * sample_bytes,
            raster.len()
        )));
    }
    let data: Vec<u16> = if wide {
        raster[..2 * n].chunks_exact(2).map(|c| u16::from_be_bytes([c[0], c[1]])).collect()
    } else {
        raster[..n].iter().map(|&b| b as u16).collect()
    };
    if let Some(v) = data.iter().find(|&&v| v as u32 > h.maxval) {
        return Err(Error::Format(format!("sample {v} exceeds maxval {}", h.maxval)));
    }
    LabelMap::from_vec(h.width, h.height, data, tag)
}

pub fn encode_pgm(m: &LabelMap) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n65535\n", m.width(), m.height()).into_bytes();
    out.reserve(2 * m.data().len());
    for v in m.data() {
        out.extend_from_slice(&v.to_be_bytes());
    }
    out
}

/// `rgb` holds 3 bytes per pixel, row-major.
pub fn encode_ppm(width: usize, height: usize, rgb: &[u8]) -> Vec<u8> {
    assert_eq!(rgb.len(), width * height * 3, "rgb buffer size");
    let mut out = format!("P6\n{width} {height}\n255\n").into_bytes();
    out.extend_from_slice(rgb);
    out
}

/// Returns (width, height, rgb bytes).
pub fn decode_ppm(bytes: &[u8]) -> Result<(usize, usize, Vec<u8>)> {
    let h = parse_header(bytes)?;
    if &h.magic != b"P6" || h.maxval > 255 {
        return Err(Error::Format("not an 8-bit binary PPM".into()));
    }
    let n = h.width * h.height * 3;
    let raster = &bytes[h.data_start..];
    if raster.len() < n {
        return Err(Error::Format("truncated PPM raster".into()));
    }
    Ok((h.width, h.height, raster[..n].to_vec()))
}

pub fn read_pgm(path: impl AsRef<Path>, tag: LabelSet) -> Result<LabelMap> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    decode_pgm(&bytes, tag)
}

pub fn write_pgm(path: impl AsRef<Path>, m: &LabelMap) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, encode_pgm(m)).map_err(|e| Error::io(path, e))
}
