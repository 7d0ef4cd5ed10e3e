//! Portable float map codec.
//!
//! The header is three whitespace-separated tokens (`PF`/`Pf`, `W H`, scale)
//! followed by exactly one whitespace byte. A negative scale marks
//! little-endian samples. Rows are stored bottom to top.

use super::HdrImage;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Endian {
    Little,
    Big,
}

pub fn read_pfm(bytes: &[u8]) -> Result<HdrImage> {
    let mut pos = 0;
    let magic = next_token(bytes, &mut pos).ok_or_else(|| Error::Format("empty stream".into()))?;
    let channels = match magic {
        b"PF" => 3,
        b"Pf" => 1,
        other => {
            return Err(Error::Format(format!(
                "bad PFM magic `{}`",
                String::from_utf8_lossy(other)
            )))
        }
    };

    let mut header_value = |what: &str| -> Result<&str> {
        let tok = next_token(bytes, &mut pos)
            .ok_or_else(|| Error::Format(format!("PFM header is missing the {what}")))?;
        std::str::from_utf8(tok).map_err(|_| Error::Format(format!("non-ASCII PFM {what}")))
    };
    let width: usize = header_value("width")?
        .parse()
        .map_err(|_| Error::Format("PFM width is not an integer".into()))?;
    let height: usize = header_value("height")?
        .parse()
        .map_err(|_| Error::Format("PFM height is not an integer".into()))?;
    let scale: f64 = header_value("scale")?
        .parse()
        .map_err(|_| Error::Format("PFM scale is not a number".into()))?;
    if width == 0 || height == 0 {
        return Err(Error::Format(format!("zero-sized PFM {width}x{height}")));
    }
    if scale == 0.0 || !scale.is_finite() {
        return Err(Error::Format(format!("PFM scale must be non-zero, got {scale}")));
    }
    let endian = if scale < 0.0 { Endian::Little } else { Endian::Big };

    // Exactly one whitespace byte separates the header from the payload.
    match bytes.get(pos) {
        Some(b) if b.is_ascii_whitespace() => pos += 1,
        _ => return Err(Error::Truncated("PFM header ends without a separator".into())),
    }

    let expected = width * height * channels * 4;
    let payload = &bytes[pos..];
    if payload.len() < expected {
        return Err(Error::Truncated(format!(
            "PFM payload has {} bytes, expected {expected}",
            payload.len()
        )));
    }

    let sample = |i: usize| -> f32 {
        let b = [payload[4 * i], payload[4 * i + 1], payload[4 * i + 2], payload[4 * i + 3]];
        match endian {
            Endian::Little => f32::from_le_bytes(b),
            Endian::Big => f32::from_be_bytes(b),
        }
    };

    let mut pixels = vec![[0f32; 3]; width * height];
    for stored_row in 0..height {
        let y = height - 1 - stored_row;
        for x in 0..width {
            let base = (stored_row * width + x) * channels;
            pixels[y * width + x] = if channels == 3 {
                [sample(base), sample(base + 1), sample(base + 2)]
            } else {
                let v = sample(base);
                [v, v, v]
            };
        }
    }
    HdrImage::new(width, height, pixels)
}

/// Encode `image` as a color `PF` file with unit scale.
pub fn write_pfm(image: &HdrImage, endian: Endian) -> Vec<u8> {
    let (width, height) = (image.width(), image.height());
    let scale = match endian {
        Endian::Little => "-1.0",
        Endian::Big => "1.0",
    };
    let mut out = format!("PF\n{width} {height}\n{scale}\n").into_bytes();
    out.reserve(width * height * 12);
    for y in (0..height).rev() {
        for x in 0..width {
            for c in image.pixel(x, y) {
                let b = match endian {
                    Endian::Little => c.to_le_bytes(),
                    Endian::Big => c.to_be_bytes(),
                };
                out.extend_from_slice(&b);
            }
        }
    }
    out
}

fn next_token<'a>(bytes: &'a [u8], pos: &mut usize) -> Option<&'a [u8]> {
    while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
        *pos += 1;
    }
    let start = *pos;
    while *pos < bytes.len() && !bytes[*pos].is_ascii_whitespace() {
        *pos += 1;
    }
    (*pos > start).then(|| &bytes[start..*pos])
}
