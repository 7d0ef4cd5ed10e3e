//! Radiance RGBE (`.hdr`) codec.

use super::HdrImage;
use crate::error::{Error, Result};

const MIN_RLE_WIDTH: usize = 8;
const MAX_RLE_WIDTH: usize = 0x7fff;
const MIN_RUN: usize = 4;

/// How scanlines are laid out when writing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanlineEncoding {
    /// Four raw bytes per pixel.
    Flat,
    /// Per-component run-length encoding. Widths outside `8..=32767` fall back to flat.
    Rle,
}

/// Decode one RGBE quadruple: `v = (m / 256) * 2^(e - 128)`, with `e == 0` meaning black.
#[inline]
pub fn decode_rgbe(rgbe: [u8; 4]) -> [f32; 3] {
    if rgbe[3] == 0 {
        return [0.0; 3];
    }
    // m * 2^(e - 136) is exact in f32 for every byte pair.
    let f = 2f64.powi(i32::from(rgbe[3]) - 136);
    [
        (f64::from(rgbe[0]) * f) as f32,
        (f64::from(rgbe[1]) * f) as f32,
        (f64::from(rgbe[2]) * f) as f32,
    ]
}

/// Encode a linear RGB triple, truncating mantissas.
pub fn encode_rgbe(rgb: [f32; 3]) -> [u8; 4] {
    let v = f64::from(rgb[0].max(rgb[1]).max(rgb[2]));
    if v.is_nan() || v <= 0.0 {
        return [0; 4];
    }
    let e = (frexp_exponent(v) + 128).clamp(1, 255);
    let scale = 2f64.powi(136 - e);
    let m = rgb.map(|c| (f64::from(c.max(0.0)) * scale).floor().min(255.0) as u8);
    if m == [0, 0, 0] {
        return [0; 4];
    }
    [m[0], m[1], m[2], e as u8]
}

/// Exponent `k` such that `v = f * 2^k` with `f` in `[0.5, 1)`, for finite positive `v`.
fn frexp_exponent(v: f64) -> i32 {
    let bits = v.to_bits();
    let biased = ((bits >> 52) & 0x7ff) as i32;
    if biased == 0 {
        // Subnormal doubles never come out of f32 input, but stay correct anyway.
        let normalized = v * 2f64.powi(64);
        return frexp_exponent(normalized) - 64;
    }
    biased - 1022
}

/// Decode a Radiance `.hdr` byte stream.
pub fn read_radiance_hdr(bytes: &[u8]) -> Result<HdrImage> {
    let mut cursor = Cursor { bytes, pos: 0 };

    let magic = cursor
        .line()
        .ok_or_else(|| Error::Format("empty stream".into()))?;
    let magic = magic.trim_end();
    if magic != "#?RADIANCE" && magic != "#?RGBE" {
        return Err(Error::Format(format!(
            "expected `#?RADIANCE` or `#?RGBE`, found `{magic}`"
        )));
    }

    loop {
        let line = cursor
            .line()
            .ok_or_else(|| Error::Format("header is not terminated by a blank line".into()))?;
        let line = line.trim();
        if line.is_empty() {
            break;
        }
        if let Some(format) = line.strip_prefix("FORMAT=") {
            if format.trim() != "32-bit_rle_rgbe" {
                return Err(Error::Format(format!("unsupported pixel format `{format}`")));
            }
        }
    }

    let resolution = cursor
        .line()
        .ok_or_else(|| Error::Format("missing resolution line".into()))?;
    let (width, height) = parse_resolution(&resolution)?;

    let mut pixels = Vec::with_capacity(width * height);
    let mut scanline = vec![[0u8; 4]; width];
    for y in 0..height {
        read_scanline(&mut cursor, &mut scanline, y)?;
        pixels.extend(scanline.iter().map(|&q| decode_rgbe(q)));
    }
    HdrImage::new(width, height, pixels)
}

fn parse_resolution(line: &str) -> Result<(usize, usize)> {
    let tokens: Vec<&str> = line.split_whitespace().collect();
    let malformed = || Error::Format(format!("malformed resolution line `{}`", line.trim()));
    if tokens.len() != 4 {
        return Err(malformed());
    }
    let axis = |t: &str| matches!(t, "-Y" | "+Y" | "-X" | "+X");
    if !axis(tokens[0]) || !axis(tokens[2]) || tokens[0][1..] == tokens[2][1..] {
        return Err(malformed());
    }
    let first: usize = tokens[1].parse().map_err(|_| malformed())?;
    let second: usize = tokens[3].parse().map_err(|_| malformed())?;
    if tokens[0] != "-Y" || tokens[2] != "+X" {
        return Err(Error::UnsupportedOrientation(format!(
            "{} {} {} {}",
            tokens[0], tokens[1], tokens[2], tokens[3]
        )));
    }
    if first == 0 || second == 0 {
        return Err(Error::Format(format!("zero-sized image `{}`", line.trim())));
    }
    Ok((second, first))
}

fn read_scanline(cursor: &mut Cursor<'_>, out: &mut [[u8; 4]], y: usize) -> Result<()> {
    let width = out.len();
    let truncated = || Error::Truncated(format!("scanline {y} ends early"));

    if (MIN_RLE_WIDTH..=MAX_RLE_WIDTH).contains(&width) {
        let head = cursor.peek(4).ok_or_else(truncated)?;
        if head[0] == 2 && head[1] == 2 && head[2] & 0x80 == 0 {
            let encoded = (usize::from(head[2]) << 8) | usize::from(head[3]);
            if encoded != width {
                return Err(Error::Format(format!(
                    "scanline {y} declares width {encoded}, image width is {width}"
                )));
            }
            cursor.pos += 4;
            return read_rle_components(cursor, out, y);
        }
    }

    // Flat pixels, possibly with old-style `(1, 1, 1, n)` repeat markers.
    let mut x = 0;
    let mut shift = 0u32;
    while x < width {
        let q = cursor.take(4).ok_or_else(truncated)?;
        let q = [q[0], q[1], q[2], q[3]];
        if q[0] == 1 && q[1] == 1 && q[2] == 1 {
            if x == 0 {
                return Err(Error::Format(format!(
                    "scanline {y} starts with a repeat marker"
                )));
            }
            let count = usize::from(q[3]) << shift;
            if x + count > width {
                return Err(Error::Format(format!("scanline {y} run overflows the row")));
            }
            let prev = out[x - 1];
            out[x..x + count].fill(prev);
            x += count;
            shift += 8;
        } else {
            out[x] = q;
            x += 1;
            shift = 0;
        }
    }
    Ok(())
}

fn read_rle_components(cursor: &mut Cursor<'_>, out: &mut [[u8; 4]], y: usize) -> Result<()> {
    let width = out.len();
    let truncated = || Error::Truncated(format!("run-length scanline {y} ends early"));
    for c in 0..4 {
        let mut x = 0;
        while x < width {
            let count = *cursor.take(1).ok_or_else(truncated)?.first().unwrap_or(&0);
            if count > 128 {
                let run = usize::from(count - 128);
                if x + run > width {
                    return Err(Error::Format(format!("scanline {y} run overflows the row")));
                }
                let value = cursor.take(1).ok_or_else(truncated)?[0];
                for px in &mut out[x..x + run] {
                    px[c] = value;
                }
                x += run;
            } else {
                let len = usize::from(count);
                if len == 0 || x + len > width {
                    return Err(Error::Format(format!(
                        "scanline {y} has an invalid literal length {len}"
                    )));
                }
                let values = cursor.take(len).ok_or_else(truncated)?;
                for (px, &v) in out[x..x + len].iter_mut().zip(values) {
                    px[c] = v;
                }
                x += len;
            }
        }
    }
    Ok(())
}

/// Encode `image` as a Radiance `.hdr` stream.
pub fn write_radiance_hdr(image: &HdrImage, encoding: ScanlineEncoding) -> Vec<u8> {
    let (width, height) = (image.width(), image.height());
    let mut out = Vec::with_capacity(64 + width * height * 4);
    out.extend_from_slice(b"#?RADIANCE\nFORMAT=32-bit_rle_rgbe\n\n");
    out.extend_from_slice(format!("-Y {height} +X {width}\n").as_bytes());

    let rle = encoding == ScanlineEncoding::Rle && (MIN_RLE_WIDTH..=MAX_RLE_WIDTH).contains(&width);
    let mut component = vec![0u8; width];
    for row in image.pixels().chunks_exact(width) {
        let quads: Vec<[u8; 4]> = row.iter().map(|&p| encode_rgbe(p)).collect();
        if !rle {
            for q in &quads {
                out.extend_from_slice(q);
            }
            continue;
        }
        out.extend_from_slice(&[2, 2, (width >> 8) as u8, (width & 0xff) as u8]);
        for c in 0..4 {
            for (dst, q) in component.iter_mut().zip(&quads) {
                *dst = q[c];
            }
            encode_rle_component(&component, &mut out);
        }
    }
    out
}

fn encode_rle_component(data: &[u8], out: &mut Vec<u8>) {
    let run_at = |i: usize| {
        let mut len = 1;
        while len < 127 && i + len < data.len() && data[i + len] == data[i] {
            len += 1;
        }
        len
    };

    let mut i = 0;
    while i < data.len() {
        let run = run_at(i);
        if run >= MIN_RUN {
            out.push(128 + run as u8);
            out.push(data[i]);
            i += run;
            continue;
        }
        let start = i;
        while i < data.len() && i - start < 128 {
            if run_at(i) >= MIN_RUN {
                break;
            }
            i += 1;
        }
        out.push((i - start) as u8);
        out.extend_from_slice(&data[start..i]);
    }
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn line(&mut self) -> Option<String> {
        if self.pos >= self.bytes.len() {
            return None;
        }
        let rest = &self.bytes[self.pos..];
        let end = rest.iter().position(|&b| b == b'\n')?;
        self.pos += end + 1;
        Some(String::from_utf8_lossy(&rest[..end]).into_owned())
    }

    fn peek(&self, n: usize) -> Option<&'a [u8]> {
        self.bytes.get(self.pos..self.pos + n)
    }

    fn take(&mut self, n: usize) -> Option<&'a [u8]> {
        let s = self.peek(n)?;
        self.pos += n;
        Some(s)
    }
}
