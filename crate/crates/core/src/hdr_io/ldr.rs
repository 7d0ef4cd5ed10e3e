//! Gamma quantization and 8-bit containers.

use std::path::Path;

use rayon::prelude::*;

use super::{DisplayImage, LdrImage};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    /// Binary `P6` portable pixmap.
    Ppm,
    Png,
}

impl OutputFormat {
    /// `.png` selects PNG; every other extension falls back to PPM.
    pub fn from_path(path: &Path) -> Self {
        match path
            .extension()
            .and_then(|e| e.to_str())
            .map(str::to_ascii_lowercase)
            .as_deref()
        {
            Some("png") => Self::Png,
            _ => Self::Ppm,
        }
    }
}

/// `round(255 * v^(1/gamma))` for `v` in `[0, 1]`.
#[inline]
pub fn quantize_channel(v: f64, gamma: f64) -> Result<u8> {
    if !(0.0..=1.0).contains(&v) {
        return Err(Error::Range { index: 0, value: v });
    }
    Ok(encode_unchecked(v, gamma))
}

#[inline]
fn encode_unchecked(v: f64, gamma: f64) -> u8 {
    let g = if gamma == 1.0 { v } else { v.powf(1.0 / gamma) };
    (255.0 * g).round() as u8
}

fn check_gamma(gamma: f64) -> Result<()> {
    if gamma > 0.0 && gamma.is_finite() {
        Ok(())
    } else {
        Err(Error::Parameter(format!("gamma must be positive, got {gamma}")))
    }
}

/// Quantize every channel of `image`. Values outside `[0, 1]` are an error.
pub fn quantize(image: &DisplayImage, gamma: f64) -> Result<LdrImage> {
    check_gamma(gamma)?;
    if let Some((index, value)) = image
        .pixels()
        .iter()
        .flatten()
        .copied()
        .enumerate()
        .find(|(_, v)| !(0.0..=1.0).contains(v))
    {
        return Err(Error::Range { index, value });
    }
    let pixels = image
        .pixels()
        .par_iter()
        .with_min_len(4096)
        .map(|p| p.map(|v| encode_unchecked(v, gamma)))
        .collect();
    LdrImage::new(image.width(), image.height(), pixels)
}

pub fn encode_ppm(image: &LdrImage) -> Vec<u8> {
    let mut out = format!("P6\n{} {}\n255\n", image.width(), image.height()).into_bytes();
    out.reserve(image.pixels().len() * 3);
    for p in image.pixels() {
        out.extend_from_slice(p);
    }
    out
}

pub fn encode_png(image: &LdrImage) -> Result<Vec<u8>> {
    let mut out = Vec::new();
    {
        let mut encoder = png::Encoder::new(&mut out, image.width() as u32, image.height() as u32);
        encoder.set_color(png::ColorType::Rgb);
        encoder.set_depth(png::BitDepth::Eight);
        let mut writer = encoder.write_header()?;
        let data: Vec<u8> = image.pixels().iter().flatten().copied().collect();
        writer.write_image_data(&data)?;
    }
    Ok(out)
}

/// Quantize `image` with `gamma` and encode it in `format`.
pub fn write_ldr(image: &DisplayImage, gamma: f64, format: OutputFormat) -> Result<Vec<u8>> {
    let ldr = quantize(image, gamma)?;
    match format {
        OutputFormat::Ppm => Ok(encode_ppm(&ldr)),
        OutputFormat::Png => encode_png(&ldr),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn endpoints() {
        assert_eq!(quantize_channel(1.0, 1.0).unwrap(), 255);
        for gamma in [0.5, 1.0, 2.2, 4.0] {
            assert_eq!(quantize_channel(0.0, gamma).unwrap(), 0);
            assert_eq!(quantize_channel(1.0, gamma).unwrap(), 255);
        }
    }

    #[test]
    fn half_at_display_gamma() {
        assert_eq!(quantize_channel(0.5, 2.2).unwrap(), 186);
        assert_eq!(quantize_channel(0.5, 1.0).unwrap(), 128);
    }

    #[test]
    fn out_of_range_values() {
        assert!(quantize_channel(1.0001, 1.0).is_err());
        assert!(quantize_channel(-1e-9, 1.0).is_err());
        assert!(quantize_channel(f64::NAN, 1.0).is_err());
        let img = DisplayImage::new(2, 1, vec![[0.2; 3], [0.1, 1.5, 0.0]]).unwrap();
        assert!(matches!(quantize(&img, 1.0), Err(Error::Range { index: 4, .. })));
        assert!(matches!(quantize(&img, 0.0), Err(Error::Parameter(_))));
    }

    #[test]
    fn ppm_layout() {
        let ldr = LdrImage::new(2, 1, vec![[1, 2, 3], [4, 5, 6]]).unwrap();
        assert_eq!(encode_ppm(&ldr), b"P6\n2 1\n255\n\x01\x02\x03\x04\x05\x06".to_vec());
    }

    #[test]
    fn png_signature() {
        let ldr = LdrImage::new(1, 1, vec![[9, 9, 9]]).unwrap();
        let bytes = encode_png(&ldr).unwrap();
        assert_eq!(&bytes[..8], b"\x89PNG\r\n\x1a\n");
    }

    #[test]
    fn container_from_extension() {
        assert_eq!(OutputFormat::from_path(Path::new("a.PNG")), OutputFormat::Png);
        assert_eq!(OutputFormat::from_path(Path::new("a.ppm")), OutputFormat::Ppm);
        assert_eq!(OutputFormat::from_path(Path::new("a")), OutputFormat::Ppm);
    }
}
