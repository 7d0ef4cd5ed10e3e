//! Reading linear radiance maps and writing display-referred 8-bit images.
//!
//! Supported inputs are Radiance RGBE (`.hdr`, flat and run-length encoded
//! scanlines, `-Y H +X W` orientation only) and PFM (`PF` color / `Pf`
//! grayscale, either byte order). Outputs are binary PPM `P6` or PNG.

mod ldr;
mod pfm;
mod rgbe;

use std::path::Path;

use crate::error::{Error, Result};

pub use ldr::{encode_png, encode_ppm, quantize, quantize_channel, write_ldr, OutputFormat};
pub use pfm::{read_pfm, write_pfm, Endian};
pub use rgbe::{decode_rgbe, encode_rgbe, read_radiance_hdr, write_radiance_hdr, ScanlineEncoding};

/// Linear-radiance RGB raster. Every channel is finite and non-negative.
#[derive(Debug, Clone, PartialEq)]
pub struct HdrImage {
    width: usize,
    height: usize,
    pixels: Vec<[f32; 3]>,
}

impl HdrImage {
    pub fn new(width: usize, height: usize, pixels: Vec<[f32; 3]>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::Dimension(format!(
                "image must be non-empty, got {width}x{height}"
            )));
        }
        if pixels.len() != width * height {
            return Err(Error::Dimension(format!(
                "image {width}x{height} needs {} pixels, got {}",
                width * height,
                pixels.len()
            )));
        }
        for (i, px) in pixels.iter().enumerate() {
            for &c in px {
                if !c.is_finite() || c < 0.0 {
                    return Err(Error::InvalidPixel {
                        x: i % width,
                        y: i / width,
                        reason: format!("channel value {c} is not a finite non-negative radiance"),
                    });
                }
            }
        }
        Ok(Self {
            width,
            height,
            pixels,
        })
    }

    pub fn from_fn(
        width: usize,
        height: usize,
        mut f: impl FnMut(usize, usize) -> [f32; 3],
    ) -> Result<Self> {
        let mut pixels = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                pixels.push(f(x, y));
            }
        }
        Self::new(width, height, pixels)
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn pixels(&self) -> &[[f32; 3]] {
        &self.pixels
    }

    #[inline]
    pub fn pixel(&self, x: usize, y: usize) -> [f32; 3] {
        self.pixels[y * self.width + x]
    }

    /// Multiply every channel by `k`.
    pub fn scaled(&self, k: f32) -> Result<Self> {
        let pixels = self
            .pixels
            .iter()
            .map(|p| [p[0] * k, p[1] * k, p[2] * k])
            .collect();
        Self::new(self.width, self.height, pixels)
    }

    /// Nearest-neighbour resample to `width` x `height`.
    pub fn resized_nearest(&self, width: usize, height: usize) -> Result<Self> {
        Self::from_fn(width, height, |x, y| {
            let sx = (x * self.width) / width;
            let sy = (y * self.height) / height;
            self.pixel(sx, sy)
        })
    }
}

/// 8-bit RGB raster in display space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LdrImage {
    width: usize,
    height: usize,
    pixels: Vec<[u8; 3]>,
}

impl LdrImage {
    pub fn new(width: usize, height: usize, pixels: Vec<[u8; 3]>) -> Result<Self> {
        if pixels.len() != width * height {
            return Err(Error::Dimension(format!(
                "image {width}x{height} needs {} pixels, got {}",
                width * height,
                pixels.len()
            )));
        }
        Ok(Self {
            width,
            height,
            pixels,
        })
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn pixels(&self) -> &[[u8; 3]] {
        &self.pixels
    }

    #[inline]
    pub fn pixel(&self, x: usize, y: usize) -> [u8; 3] {
        self.pixels[y * self.width + x]
    }
}

/// Real-valued RGB raster with channels in `[0, 1]`, ready for quantization.
#[derive(Debug, Clone, PartialEq)]
pub struct DisplayImage {
    width: usize,
    height: usize,
    pixels: Vec<[f64; 3]>,
}

impl DisplayImage {
    pub fn new(width: usize, height: usize, pixels: Vec<[f64; 3]>) -> Result<Self> {
        if pixels.len() != width * height {
            return Err(Error::Dimension(format!(
                "image {width}x{height} needs {} pixels, got {}",
                width * height,
                pixels.len()
            )));
        }
        Ok(Self {
            width,
            height,
            pixels,
        })
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn pixels(&self) -> &[[f64; 3]] {
        &self.pixels
    }

    #[inline]
    pub fn pixel(&self, x: usize, y: usize) -> [f64; 3] {
        self.pixels[y * self.width + x]
    }
}

/// Decode a radiance map, picking the decoder from the leading magic bytes.
pub fn decode_hdr(bytes: &[u8]) -> Result<HdrImage> {
    if bytes.starts_with(b"#?") {
        read_radiance_hdr(bytes)
    } else if bytes.starts_with(b"PF") || bytes.starts_with(b"Pf") {
        read_pfm(bytes)
    } else {
        Err(Error::Format(
            "unrecognised file signature (expected `#?RADIANCE`, `#?RGBE`, `PF` or `Pf`)".into(),
        ))
    }
}

/// Read and decode a `.hdr` or `.pfm` file.
pub fn load_hdr(path: impl AsRef<Path>) -> Result<HdrImage> {
    let bytes = std::fs::read(path)?;
    decode_hdr(&bytes)
}

/// Quantize `image` and write it to `path`; the container follows the extension.
pub fn save_ldr(path: impl AsRef<Path>, image: &DisplayImage, gamma: f64) -> Result<()> {
    let path = path.as_ref();
    let format = OutputFormat::from_path(path);
    let bytes = write_ldr(image, gamma, format)?;
    std::fs::write(path, bytes)?;
    Ok(())
}

/// Write an already quantized image to `path`.
pub fn save_ldr_image(path: impl AsRef<Path>, image: &LdrImage) -> Result<()> {
    let path = path.as_ref();
    let bytes = match OutputFormat::from_path(path) {
        OutputFormat::Ppm => encode_ppm(image),
        OutputFormat::Png => encode_png(image)?,
    };
    std::fs::write(path, bytes)?;
    Ok(())
}
