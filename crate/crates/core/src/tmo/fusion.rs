use rayon::prelude::*;

use super::WeightMap;
use crate::error::{Error, Result};
use crate::hdr_io::HdrImage;
use crate::raster::Plane;

/// Below this total weight a pixel falls back to the unweighted mean.
pub const MIN_TOTAL_WEIGHT: f64 = 1e-12;

/// Running weighted sum over scales, so scales can be fused as they are produced.
#[derive(Debug, Clone)]
pub struct FusionAccumulator {
    width: usize,
    height: usize,
    // (sum of w * L, sum of w, sum of L)
    acc: Vec<[f64; 3]>,
    scales: usize,
}

impl FusionAccumulator {
    pub fn new(width: usize, height: usize) -> Self {
        Self {
            width,
            height,
            acc: vec![[0.0; 3]; width * height],
            scales: 0,
        }
    }

    pub fn scales(&self) -> usize {
        self.scales
    }

    /// Add one scale's values and raw weights.
    pub fn add(&mut self, values: &Plane, weights: &Plane) -> Result<()> {
        for p in [values, weights] {
            if p.width() != self.width || p.height() != self.height {
                return Err(Error::Contract(format!(
                    "expected {}x{} rasters, got {}x{}",
                    self.width,
                    self.height,
                    p.width(),
                    p.height()
                )));
            }
        }
        self.acc
            .par_iter_mut()
            .with_min_len(4096)
            .zip(values.as_slice().par_iter().zip(weights.as_slice()))
            .for_each(|(a, (&v, &w))| {
                a[0] += w * v;
                a[1] += w;
                a[2] += v;
            });
        self.scales += 1;
        Ok(())
    }

    /// `sum(w * L) / sum(w)` per pixel, or the mean of `L` where the weights vanish.
    pub fn finish(self) -> Result<Plane> {
        if self.scales == 0 {
            return Err(Error::Contract("no scales to fuse".into()));
        }
        let count = self.scales as f64;
        let data = self
            .acc
            .par_iter()
            .with_min_len(4096)
            .map(|&[num, den, sum]| {
                if den < MIN_TOTAL_WEIGHT {
                    sum / count
                } else {
                    num / den
                }
            })
            .collect();
        Plane::new(self.width, self.height, data)
    }
}

/// Weighted fusion of per-scale values.
pub fn fuse_scales(values: &[Plane], weights: &[WeightMap]) -> Result<Plane> {
    if values.is_empty() || values.len() != weights.len() {
        return Err(Error::Contract(format!(
            "need matching non-empty value and weight lists, got {} and {}",
            values.len(),
            weights.len()
        )));
    }
    let mut acc = FusionAccumulator::new(values[0].width(), values[0].height());
    for (v, w) in values.iter().zip(weights) {
        acc.add(v, w.plane())?;
    }
    acc.finish()
}

/// `c_out = (C_in / L_in)^sat * L_out` per channel, clamped to `[0, display_max]`.
///
/// `l_in` must be positive wherever a channel is non-zero; the floored
/// luminance used for the log transform satisfies this.
pub fn restore_color(
    image: &HdrImage,
    l_in: &Plane,
    l_out: &Plane,
    sat: f64,
    display_max: f64,
) -> Result<Vec<[f64; 3]>> {
    let (width, height) = (image.width(), image.height());
    for p in [l_in, l_out] {
        if p.width() != width || p.height() != height {
            return Err(Error::Contract(format!(
                "expected {width}x{height} luminance, got {}x{}",
                p.width(),
                p.height()
            )));
        }
    }
    let out = image
        .pixels()
        .par_iter()
        .with_min_len(4096)
        .zip(l_in.as_slice().par_iter().zip(l_out.as_slice()))
        .map(|(&rgb, (&lin, &lout))| restore_pixel(rgb, lin, lout, sat, display_max))
        .collect();
    Ok(out)
}

/// [`restore_color`] for one pixel.
#[inline]
pub fn restore_pixel(rgb: [f32; 3], l_in: f64, l_out: f64, sat: f64, display_max: f64) -> [f64; 3] {
    rgb.map(|c| {
        let scaled = if c == 0.0 {
            0.0
        } else if sat == 1.0 {
            f64::from(c) / l_in
        } else {
            (f64::from(c) / l_in).powf(sat)
        };
        (scaled * l_out).clamp(0.0, display_max)
    })
}
