//! Slow, direct implementations used as test oracles.
//!
//! Nothing here touches the integral structures: every window statistic is
//! an explicit loop over the window's pixels. Border clamping, bin
//! conventions and the degenerate-range rule match the accelerated path so
//! results agree to floating-point round-off.

use crate::error::{Error, Result};
use crate::hdr_io::{quantize, DisplayImage, HdrImage, LdrImage};
use crate::integral::Region;
use crate::raster::Plane;
use crate::tmo::{LogFloor, TmoParams, MIN_LOG_FLOOR, MIN_TOTAL_WEIGHT};

/// Largest side accepted by [`naive_tone_map`].
pub const NAIVE_SIZE_LIMIT: usize = 64;

fn check_region(raster: &Plane, r: &Region) -> Result<()> {
    if r.x0 >= r.x1 || r.y0 >= r.y1 || r.x1 > raster.width() || r.y1 > raster.height() {
        return Err(Error::Contract(format!(
            "region {r:?} is empty or exceeds a {}x{} raster",
            raster.width(),
            raster.height()
        )));
    }
    Ok(())
}

fn region_values<'a>(raster: &'a Plane, r: &'a Region) -> impl Iterator<Item = f64> + 'a {
    (r.y0..r.y1).flat_map(move |y| (r.x0..r.x1).map(move |x| raster.get(x, y)))
}

pub fn naive_region_sum(raster: &Plane, region: &Region) -> Result<f64> {
    check_region(raster, region)?;
    let mut sum = 0.0;
    for v in region_values(raster, region) {
        sum += v;
    }
    Ok(sum)
}

/// Two-pass population variance.
pub fn naive_region_variance(raster: &Plane, region: &Region) -> Result<f64> {
    check_region(raster, region)?;
    let n = region.pixel_count() as f64;
    let mean = region_values(raster, region).sum::<f64>() / n;
    let ss: f64 = region_values(raster, region).map(|v| (v - mean) * (v - mean)).sum();
    Ok(ss / n)
}

/// Linear scan over half-open bins, top bin closed.
pub fn naive_bin(edges: &[f64], v: f64) -> usize {
    let n = edges.len() - 1;
    for k in 0..n {
        let upper_ok = if k + 1 == n { v <= edges[k + 1] } else { v < edges[k + 1] };
        if v >= edges[k] && upper_ok {
            return k;
        }
    }
    if v < edges[0] {
        0
    } else {
        n - 1
    }
}

pub fn naive_region_histogram(raster: &Plane, edges: &[f64], region: &Region) -> Result<Vec<u32>> {
    check_region(raster, region)?;
    if edges.len() < 2 || edges.windows(2).any(|w| w[0] >= w[1] || w[0].is_nan() || w[1].is_nan()) {
        return Err(Error::Parameter("edges must be strictly increasing".into()));
    }
    let mut counts = vec![0u32; edges.len() - 1];
    for v in region_values(raster, region) {
        counts[naive_bin(edges, v)] += 1;
    }
    Ok(counts)
}

/// Equal-width edges over `[lo, hi]`, or `None` for a degenerate range.
pub fn naive_edges(lo: f64, hi: f64, bins: usize) -> Option<Vec<f64>> {
    if lo >= hi {
        return None;
    }
    let step = (hi - lo) / bins as f64;
    let mut edges = Vec::with_capacity(bins + 1);
    for k in 0..bins {
        edges.push(lo + k as f64 * step);
    }
    edges.push(hi);
    for k in 0..bins {
        if edges[k] >= edges[k + 1] {
            return None;
        }
    }
    Some(edges)
}

#[derive(Debug, Clone)]
pub struct ReferenceOutput {
    pub display: DisplayImage,
    pub ldr: LdrImage,
    pub luminance: Plane,
}

/// The full operator with explicit per-pixel window loops.
pub fn naive_tone_map(image: &HdrImage, params: &TmoParams) -> Result<ReferenceOutput> {
    let (width, height) = (image.width(), image.height());
    if width > NAIVE_SIZE_LIMIT || height > NAIVE_SIZE_LIMIT {
        return Err(Error::SizeGuard {
            width,
            height,
            limit: NAIVE_SIZE_LIMIT,
        });
    }
    params.validate()?;
    if width < 2 || height < 2 {
        return Err(Error::Parameter(format!("image must be at least 2x2, got {width}x{height}")));
    }
    if (width >> (params.scales - 1)) < 2 || (height >> (params.scales - 1)) < 2 {
        return Err(Error::Parameter(format!(
            "{} scales are too many for {width}x{height}",
            params.scales
        )));
    }

    let lum: Vec<f64> = image
        .pixels()
        .iter()
        .map(|p| 0.2126 * f64::from(p[0]) + 0.7152 * f64::from(p[1]) + 0.0722 * f64::from(p[2]))
        .collect();
    let floor = match params.log_floor {
        LogFloor::Absolute(v) => v,
        LogFloor::Relative(f) => {
            let mut max = 0.0f64;
            for &v in &lum {
                max = max.max(v);
            }
            (f * max).max(MIN_LOG_FLOOR)
        }
    };
    let log = Plane::new(width, height, lum.iter().map(|&v| v.max(floor).ln()).collect())?;
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for &v in log.as_slice() {
        lo = lo.min(v);
        hi = hi.max(v);
    }

    let fused = match naive_edges(lo, hi, params.bins) {
        None => Plane::filled(width, height, 0.5 * (params.display_min + params.display_max))?,
        Some(edges) => {
            let bin_of: Vec<usize> = log.as_slice().iter().map(|&v| naive_bin(&edges, v)).collect();
            let range = params.display_max - params.display_min;
            let mut data = Vec::with_capacity(width * height);
            for y in 0..height {
                for x in 0..width {
                    let (mut num, mut den, mut sum) = (0.0, 0.0, 0.0);
                    for i in 0..params.scales {
                        let (hw, hh) = (width >> i, height >> i);
                        let xs = x.saturating_sub(hw)..(x + hw + 1).min(width);
                        let ys = y.saturating_sub(hh)..(y + hh + 1).min(height);
                        let centre = bin_of[y * width + x];

                        let mut total = 0u32;
                        let mut below = 0u32;
                        let mut acc = 0.0;
                        for wy in ys.clone() {
                            for wx in xs.clone() {
                                total += 1;
                                if bin_of[wy * width + wx] < centre {
                                    below += 1;
                                }
                                acc += log.get(wx, wy);
                            }
                        }
                        let n = f64::from(total);
                        let mean = acc / n;
                        let mut ss = 0.0;
                        for wy in ys.clone() {
                            for wx in xs.clone() {
                                let d = log.get(wx, wy) - mean;
                                ss += d * d;
                            }
                        }
                        let var = ss / n;
                        let value = params.display_min + range * (f64::from(below) / n);
                        let weight = var / (var + params.epsilon);
                        num += weight * value;
                        den += weight;
                        sum += value;
                    }
                    let l = if den < MIN_TOTAL_WEIGHT {
                        sum / params.scales as f64
                    } else {
                        num / den
                    };
                    data.push(l.clamp(params.display_min, params.display_max));
                }
            }
            Plane::new(width, height, data)?
        }
    };

    let mut pixels = Vec::with_capacity(width * height);
    for (i, rgb) in image.pixels().iter().enumerate() {
        let l_in = lum[i].max(floor);
        let l_out = fused.as_slice()[i];
        let mut px = [0.0; 3];
        for c in 0..3 {
            let ratio = f64::from(rgb[c]) / l_in;
            let v = (ratio.powf(params.sat) * l_out).clamp(0.0, params.display_max);
            px[c] = (v / params.display_max).clamp(0.0, 1.0);
        }
        pixels.push(px);
    }
    let display = DisplayImage::new(width, height, pixels)?;
    let ldr = quantize(&display, params.gamma)?;
    Ok(ReferenceOutput {
        display,
        ldr,
        luminance: fused,
    })
}
