use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hdr_io::HdrImage;
use crate::raster::Plane;

const MIN_PAR_LEN: usize = 4096;

/// Rec. 709 luminance `0.2126 R + 0.7152 G + 0.0722 B`.
#[inline]
pub fn luminance(rgb: [f32; 3]) -> f64 {
    0.2126 * f64::from(rgb[0]) + 0.7152 * f64::from(rgb[1]) + 0.0722 * f64::from(rgb[2])
}

pub fn rgb_to_luminance(image: &HdrImage) -> Plane {
    let data = image
        .pixels()
        .par_iter()
        .with_min_len(MIN_PAR_LEN)
        .map(|&p| luminance(p))
        .collect();
    Plane::new(image.width(), image.height(), data).expect("HdrImage is non-empty")
}

/// Natural log of floored luminance, with cached extrema.
#[derive(Debug, Clone, PartialEq)]
pub struct LogLuminance {
    plane: Plane,
    min: f64,
    max: f64,
}

impl LogLuminance {
    pub fn plane(&self) -> &Plane {
        &self.plane
    }

    pub fn min(&self) -> f64 {
        self.min
    }

    pub fn max(&self) -> f64 {
        self.max
    }

    pub fn width(&self) -> usize {
        self.plane.width()
    }

    pub fn height(&self) -> usize {
        self.plane.height()
    }
}

/// `l = ln(max(lum, floor))`.
pub fn log_transform(luminance: &Plane, floor: f64) -> Result<LogLuminance> {
    if !(floor > 0.0 && floor.is_finite()) {
        return Err(Error::Parameter(format!("log floor must be positive, got {floor}")));
    }
    let data: Vec<f64> = luminance
        .as_slice()
        .par_iter()
        .with_min_len(MIN_PAR_LEN)
        .map(|&v| v.max(floor).ln())
        .collect();
    let plane = Plane::new(luminance.width(), luminance.height(), data)?;
    let (min, max) = plane.extrema();
    if !(min.is_finite() && max.is_finite()) {
        return Err(Error::Contract("luminance must be finite".into()));
    }
    Ok(LogLuminance { plane, min, max })
}

/// Result of dividing the log-luminance range into equal bins.
#[derive(Debug, Clone, PartialEq)]
pub enum Binning {
    /// `n + 1` strictly increasing edges from `l_min` to `l_max`.
    Edges(Vec<f64>),
    /// The range has no width (constant image), or is too narrow to split
    /// into `n` distinct floating-point intervals.
    Degenerate,
}

/// `edges[k] = l_min + k * (l_max - l_min) / n`, with the last edge pinned to `l_max`.
pub fn compute_bin_edges(l: &LogLuminance, bins: usize) -> Result<Binning> {
    bin_edges_for_range(l.min, l.max, bins)
}

pub(crate) fn bin_edges_for_range(lo: f64, hi: f64, bins: usize) -> Result<Binning> {
    if bins < 2 {
        return Err(Error::Parameter(format!("bin count must be at least 2, got {bins}")));
    }
    if lo >= hi {
        return Ok(Binning::Degenerate);
    }
    let step = (hi - lo) / bins as f64;
    let mut edges: Vec<f64> = (0..bins).map(|k| lo + k as f64 * step).collect();
    edges.push(hi);
    if edges.windows(2).any(|w| w[0] >= w[1]) {
        return Ok(Binning::Degenerate);
    }
    Ok(Binning::Edges(edges))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn luminance_examples() {
        assert!((luminance([1.0, 1.0, 1.0]) - 1.0).abs() < 1e-15);
        assert_eq!(luminance([1.0, 0.0, 0.0]), 0.2126);
        assert!((luminance([0.5, 0.25, 0.125]) - 0.294125).abs() < 1e-15);
    }

    #[test]
    fn log_examples() {
        let lum = Plane::from_rows(&[vec![1.0, 0.0]]).unwrap();
        let l = log_transform(&lum, 1e-6).unwrap();
        assert_eq!(l.plane().get(0, 0), 0.0);
        assert!((l.plane().get(1, 0) - (-13.815510557964274)).abs() < 1e-12);
        assert_eq!(l.max(), 0.0);
        assert_eq!(l.min(), 1e-6f64.ln());
        assert!(log_transform(&lum, 0.0).is_err());
    }

    fn edges(lo: f64, hi: f64, n: usize) -> Vec<f64> {
        match bin_edges_for_range(lo, hi, n).unwrap() {
            Binning::Edges(e) => e,
            Binning::Degenerate => panic!("unexpected degenerate range"),
        }
    }

    #[test]
    fn equal_division() {
        let e = edges(0.0, 1.0, 5);
        let expected = [0.0, 0.2, 0.4, 0.6, 0.8, 1.0];
        for (a, b) in e.iter().zip(expected) {
            assert!((a - b).abs() < 1e-15);
        }
        assert_eq!(edges(-2.0, 1.0, 3), vec![-2.0, -1.0, 0.0, 1.0]);
    }

    #[test]
    fn constant_range_is_degenerate() {
        assert_eq!(bin_edges_for_range(0.7, 0.7, 5).unwrap(), Binning::Degenerate);
        let lo = 10.0f64;
        let hi = f64::from_bits(lo.to_bits() + 1);
        assert_eq!(bin_edges_for_range(lo, hi, 5).unwrap(), Binning::Degenerate);
        assert!(bin_edges_for_range(0.0, 1.0, 1).is_err());
    }
}
