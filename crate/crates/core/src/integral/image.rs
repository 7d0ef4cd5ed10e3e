use super::Region;
use crate::error::{Error, Result};
use crate::raster::Plane;

/// Zero-padded summed-area table with `f64` accumulation.
#[derive(Debug, Clone, PartialEq)]
pub struct IntegralImage {
    width: usize,
    height: usize,
    table: Vec<f64>,
}

impl IntegralImage {
    /// Summed-area table of `values`.
    pub fn build(values: &Plane) -> Result<Self> {
        Self::build_mapped(values, |v| v)
    }

    /// Summed-area table of the elementwise square of `values`.
    pub fn build_squared(values: &Plane) -> Result<Self> {
        Self::build_mapped(values, |v| v * v)
    }

    fn build_mapped(values: &Plane, f: impl Fn(f64) -> f64) -> Result<Self> {
        let (width, height) = (values.width(), values.height());
        if let Some(i) = values.as_slice().iter().position(|v| !v.is_finite()) {
            return Err(Error::Contract(format!(
                "non-finite value at ({}, {})",
                i % width,
                i / width
            )));
        }
        let stride = width + 1;
        let mut table = vec![0f64; stride * (height + 1)];
        for y in 0..height {
            let (done, rest) = table.split_at_mut((y + 1) * stride);
            let above = &done[y * stride..];
            let current = &mut rest[..stride];
            let mut run = 0.0;
            for (x, &v) in values.row(y).iter().enumerate() {
                run += f(v);
                current[x + 1] = above[x + 1] + run;
            }
        }
        Ok(Self {
            width,
            height,
            table,
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

    /// Table entry at corner `(x, y)`, `0 <= x <= width`, `0 <= y <= height`.
    #[inline]
    pub fn at(&self, x: usize, y: usize) -> f64 {
        self.table[y * (self.width + 1) + x]
    }

    /// Sum over all source pixels.
    pub fn total(&self) -> f64 {
        self.at(self.width, self.height)
    }

    /// Sum of the source values inside `region`.
    pub fn region_sum(&self, region: &Region) -> Result<f64> {
        region.check(self.width, self.height)?;
        Ok(self.sum_unchecked(region))
    }

    /// Four-corner sum without validating `region`.
    #[inline]
    pub(crate) fn sum_unchecked(&self, r: &Region) -> f64 {
        let stride = self.width + 1;
        let top = r.y0 * stride;
        let bottom = r.y1 * stride;
        let a = self.table[top + r.x0];
        let b = self.table[top + r.x1];
        let c = self.table[bottom + r.x1];
        let d = self.table[bottom + r.x0];
        a + c - b - d
    }
}

/// Population variance `S2/N - (S1/N)^2` of a region, clamped at zero.
///
/// `sums` must be built from a raster and `squares` from its elementwise
/// square.
pub fn region_variance(sums: &IntegralImage, squares: &IntegralImage, region: &Region) -> Result<f64> {
    if sums.width != squares.width || sums.height != squares.height {
        return Err(Error::Contract(format!(
            "integral images differ in size: {}x{} vs {}x{}",
            sums.width, sums.height, squares.width, squares.height
        )));
    }
    region.check(sums.width, sums.height)?;
    Ok(variance_unchecked(sums, squares, region))
}

#[inline]
pub(crate) fn variance_unchecked(sums: &IntegralImage, squares: &IntegralImage, region: &Region) -> f64 {
    let n = region.pixel_count() as f64;
    let mean = sums.sum_unchecked(region) / n;
    let mean_sq = squares.sum_unchecked(region) / n;
    let var = mean_sq - mean * mean;
    // Differences at round-off level of E[x^2] are cancellation noise.
    if var <= VARIANCE_CANCELLATION * mean_sq.abs() {
        0.0
    } else {
        var
    }
}

const VARIANCE_CANCELLATION: f64 = 1e-12;
