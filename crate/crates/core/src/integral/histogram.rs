use super::Region;
use crate::error::{Error, Result};
use crate::raster::Plane;

/// Largest supported bin count (bin indices are stored as `u16`).
pub const MAX_BINS: usize = u16::MAX as usize;

/// Check that `edges` describes at least one bin and is finite and strictly increasing.
pub fn validate_edges(edges: &[f64]) -> Result<()> {
    if edges.len() < 2 {
        return Err(Error::Parameter(format!(
            "need at least two bin edges, got {}",
            edges.len()
        )));
    }
    if edges.len() - 1 > MAX_BINS {
        return Err(Error::Parameter(format!(
            "at most {MAX_BINS} bins are supported, got {}",
            edges.len() - 1
        )));
    }
    if edges.iter().any(|e| !e.is_finite()) {
        return Err(Error::Parameter("bin edges must be finite".into()));
    }
    if let Some(w) = edges.windows(2).find(|w| w[0] >= w[1]) {
        return Err(Error::Parameter(format!(
            "bin edges must be strictly increasing, found {} then {}",
            w[0], w[1]
        )));
    }
    Ok(())
}

/// Bin of `v` under half-open intervals `[edges[k], edges[k + 1])`, with the
/// top bin closed above. Values outside the edge range clamp to the end bins.
#[inline]
pub fn bin_index(edges: &[f64], v: f64) -> usize {
    let bins = edges.len() - 1;
    edges.partition_point(|&e| e <= v).clamp(1, bins) - 1
}

/// Per-pixel bin indices of a raster.
#[derive(Debug, Clone, PartialEq)]
pub struct BinMap {
    width: usize,
    height: usize,
    edges: Vec<f64>,
    indices: Vec<u16>,
}

impl BinMap {
    /// Bin every value of `values`; all values must lie within `[edges[0], edges[n]]`.
    pub fn new(values: &Plane, edges: &[f64]) -> Result<Self> {
        validate_edges(edges)?;
        let (lo, hi) = (edges[0], edges[edges.len() - 1]);
        let mut indices = Vec::with_capacity(values.len());
        for (i, &v) in values.as_slice().iter().enumerate() {
            if !(lo..=hi).contains(&v) {
                return Err(Error::Parameter(format!(
                    "value {v} at ({}, {}) lies outside the bin range [{lo}, {hi}]",
                    i % values.width(),
                    i / values.width()
                )));
            }
            indices.push(bin_index(edges, v) as u16);
        }
        Ok(Self {
            width: values.width(),
            height: values.height(),
            edges: edges.to_vec(),
            indices,
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
    pub fn bins(&self) -> usize {
        self.edges.len() - 1
    }

    pub fn edges(&self) -> &[f64] {
        &self.edges
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> usize {
        usize::from(self.indices[y * self.width + x])
    }

    pub fn indices(&self) -> &[u16] {
        &self.indices
    }
}

/// Summed-area tables of the bin-indicator maps, kept in cumulative form.
///
/// Channel `k` (for `k` in `1..n`) at corner `(x, y)` counts the pixels of
/// the rectangle above and left of the corner whose bin is below `k`. Single
/// bin counts are differences of adjacent channels, and "how many pixels
/// fall below bin `k`" is one four-corner lookup whatever `n` is. The
/// channels of one corner are contiguous.
///
/// Counts are exact `u32`s; four-corner combinations use wrapping arithmetic,
/// which is exact because every true region count fits in `u32`.
#[derive(Debug, Clone, PartialEq)]
pub struct IntegralHistogram {
    width: usize,
    height: usize,
    edges: Vec<f64>,
    // `n - 1` channels per corner; channel `k` is stored at index `k - 1`.
    table: Vec<u32>,
}

impl IntegralHistogram {
    /// Bin `values` with `edges` and build the integral histogram.
    pub fn build(values: &Plane, edges: &[f64]) -> Result<Self> {
        Self::from_bin_map(&BinMap::new(values, edges)?)
    }

    pub fn from_bin_map(map: &BinMap) -> Result<Self> {
        let (width, height) = (map.width, map.height);
        let channels = map.bins() - 1;
        if u32::try_from(width * height).is_err() {
            return Err(Error::Dimension(format!(
                "{width}x{height} is too large for 32-bit bin counts"
            )));
        }
        let stride = (width + 1) * channels;
        let mut table = vec![0u32; stride * (height + 1)];
        let mut run = vec![0u32; channels];
        for y in 0..height {
            run.fill(0);
            let (done, rest) = table.split_at_mut((y + 1) * stride);
            let above = &done[y * stride..];
            let current = &mut rest[..stride];
            let row = &map.indices[y * width..(y + 1) * width];
            for (x, &bin) in row.iter().enumerate() {
                for r in &mut run[usize::from(bin)..] {
                    *r += 1;
                }
                let off = (x + 1) * channels;
                for ((dst, &up), &r) in current[off..off + channels]
                    .iter_mut()
                    .zip(&above[off..off + channels])
                    .zip(&run)
                {
                    *dst = up + r;
                }
            }
        }
        Ok(Self {
            width,
            height,
            edges: map.edges.clone(),
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

    #[inline]
    pub fn bins(&self) -> usize {
        self.edges.len() - 1
    }

    pub fn edges(&self) -> &[f64] {
        &self.edges
    }

    /// Count of `bin` in the rectangle above and left of corner `(x, y)`.
    pub fn at(&self, bin: usize, x: usize, y: usize) -> u32 {
        self.below_at(bin + 1, x, y) - self.below_at(bin, x, y)
    }

    /// Full-image pixel count of `bin`.
    pub fn total(&self, bin: usize) -> u32 {
        self.at(bin, self.width, self.height)
    }

    /// Cumulative channel `k` at a corner, with the implicit `0` and `n` channels.
    fn below_at(&self, k: usize, x: usize, y: usize) -> u32 {
        if k == 0 {
            0
        } else if k == self.bins() {
            (x * y) as u32
        } else {
            self.table[self.offset(x, y) + k - 1]
        }
    }

    #[inline]
    fn offset(&self, x: usize, y: usize) -> usize {
        (y * (self.width + 1) + x) * (self.bins() - 1)
    }

    /// Per-bin pixel counts inside `region`.
    pub fn region_histogram(&self, region: &Region) -> Result<Vec<u32>> {
        region.check(self.width, self.height)?;
        let mut counts = vec![0; self.bins()];
        self.histogram_unchecked(region, &mut counts);
        Ok(counts)
    }

    pub(crate) fn histogram_unchecked(&self, r: &Region, out: &mut [u32]) {
        let mut prev = 0;
        for (k, slot) in out.iter_mut().enumerate() {
            let below = self.count_below_unchecked(r, k + 1);
            *slot = below - prev;
            prev = below;
        }
    }

    /// Number of pixels in `region` whose bin is strictly below `bin`.
    pub fn count_below(&self, region: &Region, bin: usize) -> Result<u32> {
        region.check(self.width, self.height)?;
        if bin > self.bins() {
            return Err(Error::Contract(format!(
                "bin {bin} exceeds the bin count {}",
                self.bins()
            )));
        }
        Ok(self.count_below_unchecked(region, bin))
    }

    #[inline]
    pub(crate) fn count_below_unchecked(&self, r: &Region, bin: usize) -> u32 {
        if bin == 0 {
            return 0;
        }
        if bin == self.bins() {
            return r.pixel_count() as u32;
        }
        let k = bin - 1;
        let a = self.table[self.offset(r.x0, r.y0) + k];
        let b = self.table[self.offset(r.x1, r.y0) + k];
        let c = self.table[self.offset(r.x1, r.y1) + k];
        let d = self.table[self.offset(r.x0, r.y1) + k];
        a.wrapping_add(c).wrapping_sub(b).wrapping_sub(d)
    }
}
