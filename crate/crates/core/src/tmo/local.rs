//! Per-scale local statistics: histogram-adjusted values and variance weights.

use rayon::prelude::*;

use super::{ReceptiveField, TmoParams};
use crate::error::{Error, Result};
use crate::integral::{BinMap, IntegralHistogram, IntegralImage, Region};
use crate::raster::Plane;

/// Per-pixel weights `sigma^2 / (sigma^2 + epsilon)` for one scale, each in `[0, 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightMap(Plane);

impl WeightMap {
    pub fn new(plane: Plane) -> Result<Self> {
        if let Some(&w) = plane.as_slice().iter().find(|w| !(0.0..1.0).contains(*w)) {
            return Err(Error::Contract(format!("weight {w} outside [0, 1)")));
        }
        Ok(Self(plane))
    }

    pub fn plane(&self) -> &Plane {
        &self.0
    }

    pub fn into_plane(self) -> Plane {
        self.0
    }
}

#[inline]
pub fn variance_weight(variance: f64, epsilon: f64) -> f64 {
    variance / (variance + epsilon)
}

/// Histogram-adjusted value of every pixel at one receptive field.
///
/// For each pixel the window histogram gives `P`, the fraction of window
/// pixels in bins strictly below the centre pixel's bin, and the result is
/// `display_min + (display_max - display_min) * P`.
pub fn tone_map_at_scale(
    bins: &BinMap,
    histogram: &IntegralHistogram,
    field: ReceptiveField,
    params: &TmoParams,
) -> Result<Plane> {
    let mut out = Plane::filled(bins.width(), bins.height(), 0.0)?;
    tone_map_at_scale_into(bins, histogram, field, params, &mut out)?;
    Ok(out)
}

/// [`tone_map_at_scale`] writing into an existing raster.
pub fn tone_map_at_scale_into(
    bins: &BinMap,
    histogram: &IntegralHistogram,
    field: ReceptiveField,
    params: &TmoParams,
    out: &mut Plane,
) -> Result<()> {
    let (width, height) = (bins.width(), bins.height());
    if histogram.width() != width
        || histogram.height() != height
        || out.width() != width
        || out.height() != height
    {
        return Err(Error::Contract(format!(
            "size mismatch: bins {width}x{height}, histogram {}x{}, output {}x{}",
            histogram.width(),
            histogram.height(),
            out.width(),
            out.height()
        )));
    }
    if histogram.edges() != bins.edges() {
        return Err(Error::Contract(
            "bin map and integral histogram use different edges".into(),
        ));
    }

    let lo = params.display_min;
    let range = params.display_max - params.display_min;
    out.as_mut_slice()
        .par_chunks_mut(width)
        .enumerate()
        .for_each(|(y, row)| {
            for (x, dst) in row.iter_mut().enumerate() {
                let r = Region::centered(x, y, field.half_w, field.half_h, width, height);
                let below = histogram.count_below_unchecked(&r, bins.get(x, y));
                let p = f64::from(below) / r.pixel_count() as f64;
                *dst = lo + range * p;
            }
        });
    Ok(())
}

/// Variance weight of every pixel at one receptive field.
///
/// `sums` and `squares` are the integral images of the log luminance and
/// of its square.
pub fn weight_map_at_scale(
    sums: &IntegralImage,
    squares: &IntegralImage,
    field: ReceptiveField,
    epsilon: f64,
) -> Result<WeightMap> {
    let mut out = Plane::filled(sums.width(), sums.height(), 0.0)?;
    weight_map_at_scale_into(sums, squares, field, epsilon, &mut out)?;
    Ok(WeightMap(out))
}

/// [`weight_map_at_scale`] writing raw weights into an existing raster.
pub fn weight_map_at_scale_into(
    sums: &IntegralImage,
    squares: &IntegralImage,
    field: ReceptiveField,
    epsilon: f64,
    out: &mut Plane,
) -> Result<()> {
    let (width, height) = (sums.width(), sums.height());
    if squares.width() != width
        || squares.height() != height
        || out.width() != width
        || out.height() != height
    {
        return Err(Error::Contract(format!(
            "size mismatch: sums {width}x{height}, squares {}x{}, output {}x{}",
            squares.width(),
            squares.height(),
            out.width(),
            out.height()
        )));
    }
    if epsilon.is_nan() || epsilon <= 0.0 {
        return Err(Error::Parameter(format!("epsilon must be positive, got {epsilon}")));
    }

    out.as_mut_slice()
        .par_chunks_mut(width)
        .enumerate()
        .for_each(|(y, row)| {
            for (x, dst) in row.iter_mut().enumerate() {
                let r = Region::centered(x, y, field.half_w, field.half_h, width, height);
                let var = crate::integral::variance_unchecked(sums, squares, &r);
                *dst = variance_weight(var, epsilon);
            }
        });
    Ok(())
}
