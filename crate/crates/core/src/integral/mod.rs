//! Summed-area tables and integral histograms.
//!
//! Both structures use a zero-padded `(H + 1) x (W + 1)` layout so that any
//! rectangle is answered from four corner reads without boundary checks.
//! Corner `(x, y)` holds the accumulation over pixels with column `< x` and
//! row `< y`.

mod histogram;
mod image;
mod region;

pub use histogram::{bin_index, validate_edges, BinMap, IntegralHistogram, MAX_BINS};
pub use image::{region_variance, IntegralImage};
pub(crate) use image::variance_unchecked;
pub use region::Region;
