//! The tone-mapping operator.
//!
//! Luminance is compressed logarithmically and split into `n` equal bins.
//! For each of `s` nested receptive fields every pixel is mapped through the
//! cumulative histogram of its window, the `s` results are blended with
//! variance weights, and color is restored from the input ratios.

mod fusion;
mod local;
mod luminance;
mod params;
mod schedule;

pub use fusion::{fuse_scales, restore_color, restore_pixel, FusionAccumulator, MIN_TOTAL_WEIGHT};
pub use local::{
    tone_map_at_scale, tone_map_at_scale_into, variance_weight, weight_map_at_scale,
    weight_map_at_scale_into, WeightMap,
};
pub use luminance::{compute_bin_edges, log_transform, luminance, rgb_to_luminance, Binning, LogLuminance};
pub use params::{LogFloor, TmoParams, MIN_LOG_FLOOR};
pub use schedule::{make_scale_schedule, max_scales, ReceptiveField, ScaleSchedule};
