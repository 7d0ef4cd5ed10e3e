//! Repeated timing runs.

use std::time::Duration;

use crate::error::{Error, Result};
use crate::hdr_io::HdrImage;
use crate::pipeline::{tone_map_image_with, PipelineOptions, StageTimings};
use crate::tmo::TmoParams;

/// Median of repeated runs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Measurement {
    pub width: usize,
    pub height: usize,
    pub bins: usize,
    pub scales: usize,
    pub median: Duration,
    /// Stage timings of the run whose total is the median.
    pub stages: StageTimings,
}

/// Run the pipeline `warmup + repeats` times and keep the median of the timed runs.
pub fn measure(
    image: &HdrImage,
    params: &TmoParams,
    options: PipelineOptions,
    warmup: usize,
    repeats: usize,
) -> Result<Measurement> {
    let mut m = measure_interleaved(&[(image, *params)], options, warmup, repeats)?;
    Ok(m.remove(0))
}

/// Like [`measure`] for several cases, run round-robin so slow drift in
/// machine load affects every case alike.
pub fn measure_interleaved(
    cases: &[(&HdrImage, TmoParams)],
    options: PipelineOptions,
    warmup: usize,
    repeats: usize,
) -> Result<Vec<Measurement>> {
    if repeats == 0 {
        return Err(Error::Parameter("need at least one timed repeat".into()));
    }
    for (image, params) in cases {
        for _ in 0..warmup {
            tone_map_image_with(image, params, options)?;
        }
    }
    let mut runs = vec![Vec::with_capacity(repeats); cases.len()];
    for _ in 0..repeats {
        for ((image, params), times) in cases.iter().zip(&mut runs) {
            times.push(tone_map_image_with(image, params, options)?.timings);
        }
    }
    Ok(cases
        .iter()
        .zip(runs)
        .map(|((image, params), mut times)| {
            times.sort_by_key(|t| t.total);
            let stages = times[(repeats - 1) / 2];
            Measurement {
                width: image.width(),
                height: image.height(),
                bins: params.bins,
                scales: params.scales,
                median: stages.total,
                stages,
            }
        })
        .collect())
}
