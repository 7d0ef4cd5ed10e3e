//! End-to-end tone mapping of an [`HdrImage`].
//!
//! Luminance, log transform and bin edges come first. The integral histogram
//! and the two integral images are then built once and shared by every
//! scale. Scales run one after another, each fully data-parallel, and are
//! folded into a running fusion so only two scale-sized scratch rasters are
//! alive at a time.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hdr_io::{quantize, DisplayImage, HdrImage, LdrImage};
use crate::integral::{BinMap, IntegralHistogram, IntegralImage};
use crate::raster::Plane;
use crate::tmo::{
    compute_bin_edges, log_transform, make_scale_schedule, restore_pixel, rgb_to_luminance,
    tone_map_at_scale_into, weight_map_at_scale_into, Binning, FusionAccumulator, LogLuminance,
    ScaleSchedule, TmoParams, WeightMap,
};

/// Execution settings that do not change the result.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PipelineOptions {
    /// Worker threads; 0 uses the ambient rayon pool.
    pub threads: usize,
}

/// Wall-clock time per stage. Per-scale stages are summed over all scales.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct StageTimings {
    pub luminance: Duration,
    pub log_edges: Duration,
    pub integral_histogram: Duration,
    pub integral_images: Duration,
    pub tone_map: Duration,
    pub weights: Duration,
    pub fusion: Duration,
    pub color_restoration: Duration,
    pub total: Duration,
}

impl StageTimings {
    /// Stage names and durations in pipeline order (total excluded).
    pub fn stages(&self) -> [(&'static str, Duration); 8] {
        [
            ("luminance", self.luminance),
            ("log_edges", self.log_edges),
            ("integral_histogram", self.integral_histogram),
            ("integral_images", self.integral_images),
            ("tone_map", self.tone_map),
            ("weights", self.weights),
            ("fusion", self.fusion),
            ("color_restoration", self.color_restoration),
        ]
    }

    pub fn stage_sum(&self) -> Duration {
        self.stages().iter().map(|(_, d)| *d).sum()
    }

    /// Time spent in the stages repeated once per scale.
    pub fn looped(&self) -> Duration {
        self.tone_map + self.weights + self.fusion
    }

    /// Share of `total` per stage, in percent.
    pub fn percentages(&self) -> [(&'static str, f64); 8] {
        let total = self.total.as_secs_f64().max(f64::MIN_POSITIVE);
        self.stages()
            .map(|(name, d)| (name, 100.0 * d.as_secs_f64() / total))
    }

    /// `name_ms=value` lines, one per stage, then `total_ms`.
    pub fn to_key_value(&self) -> String {
        let mut out = String::new();
        for (name, d) in self.stages() {
            let _ = writeln!(out, "{name}_ms={:.3}", ms(d));
        }
        let _ = writeln!(out, "total_ms={:.3}", ms(self.total));
        out
    }

    pub fn csv_header() -> String {
        let mut cols: Vec<String> = Self::default()
            .stages()
            .iter()
            .map(|(n, _)| format!("{n}_ms"))
            .collect();
        cols.push("total_ms".into());
        cols.join(",")
    }

    pub fn to_csv_row(&self) -> String {
        let mut cols: Vec<String> = self
            .stages()
            .iter()
            .map(|(_, d)| format!("{:.3}", ms(*d)))
            .collect();
        cols.push(format!("{:.3}", ms(self.total)));
        cols.join(",")
    }
}

pub(crate) fn ms(d: Duration) -> f64 {
    d.as_secs_f64() * 1e3
}

/// How many shared integral structures a call built.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BuildCounts {
    pub integral_histograms: usize,
    pub integral_images: usize,
}

#[derive(Debug, Clone)]
pub struct ToneMapOutput {
    /// Color output scaled to `[0, 1]`, before gamma and quantization.
    pub display: DisplayImage,
    pub ldr: LdrImage,
    /// Fused luminance in `[display_min, display_max]`.
    pub luminance: Plane,
    pub schedule: ScaleSchedule,
    /// The log-luminance range had no width; output is a constant mid-range luminance.
    pub degenerate: bool,
    pub builds: BuildCounts,
    pub timings: StageTimings,
}

/// Tone map `image` on the ambient thread pool.
pub fn tone_map_image(image: &HdrImage, params: &TmoParams) -> Result<ToneMapOutput> {
    tone_map_image_with(image, params, PipelineOptions::default())
}

/// Tone map `image` with explicit execution options.
pub fn tone_map_image_with(
    image: &HdrImage,
    params: &TmoParams,
    options: PipelineOptions,
) -> Result<ToneMapOutput> {
    params.validate()?;
    if options.threads == 0 {
        return run(image, params);
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(options.threads)
        .build()
        .map_err(|e| Error::Parameter(format!("cannot start {} workers: {e}", options.threads)))?;
    pool.install(|| run(image, params))
}

struct Prepared {
    luminance: Plane,
    floor: f64,
    log: LogLuminance,
    binning: Binning,
}

fn prepare(image: &HdrImage, params: &TmoParams, t: &mut StageTimings) -> Result<Prepared> {
    let clock = Instant::now();
    let luminance = rgb_to_luminance(image);
    t.luminance = clock.elapsed();

    let clock = Instant::now();
    let floor = params.log_floor.resolve(&luminance);
    let log = log_transform(&luminance, floor)?;
    let binning = compute_bin_edges(&log, params.bins)?;
    t.log_edges = clock.elapsed();

    Ok(Prepared {
        luminance,
        floor,
        log,
        binning,
    })
}

fn run(image: &HdrImage, params: &TmoParams) -> Result<ToneMapOutput> {
    let start = Instant::now();
    let mut t = StageTimings::default();
    let (width, height) = (image.width(), image.height());
    let schedule = make_scale_schedule(width, height, params.scales)?;
    let prep = prepare(image, params, &mut t)?;
    let mut builds = BuildCounts::default();

    let fused = match &prep.binning {
        Binning::Degenerate => {
            let mid = 0.5 * (params.display_min + params.display_max);
            Plane::filled(width, height, mid)?
        }
        Binning::Edges(edges) => {
            let clock = Instant::now();
            let bins = BinMap::new(prep.log.plane(), edges)?;
            let histogram = IntegralHistogram::from_bin_map(&bins)?;
            builds.integral_histograms += 1;
            t.integral_histogram = clock.elapsed();

            let clock = Instant::now();
            let (sums, squares) = rayon::join(
                || IntegralImage::build(prep.log.plane()),
                || IntegralImage::build_squared(prep.log.plane()),
            );
            let (sums, squares) = (sums?, squares?);
            builds.integral_images += 2;
            t.integral_images = clock.elapsed();

            let mut values = Plane::filled(width, height, 0.0)?;
            let mut weights = Plane::filled(width, height, 0.0)?;
            let mut fusion = FusionAccumulator::new(width, height);
            for &field in schedule.fields() {
                let clock = Instant::now();
                tone_map_at_scale_into(&bins, &histogram, field, params, &mut values)?;
                t.tone_map += clock.elapsed();

                let clock = Instant::now();
                weight_map_at_scale_into(&sums, &squares, field, params.epsilon, &mut weights)?;
                t.weights += clock.elapsed();

                let clock = Instant::now();
                fusion.add(&values, &weights)?;
                t.fusion += clock.elapsed();
            }

            let clock = Instant::now();
            let mut fused = fusion.finish()?;
            clamp_in_place(&mut fused, params.display_min, params.display_max);
            t.fusion += clock.elapsed();
            fused
        }
    };

    let clock = Instant::now();
    let (display, ldr) = finish_color(image, &prep.luminance, prep.floor, &fused, params)?;
    t.color_restoration = clock.elapsed();
    t.total = start.elapsed();

    Ok(ToneMapOutput {
        display,
        ldr,
        luminance: fused,
        schedule,
        degenerate: matches!(prep.binning, Binning::Degenerate),
        builds,
        timings: t,
    })
}

fn clamp_in_place(plane: &mut Plane, lo: f64, hi: f64) {
    plane
        .as_mut_slice()
        .par_iter_mut()
        .with_min_len(4096)
        .for_each(|v| *v = v.clamp(lo, hi));
}

/// Color restoration against floored input luminance, then display scaling and quantization.
pub(crate) fn finish_color(
    image: &HdrImage,
    luminance: &Plane,
    floor: f64,
    fused: &Plane,
    params: &TmoParams,
) -> Result<(DisplayImage, LdrImage)> {
    let (sat, scale) = (params.sat, params.display_max);
    let pixels = image
        .pixels()
        .par_iter()
        .with_min_len(4096)
        .zip(luminance.as_slice().par_iter().zip(fused.as_slice()))
        .map(|(&rgb, (&lum, &l_out))| {
            restore_pixel(rgb, lum.max(floor), l_out, sat, scale).map(|v| (v / scale).clamp(0.0, 1.0))
        })
        .collect();
    let display = DisplayImage::new(image.width(), image.height(), pixels)?;
    let ldr = quantize(&display, params.gamma)?;
    Ok((display, ldr))
}

/// Intermediate rasters of every scale, for inspection and testing.
#[derive(Debug, Clone)]
pub struct ScaleMaps {
    pub log: LogLuminance,
    pub binning: Binning,
    /// Bin index of every pixel; empty when the binning is degenerate.
    pub bin_indices: Vec<u16>,
    pub schedule: ScaleSchedule,
    /// Per-scale histogram-adjusted values and weights, largest field first.
    pub scales: Vec<(Plane, WeightMap)>,
}

/// Compute every per-scale value and weight raster without fusing them.
pub fn scale_maps(image: &HdrImage, params: &TmoParams) -> Result<ScaleMaps> {
    params.validate()?;
    let schedule = make_scale_schedule(image.width(), image.height(), params.scales)?;
    let prep = prepare(image, params, &mut StageTimings::default())?;
    let mut scales = Vec::with_capacity(schedule.len());
    let mut bin_indices = Vec::new();
    if let Binning::Edges(edges) = &prep.binning {
        let bins = BinMap::new(prep.log.plane(), edges)?;
        let histogram = IntegralHistogram::from_bin_map(&bins)?;
        let sums = IntegralImage::build(prep.log.plane())?;
        let squares = IntegralImage::build_squared(prep.log.plane())?;
        for &field in schedule.fields() {
            let values = crate::tmo::tone_map_at_scale(&bins, &histogram, field, params)?;
            let weights = crate::tmo::weight_map_at_scale(&sums, &squares, field, params.epsilon)?;
            scales.push((values, weights));
        }
        bin_indices = bins.indices().to_vec();
    }
    Ok(ScaleMaps {
        log: prep.log,
        binning: prep.binning,
        bin_indices,
        schedule,
        scales,
    })
}
