//! Local histogram-adjustment tone mapping over multiple receptive fields.
//!
//! Each pixel is tone mapped against the cumulative histogram of several
//! nested windows centred on it; the per-window results are blended with
//! weights driven by the local log-luminance variance. Integral histograms
//! and integral images make every window query constant time, so the cost
//! is linear in pixel count.
//!
//! ```no_run
//! use tonemap_core::{hdr_io, pipeline, tmo::TmoParams};
//!
//! let image = hdr_io::load_hdr("memorial.hdr")?;
//! let out = pipeline::tone_map_image(&image, &TmoParams::default())?;
//! hdr_io::save_ldr_image("memorial.ppm", &out.ldr)?;
//! print!("{}", out.timings.to_key_value());
//! # Ok::<(), tonemap_core::Error>(())
//! ```

pub mod bench;
pub mod error;
pub mod hdr_io;
pub mod integral;
pub mod pipeline;
pub mod raster;
pub mod reference;
pub mod synthetic;
pub mod tmo;

pub use error::{Error, Result};
pub use hdr_io::{DisplayImage, HdrImage, LdrImage};
pub use pipeline::{tone_map_image, tone_map_image_with, PipelineOptions, StageTimings, ToneMapOutput};
pub use raster::Plane;
pub use tmo::TmoParams;
