//! Command-line front end for `tonemap-core`: single images, parameter
//! sweeps with a contact sheet, and timing benchmarks.

mod bench;
mod config;
mod sweep;

use std::io::Write;
use std::path::Path;

use tonemap_core::hdr_io::{load_hdr, save_ldr_image};
use tonemap_core::{tone_map_image_with, HdrImage, PipelineOptions};

pub use bench::{format_report, run_bench, BenchReport};
pub use config::{
    parse_grid, parse_log_floor, parse_resolutions, parse_sweep, Args, CliConfig, Mode, ReportFormat,
};
pub use sweep::{cell_path, grid_path, montage, run_sweep};

pub const EXIT_OK: u8 = 0;
pub const EXIT_IO: u8 = 2;
pub const EXIT_PARAMS: u8 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Input {
        path: String,
        source: tonemap_core::Error,
    },
    #[error("cannot write {path}: {source}")]
    Output {
        path: String,
        source: tonemap_core::Error,
    },
    #[error("{0}")]
    Params(#[from] tonemap_core::Error),
    #[error("{0}")]
    Usage(String),
    #[error("cannot write report: {0}")]
    Report(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input { .. } | CliError::Output { .. } | CliError::Report(_) => EXIT_IO,
            CliError::Params(_) | CliError::Usage(_) => EXIT_PARAMS,
        }
    }
}

pub(crate) fn load(path: &Path) -> Result<HdrImage, CliError> {
    load_hdr(path).map_err(|source| CliError::Input {
        path: path.display().to_string(),
        source,
    })
}

pub(crate) fn save(path: &Path, image: &tonemap_core::LdrImage) -> Result<(), CliError> {
    save_ldr_image(path, image).map_err(|source| CliError::Output {
        path: path.display().to_string(),
        source,
    })
}

pub(crate) fn options(config: &CliConfig) -> PipelineOptions {
    PipelineOptions {
        threads: config.threads,
    }
}

/// Tone map one file.
pub fn run_single(config: &CliConfig, out: &mut impl Write) -> Result<(), CliError> {
    let (input, output) = paths(config)?;
    let image = load(input)?;
    let result = tone_map_image_with(&image, &config.params, options(config))?;
    save(output, &result.ldr)?;
    if config.timing {
        write!(out, "{}", result.timings.to_key_value())?;
    }
    Ok(())
}

pub(crate) fn paths(config: &CliConfig) -> Result<(&Path, &Path), CliError> {
    match (&config.input, &config.output) {
        (Some(i), Some(o)) => Ok((i, o)),
        _ => Err(CliError::Usage("--input and --output are required".into())),
    }
}

/// Dispatch on the configured mode. Reports go to `out`.
pub fn run(config: &CliConfig, out: &mut impl Write) -> Result<(), CliError> {
    match &config.mode {
        Mode::Single => run_single(config, out),
        Mode::Sweep { bins, epsilons } => run_sweep(config, bins, epsilons, out),
        Mode::Bench {
            resolutions,
            grid,
            repeats,
            format,
        } => {
            let report = run_bench(config, resolutions, grid, *repeats)?;
            write!(out, "{}", format_report(&report, *format))?;
            Ok(())
        }
    }
}
