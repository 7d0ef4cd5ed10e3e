use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use tonemap_core::tmo::LogFloor;
use tonemap_core::TmoParams;

use crate::CliError;

/// Tone map wide-dynamic-range images (.hdr / .pfm) to 8-bit PPM or PNG.
///
/// Exit status: 0 on success, 2 when a file cannot be read, decoded or
/// written, 3 for invalid parameters or usage.
#[derive(Debug, Parser)]
#[command(name = "wdr-tonemap", version)]
pub struct Args {
    /// Input radiance map (.hdr or .pfm). Optional in bench mode.
    #[arg(short, long)]
    pub input: Option<PathBuf>,

    /// Output image; `.png` writes PNG, anything else binary PPM.
    #[arg(short, long)]
    pub output: Option<PathBuf>,

    /// Histogram bins (n).
    #[arg(short = 'n', long, default_value_t = 5)]
    pub bins: usize,

    /// Receptive fields (s).
    #[arg(short = 's', long, default_value_t = 5)]
    pub scales: usize,

    /// Variance regularizer.
    #[arg(short, long, default_value_t = 0.1)]
    pub epsilon: f64,

    /// Color saturation exponent in (0, 1].
    #[arg(long, default_value_t = 0.6)]
    pub sat: f64,

    /// Display gamma used when quantizing to 8 bits.
    #[arg(long, default_value_t = 1.0)]
    pub gamma: f64,

    #[arg(long, default_value_t = 0.0)]
    pub display_min: f64,

    #[arg(long, default_value_t = 1.0)]
    pub display_max: f64,

    /// Luminance floor before the log: `rel:F` (fraction of the peak),
    /// `abs:V` or a bare number (absolute).
    #[arg(long, default_value = "rel:1e-6")]
    pub log_floor: String,

    /// Worker threads, 0 for all cores.
    #[arg(short = 'j', long, default_value_t = 0)]
    pub threads: usize,

    /// Print per-stage timings to stdout.
    #[arg(long)]
    pub timing: bool,

    /// Parameter sweep, e.g. `n=3,5,7:eps=0.5,0.1,0.01`.
    #[arg(long, conflicts_with = "bench")]
    pub sweep: Option<String>,

    /// Timing benchmark over resolutions and (n, s) settings.
    #[arg(long)]
    pub bench: bool,

    /// Bench resolutions as HEIGHTxWIDTH.
    #[arg(long, default_value = "480x640,720x1280,1080x1920", requires = "bench")]
    pub resolutions: String,

    /// Bench settings, e.g. `n=3,4,5:s=3,4,5`.
    #[arg(long, default_value = "n=3,4,5:s=3,4,5", requires = "bench")]
    pub bench_grid: String,

    /// Timed repeats per bench cell, after one warm-up run.
    #[arg(long, default_value_t = 5, requires = "bench")]
    pub repeats: usize,

    /// Bench report format.
    #[arg(long, value_enum, default_value_t = ReportFormat::Text, requires = "bench")]
    pub format: ReportFormat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Text,
    Csv,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Mode {
    Single,
    Sweep {
        bins: Vec<usize>,
        epsilons: Vec<f64>,
    },
    Bench {
        /// `(height, width)` pairs.
        resolutions: Vec<(usize, usize)>,
        /// `(n, s)` pairs, s-major as in the report rows.
        grid: Vec<(usize, usize)>,
        repeats: usize,
        format: ReportFormat,
    },
}

/// Validated command line.
#[derive(Debug, Clone, PartialEq)]
pub struct CliConfig {
    pub input: Option<PathBuf>,
    pub output: Option<PathBuf>,
    pub params: TmoParams,
    pub threads: usize,
    pub timing: bool,
    pub mode: Mode,
}

impl CliConfig {
    pub fn from_args(args: Args) -> Result<Self, CliError> {
        let params = TmoParams {
            bins: args.bins,
            scales: args.scales,
            epsilon: args.epsilon,
            sat: args.sat,
            display_min: args.display_min,
            display_max: args.display_max,
            log_floor: parse_log_floor(&args.log_floor)?,
            gamma: args.gamma,
        };
        params.validate()?;

        let mode = if let Some(lists) = &args.sweep {
            let (bins, epsilons) = parse_sweep(lists, &params)?;
            Mode::Sweep { bins, epsilons }
        } else if args.bench {
            if args.repeats == 0 {
                return Err(CliError::Usage("--repeats must be at least 1".into()));
            }
            Mode::Bench {
                resolutions: parse_resolutions(&args.resolutions)?,
                grid: parse_grid(&args.bench_grid)?,
                repeats: args.repeats,
                format: args.format,
            }
        } else {
            Mode::Single
        };

        let non_empty = |p: &Option<PathBuf>| p.as_ref().filter(|p| !p.as_os_str().is_empty()).cloned();
        let (input, output) = (non_empty(&args.input), non_empty(&args.output));
        if !matches!(mode, Mode::Bench { .. }) {
            if input.is_none() {
                return Err(CliError::Usage("--input is required".into()));
            }
            if output.is_none() {
                return Err(CliError::Usage("--output is required".into()));
            }
        }
        Ok(Self {
            input,
            output,
            params,
            threads: args.threads,
            timing: args.timing,
            mode,
        })
    }
}

pub fn parse_log_floor(s: &str) -> Result<LogFloor, CliError> {
    let bad = || CliError::Usage(format!("invalid --log-floor `{s}`"));
    let (kind, value) = match s.split_once(':') {
        Some((kind, value)) => (kind, value),
        None => ("abs", s),
    };
    let v: f64 = value.trim().parse().map_err(|_| bad())?;
    match kind.trim() {
        "rel" => Ok(LogFloor::Relative(v)),
        "abs" => Ok(LogFloor::Absolute(v)),
        _ => Err(bad()),
    }
}

fn parse_list<T: std::str::FromStr>(key: &str, s: &str) -> Result<Vec<T>, CliError> {
    let items: Result<Vec<T>, _> = s.split(',').map(|v| v.trim().parse()).collect();
    match items {
        Ok(v) if !v.is_empty() => Ok(v),
        _ => Err(CliError::Usage(format!("invalid list for `{key}`: `{s}`"))),
    }
}

/// `key=v1,v2:key=...` into named lists.
fn parse_keyed<'a>(s: &'a str, keys: &[&str]) -> Result<Vec<(&'a str, &'a str)>, CliError> {
    let mut out = Vec::new();
    for part in s.split(':').filter(|p| !p.trim().is_empty()) {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("expected key=values, got `{part}`")))?;
        let k = k.trim();
        if !keys.contains(&k) {
            return Err(CliError::Usage(format!(
                "unknown key `{k}`, expected one of {}",
                keys.join(", ")
            )));
        }
        if out.iter().any(|&(seen, _)| seen == k) {
            return Err(CliError::Usage(format!("`{k}` given twice")));
        }
        out.push((k, v));
    }
    Ok(out)
}

/// Sweep lists; a missing key falls back to the single configured value.
pub fn parse_sweep(s: &str, base: &TmoParams) -> Result<(Vec<usize>, Vec<f64>), CliError> {
    let mut bins = vec![base.bins];
    let mut eps = vec![base.epsilon];
    for (k, v) in parse_keyed(s, &["n", "eps"])? {
        match k {
            "n" => bins = parse_list(k, v)?,
            _ => eps = parse_list(k, v)?,
        }
    }
    for &n in &bins {
        TmoParams { bins: n, ..*base }.validate()?;
    }
    for &e in &eps {
        TmoParams { epsilon: e, ..*base }.validate()?;
    }
    Ok((bins, eps))
}

/// `(n, s)` cells ordered by s, then n.
pub fn parse_grid(s: &str) -> Result<Vec<(usize, usize)>, CliError> {
    let mut bins = vec![5];
    let mut scales = vec![5];
    for (k, v) in parse_keyed(s, &["n", "s"])? {
        match k {
            "n" => bins = parse_list(k, v)?,
            _ => scales = parse_list(k, v)?,
        }
    }
    let cells: Vec<(usize, usize)> = scales
        .iter()
        .flat_map(|&s| bins.iter().map(move |&n| (n, s)))
        .collect();
    for &(n, s) in &cells {
        TmoParams {
            bins: n,
            scales: s,
            ..TmoParams::default()
        }
        .validate()?;
    }
    Ok(cells)
}

/// `HxW,HxW,...`.
pub fn parse_resolutions(s: &str) -> Result<Vec<(usize, usize)>, CliError> {
    s.split(',')
        .map(|r| {
            let bad = || CliError::Usage(format!("invalid resolution `{r}`, expected HEIGHTxWIDTH"));
            let (h, w) = r.trim().split_once(['x', 'X']).ok_or_else(bad)?;
            let (h, w): (usize, usize) = (h.parse().map_err(|_| bad())?, w.parse().map_err(|_| bad())?);
            if h < 2 || w < 2 {
                return Err(bad());
            }
            Ok((h, w))
        })
        .collect()
}
