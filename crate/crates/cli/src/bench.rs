use std::fmt::Write as _;

use tonemap_core::bench::{measure_interleaved, Measurement};
use tonemap_core::synthetic::wdr_scene;
use tonemap_core::{StageTimings, TmoParams};

use crate::{load, options, CliConfig, CliError, ReportFormat};

/// Seed of the synthetic scene used when no input is given.
const SCENE_SEED: u64 = 7;
const WARMUP: usize = 1;

#[derive(Debug, Clone)]
pub struct BenchReport {
    /// `(height, width)` columns.
    pub resolutions: Vec<(usize, usize)>,
    /// `(n, s)` rows.
    pub grid: Vec<(usize, usize)>,
    pub repeats: usize,
    /// `cells[row][column]`.
    pub cells: Vec<Vec<Measurement>>,
}

impl BenchReport {
    /// Measurements shown as stage breakdowns: the last cell at the largest
    /// resolution and the first cell at the smallest.
    pub fn extremes(&self) -> Vec<Measurement> {
        let last = *self.cells.last().and_then(|r| r.last()).expect("non-empty report");
        let first = self.cells[0][0];
        if first == last {
            vec![last]
        } else {
            vec![last, first]
        }
    }
}

/// Time the pipeline over `resolutions` x `grid`. Cells of one resolution are
/// run round-robin; each reports the median of `repeats` runs after a warm-up.
pub fn run_bench(
    config: &CliConfig,
    resolutions: &[(usize, usize)],
    grid: &[(usize, usize)],
    repeats: usize,
) -> Result<BenchReport, CliError> {
    if resolutions.is_empty() || grid.is_empty() || repeats == 0 {
        return Err(CliError::Usage("bench needs resolutions, settings and repeats".into()));
    }
    let source = config.input.as_deref().map(load).transpose()?;
    let mut columns = Vec::with_capacity(resolutions.len());
    for &(h, w) in resolutions {
        let image = match &source {
            Some(img) => img.resized_nearest(w, h)?,
            None => wdr_scene(w, h, SCENE_SEED)?,
        };
        let cases: Vec<_> = grid
            .iter()
            .map(|&(bins, scales)| {
                (
                    &image,
                    TmoParams {
                        bins,
                        scales,
                        ..config.params
                    },
                )
            })
            .collect();
        columns.push(measure_interleaved(&cases, options(config), WARMUP, repeats)?);
    }
    let cells = (0..grid.len())
        .map(|row| columns.iter().map(|col| col[row]).collect())
        .collect();
    Ok(BenchReport {
        resolutions: resolutions.to_vec(),
        grid: grid.to_vec(),
        repeats,
        cells,
    })
}

fn ms(m: &Measurement) -> f64 {
    m.median.as_secs_f64() * 1e3
}

pub fn format_report(report: &BenchReport, format: ReportFormat) -> String {
    match format {
        ReportFormat::Text => text(report),
        ReportFormat::Csv => csv(report),
    }
}

fn text(report: &BenchReport) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "Processing time (ms), median of {} runs after {WARMUP} warm-up",
        report.repeats
    );
    let _ = write!(s, "{:>4} {:>4}", "s", "n");
    for (h, w) in &report.resolutions {
        let _ = write!(s, " {:>11}", format!("{h}x{w}"));
    }
    s.push('\n');
    for (&(n, sc), row) in report.grid.iter().zip(&report.cells) {
        let _ = write!(s, "{sc:>4} {n:>4}");
        for m in row {
            let _ = write!(s, " {:>11.1}", ms(m));
        }
        s.push('\n');
    }
    for m in report.extremes() {
        let _ = writeln!(
            s,
            "\nStage breakdown, n={} s={} {}x{} ({:.1} ms)",
            m.bins,
            m.scales,
            m.height,
            m.width,
            ms(&m)
        );
        for (name, pct) in m.stages.percentages() {
            let _ = writeln!(s, "  {name:<20} {pct:>5.1}%");
        }
        let looped = 100.0 * m.stages.looped().as_secs_f64() / m.stages.total.as_secs_f64().max(f64::MIN_POSITIVE);
        let _ = writeln!(s, "  {:<20} {looped:>5.1}%", "per-scale stages");
    }
    s
}

fn csv(report: &BenchReport) -> String {
    let pct_cols: Vec<String> = StageTimings::default()
        .stages()
        .iter()
        .map(|(n, _)| format!("{n}_pct"))
        .collect();
    let mut s = format!(
        "height,width,n,s,median_ms,{},{}\n",
        StageTimings::csv_header(),
        pct_cols.join(",")
    );
    for row in &report.cells {
        for m in row {
            let pcts: Vec<String> = m.stages.percentages().iter().map(|(_, p)| format!("{p:.2}")).collect();
            let _ = writeln!(
                s,
                "{},{},{},{},{:.3},{},{}",
                m.height,
                m.width,
                m.bins,
                m.scales,
                ms(m),
                m.stages.to_csv_row(),
                pcts.join(",")
            );
        }
    }
    s
}
