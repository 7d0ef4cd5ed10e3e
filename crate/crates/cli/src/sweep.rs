use std::io::Write;
use std::path::{Path, PathBuf};

use tonemap_core::{tone_map_image_with, LdrImage, TmoParams};

use crate::{load, options, paths, save, CliConfig, CliError};

fn with_suffix(output: &Path, suffix: &str) -> PathBuf {
    let stem = output.file_stem().map(|s| s.to_string_lossy()).unwrap_or_default();
    let name = match output.extension() {
        Some(ext) => format!("{stem}{suffix}.{}", ext.to_string_lossy()),
        None => format!("{stem}{suffix}"),
    };
    output.with_file_name(name)
}

/// `out.ppm` -> `out_n5_eps0.1.ppm`.
pub fn cell_path(output: &Path, bins: usize, epsilon: f64) -> PathBuf {
    with_suffix(output, &format!("_n{bins}_eps{epsilon}"))
}

/// `out.ppm` -> `out_grid.ppm`.
pub fn grid_path(output: &Path) -> PathBuf {
    with_suffix(output, "_grid")
}

/// Tile equally sized images row by row, `columns` per row, without gaps.
pub fn montage(tiles: &[LdrImage], columns: usize) -> Result<LdrImage, CliError> {
    let first = tiles
        .first()
        .ok_or_else(|| CliError::Usage("montage needs at least one image".into()))?;
    let (tw, th) = (first.width(), first.height());
    if columns == 0 || !tiles.len().is_multiple_of(columns) {
        return Err(CliError::Usage(format!(
            "{} tiles do not fill rows of {columns}",
            tiles.len()
        )));
    }
    if tiles.iter().any(|t| t.width() != tw || t.height() != th) {
        return Err(CliError::Usage("montage tiles differ in size".into()));
    }
    let rows = tiles.len() / columns;
    let (w, h) = (tw * columns, th * rows);
    let mut pixels = vec![[0u8; 3]; w * h];
    for (i, tile) in tiles.iter().enumerate() {
        let (ox, oy) = ((i % columns) * tw, (i / columns) * th);
        for y in 0..th {
            let dst = (oy + y) * w + ox;
            pixels[dst..dst + tw].copy_from_slice(&tile.pixels()[y * tw..(y + 1) * tw]);
        }
    }
    Ok(LdrImage::new(w, h, pixels)?)
}

/// One output per `(n, eps)` pair plus a contact sheet with `n` down the
/// rows and `eps` across the columns.
pub fn run_sweep(
    config: &CliConfig,
    bins: &[usize],
    epsilons: &[f64],
    out: &mut impl Write,
) -> Result<(), CliError> {
    if bins.is_empty() || epsilons.is_empty() {
        return Err(CliError::Usage("sweep lists must not be empty".into()));
    }
    let (input, output) = paths(config)?;
    let image = load(input)?;
    let mut tiles = Vec::with_capacity(bins.len() * epsilons.len());
    for &n in bins {
        for &eps in epsilons {
            let params = TmoParams {
                bins: n,
                epsilon: eps,
                ..config.params
            };
            let result = tone_map_image_with(&image, &params, options(config))?;
            save(&cell_path(output, n, eps), &result.ldr)?;
            if config.timing {
                writeln!(out, "# n={n} eps={eps}")?;
                write!(out, "{}", result.timings.to_key_value())?;
            }
            tiles.push(result.ldr);
        }
    }
    save(&grid_path(output), &montage(&tiles, epsilons.len())?)?;
    Ok(())
}
