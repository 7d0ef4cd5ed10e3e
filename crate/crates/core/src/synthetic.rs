//! Deterministic synthetic radiance maps for benchmarks and tests.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::hdr_io::HdrImage;

/// A wide-dynamic-range test scene spanning roughly six decades.
///
/// Bright sky gradient with a sun disc on top, a dim interior with a
/// window, coloured patches and multiplicative sensor-like noise.
pub fn wdr_scene(width: usize, height: usize, seed: u64) -> Result<HdrImage> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (w, h) = (width as f32, height as f32);
    let (sun_x, sun_y, sun_r) = (0.72 * w, 0.18 * h, 0.04 * w.min(h) + 1.0);
    HdrImage::from_fn(width, height, |x, y| {
        let (fx, fy) = (x as f32 / w, y as f32 / h);
        let noise = 1.0 + 0.15 * (rng.gen::<f32>() - 0.5);
        let mut rgb = if fy < 0.4 {
            // sky: ~10^2 .. 10^3
            let v = 10f32.powf(3.0 - 2.5 * fy);
            [0.6 * v, 0.75 * v, v]
        } else {
            // interior: ~10^-2 .. 10^0 with a stripe texture
            let stripes = if ((x / 7) + (y / 11)) % 2 == 0 { 1.0 } else { 0.4 };
            let v = 10f32.powf(-2.0 + 2.0 * (1.0 - fy)) * stripes;
            [v, 0.85 * v, 0.6 * v]
        };
        let (dx, dy) = (x as f32 - sun_x, y as f32 - sun_y);
        if dx * dx + dy * dy < sun_r * sun_r {
            rgb = [5e4, 4.8e4, 4e4];
        }
        if (0.1..0.3).contains(&fx) && (0.55..0.8).contains(&fy) {
            // lit window in the interior wall
            rgb = [40.0 * (1.0 + fx), 30.0, 12.0];
        }
        if (0.6..0.75).contains(&fx) && (0.65..0.9).contains(&fy) {
            rgb = [0.02, 0.2, 0.05];
        }
        rgb.map(|c| c * noise)
    })
}
