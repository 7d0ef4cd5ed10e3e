#![allow(dead_code)]

use rand::Rng;
use tonemap_core::integral::Region;
use tonemap_core::{HdrImage, Plane};

/// Random raster of values in `[lo, hi)`.
pub fn random_plane(rng: &mut impl Rng, width: usize, height: usize, lo: f64, hi: f64) -> Plane {
    Plane::from_fn(width, height, |_, _| rng.gen_range(lo..hi)).unwrap()
}

/// Random non-empty region inside a `width` x `height` image.
pub fn random_region(rng: &mut impl Rng, width: usize, height: usize) -> Region {
    let (xa, xb) = (rng.gen_range(0..width), rng.gen_range(0..width));
    let (ya, yb) = (rng.gen_range(0..height), rng.gen_range(0..height));
    Region::new(xa.min(xb), ya.min(yb), xa.max(xb) + 1, ya.max(yb) + 1)
}

/// Random wide-dynamic-range radiance map: a smooth log-luminance field
/// over several decades, a few bright blobs, dark pixels and colour casts.
pub fn random_wdr(rng: &mut impl Rng, width: usize, height: usize) -> HdrImage {
    let decades = rng.gen_range(2.0..7.0f64);
    let (gx, gy) = (rng.gen_range(-1.0..1.0f64), rng.gen_range(-1.0..1.0f64));
    let blobs: Vec<(f64, f64, f64, f64)> = (0..rng.gen_range(1..4))
        .map(|_| {
            (
                rng.gen_range(0.0..width as f64),
                rng.gen_range(0.0..height as f64),
                rng.gen_range(1.5..6.0),
                rng.gen_range(1.0..4.0),
            )
        })
        .collect();
    let tint = [rng.gen_range(0.5..1.5), 1.0, rng.gen_range(0.5..1.5)];
    let pixels = (0..width * height)
        .map(|i| {
            let (x, y) = ((i % width) as f64, (i / width) as f64);
            let t = (gx * x / width as f64 + gy * y / height as f64 + 1.0) / 2.0;
            let mut log10 = -2.0 + decades * t + rng.gen_range(-0.3..0.3);
            for &(bx, by, r, boost) in &blobs {
                if (x - bx).powi(2) + (y - by).powi(2) < r * r {
                    log10 += boost;
                }
            }
            if rng.gen_bool(0.02) {
                return [0.0; 3];
            }
            let v = 10f64.powf(log10);
            let jitter = [rng.gen_range(0.8..1.2), 1.0, rng.gen_range(0.8..1.2)];
            [0, 1, 2].map(|c| (v * tint[c] * jitter[c]) as f32)
        })
        .collect();
    HdrImage::new(width, height, pixels).unwrap()
}

pub fn max_abs_diff(a: &[[f64; 3]], b: &[[f64; 3]]) -> f64 {
    a.iter()
        .zip(b)
        .flat_map(|(p, q)| (0..3).map(move |c| (p[c] - q[c]).abs()))
        .fold(0.0, f64::max)
}
