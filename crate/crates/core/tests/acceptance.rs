//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{max_abs_diff, random_plane, random_region, random_wdr};
use tonemap_core::bench::{measure, measure_interleaved, Measurement};
use tonemap_core::hdr_io::{
    decode_hdr, decode_rgbe, encode_rgbe, read_pfm, read_radiance_hdr, write_pfm,
    write_radiance_hdr, Endian, ScanlineEncoding,
};
use tonemap_core::integral::{region_variance, IntegralHistogram, IntegralImage};
use tonemap_core::pipeline::scale_maps;
use tonemap_core::reference::{
    naive_region_histogram, naive_region_sum, naive_region_variance, naive_tone_map,
};
use tonemap_core::synthetic::wdr_scene;
use tonemap_core::tmo::make_scale_schedule;
use tonemap_core::{tone_map_image, tone_map_image_with, HdrImage, PipelineOptions, TmoParams};

type Outcome = Result<String, String>;

struct Criterion {
    name: &'static str,
    budget: Duration,
    check: fn() -> Outcome,
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn integral_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x1a7e);
    let mut queries = 0;
    let (mut worst_sum, mut worst_var) = (0.0f64, 0.0f64);
    for raster in 0..40 {
        let (w, h) = (rng.gen_range(1..=64), rng.gen_range(1..=64));
        let plane = random_plane(&mut rng, w, h, -14.0, 4.0);
        // Edges span the raster's range, with random interior edges.
        let (lo, hi) = plane.extrema();
        let hi = if hi > lo { hi } else { lo + 1.0 };
        let mut edges: Vec<f64> = (0..rng.gen_range(1..=15)).map(|_| rng.gen_range(lo..hi)).collect();
        edges.push(lo);
        edges.push(hi);
        edges.sort_by(f64::total_cmp);
        edges.dedup();
        let sums = IntegralImage::build(&plane).map_err(|e| e.to_string())?;
        let squares = IntegralImage::build_squared(&plane).map_err(|e| e.to_string())?;
        let hist = IntegralHistogram::build(&plane, &edges).map_err(|e| e.to_string())?;
        for _ in 0..30 {
            let r = random_region(&mut rng, w, h);
            let fast = sums.region_sum(&r).map_err(|e| e.to_string())?;
            let slow = naive_region_sum(&plane, &r).map_err(|e| e.to_string())?;
            let rel = (fast - slow).abs() / slow.abs().max(1.0);
            worst_sum = worst_sum.max(rel);
            ensure(rel <= 1e-9, || format!("raster {raster} {r:?}: sum {fast} vs {slow}"))?;

            let fast = hist.region_histogram(&r).map_err(|e| e.to_string())?;
            let slow = naive_region_histogram(&plane, &edges, &r).map_err(|e| e.to_string())?;
            ensure(fast == slow, || format!("raster {raster} {r:?}: histogram {fast:?} vs {slow:?}"))?;

            let fast = region_variance(&sums, &squares, &r).map_err(|e| e.to_string())?;
            let slow = naive_region_variance(&plane, &r).map_err(|e| e.to_string())?;
            worst_var = worst_var.max((fast - slow).abs());
            ensure((fast - slow).abs() <= 1e-7, || {
                format!("raster {raster} {r:?}: variance {fast} vs {slow}")
            })?;
            queries += 1;
        }
    }
    Ok(format!(
        "{queries} queries, worst sum rel err {worst_sum:.1e}, worst variance err {worst_var:.1e}"
    ))
}

fn pipeline_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x0dac1e);
    let mut cases = 0;
    let mut worst = 0.0f64;
    for &bins in &[3, 5, 8] {
        for &scales in &[1, 2, 3] {
            for _ in 0..3 {
                let (w, h) = (rng.gen_range(16..=32), rng.gen_range(16..=32));
                let img = random_wdr(&mut rng, w, h);
                let params = TmoParams {
                    bins,
                    scales,
                    epsilon: [0.5, 0.1, 0.01][cases % 3],
                    ..TmoParams::default()
                };
                let fast = tone_map_image(&img, &params).map_err(|e| e.to_string())?;
                let slow = naive_tone_map(&img, &params).map_err(|e| e.to_string())?;
                let d = max_abs_diff(fast.display.pixels(), slow.display.pixels());
                let dl = fast
                    .luminance
                    .as_slice()
                    .iter()
                    .zip(slow.luminance.as_slice())
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max);
                worst = worst.max(d).max(dl);
                ensure(d <= 1e-6 && dl <= 1e-6, || {
                    format!("{w}x{h} n={bins} s={scales}: display diff {d:.2e}, luminance diff {dl:.2e}")
                })?;
                cases += 1;
            }
        }
    }
    Ok(format!("{cases} rasters, worst per-pixel diff {worst:.1e}"))
}

fn invariants() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x1f);
    let workers = std::thread::available_parallelism().map_or(4, |n| n.get()).max(4);
    let mut checked = 0;
    for case in 0..12 {
        let (w, h) = (rng.gen_range(8..=96), rng.gen_range(8..=96));
        let img = random_wdr(&mut rng, w, h);
        let (lo, hi) = if case % 3 == 2 { (0.1, 0.9) } else { (0.0, 1.0) };
        let params = TmoParams {
            bins: rng.gen_range(2..=12),
            scales: rng.gen_range(1..=3),
            epsilon: 10f64.powf(rng.gen_range(-3.0..0.0)),
            display_min: lo,
            display_max: hi,
            ..TmoParams::default()
        };

        let maps = scale_maps(&img, &params).map_err(|e| e.to_string())?;
        for (i, (values, weights)) in maps.scales.iter().enumerate() {
            ensure(weights.plane().as_slice().iter().all(|&v| (0.0..1.0).contains(&v)), || {
                format!("case {case} scale {i}: weight outside [0, 1)")
            })?;
            ensure(values.as_slice().iter().all(|&v| v >= lo && v < hi), || {
                format!("case {case} scale {i}: value outside [{lo}, {hi})")
            })?;
        }
        let out = tone_map_image(&img, &params).map_err(|e| e.to_string())?;
        ensure(out.luminance.as_slice().iter().all(|&v| v >= lo && v < hi), || {
            format!("case {case}: fused value outside [{lo}, {hi})")
        })?;

        // Exposure scaling by a power of two.
        let k = [0.25f32, 8.0, 1024.0][case % 3];
        let bright = img.scaled(k).map_err(|e| e.to_string())?;
        let maps_k = scale_maps(&bright, &params).map_err(|e| e.to_string())?;
        ensure(maps.bin_indices == maps_k.bin_indices, || {
            format!("case {case}: bin indices change under exposure x{k}")
        })?;
        for (i, (a, b)) in maps.scales.iter().zip(&maps_k.scales).enumerate() {
            ensure(a.0 == b.0, || format!("case {case} scale {i}: values change under exposure x{k}"))?;
        }
        let out_k = tone_map_image(&bright, &params).map_err(|e| e.to_string())?;
        let d = out
            .luminance
            .as_slice()
            .iter()
            .zip(out_k.luminance.as_slice())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        ensure(d <= 1e-9, || format!("case {case}: fused output moves by {d:.2e} under exposure x{k}"))?;
        ensure(max_abs_diff(out.display.pixels(), out_k.display.pixels()) <= 1e-9, || {
            format!("case {case}: display output changes under exposure x{k}")
        })?;

        // Single full-field scale is a global monotone curve.
        let global = TmoParams { scales: 1, ..params };
        let g = tone_map_image(&img, &global).map_err(|e| e.to_string())?;
        let lm = scale_maps(&img, &global).map_err(|e| e.to_string())?;
        let mut order: Vec<usize> = (0..w * h).collect();
        let log = lm.log.plane().as_slice();
        order.sort_by(|&a, &b| log[a].total_cmp(&log[b]));
        let fused = g.luminance.as_slice();
        ensure(order.windows(2).all(|p| fused[p[0]] <= fused[p[1]]), || {
            format!("case {case}: s=1 mapping is not monotone in log luminance")
        })?;

        // Thread-count independence.
        let one = tone_map_image_with(&img, &params, PipelineOptions { threads: 1 })
            .map_err(|e| e.to_string())?;
        let many = tone_map_image_with(&img, &params, PipelineOptions { threads: workers })
            .map_err(|e| e.to_string())?;
        ensure(one.display == many.display && one.ldr == many.ldr && one.luminance == many.luminance, || {
            format!("case {case}: 1 vs {workers} workers differ")
        })?;
        checked += 1;
    }

    for (i, rgb) in [[3.0f32, 1.0, 0.5], [0.0; 3], [1e4, 1e4, 1e4]].into_iter().enumerate() {
        let img = HdrImage::from_fn(17, 9, |_, _| rgb).map_err(|e| e.to_string())?;
        let out = tone_map_image(&img, &TmoParams { scales: 3, ..TmoParams::default() })
            .map_err(|e| e.to_string())?;
        let first = out.display.pixel(0, 0);
        ensure(out.display.pixels().iter().all(|&p| p == first), || {
            format!("constant image {i}: output not constant")
        })?;
        ensure(out.builds.integral_histograms == 0, || {
            format!("constant image {i}: integral structures built for a degenerate range")
        })?;
    }
    Ok(format!(
        "{checked} random rasters (weights, ranges, exposure, s=1 monotonicity, 1 vs {workers} workers) + 3 constant images"
    ))
}

fn schedule_check() -> Outcome {
    let s = make_scale_schedule(2048, 2048, 5).map_err(|e| e.to_string())?;
    let fields: Vec<usize> = s.iter().map(|f| f.half_w).collect();
    let heights: Vec<usize> = s.iter().map(|f| f.half_h).collect();
    ensure(fields == [2048, 1024, 512, 256, 128] && heights == fields, || {
        format!("fields {fields:?} x {heights:?}")
    })?;
    Ok(format!("2048x2048 s=5 -> {fields:?}"))
}

fn bench(width: usize, height: usize, bins: usize, scales: usize) -> Result<Measurement, String> {
    let img = wdr_scene(width, height, 7).map_err(|e| e.to_string())?;
    let params = TmoParams {
        bins,
        scales,
        ..TmoParams::default()
    };
    measure(&img, &params, PipelineOptions::default(), 1, 5).map_err(|e| e.to_string())
}

fn secs(d: Duration) -> f64 {
    d.as_secs_f64()
}

fn scaling_trend() -> Outcome {
    let small_img = wdr_scene(640, 480, 7).map_err(|e| e.to_string())?;
    let large_img = wdr_scene(1920, 1080, 7).map_err(|e| e.to_string())?;
    let with = |bins, scales| TmoParams {
        bins,
        scales,
        ..TmoParams::default()
    };
    let cases = [
        (&small_img, with(5, 5)),
        (&large_img, with(5, 5)),
        (&large_img, with(5, 3)),
        (&large_img, with(3, 5)),
    ];
    let m = measure_interleaved(&cases, PipelineOptions::default(), 1, 5).map_err(|e| e.to_string())?;
    let (small, large, s3, n3) = (m[0], m[1], m[2], m[3]);

    let ratio = secs(large.median) / secs(small.median);
    let s_increase = secs(large.median) / secs(s3.median) - 1.0;
    let n_change = secs(large.median) / secs(n3.median) - 1.0;
    let summary = format!(
        "480x640 {:.3}s, 1080x1920 {:.3}s (ratio {ratio:.2}, pixel ratio 6.75), s 3->5 {:+.0}%, n 3->5 {:+.0}%, {} cores",
        secs(small.median),
        secs(large.median),
        100.0 * s_increase,
        100.0 * n_change,
        std::thread::available_parallelism().map_or(1, |n| n.get()),
    );
    let mut failures = Vec::new();
    if !(6.75 / 1.5..=6.75 * 1.5).contains(&ratio) {
        failures.push(format!("resolution ratio {ratio:.2} outside [4.5, 10.125]"));
    }
    if s_increase > 0.8 {
        failures.push(format!("s 3->5 increase {:.0}% > 80%", 100.0 * s_increase));
    }
    if n_change.abs() > 0.25 {
        failures.push(format!("n 3->5 change {:.0}% beyond 25%", 100.0 * n_change));
    }
    if large.median > Duration::from_secs(2) {
        failures.push(format!("1080x1920 defaults took {:.3}s > 2s", secs(large.median)));
    }
    if failures.is_empty() {
        Ok(summary)
    } else {
        Err(format!("{}; {summary}", failures.join("; ")))
    }
}

fn stage_breakdown() -> Outcome {
    let m = bench(1920, 1080, 5, 5)?;
    let share = secs(m.stages.looped()) / secs(m.stages.total);
    let detail = m
        .stages
        .percentages()
        .iter()
        .map(|(name, p)| format!("{name} {p:.1}%"))
        .collect::<Vec<_>>()
        .join(", ");
    ensure(share > 0.5, || format!("looped stages {:.1}% <= 50% ({detail})", 100.0 * share))?;
    Ok(format!("looped stages {:.1}% of total ({detail})", 100.0 * share))
}

fn random_hdr(rng: &mut impl Rng, width: usize, height: usize) -> HdrImage {
    let runny = rng.gen_bool(0.5);
    let mut last = [0.0f32; 3];
    let pixels = (0..width * height)
        .map(|_| {
            if !(runny && rng.gen_bool(0.7)) {
                let scale = 2f32.powi(rng.gen_range(-20..20));
                last = [0, 1, 2].map(|_| if rng.gen_bool(0.05) { 0.0 } else { rng.gen::<f32>() * scale });
            }
            last
        })
        .collect();
    HdrImage::new(width, height, pixels).unwrap()
}

fn io_roundtrips() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x10);

    // Every normalised RGBE quadruple survives decode/encode.
    let mut quads = 0;
    for e in 1..=255u8 {
        for _ in 0..64 {
            let m = [0, 1, 2].map(|_| rng.gen::<u8>());
            let top = m.iter().copied().max().unwrap();
            if top < 128 {
                continue;
            }
            let q = [m[0], m[1], m[2], e];
            let back = encode_rgbe(decode_rgbe(q));
            ensure(back == q, || format!("rgbe {q:?} -> {back:?}"))?;
            quads += 1;
        }
    }
    ensure(encode_rgbe(decode_rgbe([17, 3, 200, 0])) == [0, 0, 0, 0], || "zero exponent".into())?;

    let mut files = 0;
    for i in 0..40 {
        let (w, h) = (rng.gen_range(1..=80), rng.gen_range(1..=24));
        let img = random_hdr(&mut rng, w, h);

        let flat = write_radiance_hdr(&img, ScanlineEncoding::Flat);
        let rle = write_radiance_hdr(&img, ScanlineEncoding::Rle);
        let a = read_radiance_hdr(&flat).map_err(|e| format!("case {i} flat: {e}"))?;
        let b = read_radiance_hdr(&rle).map_err(|e| format!("case {i} rle: {e}"))?;
        ensure(a == b, || format!("case {i}: flat and RLE decode differently"))?;
        let again = read_radiance_hdr(&write_radiance_hdr(&a, ScanlineEncoding::Rle))
            .map_err(|e| e.to_string())?;
        ensure(again == a, || format!("case {i}: RGBE decode/encode/decode not idempotent"))?;
        let magic = decode_hdr(&rle).map_err(|e| e.to_string())?;
        ensure(magic == b, || format!("case {i}: container sniffing disagrees"))?;

        for endian in [Endian::Little, Endian::Big] {
            let back = read_pfm(&write_pfm(&img, endian)).map_err(|e| e.to_string())?;
            let exact = back
                .pixels()
                .iter()
                .zip(img.pixels())
                .all(|(p, q)| (0..3).all(|c| p[c].to_bits() == q[c].to_bits()));
            ensure(exact && back.width() == w && back.height() == h, || {
                format!("case {i}: PFM {endian:?} round trip not bit-exact")
            })?;
        }

        // Files from an independent encoder, and our files through an independent decoder.
        if (8..=32767).contains(&w) {
            let mut ext = Vec::new();
            let rgb: Vec<image::Rgb<f32>> = img.pixels().iter().map(|&p| image::Rgb(p)).collect();
            image::codecs::hdr::HdrEncoder::new(&mut ext)
                .encode(&rgb, w, h)
                .map_err(|e| e.to_string())?;
            let ours = read_radiance_hdr(&ext).map_err(|e| format!("case {i} external file: {e}"))?;
            let theirs = external_decode(&ext)?;
            ensure(ours.pixels() == theirs.as_slice(), || {
                format!("case {i}: external file decodes differently")
            })?;
            let theirs = external_decode(&rle)?;
            ensure(b.pixels() == theirs.as_slice(), || {
                format!("case {i}: external decoder reads our RLE file differently")
            })?;
        }
        files += 1;
    }
    Ok(format!(
        "{quads} RGBE quadruples, {files} images through flat/RLE RGBE and both PFM byte orders"
    ))
}

fn external_decode(bytes: &[u8]) -> Result<Vec<[f32; 3]>, String> {
    use image::ImageDecoder;
    let dec = image::codecs::hdr::HdrDecoder::new(bytes).map_err(|e| e.to_string())?;
    let mut buf = vec![0u8; dec.total_bytes() as usize];
    dec.read_image(&mut buf).map_err(|e| e.to_string())?;
    Ok(buf
        .chunks_exact(12)
        .map(|c| [0, 1, 2].map(|k| f32::from_ne_bytes(c[4 * k..4 * k + 4].try_into().unwrap())))
        .collect())
}

fn main() -> ExitCode {
    let criteria = [
        Criterion { name: "integral structures match naive oracles", budget: Duration::from_secs(10), check: integral_oracle },
        Criterion { name: "full pipeline matches naive reference", budget: Duration::from_secs(60), check: pipeline_oracle },
        Criterion { name: "operator invariants", budget: Duration::from_secs(30), check: invariants },
        Criterion { name: "receptive-field schedule", budget: Duration::from_secs(1), check: schedule_check },
        Criterion { name: "scaling trend", budget: Duration::from_secs(300), check: scaling_trend },
        Criterion { name: "stage breakdown", budget: Duration::from_secs(300), check: stage_breakdown },
        Criterion { name: "HDR I/O round trips", budget: Duration::from_secs(10), check: io_roundtrips },
    ];

    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let result = std::panic::catch_unwind(c.check).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let result = result.and_then(|msg| {
            if elapsed > c.budget {
                Err(format!("took {:.1}s, budget {}s; {msg}", elapsed.as_secs_f64(), c.budget.as_secs()))
            } else {
                Ok(msg)
            }
        });
        match result {
            Ok(msg) => println!("PASS {} [{:.2}s]: {msg}", c.name, elapsed.as_secs_f64()),
            Err(msg) => {
                failed += 1;
                println!("FAIL {} [{:.2}s]: {msg}", c.name, elapsed.as_secs_f64());
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
