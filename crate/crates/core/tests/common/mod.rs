#![allow(dead_code)]

use coherence_inpaint::{BoolGrid, Grid, InpaintDomain, PixelCoord, RasterImage};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A union of random discs and rectangles that keeps a data frame around it.
pub fn random_domain(seed: u64) -> InpaintDomain {
    let mut r = rng(seed);
    let w = r.random_range(16..=64usize);
    let h = r.random_range(16..=64usize);
    let mut mask = BoolGrid::filled(w, h, false);
    let shapes = r.random_range(1..=4);
    for _ in 0..shapes {
        let ci = r.random_range(3.0..h as f64 - 3.0);
        let cj = r.random_range(3.0..w as f64 - 3.0);
        let disc = r.random_bool(0.5);
        let a = r.random_range(2.0..(w.min(h) as f64 / 2.5));
        let b = r.random_range(2.0..(w.min(h) as f64 / 2.5));
        for i in 1..h - 1 {
            for j in 1..w - 1 {
                let (di, dj) = (i as f64 - ci, j as f64 - cj);
                let inside = if disc { di * di + dj * dj <= a * a } else { di.abs() <= a && dj.abs() <= b };
                if inside {
                    mask.set(PixelCoord::new(i, j), true);
                }
            }
        }
    }
    if !mask.as_slice().iter().any(|&m| m) {
        mask.set(PixelCoord::new(h / 2, w / 2), true);
    }
    InpaintDomain::from_mask(mask).expect("random domain keeps a data frame")
}

/// Exact Euclidean distance from each pixel to the nearest seed, by brute force.
pub fn brute_force_distance(w: usize, h: usize, seeds: &[PixelCoord]) -> Grid<f64> {
    Grid::from_fn(w, h, |p| {
        seeds
            .iter()
            .map(|s| {
                let (di, dj) = (p.i as f64 - s.i as f64, p.j as f64 - s.j as f64);
                (di * di + dj * dj).sqrt()
            })
            .fold(f64::INFINITY, f64::min)
    })
}

/// A random gray or RGB image with integer levels.
pub fn random_image(seed: u64, w: usize, h: usize, channels: usize) -> RasterImage {
    let mut r = rng(seed);
    let data = (0..w * h * channels).map(|_| r.random_range(0..=255u8) as f64).collect();
    RasterImage::new(w, h, channels, data).unwrap()
}

/// Smooth RGB scene with edges and texture: sky gradient, sun, hill, textured
/// ground and a dark post.
pub fn synthetic_photo(w: usize, h: usize, seed: u64) -> RasterImage {
    let mut r = rng(seed);
    let noise: Vec<f64> = (0..w * h).map(|_| r.random_range(-12.0..12.0)).collect();
    let mut data = Vec::with_capacity(w * h * 3);
    let (wf, hf) = (w as f64, h as f64);
    for i in 0..h {
        for j in 0..w {
            let (x, y) = (j as f64 / wf, i as f64 / hf);
            let horizon = 0.55 + 0.08 * (6.0 * x).sin();
            let sun = ((x - 0.75).powi(2) + (y - 0.2).powi(2)).sqrt() < 0.08;
            let post = (x - 0.3).abs() < 0.02 && y > horizon - 0.25;
            let px = if post {
                [50.0, 35.0, 25.0]
            } else if sun {
                [250.0, 220.0, 120.0]
            } else if y < horizon {
                [110.0 + 90.0 * y, 150.0 + 70.0 * y, 235.0 - 20.0 * y]
            } else {
                let n = noise[i * w + j];
                let furrow = 18.0 * (40.0 * y + 3.0 * x).sin();
                [70.0 + furrow + n, 120.0 + 0.5 * furrow + n, 40.0 + n]
            };
            data.extend(px.iter().map(|v| v.clamp(0.0, 255.0).round()));
        }
    }
    RasterImage::new(w, h, 3, data).unwrap()
}

const GLYPHS: &[(char, [u8; 7])] = &[
    ('A', [0x0E, 0x11, 0x11, 0x1F, 0x11, 0x11, 0x11]),
    ('E', [0x1F, 0x10, 0x10, 0x1E, 0x10, 0x10, 0x1F]),
    ('I', [0x0E, 0x04, 0x04, 0x04, 0x04, 0x04, 0x0E]),
    ('L', [0x10, 0x10, 0x10, 0x10, 0x10, 0x10, 0x1F]),
    ('M', [0x11, 0x1B, 0x15, 0x15, 0x11, 0x11, 0x11]),
    ('N', [0x11, 0x19, 0x15, 0x13, 0x11, 0x11, 0x11]),
    ('O', [0x0E, 0x11, 0x11, 0x11, 0x11, 0x11, 0x0E]),
    ('P', [0x1E, 0x11, 0x11, 0x1E, 0x10, 0x10, 0x10]),
    ('R', [0x1E, 0x11, 0x11, 0x1E, 0x14, 0x12, 0x11]),
    ('S', [0x0F, 0x10, 0x10, 0x0E, 0x01, 0x01, 0x1E]),
    ('T', [0x1F, 0x04, 0x04, 0x04, 0x04, 0x04, 0x04]),
    ('U', [0x11, 0x11, 0x11, 0x11, 0x11, 0x11, 0x0E]),
];

/// Text drawn with a 5x7 bitmap font at `scale` pixels per dot; each line
/// starts at the given row and column.
pub fn text_mask(w: usize, h: usize, lines: &[(&str, usize, usize)], scale: usize) -> BoolGrid {
    let mut mask = BoolGrid::filled(w, h, false);
    for &(text, top, left) in lines {
        for (k, ch) in text.chars().enumerate() {
            let Some((_, rows)) = GLYPHS.iter().find(|(c, _)| *c == ch) else {
                continue;
            };
            let x0 = left + k * 6 * scale;
            for (gi, bits) in rows.iter().enumerate() {
                for gj in 0..5 {
                    if bits & (0x10 >> gj) == 0 {
                        continue;
                    }
                    for a in 0..scale {
                        for b in 0..scale {
                            let (i, j) = (top + gi * scale + a, x0 + gj * scale + b);
                            if i < h && j < w {
                                mask.set(PixelCoord::new(i, j), true);
                            }
                        }
                    }
                }
            }
        }
    }
    mask
}
