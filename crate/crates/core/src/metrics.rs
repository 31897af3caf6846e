//! Quality measures for the synthetic cases.

use std::collections::VecDeque;

use crate::domain::InpaintDomain;
use crate::fixtures::SyntheticCase;
use crate::raster::{BoolGrid, PixelCoord, RasterImage, EIGHT_NEIGHBORS};

/// Gray-level difference above which a pixel counts as wrong.
pub const MISMATCH_THRESHOLD: f64 = 32.0;

/// Fraction of `pixels` where some channel differs by more than `threshold`.
pub fn mismatch_fraction(result: &RasterImage, truth: &RasterImage, pixels: &[PixelCoord], threshold: f64) -> f64 {
    if pixels.is_empty() {
        return 0.0;
    }
    let bad = pixels
        .iter()
        .filter(|&&p| {
            result
                .pixel(p)
                .iter()
                .zip(truth.pixel(p))
                .any(|(a, b)| (a - b).abs() > threshold)
        })
        .count();
    bad as f64 / pixels.len() as f64
}

/// Masked pixels within `reach` of the center line of one diagonal, excluding
/// those within `reach` of the other diagonal.
pub fn diagonal_corridor(case: &SyntheticCase, domain: &InpaintDomain, tl2br: bool, reach: f64) -> Vec<PixelCoord> {
    let ci = (case.height as f64 - 1.0) / 2.0;
    let cj = (case.width as f64 - 1.0) / 2.0;
    let across = |p: PixelCoord, own: bool| {
        let (di, dj) = (p.i as f64 - ci, p.j as f64 - cj);
        let off = if own { dj - di } else { dj + di };
        off.abs() / std::f64::consts::SQRT_2
    };
    domain
        .masked_pixels()
        .filter(|&p| across(p, tl2br) <= reach && across(p, !tl2br) > reach)
        .collect()
}

/// Autocorrelation of channel 0 at a vertical lag of `period` rows over pairs
/// `(x, x + period)` with both pixels in `region`. Zero variance scores 0.
pub fn vertical_periodicity(image: &RasterImage, region: &BoolGrid, period: usize) -> f64 {
    let (w, h) = image.dims();
    let mut pairs = Vec::new();
    for i in 0..h.saturating_sub(period) {
        for j in 0..w {
            let (a, b) = (PixelCoord::new(i, j), PixelCoord::new(i + period, j));
            if region.at(a) && region.at(b) {
                pairs.push((image.value(a, 0), image.value(b, 0)));
            }
        }
    }
    if pairs.is_empty() {
        return 0.0;
    }
    let n = pairs.len() as f64;
    let ma = pairs.iter().map(|p| p.0).sum::<f64>() / n;
    let mb = pairs.iter().map(|p| p.1).sum::<f64>() / n;
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for &(a, b) in &pairs {
        sab += (a - ma) * (b - mb);
        saa += (a - ma) * (a - ma);
        sbb += (b - mb) * (b - mb);
    }
    if saa == 0.0 || sbb == 0.0 {
        return 0.0;
    }
    sab / (saa * sbb).sqrt()
}

/// Whether an 8-connected path of pixels with channel 0 at least `threshold`
/// runs from column `from_col` to column `to_col` inside rows `rows`.
pub fn bright_path(image: &RasterImage, rows: std::ops::RangeInclusive<usize>, from_col: usize, to_col: usize, threshold: f64) -> bool {
    let (w, h) = image.dims();
    let ok = |p: PixelCoord| rows.contains(&p.i) && image.value(p, 0) >= threshold;
    let mut seen = BoolGrid::filled(w, h, false);
    let mut queue: VecDeque<PixelCoord> = rows
        .clone()
        .filter(|&i| i < h)
        .map(|i| PixelCoord::new(i, from_col))
        .filter(|&p| ok(p))
        .collect();
    for &p in &queue {
        seen.set(p, true);
    }
    while let Some(p) = queue.pop_front() {
        if p.j == to_col {
            return true;
        }
        for &(di, dj) in &EIGHT_NEIGHBORS {
            if let Some(q) = p.offset(di, dj, w, h) {
                if !seen.at(q) && ok(q) {
                    seen.set(q, true);
                    queue.push_back(q);
                }
            }
        }
    }
    false
}

/// Whether every pixel of `output` off the mask equals `input` bit for bit.
pub fn data_unchanged(input: &RasterImage, output: &RasterImage, domain: &InpaintDomain) -> bool {
    input.dims() == output.dims()
        && input.channels() == output.channels()
        && input
            .dims()
            .0
            .checked_mul(input.dims().1)
            .is_some()
        && (0..input.height()).all(|i| {
            (0..input.width()).all(|j| {
                let p = PixelCoord::new(i, j);
                domain.is_masked(p)
                    || input
                        .pixel(p)
                        .iter()
                        .zip(output.pixel(p))
                        .all(|(a, b)| a.to_bits() == b.to_bits())
            })
        })
}

/// Whether every filled value lies within the range of the data values.
pub fn range_preserved(input: &RasterImage, output: &RasterImage, domain: &InpaintDomain) -> bool {
    let Some((lo, hi)) = input.range_where(|p| domain.is_data(p)) else {
        return false;
    };
    domain
        .masked_pixels()
        .all(|p| output.pixel(p).iter().all(|&v| v >= lo && v <= hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::raster::Grid;

    #[test]
    fn periodicity_of_exact_and_smeared_stripes() {
        let stripes = RasterImage::from_gray(&Grid::from_fn(16, 32, |p| if p.i % 8 < 4 { 255.0 } else { 0.0 })).unwrap();
        let all = BoolGrid::filled(16, 32, true);
        assert!((vertical_periodicity(&stripes, &all, 8) - 1.0).abs() < 1e-12);
        assert!(vertical_periodicity(&stripes, &all, 4) < -0.99);
        let flat = RasterImage::filled(16, 32, 1, 7.0).unwrap();
        assert_eq!(vertical_periodicity(&flat, &all, 8), 0.0);
    }

    #[test]
    fn bright_path_needs_connection() {
        let mut g = Grid::from_fn(10, 5, |p| if p.i == 2 { 255.0 } else { 0.0 });
        let img = RasterImage::from_gray(&g).unwrap();
        assert!(bright_path(&img, 1..=3, 0, 9, 200.0));
        g.set(PixelCoord::new(2, 5), 100.0);
        let img = RasterImage::from_gray(&g).unwrap();
        assert!(!bright_path(&img, 1..=3, 0, 9, 200.0));
        // a diagonal step keeps 8-connectivity
        g.set(PixelCoord::new(1, 5), 255.0);
        let img = RasterImage::from_gray(&g).unwrap();
        assert!(bright_path(&img, 1..=3, 0, 9, 200.0));
    }

    #[test]
    fn mismatch_counts_large_deviations() {
        let a = RasterImage::new(4, 1, 1, vec![0.0, 40.0, 32.0, 255.0]).unwrap();
        let b = RasterImage::filled(4, 1, 1, 0.0).unwrap();
        let px: Vec<_> = (0..4).map(|j| PixelCoord::new(0, j)).collect();
        assert_eq!(mismatch_fraction(&a, &b, &px, MISMATCH_THRESHOLD), 0.5);
    }
}
