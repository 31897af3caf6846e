//! Level-line overlays for distance fields.

use crate::distance::DistanceField;
use crate::error::{Error, Result};
use crate::raster::{BoolGrid, PixelCoord, RasterImage};

/// Overlay color.
pub const HIGHLIGHT: [f64; 3] = [255.0, 0.0, 0.0];

/// `n` equispaced values strictly between `lo` and `hi`.
pub fn contour_levels(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let step = (hi - lo) / (n as f64 + 1.0);
    (1..=n).map(|k| lo + k as f64 * step).collect()
}

/// Pixels `x` with `T(x) < L <= T(y)` for some level `L` and 4-neighbor `y`.
pub fn contour_markers(field: &DistanceField, levels: &[f64]) -> BoolGrid {
    let (w, h) = field.dims();
    BoolGrid::from_fn(w, h, |x| {
        let tx = field.value(x);
        if !tx.is_finite() {
            return false;
        }
        crate::raster::FOUR_NEIGHBORS.iter().any(|&(di, dj)| {
            x.offset(di, dj, w, h).is_some_and(|y| {
                let ty = field.value(y);
                ty.is_finite() && levels.iter().any(|&l| tx < l && l <= ty)
            })
        })
    })
}

/// RGB copy of `base` with the level lines of `field` drawn in [`HIGHLIGHT`].
/// A constant field has no level lines; the base comes back unchanged.
pub fn render_contours(field: &DistanceField, base: &RasterImage, n_levels: usize) -> Result<RasterImage> {
    if n_levels == 0 {
        return Err(Error::InvalidParameter("need at least one contour level".into()));
    }
    if field.dims() != base.dims() {
        return Err(Error::DimensionMismatch {
            expected: base.dims(),
            actual: field.dims(),
        });
    }
    let mut out = base.to_rgb();
    let finite = field.values().as_slice().iter().copied().filter(|v| v.is_finite());
    let (lo, hi) = finite.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    if !(hi > lo) {
        log::warn!("distance field is constant; no contours drawn");
        return Ok(out);
    }
    let markers = contour_markers(field, &contour_levels(lo, hi, n_levels));
    for p in markers.true_coords().collect::<Vec<PixelCoord>>() {
        out.pixel_mut(p).copy_from_slice(&HIGHLIGHT);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distance::DistanceKind;
    use crate::raster::Grid;

    #[test]
    fn ramp_gives_parallel_lines() {
        let field = DistanceField::new(Grid::from_fn(12, 5, |p| p.j as f64), DistanceKind::Boundary);
        let base = RasterImage::filled(12, 5, 1, 10.0).unwrap();
        let out = render_contours(&field, &base, 5).unwrap();
        // levels 11/6 * k; each is crossed between one pair of columns
        let marked: Vec<usize> = (0..12).filter(|&j| out.pixel(PixelCoord::new(0, j)) == HIGHLIGHT).collect();
        assert_eq!(marked.len(), 5);
        for i in 0..5 {
            for j in 0..12 {
                let px = out.pixel(PixelCoord::new(i, j));
                assert_eq!(marked.contains(&j), px == HIGHLIGHT);
                if !marked.contains(&j) {
                    assert_eq!(px, [10.0, 10.0, 10.0]);
                }
            }
        }
    }

    #[test]
    fn constant_field_leaves_base() {
        let field = DistanceField::new(Grid::filled(4, 4, 2.0), DistanceKind::Boundary);
        let base = RasterImage::filled(4, 4, 3, 10.0).unwrap();
        assert_eq!(render_contours(&field, &base, 3).unwrap(), base);
        assert!(render_contours(&field, &base, 0).is_err());
    }
}
