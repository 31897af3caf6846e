//! Deterministic synthetic test images.
//!
//! Geometry is laid out relative to the image center `c = (n - 1) / 2` and
//! scaled by `n = min(width, height)`, so the default 64x64 cases and larger
//! variants look alike.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::distance::{DistanceKind, StopCurve, StopSetSpec};
use crate::domain::InpaintDomain;
use crate::error::{Error, Result};
use crate::raster::{BoolGrid, Grid, PixelCoord, RasterImage};

pub const BACKGROUND: f64 = 0.0;
pub const LINE: f64 = 255.0;
/// The dimmer bar of the cross junction.
pub const DIM_BAR: f64 = 160.0;
/// Value on the stop arc of the diagonal cases.
pub const ARC_T: f64 = 127.0;
/// Half-width of the hourglass masks at their waist, relative to the image size.
const WAIST: f64 = 0.09;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CaseKind {
    /// One bright 45° line (top-left to bottom-right) under an hourglass mask
    /// running along it, narrowest at the center.
    Diagonal,
    /// Both 45° lines under the same mask.
    TwoDiagonals,
    /// A bright horizontal bar over a dimmer vertical bar, masked at the crossing
    /// by a horizontal hourglass.
    CrossJunction,
    /// Horizontal stripes under a parallelogram with two sides along the stripes.
    Stripes,
}

impl CaseKind {
    pub const ALL: [CaseKind; 4] = [
        CaseKind::Diagonal,
        CaseKind::TwoDiagonals,
        CaseKind::CrossJunction,
        CaseKind::Stripes,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CaseKind::Diagonal => "diagonal",
            CaseKind::TwoDiagonals => "two-diagonals",
            CaseKind::CrossJunction => "cross-junction",
            CaseKind::Stripes => "stripes",
        }
    }
}

impl fmt::Display for CaseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CaseKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CaseKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown case \"{s}\"")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SyntheticCase {
    pub kind: CaseKind,
    pub width: usize,
    pub height: usize,
    /// Line or bar width in pixels, measured along rows.
    pub line_width: usize,
    /// Stripe period in rows.
    pub period: usize,
}

/// Damaged image, mask and undamaged original.
#[derive(Debug, Clone, PartialEq)]
pub struct Synthetic {
    pub image: RasterImage,
    pub mask: BoolGrid,
    pub truth: RasterImage,
}

impl Synthetic {
    pub fn domain(&self) -> Result<InpaintDomain> {
        InpaintDomain::new(&self.image, &self.mask)
    }
}

impl SyntheticCase {
    /// 64x64 with the default line width of the kind.
    pub fn new(kind: CaseKind) -> Self {
        Self {
            kind,
            width: 64,
            height: 64,
            line_width: match kind {
                CaseKind::CrossJunction => 4,
                _ => 3,
            },
            period: 8,
        }
    }

    pub fn with_size(mut self, width: usize, height: usize) -> Self {
        self.width = width;
        self.height = height;
        self
    }

    fn n(&self) -> f64 {
        self.width.min(self.height) as f64
    }

    fn center(&self) -> (f64, f64) {
        ((self.height as f64 - 1.0) / 2.0, (self.width as f64 - 1.0) / 2.0)
    }

    pub fn validate(&self) -> Result<()> {
        if self.width < 16 || self.height < 16 {
            return Err(Error::InvalidParameter("fixtures need at least 16x16 pixels".into()));
        }
        if self.line_width == 0 || self.period < 2 {
            return Err(Error::InvalidParameter("line width and period must be positive".into()));
        }
        Ok(())
    }

    /// Offsets from the center along (`u`) and across (`v`) the top-left to
    /// bottom-right diagonal, in pixels.
    fn diagonal_coords(&self, p: PixelCoord) -> (f64, f64) {
        let (ci, cj) = self.center();
        let (di, dj) = (p.i as f64 - ci, p.j as f64 - cj);
        ((di + dj) / std::f64::consts::SQRT_2, (dj - di) / std::f64::consts::SQRT_2)
    }

    /// Half-length of the diagonal mask and its half-width at the waist and at the ends.
    fn band(&self) -> (f64, f64, f64) {
        (0.34 * self.n(), WAIST * self.n(), 0.16 * self.n())
    }

    fn band_half_width(&self, u: f64) -> f64 {
        let (hl, waist, end) = self.band();
        waist + (end - waist) * (u.abs() / hl).min(1.0)
    }

    /// On the top-left to bottom-right line.
    pub fn on_tl2br(&self, p: PixelCoord) -> bool {
        let (ci, cj) = self.center();
        let off = (p.j as f64 - cj) - (p.i as f64 - ci);
        off.abs() <= (self.line_width as f64 - 1.0) / 2.0
    }

    /// On the bottom-left to top-right line.
    pub fn on_bl2tr(&self, p: PixelCoord) -> bool {
        let (ci, cj) = self.center();
        let off = (p.j as f64 - cj) + (p.i as f64 - ci);
        off.abs() <= (self.line_width as f64 - 1.0) / 2.0
    }

    fn junction_rows(&self) -> (f64, f64) {
        let (ci, _) = self.center();
        let half = (self.line_width as f64 - 1.0) / 2.0;
        (ci - half, ci + half)
    }

    fn junction_cols(&self) -> (f64, f64) {
        let (_, cj) = self.center();
        let half = (self.line_width as f64 - 1.0) / 2.0;
        (cj - half, cj + half)
    }

    /// Row range `[top, bottom)` of the stripe mask and the column range of its first row.
    fn stripe_mask_geometry(&self) -> (usize, usize, usize, usize) {
        let (ci, cj) = self.center();
        let rows = (0.25 * self.n()).round() as usize;
        let len = (0.625 * self.n()).round() as usize;
        let top = (ci + 0.5) as usize - rows / 2;
        let slant = rows / 2;
        let left = ((cj + 0.5) as usize).saturating_sub((len + slant) / 2);
        (top, top + rows, left, left + len)
    }

    fn in_mask(&self, p: PixelCoord) -> bool {
        match self.kind {
            CaseKind::Diagonal | CaseKind::TwoDiagonals => {
                let (u, v) = self.diagonal_coords(p);
                let (hl, _, _) = self.band();
                u.abs() <= hl && v.abs() <= self.band_half_width(u)
            }
            CaseKind::CrossJunction => {
                let (ci, cj) = self.center();
                // hourglass: narrowest at the crossing, widening toward the ends
                let dj = (p.j as f64 - cj).abs() / (0.31 * self.n());
                let half_height = WAIST + (0.2 - WAIST) * dj;
                dj <= 1.0 && (p.i as f64 - ci).abs() <= half_height * self.n()
            }
            CaseKind::Stripes => {
                let (top, bottom, left, right) = self.stripe_mask_geometry();
                if p.i < top || p.i >= bottom {
                    return false;
                }
                // one column to the right every two rows
                let s = (p.i - top) / 2;
                p.j >= left + s && p.j < right + s
            }
        }
    }

    fn truth_value(&self, p: PixelCoord) -> f64 {
        match self.kind {
            CaseKind::Diagonal => {
                if self.on_tl2br(p) {
                    LINE
                } else {
                    BACKGROUND
                }
            }
            CaseKind::TwoDiagonals => {
                if self.on_tl2br(p) || self.on_bl2tr(p) {
                    LINE
                } else {
                    BACKGROUND
                }
            }
            CaseKind::CrossJunction => {
                let (r0, r1) = self.junction_rows();
                let (c0, c1) = self.junction_cols();
                let (i, j) = (p.i as f64, p.j as f64);
                if i >= r0 && i <= r1 {
                    LINE
                } else if j >= c0 && j <= c1 {
                    DIM_BAR
                } else {
                    BACKGROUND
                }
            }
            CaseKind::Stripes => {
                if p.i % self.period < self.period / 2 {
                    LINE
                } else {
                    BACKGROUND
                }
            }
        }
    }

    /// Image, mask and ground truth. Masked pixels of the damaged image are white.
    pub fn generate(&self) -> Result<Synthetic> {
        self.validate()?;
        let (w, h) = (self.width, self.height);
        let truth = Grid::from_fn(w, h, |p| self.truth_value(p));
        let mask = BoolGrid::from_fn(w, h, |p| self.in_mask(p));
        let damaged = Grid::from_fn(w, h, |p| if mask.at(p) { 255.0 } else { truth.at(p) });
        Ok(Synthetic {
            image: RasterImage::from_gray(&damaged)?,
            mask,
            truth: RasterImage::from_gray(&truth)?,
        })
    }

    /// Prescribed curves that restore the case, if the distance kind takes any.
    ///
    /// Diagonal: an arc across the waist (harmonic, `t = 127`, or as a
    /// skeleton arc). Two diagonals and cross junction: the crossing point.
    /// Stripes: a skeleton segment outside the mask, to the right of it.
    pub fn reference_curves(&self, kind: DistanceKind) -> Option<StopSetSpec> {
        let (ci, cj) = self.center();
        let (ic, jc) = (ci.round() as usize, cj.round() as usize);
        match (self.kind, kind) {
            (CaseKind::Diagonal, DistanceKind::Harmonic | DistanceKind::Skeleton) => {
                // across the waist, two pixels inside each long side
                let hw = self.band_half_width(0.0);
                let reach = ((hw - 2.0) / std::f64::consts::SQRT_2).floor() as usize;
                let (ia, ja) = ((ci + 0.5) as usize, (cj - 0.5) as usize);
                let a = PixelCoord::new(ia + reach, ja - reach);
                let b = PixelCoord::new(ia - reach, ja + reach);
                Some(curves_for(kind, vec![a, b], ARC_T))
            }
            // an arc along either diagonal would sit on it; the crossing point serves both
            (CaseKind::TwoDiagonals | CaseKind::CrossJunction, DistanceKind::Harmonic | DistanceKind::Skeleton) => {
                Some(curves_for(kind, vec![PixelCoord::new(ic, jc)], ARC_T))
            }
            (CaseKind::Stripes, DistanceKind::Skeleton) => {
                let (top, bottom, _, right) = self.stripe_mask_geometry();
                let col = (right + (bottom - top) / 2 + 3).min(self.width - 1);
                let half = bottom - top;
                let a = PixelCoord::new(top.saturating_sub(half / 2), col);
                let b = PixelCoord::new((bottom + half / 2).min(self.height - 1), col);
                Some(StopSetSpec::skeleton(vec![vec![a, b]]))
            }
            _ => None,
        }
    }
}

fn curves_for(kind: DistanceKind, points: Vec<PixelCoord>, t: f64) -> StopSetSpec {
    match kind {
        DistanceKind::Skeleton => StopSetSpec::skeleton(vec![points]),
        _ => StopSetSpec::stop(vec![StopCurve::new(points, t)]),
    }
}

/// Generates the damaged image, mask and ground truth for a case.
pub fn generate_synthetic(case: &SyntheticCase) -> Result<Synthetic> {
    case.generate()
}

/// Three stop arcs in a square domain: two long outer arcs at `t = 250` and a
/// short middle arc at `t3`. A low `t3` makes the middle arc a valley.
pub fn three_arc_case(t3: f64) -> (InpaintDomain, StopSetSpec) {
    let mask = BoolGrid::from_fn(64, 64, |p| (10..55).contains(&p.i) && (10..55).contains(&p.j));
    let domain = InpaintDomain::from_mask(mask).expect("fixed geometry");
    let arc = |j: usize, rows: std::ops::RangeInclusive<usize>, t: f64| {
        StopCurve::new(vec![PixelCoord::new(*rows.start(), j), PixelCoord::new(*rows.end(), j)], t)
    };
    let stop = StopSetSpec::stop(vec![arc(24, 20..=44, 250.0), arc(40, 20..=44, 250.0), arc(32, 28..=36, t3)]);
    (domain, stop)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn damaged_equals_truth_off_the_mask() {
        for kind in CaseKind::ALL {
            let s = SyntheticCase::new(kind).generate().unwrap();
            for i in 0..64 {
                for j in 0..64 {
                    let p = PixelCoord::new(i, j);
                    if !s.mask.at(p) {
                        assert_eq!(s.image.pixel(p), s.truth.pixel(p), "{kind} {p}");
                    }
                }
            }
            assert!(s.domain().is_ok());
        }
    }

    #[test]
    fn diagonal_line_is_three_wide() {
        let s = SyntheticCase::new(CaseKind::Diagonal).generate().unwrap();
        for i in 0..64 {
            let bright = (0..64).filter(|&j| s.truth.value(PixelCoord::new(i, j), 0) == LINE).count();
            assert!((2..=3).contains(&bright), "row {i}: {bright}");
        }
    }

    #[test]
    fn stripes_are_periodic() {
        let case = SyntheticCase::new(CaseKind::Stripes);
        let s = case.generate().unwrap();
        for i in 0..56 {
            for j in 0..64 {
                assert_eq!(s.truth.value(PixelCoord::new(i, j), 0), s.truth.value(PixelCoord::new(i + 8, j), 0));
            }
        }
    }

    #[test]
    fn reference_curves_fit_the_domain() {
        for kind in [CaseKind::Diagonal, CaseKind::TwoDiagonals, CaseKind::CrossJunction] {
            let case = SyntheticCase::new(kind);
            let d = case.generate().unwrap().domain().unwrap();
            let stop = case.reference_curves(DistanceKind::Harmonic).unwrap();
            stop.validate_for_domain(&d).unwrap();
        }
        let case = SyntheticCase::new(CaseKind::Stripes);
        let d = case.generate().unwrap().domain().unwrap();
        let sk = case.reference_curves(DistanceKind::Skeleton).unwrap();
        sk.validate_for_domain(&d).unwrap();
        assert!(sk.rasterize()[0].iter().all(|&p| !d.is_masked(p)));
    }

    #[test]
    fn deterministic() {
        let a = SyntheticCase::new(CaseKind::TwoDiagonals).generate().unwrap();
        let b = SyntheticCase::new(CaseKind::TwoDiagonals).generate().unwrap();
        assert_eq!(a, b);
        assert_eq!("cross-junction".parse::<CaseKind>().unwrap(), CaseKind::CrossJunction);
        assert!("spiral".parse::<CaseKind>().is_err());
    }
}
