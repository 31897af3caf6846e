//! Inpainting domain, its discrete boundary, and the averaging ball.

use crate::distance::PixelOrder;
use crate::error::{Error, Result};
use crate::raster::{BoolGrid, PixelCoord, RasterImage, FOUR_NEIGHBORS};

/// The masked pixels `Ω_h` together with their discrete boundary.
///
/// A masked pixel belongs to the boundary when at least one of its in-image
/// 4-neighbors is a data pixel.
#[derive(Debug, Clone, PartialEq)]
pub struct InpaintDomain {
    mask: BoolGrid,
    boundary: BoolGrid,
    inpaint_count: usize,
}

impl InpaintDomain {
    /// Builds the domain for `image` from a boolean mask (true = inpaint).
    pub fn new(image: &RasterImage, mask: &BoolGrid) -> Result<Self> {
        if image.dims() != mask.dims() {
            return Err(Error::DimensionMismatch {
                expected: image.dims(),
                actual: mask.dims(),
            });
        }
        Self::from_mask(mask.clone())
    }

    /// Builds the domain from the mask alone.
    pub fn from_mask(mask: BoolGrid) -> Result<Self> {
        let inpaint_count = mask.count();
        if inpaint_count == 0 {
            return Err(Error::EmptyMask);
        }
        if inpaint_count == mask.width() * mask.height() {
            return Err(Error::NoData);
        }
        let (w, h) = mask.dims();
        let boundary = BoolGrid::from_fn(w, h, |p| {
            mask.at(p)
                && FOUR_NEIGHBORS.iter().any(|&(di, dj)| {
                    p.offset(di, dj, w, h).is_some_and(|q| !mask.at(q))
                })
        });
        Ok(Self {
            mask,
            boundary,
            inpaint_count,
        })
    }

    pub fn mask(&self) -> &BoolGrid {
        &self.mask
    }

    pub fn boundary(&self) -> &BoolGrid {
        &self.boundary
    }

    pub fn inpaint_count(&self) -> usize {
        self.inpaint_count
    }

    pub fn width(&self) -> usize {
        self.mask.width()
    }

    pub fn height(&self) -> usize {
        self.mask.height()
    }

    pub fn dims(&self) -> (usize, usize) {
        self.mask.dims()
    }

    #[inline]
    pub fn is_masked(&self, p: PixelCoord) -> bool {
        self.mask.at(p)
    }

    #[inline]
    pub fn is_boundary(&self, p: PixelCoord) -> bool {
        self.boundary.at(p)
    }

    /// True for in-image pixels outside the mask.
    #[inline]
    pub fn is_data(&self, p: PixelCoord) -> bool {
        !self.mask.at(p)
    }

    pub fn masked_pixels(&self) -> impl Iterator<Item = PixelCoord> + '_ {
        self.mask.true_coords()
    }

    pub fn boundary_pixels(&self) -> impl Iterator<Item = PixelCoord> + '_ {
        self.boundary.true_coords()
    }
}

/// Convenience wrapper for [`InpaintDomain::new`].
pub fn build_domain(image: &RasterImage, mask: &BoolGrid) -> Result<InpaintDomain> {
    InpaintDomain::new(image, mask)
}

/// Integer offsets of the discrete ball of radius `ε`, origin excluded.
#[derive(Debug, Clone, PartialEq)]
pub struct BallStencil {
    radius: f64,
    offsets: Vec<(isize, isize)>,
}

impl BallStencil {
    pub fn new(radius: f64) -> Result<Self> {
        if !(radius >= 1.0) || !radius.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "ball radius must be >= 1, got {radius}"
            )));
        }
        let r = radius.floor() as isize;
        let r2 = radius * radius;
        let mut offsets = Vec::new();
        for di in -r..=r {
            for dj in -r..=r {
                if (di, dj) != (0, 0) && ((di * di + dj * dj) as f64) <= r2 {
                    offsets.push((di, dj));
                }
            }
        }
        Ok(Self { radius, offsets })
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn offsets(&self) -> &[(isize, isize)] {
        &self.offsets
    }

    pub fn len(&self) -> usize {
        self.offsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.offsets.is_empty()
    }
}

pub fn ball_offsets(radius: f64) -> Result<BallStencil> {
    BallStencil::new(radius)
}

/// Ball pixels around the `k`-th (0-based) pixel of `order` that are data
/// pixels or were serialized before it.
pub fn known_before(
    k: usize,
    order: &PixelOrder,
    domain: &InpaintDomain,
    stencil: &BallStencil,
) -> Vec<PixelCoord> {
    let x = order.pixel(k);
    let (w, h) = domain.dims();
    stencil
        .offsets()
        .iter()
        .filter_map(|&(di, dj)| x.offset(di, dj, w, h))
        .filter(|&y| domain.is_data(y) || order.rank(y).is_some_and(|r| r < k))
        .collect()
}
