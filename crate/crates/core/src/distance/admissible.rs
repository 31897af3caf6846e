use serde::{Deserialize, Serialize};

use crate::domain::InpaintDomain;
use crate::raster::{PixelCoord, EIGHT_NEIGHBORS};

use super::DistanceField;

/// Outcome of the local-minimum check on a distance field.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdmissibilityReport {
    pub valid: bool,
    pub offending_pixels: Vec<PixelCoord>,
}

/// Flags masked pixels that have no 8-neighbor which is either a data pixel
/// or strictly lower in `field`.
///
/// Such a pixel would be reached by the fill before any of its neighbors are
/// known, so a field is admissible iff there are none.
pub fn check_admissible(field: &DistanceField, domain: &InpaintDomain) -> AdmissibilityReport {
    let (w, h) = domain.dims();
    let offending_pixels: Vec<PixelCoord> = domain
        .masked_pixels()
        .filter(|&p| {
            let t = field.value(p);
            !EIGHT_NEIGHBORS.iter().any(|&(di, dj)| {
                p.offset(di, dj, w, h)
                    .is_some_and(|q| domain.is_data(q) || field.value(q) < t)
            })
        })
        .collect();
    AdmissibilityReport {
        valid: offending_pixels.is_empty(),
        offending_pixels,
    }
}
