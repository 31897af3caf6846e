//! Generalized distance functions that induce the fill order.
//!
//! Four constructions are available:
//!
//! * [`distance_to_boundary`]: eikonal distance to the discrete boundary;
//! * [`harmonic_distance`]: harmonic interpolation between the boundary and
//!   prescribed stop arcs;
//! * [`distance_to_active_boundary`]: eikonal distance to the part of the
//!   boundary where the image guidance points inward (see [`active_boundary`]);
//! * [`skeleton_distance`]: `max(T*) - T*` for the eikonal distance `T*` to
//!   prescribed skeleton arcs, which may lie outside the mask.
//!
//! Every field must pass [`check_admissible`] before [`serialize_pixels`]
//! turns it into a [`PixelOrder`].

mod admissible;
pub mod fmm;
pub mod harmonic;
mod order;
pub mod stopset;
pub mod tfld;

use serde::{Deserialize, Serialize};

pub use admissible::{check_admissible, AdmissibilityReport};
pub use harmonic::{harmonic_distance, laplacian_residual};
pub use order::{serialize_pixels, OrderEntry, PixelOrder};
pub use stopset::{CurveRole, StopCurve, StopSetSpec};

use crate::domain::InpaintDomain;
use crate::error::{Error, Result};
use crate::guidance::BoundaryGuidance;
use crate::raster::{dot, BoolGrid, Grid, PixelCoord, Vec2};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DistanceKind {
    #[serde(rename = "dtb")]
    Boundary,
    #[serde(rename = "harmonic")]
    Harmonic,
    #[serde(rename = "active-dtb")]
    ActiveBoundary,
    #[serde(rename = "skeleton")]
    Skeleton,
}

impl DistanceKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::Boundary => "dtb",
            Self::Harmonic => "harmonic",
            Self::ActiveBoundary => "active-dtb",
            Self::Skeleton => "skeleton",
        }
    }

    pub(crate) fn code(self) -> u32 {
        match self {
            Self::Boundary => 0,
            Self::Harmonic => 1,
            Self::ActiveBoundary => 2,
            Self::Skeleton => 3,
        }
    }

    pub(crate) fn from_code(code: u32) -> Option<Self> {
        Some(match code {
            0 => Self::Boundary,
            1 => Self::Harmonic,
            2 => Self::ActiveBoundary,
            3 => Self::Skeleton,
            _ => return None,
        })
    }
}

impl std::str::FromStr for DistanceKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "dtb" => Self::Boundary,
            "harmonic" => Self::Harmonic,
            "active-dtb" => Self::ActiveBoundary,
            "skeleton" => Self::Skeleton,
            other => {
                return Err(Error::InvalidParameter(format!(
                    "unknown distance kind {other:?} (expected dtb, harmonic, active-dtb or skeleton)"
                )))
            }
        })
    }
}

/// Per-pixel generalized distance `T_h`.
///
/// Values are defined on the mask. Outside the mask they are `NaN`, except for
/// the skeleton construction which also carries ambient values there.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceField {
    values: Grid<f64>,
    kind: DistanceKind,
}

impl DistanceField {
    pub fn new(values: Grid<f64>, kind: DistanceKind) -> Self {
        Self { values, kind }
    }

    pub fn kind(&self) -> DistanceKind {
        self.kind
    }

    pub fn values(&self) -> &Grid<f64> {
        &self.values
    }

    #[inline]
    pub fn value(&self, p: PixelCoord) -> f64 {
        self.values.at(p)
    }

    pub fn dims(&self) -> (usize, usize) {
        self.values.dims()
    }

    /// Largest value over the mask.
    pub fn max_on(&self, domain: &InpaintDomain) -> f64 {
        domain
            .masked_pixels()
            .map(|p| self.value(p))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Central-difference gradient, falling back to one-sided differences
    /// where a neighbor carries no value (outside the mask or the image).
    pub fn gradient(&self, p: PixelCoord) -> Vec2 {
        let (w, h) = self.values.dims();
        let v = self.value(p);
        let sample = |di: isize, dj: isize| {
            p.offset(di, dj, w, h)
                .map(|q| self.value(q))
                .filter(|x| x.is_finite())
        };
        let diff = |minus: Option<f64>, plus: Option<f64>| match (minus, plus) {
            (Some(a), Some(b)) => 0.5 * (b - a),
            (None, Some(b)) => b - v,
            (Some(a), None) => v - a,
            (None, None) => 0.0,
        };
        [
            diff(sample(-1, 0), sample(1, 0)),
            diff(sample(0, -1), sample(0, 1)),
        ]
    }
}

/// Eikonal distance to the discrete boundary, zero on the boundary itself.
pub fn distance_to_boundary(domain: &InpaintDomain) -> DistanceField {
    let march = fmm::fast_march(domain.mask(), domain.boundary_pixels());
    DistanceField::new(restrict(march.times, domain), DistanceKind::Boundary)
}

/// Boundary pixels where the squared alignment `<g, N>^2` exceeds `gamma`.
pub fn active_boundary(guidance: &BoundaryGuidance, gamma: f64) -> Result<Vec<PixelCoord>> {
    if !(gamma > 0.0 && gamma <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "gamma must lie in (0, 1], got {gamma}"
        )));
    }
    let active: Vec<PixelCoord> = guidance
        .iter()
        .filter(|(_, g, n)| dot(*g, *n).powi(2) > gamma)
        .map(|(p, _, _)| p)
        .collect();
    if active.is_empty() {
        return Err(Error::EmptyActiveBoundary { gamma });
    }
    Ok(active)
}

/// Eikonal distance over the mask seeded only on `active` boundary pixels.
/// Inactive boundary pixels get positive values and are filled like interior pixels.
pub fn distance_to_active_boundary(
    domain: &InpaintDomain,
    active: &[PixelCoord],
) -> Result<DistanceField> {
    if active.is_empty() {
        return Err(Error::EmptyActiveBoundary { gamma: f64::NAN });
    }
    if let Some(&p) = active.iter().find(|&&p| !domain.is_boundary(p)) {
        return Err(Error::InvalidParameter(format!(
            "active pixel {p} is not on the domain boundary"
        )));
    }
    let march = fmm::fast_march(domain.mask(), active.iter().copied());
    let values = restrict(march.times, domain);
    if let Some(p) = domain.masked_pixels().find(|&p| !values.at(p).is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "pixel {p} is not connected to any active boundary pixel"
        )));
    }
    Ok(DistanceField::new(values, DistanceKind::ActiveBoundary))
}

/// `T = max_mask(T*) - T*` where `T*` is the eikonal distance over the whole
/// image to the rasterized skeleton curves.
pub fn skeleton_distance(domain: &InpaintDomain, skeleton: &StopSetSpec) -> Result<DistanceField> {
    skeleton.validate(domain.width(), domain.height())?;
    let seeds: Vec<PixelCoord> = skeleton.rasterize().into_iter().flatten().collect();
    let (w, h) = domain.dims();
    let march = fmm::fast_march(&BoolGrid::filled(w, h, true), seeds);
    let t_max = domain
        .masked_pixels()
        .map(|p| march.times.at(p))
        .fold(f64::NEG_INFINITY, f64::max);
    let values = march.times.map(|&t| t_max - t);
    Ok(DistanceField::new(values, DistanceKind::Skeleton))
}

fn restrict(times: Grid<f64>, domain: &InpaintDomain) -> Grid<f64> {
    let mut times = times;
    for (k, v) in times.as_mut_slice().iter_mut().enumerate() {
        if !domain.mask().as_slice()[k] {
            *v = f64::NAN;
        }
    }
    times
}
