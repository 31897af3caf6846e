//! Distance construction, serialization and fill as one call.

use serde::{Deserialize, Serialize};

use crate::distance::{
    active_boundary, check_admissible, distance_to_active_boundary, distance_to_boundary, harmonic_distance,
    skeleton_distance, AdmissibilityReport, CurveRole, DistanceField, DistanceKind, PixelOrder, StopSetSpec,
};
use crate::domain::InpaintDomain;
use crate::error::{Error, Result};
use crate::guidance::boundary_guidance;
use crate::raster::{PixelCoord, RasterImage};
use crate::transport::{inpaint, FillParams, FillStats, Kernel};

/// Everything that selects a run besides the inputs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RunParams {
    pub distance: DistanceKind,
    #[serde(flatten)]
    pub fill: FillParams,
    /// Active-boundary threshold; only read for [`DistanceKind::ActiveBoundary`].
    #[serde(default = "default_gamma")]
    pub gamma: f64,
}

fn default_gamma() -> f64 {
    0.1
}

impl RunParams {
    pub fn new(distance: DistanceKind, fill: FillParams) -> Self {
        Self {
            distance,
            fill,
            gamma: default_gamma(),
        }
    }

    pub fn with_gamma(mut self, gamma: f64) -> Self {
        self.gamma = gamma;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.fill.validate()?;
        if self.distance == DistanceKind::ActiveBoundary && !(self.gamma > 0.0 && self.gamma <= 1.0) {
            return Err(Error::InvalidParameter(format!("gamma must lie in (0, 1], got {}", self.gamma)));
        }
        Ok(())
    }
}

/// Summary of one run, printed by the CLI and returned by the service.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub distance: DistanceKind,
    pub kernel: Kernel,
    pub epsilon: f64,
    pub mu: f64,
    pub sigma: f64,
    pub rho: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub active_boundary_pixels: Option<usize>,
    pub admissibility: AdmissibilityReport,
    pub pixels_filled: usize,
    pub fallbacks: usize,
    pub isotropic_guidance: usize,
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub field: DistanceField,
    pub report: RunReport,
    /// `None` when the distance field is not admissible.
    pub result: Option<RasterImage>,
}

impl RunOutput {
    pub fn is_admissible(&self) -> bool {
        self.report.admissibility.valid
    }
}

fn curves_for(kind: DistanceKind, curves: Option<&StopSetSpec>, role: CurveRole) -> Result<&StopSetSpec> {
    let curves = curves.ok_or_else(|| Error::InvalidParameter(format!("{} distance needs a curve set", kind.name())))?;
    if curves.role != role {
        return Err(Error::InvalidParameter(format!(
            "{} distance needs {:?} curves, got {:?}",
            kind.name(),
            role,
            curves.role
        )));
    }
    Ok(curves)
}

/// The distance field of the requested kind, plus the active set size for
/// active-boundary distances.
pub fn compute_distance(
    image: &RasterImage,
    domain: &InpaintDomain,
    curves: Option<&StopSetSpec>,
    params: &RunParams,
) -> Result<(DistanceField, Option<Vec<PixelCoord>>)> {
    params.validate()?;
    match params.distance {
        DistanceKind::Boundary => Ok((distance_to_boundary(domain), None)),
        DistanceKind::Harmonic => {
            let stop = curves_for(params.distance, curves, CurveRole::Stop)?;
            Ok((harmonic_distance(domain, stop)?, None))
        }
        DistanceKind::Skeleton => {
            let sk = curves_for(params.distance, curves, CurveRole::Skeleton)?;
            Ok((skeleton_distance(domain, sk)?, None))
        }
        DistanceKind::ActiveBoundary => {
            let guidance = boundary_guidance(image, domain, &params.fill.tensor())?;
            let active = active_boundary(&guidance, params.gamma)?;
            Ok((distance_to_active_boundary(domain, &active)?, Some(active)))
        }
    }
}

/// Builds the distance, checks it, and fills the mask if it is admissible.
pub fn run_pipeline(
    image: &RasterImage,
    domain: &InpaintDomain,
    curves: Option<&StopSetSpec>,
    params: &RunParams,
) -> Result<RunOutput> {
    if image.dims() != domain.dims() {
        return Err(Error::DimensionMismatch {
            expected: image.dims(),
            actual: domain.dims(),
        });
    }
    let (field, active) = compute_distance(image, domain, curves, params)?;
    let admissibility = check_admissible(&field, domain);
    let mut report = RunReport {
        distance: params.distance,
        kernel: params.fill.kernel,
        epsilon: params.fill.epsilon,
        mu: params.fill.mu,
        sigma: params.fill.sigma,
        rho: params.fill.rho,
        gamma: (params.distance == DistanceKind::ActiveBoundary).then_some(params.gamma),
        active_boundary_pixels: active.as_ref().map(Vec::len),
        admissibility,
        pixels_filled: 0,
        fallbacks: 0,
        isotropic_guidance: 0,
    };
    if !report.admissibility.valid {
        return Ok(RunOutput {
            field,
            report,
            result: None,
        });
    }
    let order = PixelOrder::sorted_unchecked(&field, domain);
    let out = inpaint(image, domain, &order, &field, &params.fill)?;
    let FillStats {
        filled,
        fallbacks,
        isotropic,
    } = out.stats;
    report.pixels_filled = filled;
    report.fallbacks = fallbacks;
    report.isotropic_guidance = isotropic;
    Ok(RunOutput {
        field,
        report,
        result: Some(out.image),
    })
}
