//! Prescribed curves: stop arcs for harmonic interpolation and skeleton arcs
//! for the distance-to-skeleton construction.
//!
//! On disk a stop set is a JSON document
//!
//! ```json
//! {"role": "stop", "curves": [{"points": [[10, 12], [30, 40]], "t": 127}]}
//! ```
//!
//! where points are `[i, j]` = (row, column) polyline vertices. `t` is required
//! and positive for the `stop` role and ignored for the `skeleton` role.

use serde::{Deserialize, Serialize};

use crate::domain::InpaintDomain;
use crate::error::{Error, Result};
use crate::raster::PixelCoord;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CurveRole {
    Stop,
    Skeleton,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StopCurve {
    /// Polyline vertices.
    pub points: Vec<PixelCoord>,
    /// Prescribed distance value; unused for skeleton curves.
    pub t: f64,
}

impl StopCurve {
    pub fn new(points: Vec<PixelCoord>, t: f64) -> Self {
        Self { points, t }
    }

    /// Pixels of the polyline, joined by 8-connected digital segments, without repeats.
    pub fn rasterize(&self) -> Vec<PixelCoord> {
        let mut out: Vec<PixelCoord> = Vec::new();
        let push = |p: PixelCoord, out: &mut Vec<PixelCoord>| {
            if !out.contains(&p) {
                out.push(p);
            }
        };
        match self.points.as_slice() {
            [] => {}
            [only] => push(*only, &mut out),
            pts => {
                for seg in pts.windows(2) {
                    for p in digital_segment(seg[0], seg[1]) {
                        push(p, &mut out);
                    }
                }
            }
        }
        out
    }
}

/// Bresenham segment from `a` to `b`, both endpoints included.
pub fn digital_segment(a: PixelCoord, b: PixelCoord) -> Vec<PixelCoord> {
    let (mut i, mut j) = (a.i as i64, a.j as i64);
    let (i1, j1) = (b.i as i64, b.j as i64);
    let di = (i1 - i).abs();
    let dj = -(j1 - j).abs();
    let si = if i < i1 { 1 } else { -1 };
    let sj = if j < j1 { 1 } else { -1 };
    let mut err = di + dj;
    let mut out = Vec::with_capacity((di.max(-dj) + 1) as usize);
    loop {
        out.push(PixelCoord::new(i as usize, j as usize));
        if i == i1 && j == j1 {
            break;
        }
        let e2 = 2 * err;
        if e2 >= dj {
            err += dj;
            i += si;
        }
        if e2 <= di {
            err += di;
            j += sj;
        }
    }
    out
}

/// A validated set of prescribed curves.
#[derive(Debug, Clone, PartialEq)]
pub struct StopSetSpec {
    pub role: CurveRole,
    pub curves: Vec<StopCurve>,
}

impl StopSetSpec {
    pub fn new(role: CurveRole, curves: Vec<StopCurve>) -> Self {
        Self { role, curves }
    }

    pub fn stop(curves: Vec<StopCurve>) -> Self {
        Self::new(CurveRole::Stop, curves)
    }

    pub fn skeleton(curves: Vec<Vec<PixelCoord>>) -> Self {
        Self::new(
            CurveRole::Skeleton,
            curves.into_iter().map(|p| StopCurve::new(p, 0.0)).collect(),
        )
    }

    pub fn is_empty(&self) -> bool {
        self.curves.iter().all(|c| c.points.is_empty())
    }

    /// Rasterized pixels per curve.
    pub fn rasterize(&self) -> Vec<Vec<PixelCoord>> {
        self.curves.iter().map(StopCurve::rasterize).collect()
    }

    /// Checks the invariants that do not depend on the mask: non-empty, all
    /// vertices inside a `width` x `height` image, and `t > 0` for stop curves.
    pub fn validate(&self, width: usize, height: usize) -> Result<()> {
        if self.curves.is_empty() || self.is_empty() {
            return Err(Error::EmptyStopSet);
        }
        for (k, curve) in self.curves.iter().enumerate() {
            if curve.points.is_empty() {
                return Err(Error::StopSetFormat(format!("curve {k} has no points")));
            }
            if let Some(&p) = curve.points.iter().find(|p| p.i >= height || p.j >= width) {
                return Err(Error::CurveOutsideImage { curve: k, pixel: p });
            }
            if self.role == CurveRole::Stop && !(curve.t > 0.0 && curve.t.is_finite()) {
                return Err(Error::NonPositiveDistance { curve: k, t: curve.t });
            }
        }
        Ok(())
    }

    /// Stop curves must lie in the interior of the inpainting domain.
    /// Skeleton curves may lie anywhere in the image.
    pub fn validate_for_domain(&self, domain: &InpaintDomain) -> Result<()> {
        self.validate(domain.width(), domain.height())?;
        if self.role == CurveRole::Skeleton {
            return Ok(());
        }
        for (k, pixels) in self.rasterize().iter().enumerate() {
            for &p in pixels {
                if !domain.is_masked(p) {
                    return Err(Error::CurveOutsideDomain { curve: k, pixel: p });
                }
                if domain.is_boundary(p) {
                    return Err(Error::CurveOnBoundary { curve: k, pixel: p });
                }
            }
        }
        Ok(())
    }

    pub fn to_document(&self) -> StopSetDocument {
        StopSetDocument {
            role: self.role,
            curves: self
                .curves
                .iter()
                .map(|c| CurveDocument {
                    points: c.points.iter().map(|p| [p.i as i64, p.j as i64]).collect(),
                    t: match self.role {
                        CurveRole::Stop => Some(c.t),
                        CurveRole::Skeleton => None,
                    },
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("stop set serializes")
    }
}

/// Wire form of a stop set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StopSetDocument {
    pub role: CurveRole,
    pub curves: Vec<CurveDocument>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveDocument {
    pub points: Vec<[i64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<f64>,
}

/// A parsed stop set plus any non-fatal remarks (e.g. ignored `t` values).
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedStopSet {
    pub spec: StopSetSpec,
    pub warnings: Vec<String>,
}

impl StopSetDocument {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::StopSetFormat(e.to_string()))
    }

    /// Converts to a spec and validates it against the image size.
    pub fn into_spec(self, width: usize, height: usize) -> Result<ParsedStopSet> {
        let mut warnings = Vec::new();
        let mut curves = Vec::with_capacity(self.curves.len());
        for (k, c) in self.curves.into_iter().enumerate() {
            let mut points = Vec::with_capacity(c.points.len());
            for [i, j] in c.points {
                if i < 0 || j < 0 {
                    return Err(Error::StopSetFormat(format!(
                        "curve {k} has negative coordinate [{i}, {j}]"
                    )));
                }
                points.push(PixelCoord::new(i as usize, j as usize));
            }
            let t = match (self.role, c.t) {
                (CurveRole::Stop, Some(t)) => t,
                (CurveRole::Stop, None) => {
                    return Err(Error::StopSetFormat(format!("stop curve {k} is missing \"t\"")))
                }
                (CurveRole::Skeleton, Some(_)) => {
                    warnings.push(format!("curve {k}: \"t\" is ignored for skeleton curves"));
                    0.0
                }
                (CurveRole::Skeleton, None) => 0.0,
            };
            curves.push(StopCurve::new(points, t));
        }
        let spec = StopSetSpec::new(self.role, curves);
        spec.validate(width, height)?;
        for w in &warnings {
            log::warn!("{w}");
        }
        Ok(ParsedStopSet { spec, warnings })
    }
}

/// Parses and validates a stop-set document for an image of the given size.
pub fn parse_stopset_str(text: &str, width: usize, height: usize) -> Result<ParsedStopSet> {
    StopSetDocument::from_json(text)?.into_spec(width, height)
}
