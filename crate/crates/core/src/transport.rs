//! Single-pass fill.
//!
//! Pixels are visited in serialized order and each receives the weighted mean
//! of the known pixels within distance `ε`, with `w(x, y) = k(x, (x-y)/ε) / |x-y|`.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::distance::{DistanceField, PixelOrder};
use crate::domain::{BallStencil, InpaintDomain};
use crate::error::{Error, Result};
use crate::guidance::{coherence_vector, Rect, Smoothed, TensorParams};
use crate::raster::{dot, norm, normalize, perp, BoolGrid, PixelCoord, RasterImage, Vec2};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kernel {
    /// Weights concentrate along the normal of the level lines of `T`.
    Telea,
    /// Weights concentrate along the structure-tensor guidance vector.
    Coherence,
}

impl Kernel {
    pub fn name(self) -> &'static str {
        match self {
            Kernel::Telea => "telea",
            Kernel::Coherence => "coherence",
        }
    }
}

impl fmt::Display for Kernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Kernel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "telea" => Ok(Kernel::Telea),
            "coherence" => Ok(Kernel::Coherence),
            other => Err(Error::InvalidParameter(format!("unknown kernel \"{other}\""))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FillParams {
    pub epsilon: f64,
    pub mu: f64,
    pub sigma: f64,
    pub rho: f64,
    pub kernel: Kernel,
}

impl FillParams {
    pub fn coherence(epsilon: f64, mu: f64, sigma: f64, rho: f64) -> Self {
        Self {
            epsilon,
            mu,
            sigma,
            rho,
            kernel: Kernel::Coherence,
        }
    }

    pub fn telea(epsilon: f64) -> Self {
        Self {
            epsilon,
            mu: 1.0,
            sigma: 1.0,
            rho: 1.0,
            kernel: Kernel::Telea,
        }
    }

    pub fn validate(&self) -> Result<()> {
        // ε must reach the diagonal neighbors
        if !(self.epsilon >= std::f64::consts::SQRT_2 - 1e-12) || !self.epsilon.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "epsilon must be at least sqrt(2), got {}",
                self.epsilon
            )));
        }
        if !(self.mu > 0.0 && self.mu.is_finite()) {
            return Err(Error::InvalidParameter(format!("mu must be positive, got {}", self.mu)));
        }
        self.tensor().validate()
    }

    pub fn tensor(&self) -> TensorParams {
        TensorParams {
            sigma: self.sigma,
            rho: self.rho,
        }
    }
}

/// `|<N, η>| / |η|`, or 1 where `N` vanishes.
pub fn telea_kernel(n: Vec2, eta: Vec2) -> Result<f64> {
    let len = norm(eta);
    if len == 0.0 {
        return Err(Error::InvalidParameter("eta must be nonzero".into()));
    }
    if n == [0.0, 0.0] {
        return Ok(1.0);
    }
    Ok(dot(n, eta).abs() / len)
}

/// `√(π/2) μ exp(-μ²/2 <g⊥, η>²)`; a zero `g` gives the constant `√(π/2) μ`.
pub fn coherence_kernel(g: Vec2, eta: Vec2, mu: f64) -> f64 {
    FRAC_PI_2.sqrt() * mu * (-0.5 * (mu * dot(perp(g), eta)).powi(2)).exp()
}

/// `κ / |x - y|`.
pub fn weight(x: PixelCoord, y: PixelCoord, kappa: f64) -> f64 {
    kappa / x.distance(y)
}

/// Direction information for one fill step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PixelGuide {
    /// Unit normal of the level line of `T` (or zero).
    Normal(Vec2),
    /// Guidance vector (or zero).
    Guidance(Vec2),
}

/// Image under construction.
#[derive(Debug, Clone)]
pub struct FillState {
    image: RasterImage,
    known: BoolGrid,
    next: usize,
}

impl FillState {
    pub fn new(image: &RasterImage, domain: &InpaintDomain) -> Result<Self> {
        if image.dims() != domain.dims() {
            return Err(Error::DimensionMismatch {
                expected: image.dims(),
                actual: domain.dims(),
            });
        }
        Ok(Self {
            image: image.clone(),
            known: domain.mask().map(|&m| !m),
            next: 0,
        })
    }

    pub fn image(&self) -> &RasterImage {
        &self.image
    }

    pub fn known(&self) -> &BoolGrid {
        &self.known
    }

    /// Number of pixels filled so far.
    pub fn index(&self) -> usize {
        self.next
    }

    pub fn into_image(self) -> RasterImage {
        self.image
    }
}

/// What happened at one pixel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FillOutcome {
    Weighted,
    /// All kernel weights vanished; plain `1/|x-y|` weights were used.
    Fallback,
}

/// Fills `x` from its known neighbors in `stencil` and marks it known.
pub fn fill_pixel(
    state: &mut FillState,
    x: PixelCoord,
    stencil: &BallStencil,
    params: &FillParams,
    guide: PixelGuide,
) -> Result<FillOutcome> {
    let (w, h) = state.image.dims();
    let nc = state.image.channels();
    let eps = params.epsilon;

    // (neighbor, log weight) over the known part of the ball
    let mut terms: Vec<(PixelCoord, f64)> = Vec::with_capacity(stencil.len());
    for &(di, dj) in stencil.offsets() {
        let Some(y) = x.offset(di, dj, w, h) else {
            continue;
        };
        if !state.known.at(y) {
            continue;
        }
        let eta = [-(di as f64) / eps, -(dj as f64) / eps];
        let dist = x.distance(y);
        let log_w = match guide {
            PixelGuide::Normal(n) => telea_kernel(n, eta)?.ln() - dist.ln(),
            PixelGuide::Guidance(g) => {
                // log of the coherence kernel; exponentiated after the max shift
                (FRAC_PI_2.sqrt() * params.mu).ln() - 0.5 * (params.mu * dot(perp(g), eta)).powi(2) - dist.ln()
            }
        };
        terms.push((y, log_w));
    }
    if terms.is_empty() {
        return Err(Error::StarvedPixel { pixel: x });
    }

    let shift = terms.iter().map(|t| t.1).fold(f64::NEG_INFINITY, f64::max);
    let outcome = if shift == f64::NEG_INFINITY {
        for t in &mut terms {
            t.1 = -x.distance(t.0).ln();
        }
        FillOutcome::Fallback
    } else {
        FillOutcome::Weighted
    };
    let shift = terms.iter().map(|t| t.1).fold(f64::NEG_INFINITY, f64::max);

    // mean written as lo + Σ w (u - lo) / Σ w, clamped to [lo, hi], so equal
    // neighbors reproduce their value exactly and round-off never leaves the range
    let mut lo = vec![f64::INFINITY; nc];
    let mut hi = vec![f64::NEG_INFINITY; nc];
    for &(y, _) in &terms {
        for (c, &v) in state.image.pixel(y).iter().enumerate() {
            lo[c] = lo[c].min(v);
            hi[c] = hi[c].max(v);
        }
    }
    let mut sums = vec![0.0; nc];
    let mut total = 0.0;
    for &(y, lw) in &terms {
        let wy = (lw - shift).exp();
        total += wy;
        for (c, &v) in state.image.pixel(y).iter().enumerate() {
            sums[c] += wy * (v - lo[c]);
        }
    }
    let out = state.image.pixel_mut(x);
    for c in 0..nc {
        out[c] = (lo[c] + sums[c] / total).clamp(lo[c], hi[c]);
    }
    state.known.set(x, true);
    state.next += 1;
    Ok(outcome)
}

/// Guide for the next fill step: the unit gradient of `T` for the normal
/// kernel, or the guidance vector from the currently known pixels.
pub fn pixel_guide(state: &FillState, x: PixelCoord, field: &DistanceField, params: &FillParams) -> PixelGuide {
    match params.kernel {
        Kernel::Telea => PixelGuide::Normal(normalize(field.gradient(x))),
        Kernel::Coherence => {
            let tp = params.tensor();
            let (w, h) = state.image.dims();
            let rect = Rect::around(x, tp.rho_radius() + 1, w, h);
            let tensor = Smoothed::compute(&state.image, &state.known, tp.sigma, rect).tensor_at(&state.known, x, tp.rho);
            PixelGuide::Guidance(coherence_vector(&tensor).g)
        }
    }
}

/// Counters from a complete fill.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct FillStats {
    pub filled: usize,
    /// Pixels where the kernel weights all vanished.
    pub fallbacks: usize,
    /// Coherence fills whose structure tensor was isotropic.
    pub isotropic: usize,
}

#[derive(Debug, Clone)]
pub struct Inpainted {
    pub image: RasterImage,
    pub stats: FillStats,
}

/// Fills every masked pixel in `order`. `field` supplies the normals for the
/// normal-transport kernel and is otherwise unused.
pub fn inpaint(
    image: &RasterImage,
    domain: &InpaintDomain,
    order: &PixelOrder,
    field: &DistanceField,
    params: &FillParams,
) -> Result<Inpainted> {
    params.validate()?;
    if order.len() != domain.inpaint_count() {
        return Err(Error::InvalidParameter(format!(
            "order has {} pixels, domain has {}",
            order.len(),
            domain.inpaint_count()
        )));
    }
    let stencil = BallStencil::new(params.epsilon)?;
    let mut state = FillState::new(image, domain)?;
    let mut stats = FillStats::default();
    for x in order.pixels() {
        let guide = pixel_guide(&state, x, field, params);
        if guide == PixelGuide::Guidance([0.0, 0.0]) {
            stats.isotropic += 1;
        }
        if fill_pixel(&mut state, x, &stencil, params, guide)? == FillOutcome::Fallback {
            stats.fallbacks += 1;
            log::warn!("all weights vanished at {x}; used uniform weights");
        }
        stats.filled += 1;
    }
    Ok(Inpainted {
        image: state.into_image(),
        stats,
    })
}

/// Numerically estimated transport direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransportDiagnostic {
    pub c: Vec2,
}

impl TransportDiagnostic {
    /// Angle to `target` in degrees.
    pub fn angle_to(&self, target: Vec2) -> f64 {
        let t = normalize(target);
        dot(self.c, t).clamp(-1.0, 1.0).acos().to_degrees()
    }
}

/// Direction of `Σ w(η) η` over the half-ball `{|η| ≤ 1, <η, N> ≥ 0}` with the
/// coherence kernel weights `k_μ(η)/|η|`.
///
/// `resolution` is the number of angular samples (midpoint rule over the half
/// circle). The radial integral `∫₀¹ k_μ(rθ) r⁻¹ rθ r dr` is evaluated in closed
/// form, so even very sharp kernels are resolved once the angular step is
/// below `1/μ`. The estimate is independent of `ε`, which only rescales `η`.
pub fn transport_field_estimate(g: Vec2, n: Vec2, mu: f64, resolution: usize) -> Result<TransportDiagnostic> {
    let n = normalize(n);
    if n == [0.0, 0.0] {
        return Err(Error::InvalidParameter("N must be nonzero".into()));
    }
    if resolution == 0 || !(mu > 0.0) {
        return Err(Error::InvalidParameter("resolution and mu must be positive".into()));
    }
    let gp = perp(g);
    let base = n[1].atan2(n[0]);
    let step = PI / resolution as f64;
    let mut c = [0.0, 0.0];
    for m in 0..resolution {
        let theta = base - FRAC_PI_2 + (m as f64 + 0.5) * step;
        let dir = [theta.cos(), theta.sin()];
        let a = 0.5 * (mu * dot(gp, dir)).powi(2);
        // ∫₀¹ exp(-a r²) r dr
        let radial = if a < 1e-12 { 0.5 } else { -(-a).exp_m1() / (2.0 * a) };
        let k = FRAC_PI_2.sqrt() * mu * radial;
        c[0] += k * dir[0];
        c[1] += k * dir[1];
    }
    Ok(TransportDiagnostic { c: normalize(c) })
}

/// `μ → ∞` limit direction: `g`, `-g` or `N` by the sign of `<g, N>`.
pub fn limit_direction(g: Vec2, n: Vec2) -> Vec2 {
    let s = dot(g, n);
    if s > 0.0 {
        g
    } else if s < 0.0 {
        [-g[0], -g[1]]
    } else {
        n
    }
}
