//! Structure-tensor guidance.
//!
//! The guidance vector at a pixel `x` is the minor eigenvector of
//!
//! ```text
//! S(x) = Σ_y K_ρ(x-y) ∇v(y) ∇v(y)ᵀ / Σ_y K_ρ(x-y)
//! ```
//!
//! where `v` is the image smoothed with a Gaussian `K_σ` that only sees known
//! pixels and is renormalized by their kernel mass. Both sums run over known
//! pixels only, so the tensor at a fill pixel depends on nothing that is
//! filled after it.

use crate::distance::{distance_to_boundary, DistanceField, DistanceKind, PixelOrder};
use crate::domain::InpaintDomain;
use crate::error::{Error, Result};
use crate::raster::{normalize, BoolGrid, Grid, PixelCoord, RasterImage, Vec2};

/// Smoothing scales: `sigma` pre-smooths the image, `rho` averages the tensor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TensorParams {
    pub sigma: f64,
    pub rho: f64,
}

impl TensorParams {
    pub fn new(sigma: f64, rho: f64) -> Result<Self> {
        let p = Self { sigma, rho };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sigma > 0.0 && self.sigma.is_finite()) || !(self.rho > 0.0 && self.rho.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "sigma and rho must be positive, got sigma={} rho={}",
                self.sigma, self.rho
            )));
        }
        Ok(())
    }

    /// Truncation radius of the pre-smoothing kernel.
    pub fn sigma_radius(&self) -> usize {
        (4.0 * self.sigma).ceil() as usize
    }

    /// Truncation radius of the tensor kernel.
    pub fn rho_radius(&self) -> usize {
        (3.0 * self.rho).ceil() as usize
    }

    /// Half-size of the neighborhood the tensor at a pixel depends on.
    pub fn window_radius(&self) -> usize {
        self.sigma_radius() + 1 + self.rho_radius()
    }
}

/// Symmetric 2x2 matrix `[[a, b], [b, c]]` in (row, column) components.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SymTensor2 {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl SymTensor2 {
    pub const ZERO: Self = Self { a: 0.0, b: 0.0, c: 0.0 };

    pub fn new(a: f64, b: f64, c: f64) -> Self {
        Self { a, b, c }
    }

    pub fn trace(&self) -> f64 {
        self.a + self.c
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::new(self.a * s, self.b * s, self.c * s)
    }

    /// Eigenvalues `(λ_min, λ_max)`.
    pub fn eigenvalues(&self) -> (f64, f64) {
        let mean = 0.5 * (self.a + self.c);
        let radius = (0.5 * (self.a - self.c)).hypot(self.b);
        (mean - radius, mean + radius)
    }

    fn add_outer(&mut self, g: Vec2, weight: f64) {
        self.a += weight * g[0] * g[0];
        self.b += weight * g[0] * g[1];
        self.c += weight * g[1] * g[1];
    }
}

/// Minor eigenvector of the structure tensor, or zero where the tensor is isotropic.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct GuidanceVector {
    pub g: Vec2,
    /// `λ_max - λ_min`.
    pub coherence: f64,
}

impl GuidanceVector {
    pub const NONE: Self = Self {
        g: [0.0, 0.0],
        coherence: 0.0,
    };

    pub fn is_none(&self) -> bool {
        self.g == [0.0, 0.0]
    }
}

/// Closed-form eigenvector of `S` for its smaller eigenvalue, unit length with
/// the first nonzero component positive.
pub fn coherence_vector(s: &SymTensor2) -> GuidanceVector {
    let (lmin, lmax) = s.eigenvalues();
    let coherence = lmax - lmin;
    if !coherence.is_finite() || coherence <= 1e-10 * s.trace().abs().max(1.0) {
        return GuidanceVector::NONE;
    }
    // (A - λ)v = 0 has solutions (b, λ - a) and (λ - c, b); take the longer one
    let v1 = [s.b, lmin - s.a];
    let v2 = [lmin - s.c, s.b];
    let v = if v1[0].hypot(v1[1]) >= v2[0].hypot(v2[1]) { v1 } else { v2 };
    let mut g = normalize(v);
    if g[0] < 0.0 || (g[0] == 0.0 && g[1] < 0.0) {
        g = [-g[0], -g[1]];
    }
    // avoid returning -0.0
    g = [g[0] + 0.0, g[1] + 0.0];
    GuidanceVector { g, coherence }
}

/// Clipped pixel rectangle `[i0, i1) x [j0, j1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Rect {
    pub i0: usize,
    pub j0: usize,
    pub i1: usize,
    pub j1: usize,
}

impl Rect {
    pub fn around(p: PixelCoord, radius: usize, width: usize, height: usize) -> Self {
        Self {
            i0: p.i.saturating_sub(radius),
            j0: p.j.saturating_sub(radius),
            i1: (p.i + radius + 1).min(height),
            j1: (p.j + radius + 1).min(width),
        }
    }

    pub fn full(width: usize, height: usize) -> Self {
        Self {
            i0: 0,
            j0: 0,
            i1: height,
            j1: width,
        }
    }

    pub fn grow(&self, r: usize, width: usize, height: usize) -> Self {
        Self {
            i0: self.i0.saturating_sub(r),
            j0: self.j0.saturating_sub(r),
            i1: (self.i1 + r).min(height),
            j1: (self.j1 + r).min(width),
        }
    }

    pub fn rows(&self) -> usize {
        self.i1 - self.i0
    }

    pub fn cols(&self) -> usize {
        self.j1 - self.j0
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        i >= self.i0 && i < self.i1 && j >= self.j0 && j < self.j1
    }
}

fn gaussian_taps(sigma: f64, radius: usize) -> Vec<f64> {
    let r = radius as isize;
    (-r..=r)
        .map(|d| (-(d * d) as f64 / (2.0 * sigma * sigma)).exp())
        .collect()
}

/// Known-pixel-normalized Gaussian smoothing of all channels over a rectangle.
pub(crate) struct Smoothed {
    rect: Rect,
    channels: usize,
    /// `rect.rows() * rect.cols() * channels`, `NaN` where undefined.
    values: Vec<f64>,
}

impl Smoothed {
    /// Smooths `image` over `rect` using only pixels flagged in `known`.
    ///
    /// The kernel is separable, so numerator `K * (m u)` and mass `K * m` are
    /// both computed with two 1-D passes.
    pub fn compute(image: &RasterImage, known: &BoolGrid, sigma: f64, rect: Rect) -> Self {
        let (w, h) = image.dims();
        let radius = (4.0 * sigma).ceil() as usize;
        let taps = gaussian_taps(sigma, radius);
        let src = rect.grow(radius, w, h);
        let nc = image.channels();
        let stride = nc + 1; // channels, then mass

        // horizontal pass: rows of src, columns of rect
        let (rows, cols) = (src.rows(), rect.cols());
        let mut horiz = vec![0.0; rows * cols * stride];
        for (si, i) in (src.i0..src.i1).enumerate() {
            for (cj, j) in (rect.j0..rect.j1).enumerate() {
                let acc = &mut horiz[(si * cols + cj) * stride..][..stride];
                let lo = j.saturating_sub(radius);
                let hi = (j + radius + 1).min(w);
                for jj in lo..hi {
                    let p = PixelCoord::new(i, jj);
                    if !known.at(p) {
                        continue;
                    }
                    let k = taps[jj + radius - j];
                    for (c, &v) in image.pixel(p).iter().enumerate() {
                        acc[c] += k * v;
                    }
                    acc[nc] += k;
                }
            }
        }

        // vertical pass into rect
        let mut values = vec![f64::NAN; rect.rows() * cols * nc];
        let mut acc = vec![0.0; stride];
        for (ri, i) in (rect.i0..rect.i1).enumerate() {
            for cj in 0..cols {
                acc.iter_mut().for_each(|a| *a = 0.0);
                let lo = i.saturating_sub(radius).max(src.i0);
                let hi = (i + radius + 1).min(src.i1);
                for ii in lo..hi {
                    let k = taps[ii + radius - i];
                    let row = &horiz[((ii - src.i0) * cols + cj) * stride..][..stride];
                    for (a, &r) in acc.iter_mut().zip(row) {
                        *a += k * r;
                    }
                }
                if acc[nc] > 0.0 {
                    let out = &mut values[(ri * cols + cj) * nc..][..nc];
                    for c in 0..nc {
                        out[c] = acc[c] / acc[nc];
                    }
                }
            }
        }
        Self {
            rect,
            channels: nc,
            values,
        }
    }

    #[inline]
    fn get(&self, i: usize, j: usize, c: usize) -> f64 {
        self.values[((i - self.rect.i0) * self.rect.cols() + (j - self.rect.j0)) * self.channels + c]
    }

    #[inline]
    fn defined(&self, i: usize, j: usize) -> bool {
        self.rect.contains(i, j) && !self.get(i, j, 0).is_nan()
    }

    /// Tensor at `x` from gradient samples at known pixels within the ρ-window.
    pub fn tensor_at(&self, known: &BoolGrid, x: PixelCoord, rho: f64) -> SymTensor2 {
        let radius = (3.0 * rho).ceil() as usize;
        let taps = gaussian_taps(rho, radius);
        let (w, h) = known.dims();
        let win = Rect::around(x, radius, w, h);
        let mut sum = SymTensor2::ZERO;
        let mut mass = 0.0;
        for i in win.i0..win.i1 {
            if i == 0 || i + 1 >= h {
                continue;
            }
            let ki = taps[i + radius - x.i];
            for j in win.j0..win.j1 {
                if j == 0 || j + 1 >= w || !known.at(PixelCoord::new(i, j)) {
                    continue;
                }
                if !(self.defined(i - 1, j)
                    && self.defined(i + 1, j)
                    && self.defined(i, j - 1)
                    && self.defined(i, j + 1))
                {
                    continue;
                }
                let k = ki * taps[j + radius - x.j];
                for c in 0..self.channels {
                    let gi = 0.5 * (self.get(i + 1, j, c) - self.get(i - 1, j, c));
                    let gj = 0.5 * (self.get(i, j + 1, c) - self.get(i, j - 1, c));
                    sum.add_outer([gi, gj], k);
                }
                mass += k;
            }
        }
        if mass > 0.0 {
            sum.scale(1.0 / mass)
        } else {
            SymTensor2::ZERO
        }
    }
}

/// `v_σ` for one channel: Gaussian mean over known pixels, renormalized by the
/// known kernel mass. `None` where no known pixel lies within `4σ`.
pub fn masked_gaussian_smooth(values: &Grid<f64>, known: &BoolGrid, sigma: f64) -> Result<Grid<Option<f64>>> {
    if values.dims() != known.dims() {
        return Err(Error::DimensionMismatch {
            expected: values.dims(),
            actual: known.dims(),
        });
    }
    if !(sigma > 0.0) {
        return Err(Error::InvalidParameter(format!("sigma must be positive, got {sigma}")));
    }
    let (w, h) = values.dims();
    let image = RasterImage::new(w, h, 1, values.as_slice().iter().map(|v| v.clamp(0.0, 255.0)).collect())?;
    let sm = Smoothed::compute(&image, known, sigma, Rect::full(w, h));
    Ok(Grid::from_fn(w, h, |p| {
        let v = sm.get(p.i, p.j, 0);
        (!v.is_nan()).then_some(v)
    }))
}

/// Structure tensor at `x` for the given known set.
pub fn structure_tensor(image: &RasterImage, known: &BoolGrid, x: PixelCoord, params: &TensorParams) -> SymTensor2 {
    let (w, h) = image.dims();
    let rect = Rect::around(x, params.rho_radius() + 1, w, h);
    Smoothed::compute(image, known, params.sigma, rect).tensor_at(known, x, params.rho)
}

/// Known flags around the `k`-th (0-based) pixel of `order`: data pixels and
/// pixels serialized before it, over a window of [`TensorParams::window_radius`].
#[derive(Debug, Clone, PartialEq)]
pub struct KnownWindow {
    /// Image coordinate of the window's top-left pixel.
    pub origin: PixelCoord,
    pub known: BoolGrid,
}

pub fn known_mask_at(k: usize, domain: &InpaintDomain, order: &PixelOrder, params: &TensorParams) -> KnownWindow {
    let x = order.pixel(k);
    let (w, h) = domain.dims();
    let rect = Rect::around(x, params.window_radius(), w, h);
    let known = BoolGrid::from_fn(rect.cols(), rect.rows(), |p| {
        let q = PixelCoord::new(rect.i0 + p.i, rect.j0 + p.j);
        domain.is_data(q) || order.rank(q).is_some_and(|r| r < k)
    });
    KnownWindow {
        origin: PixelCoord::new(rect.i0, rect.j0),
        known,
    }
}

/// Guidance and inward normals along the discrete boundary.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryGuidance {
    pub pixels: Vec<PixelCoord>,
    pub guidance: Vec<Vec2>,
    pub normals: Vec<Vec2>,
}

impl BoundaryGuidance {
    pub fn iter(&self) -> impl Iterator<Item = (PixelCoord, Vec2, Vec2)> + '_ {
        self.pixels
            .iter()
            .zip(&self.guidance)
            .zip(&self.normals)
            .map(|((&p, &g), &n)| (p, g, n))
    }

    /// `<g, N>^2` per boundary pixel.
    pub fn alignment(&self) -> Vec<f64> {
        self.iter().map(|(_, g, n)| crate::raster::dot(g, n).powi(2)).collect()
    }
}

/// For every boundary pixel: the guidance vector from the data pixels alone,
/// and the unit gradient of the distance to boundary (data pixels count as
/// distance -1), which points into the mask.
pub fn boundary_guidance(image: &RasterImage, domain: &InpaintDomain, params: &TensorParams) -> Result<BoundaryGuidance> {
    params.validate()?;
    if image.dims() != domain.dims() {
        return Err(Error::DimensionMismatch {
            expected: image.dims(),
            actual: domain.dims(),
        });
    }
    let (w, h) = image.dims();
    let known = domain.mask().map(|&m| !m);
    let smoothed = Smoothed::compute(image, &known, params.sigma, Rect::full(w, h));

    let dtb = distance_to_boundary(domain);
    let extended = DistanceField::new(
        Grid::from_fn(w, h, |p| if domain.is_masked(p) { dtb.value(p) } else { -1.0 }),
        DistanceKind::Boundary,
    );

    let pixels: Vec<PixelCoord> = domain.boundary_pixels().collect();
    let mut guidance = Vec::with_capacity(pixels.len());
    let mut normals = Vec::with_capacity(pixels.len());
    for &p in &pixels {
        guidance.push(coherence_vector(&smoothed.tensor_at(&known, p, params.rho)).g);
        normals.push(normalize(extended.gradient(p)));
    }
    Ok(BoundaryGuidance {
        pixels,
        guidance,
        normals,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Vec2, b: Vec2, tol: f64) -> bool {
        (a[0] - b[0]).abs() <= tol && (a[1] - b[1]).abs() <= tol
    }

    #[test]
    fn eigenvectors_of_simple_tensors() {
        assert_eq!(coherence_vector(&SymTensor2::new(1.0, 0.0, 0.0)).g, [0.0, 1.0]);
        assert_eq!(coherence_vector(&SymTensor2::new(0.0, 0.0, 1.0)).g, [1.0, 0.0]);
        assert!(coherence_vector(&SymTensor2::ZERO).is_none());
        assert!(coherence_vector(&SymTensor2::new(3.0, 0.0, 3.0)).is_none());
        let g = coherence_vector(&SymTensor2::new(2.0, 1.0, 2.0));
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!(close(g.g, [s, -s], 1e-12), "{:?}", g.g);
        assert!((g.coherence - 2.0).abs() < 1e-12);
    }

    #[test]
    fn constant_image_smooths_to_itself() {
        let values = Grid::filled(12, 9, 128.0);
        let known = BoolGrid::from_fn(12, 9, |p| (p.i + p.j) % 3 != 0);
        let sm = masked_gaussian_smooth(&values, &known, 1.3).unwrap();
        for v in sm.as_slice() {
            assert!((v.unwrap() - 128.0).abs() < 1e-12);
        }
    }

    #[test]
    fn tiny_sigma_is_nearly_identity() {
        let values = Grid::from_fn(10, 10, |p| (p.i * 17 + p.j * 5) as f64 % 255.0);
        let known = BoolGrid::filled(10, 10, true);
        let sm = masked_gaussian_smooth(&values, &known, 0.25).unwrap();
        for p in values.coords() {
            // neighbor weight exp(-8) relative to the center
            assert!((sm.at(p).unwrap() - values.at(p)).abs() < 0.1 * 255.0 * (-8.0f64).exp() * 4.0 + 1e-3);
        }
    }

    #[test]
    fn undefined_far_from_known_pixels() {
        let values = Grid::filled(30, 1, 10.0);
        let known = BoolGrid::from_fn(30, 1, |p| p.j == 0);
        let sm = masked_gaussian_smooth(&values, &known, 1.0).unwrap();
        assert!(sm.at(PixelCoord::new(0, 4)).is_some());
        assert!(sm.at(PixelCoord::new(0, 5)).is_none());
    }

    #[test]
    fn ramp_tensor_points_along_rows() {
        let img = RasterImage::from_gray(&Grid::from_fn(21, 21, |p| 10.0 * p.j as f64)).unwrap();
        let known = BoolGrid::filled(21, 21, true);
        let s = structure_tensor(&img, &known, PixelCoord::new(10, 10), &TensorParams::new(0.5, 2.0).unwrap());
        assert!(s.a.abs() < 1e-9 && s.b.abs() < 1e-9);
        // interior ramp gradient is exactly 10 per pixel in j
        assert!((s.c - 100.0).abs() < 1e-6, "{s:?}");
        assert_eq!(coherence_vector(&s).g, [1.0, 0.0]);
    }

    #[test]
    fn no_valid_samples_gives_zero_tensor() {
        let img = RasterImage::filled(9, 9, 1, 50.0).unwrap();
        let known = BoolGrid::filled(9, 9, false);
        let s = structure_tensor(&img, &known, PixelCoord::new(4, 4), &TensorParams::new(1.0, 1.0).unwrap());
        assert_eq!(s, SymTensor2::ZERO);
    }

    #[test]
    fn vertical_boundary_normal_points_into_mask() {
        let mask = BoolGrid::from_fn(16, 16, |p| p.j >= 6 && p.j < 12 && p.i >= 2 && p.i < 14);
        let domain = InpaintDomain::from_mask(mask).unwrap();
        let img = RasterImage::filled(16, 16, 1, 90.0).unwrap();
        let bg = boundary_guidance(&img, &domain, &TensorParams::new(0.5, 2.0).unwrap()).unwrap();
        let (_, g, n) = bg.iter().find(|(p, _, _)| *p == PixelCoord::new(8, 6)).unwrap();
        assert!(close(n, [0.0, 1.0], 1e-12));
        // constant data carries no guidance
        assert_eq!(g, [0.0, 0.0]);
        assert!(bg.alignment().iter().all(|&a| a == 0.0));
    }

    #[test]
    fn params_validation() {
        assert!(TensorParams::new(0.0, 1.0).is_err());
        assert!(TensorParams::new(1.0, f64::NAN).is_err());
        let p = TensorParams::new(0.5, 10.0).unwrap();
        assert_eq!(p.window_radius(), 2 + 1 + 30);
    }
}
