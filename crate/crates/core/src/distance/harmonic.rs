//! Distance by harmonic interpolation: a "tent roof" over the domain whose
//! poles are the prescribed stop arcs.
//!
//! `T = 0` on the discrete boundary, `T = t_k` on arc `k`, and the five-point
//! Laplacian vanishes at every other masked pixel. Masked pixels on the image
//! border drop their out-of-image stencil arms (reflecting boundary).

use crate::domain::InpaintDomain;
use crate::error::{Error, Result};
use crate::raster::{Grid, PixelCoord, FOUR_NEIGHBORS};

use super::stopset::{CurveRole, StopSetSpec};
use super::{DistanceField, DistanceKind};

/// Iteration cap for the linear solve.
pub const MAX_ITERATIONS: usize = 1_000_000;
/// Target max-norm residual of the solve, in units of `t`.
pub const SOLVER_TOLERANCE: f64 = 1e-10;

/// Dirichlet data: per pixel, `Some(value)` if fixed.
fn dirichlet_values(domain: &InpaintDomain, stopset: &StopSetSpec) -> Result<Grid<Option<f64>>> {
    if stopset.role != CurveRole::Stop {
        return Err(Error::InvalidParameter(
            "harmonic distance needs a stop-role curve set".into(),
        ));
    }
    stopset.validate_for_domain(domain)?;
    let (w, h) = domain.dims();
    let mut fixed: Grid<Option<f64>> = Grid::from_fn(w, h, |p| domain.is_boundary(p).then_some(0.0));
    for (curve, pixels) in stopset.curves.iter().zip(stopset.rasterize()) {
        for p in pixels {
            let v = match fixed.at(p) {
                Some(prev) => prev.max(curve.t),
                None => curve.t,
            };
            fixed.set(p, Some(v));
        }
    }
    Ok(fixed)
}

/// Sparse system over the free pixels.
struct System {
    free: Vec<PixelCoord>,
    /// For each free pixel: number of in-image neighbors.
    degree: Vec<f64>,
    /// For each free pixel: indices of free neighbors.
    links: Vec<Vec<usize>>,
    rhs: Vec<f64>,
}

impl System {
    fn build(domain: &InpaintDomain, fixed: &Grid<Option<f64>>) -> Self {
        let (w, h) = domain.dims();
        let mut slot = Grid::filled(w, h, usize::MAX);
        let free: Vec<PixelCoord> = domain
            .masked_pixels()
            .filter(|&p| fixed.at(p).is_none())
            .collect();
        for (k, &p) in free.iter().enumerate() {
            slot.set(p, k);
        }
        let mut degree = Vec::with_capacity(free.len());
        let mut links = Vec::with_capacity(free.len());
        let mut rhs = Vec::with_capacity(free.len());
        for &p in &free {
            let mut deg = 0.0;
            let mut lk = Vec::with_capacity(4);
            let mut b = 0.0;
            for &(di, dj) in &FOUR_NEIGHBORS {
                let Some(q) = p.offset(di, dj, w, h) else {
                    continue;
                };
                deg += 1.0;
                match fixed.at(q) {
                    Some(v) => b += v,
                    None => lk.push(slot.at(q)),
                }
            }
            degree.push(deg);
            links.push(lk);
            rhs.push(b);
        }
        Self {
            free,
            degree,
            links,
            rhs,
        }
    }

    fn apply(&self, x: &[f64], out: &mut [f64]) {
        for (k, o) in out.iter_mut().enumerate() {
            let mut s = self.degree[k] * x[k];
            for &l in &self.links[k] {
                s -= x[l];
            }
            *o = s;
        }
    }

    fn residual(&self, x: &[f64], r: &mut [f64]) -> f64 {
        self.apply(x, r);
        let mut norm = 0.0f64;
        for (ri, bi) in r.iter_mut().zip(&self.rhs) {
            *ri = bi - *ri;
            norm = norm.max(ri.abs());
        }
        norm
    }

    /// Jacobi-preconditioned conjugate gradients.
    fn solve(&self, tol: f64, max_iter: usize) -> Result<Vec<f64>> {
        let n = self.free.len();
        let mut x = vec![0.0; n];
        if n == 0 {
            return Ok(x);
        }
        let mut r = vec![0.0; n];
        let mut z = vec![0.0; n];
        let mut p = vec![0.0; n];
        let mut ap = vec![0.0; n];
        let mut iterations = 0;
        let mut res = self.residual(&x, &mut r);
        while res > tol {
            for k in 0..n {
                z[k] = r[k] / self.degree[k];
            }
            p.copy_from_slice(&z);
            let mut rz: f64 = r.iter().zip(&z).map(|(a, b)| a * b).sum();
            loop {
                if iterations >= max_iter {
                    return Err(Error::NoConvergence {
                        iterations,
                        residual: res,
                    });
                }
                iterations += 1;
                self.apply(&p, &mut ap);
                let pap: f64 = p.iter().zip(&ap).map(|(a, b)| a * b).sum();
                if pap <= 0.0 {
                    break;
                }
                let alpha = rz / pap;
                let mut rmax = 0.0f64;
                for k in 0..n {
                    x[k] += alpha * p[k];
                    r[k] -= alpha * ap[k];
                    rmax = rmax.max(r[k].abs());
                }
                if rmax <= tol * 0.1 {
                    break;
                }
                for k in 0..n {
                    z[k] = r[k] / self.degree[k];
                }
                let rz_new: f64 = r.iter().zip(&z).map(|(a, b)| a * b).sum();
                let beta = rz_new / rz;
                rz = rz_new;
                for k in 0..n {
                    p[k] = z[k] + beta * p[k];
                }
            }
            // restart from the true residual
            res = self.residual(&x, &mut r);
        }
        Ok(x)
    }
}

/// Harmonic interpolation between the boundary (0) and the stop arcs (`t_k`).
pub fn harmonic_distance(domain: &InpaintDomain, stopset: &StopSetSpec) -> Result<DistanceField> {
    harmonic_distance_with(domain, stopset, SOLVER_TOLERANCE, MAX_ITERATIONS)
}

pub(crate) fn harmonic_distance_with(
    domain: &InpaintDomain,
    stopset: &StopSetSpec,
    tol: f64,
    max_iter: usize,
) -> Result<DistanceField> {
    let fixed = dirichlet_values(domain, stopset)?;
    let system = System::build(domain, &fixed);
    let t_max = stopset.curves.iter().map(|c| c.t).fold(0.0, f64::max);
    let x = system.solve(tol * t_max.max(1.0), max_iter)?;

    let (w, h) = domain.dims();
    let mut values = Grid::from_fn(w, h, |p| {
        if domain.is_masked(p) {
            fixed.at(p).unwrap_or(0.0)
        } else {
            f64::NAN
        }
    });
    // The discrete max principle bounds the exact solution; clamp the round-off.
    for (&p, &v) in system.free.iter().zip(&x) {
        values.set(p, v.clamp(0.0, t_max));
    }
    Ok(DistanceField::new(values, DistanceKind::Harmonic))
}

/// Max-norm residual of the (border-reflected) five-point Laplacian over the
/// free pixels of `field`.
pub fn laplacian_residual(
    field: &DistanceField,
    domain: &InpaintDomain,
    stopset: &StopSetSpec,
) -> Result<f64> {
    let fixed = dirichlet_values(domain, stopset)?;
    let (w, h) = domain.dims();
    let mut worst = 0.0f64;
    for p in domain.masked_pixels().filter(|&p| fixed.at(p).is_none()) {
        let mut s = 0.0;
        for &(di, dj) in &FOUR_NEIGHBORS {
            if let Some(q) = p.offset(di, dj, w, h) {
                s += field.value(q) - field.value(p);
            }
        }
        worst = worst.max(s.abs());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distance::stopset::StopCurve;
    use crate::raster::BoolGrid;

    #[test]
    fn ramp_in_reflecting_corridor() {
        // a full-height strip touching the image top and bottom: only the left
        // column is boundary, the rows decouple into 1-D chains
        let mask = BoolGrid::from_fn(12, 4, |p| p.j >= 1);
        let domain = InpaintDomain::from_mask(mask).unwrap();
        let t = 100.0;
        let stop = StopSetSpec::stop(vec![StopCurve::new(
            vec![PixelCoord::new(0, 11), PixelCoord::new(3, 11)],
            t,
        )]);
        let f = harmonic_distance(&domain, &stop).unwrap();
        for i in 0..4 {
            for j in 1..12 {
                let expected = t * (j - 1) as f64 / 10.0;
                assert!((f.value(PixelCoord::new(i, j)) - expected).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn rejects_bad_curves() {
        let mask = BoolGrid::from_fn(10, 10, |p| (2..8).contains(&p.i) && (2..8).contains(&p.j));
        let domain = InpaintDomain::from_mask(mask).unwrap();
        let on_boundary = StopSetSpec::stop(vec![StopCurve::new(vec![PixelCoord::new(2, 4)], 5.0)]);
        assert!(matches!(
            harmonic_distance(&domain, &on_boundary),
            Err(Error::CurveOnBoundary { .. })
        ));
        let outside = StopSetSpec::stop(vec![StopCurve::new(vec![PixelCoord::new(0, 0)], 5.0)]);
        assert!(matches!(
            harmonic_distance(&domain, &outside),
            Err(Error::CurveOutsideDomain { .. })
        ));
        assert!(matches!(
            harmonic_distance(&domain, &StopSetSpec::stop(vec![])),
            Err(Error::EmptyStopSet)
        ));
    }

    #[test]
    fn iteration_cap_is_reported() {
        let mask = BoolGrid::from_fn(30, 30, |p| (2..28).contains(&p.i) && (2..28).contains(&p.j));
        let domain = InpaintDomain::from_mask(mask).unwrap();
        let stop = StopSetSpec::stop(vec![StopCurve::new(vec![PixelCoord::new(15, 15)], 9.0)]);
        assert!(matches!(
            harmonic_distance_with(&domain, &stop, 1e-12, 3),
            Err(Error::NoConvergence { iterations: 3, .. })
        ));
    }
}
