//! First-order upwind fast marching for `|∇T| = 1` on the pixel grid.
//!
//! Each trial update takes the smaller of two upwind solutions: one from the
//! axis-aligned stencil (spacing 1) and one from the diagonal stencil (spacing
//! √2). The axis stencil alone overestimates distances along diagonals by more
//! than a pixel at 64-pixel range from a point seed.
//!
//! Every pixel also carries the seed its value came from. The accepted value
//! is the larger of the upwind solution and the straight-line distance to the
//! nearest seed offered by the accepted neighbors. Where two fronts meet at
//! an angle the upwind solution alone dips below the true distance by about
//! 0.3 px; the straight-line bound removes that dip, while in a bent corridor
//! the upwind solution still dominates and keeps the geodesic length.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::raster::{BoolGrid, Grid, PixelCoord, EIGHT_NEIGHBORS};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum State {
    Far,
    Trial,
    Accepted,
}

#[derive(Debug, Clone, Copy)]
struct Candidate {
    value: f64,
    index: usize,
}

impl PartialEq for Candidate {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Candidate {}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

// Reversed so that `BinaryHeap` pops the smallest value, then the smallest index.
impl Ord for Candidate {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .value
            .total_cmp(&self.value)
            .then_with(|| other.index.cmp(&self.index))
    }
}

/// Result of a march: arrival times plus the order in which pixels were accepted.
#[derive(Debug, Clone)]
pub struct March {
    pub times: Grid<f64>,
    pub accepted: Vec<PixelCoord>,
}

/// Marches from `seeds` (time 0) through the pixels where `region` is true.
///
/// Pixels outside `region`, or unreachable from the seeds, keep `f64::INFINITY`.
/// Seeds outside `region` are still used as sources.
pub fn fast_march(region: &BoolGrid, seeds: impl IntoIterator<Item = PixelCoord>) -> March {
    let (w, h) = region.dims();
    let mut times = Grid::filled(w, h, f64::INFINITY);
    let mut state = Grid::filled(w, h, State::Far);
    let mut source: Grid<Option<PixelCoord>> = Grid::filled(w, h, None);
    let mut heap = BinaryHeap::new();
    for s in seeds {
        if state.at(s) == State::Far {
            times.set(s, 0.0);
            state.set(s, State::Trial);
            source.set(s, Some(s));
            heap.push(Candidate {
                value: 0.0,
                index: times.index(s),
            });
        }
    }

    let mut accepted = Vec::new();
    while let Some(Candidate { value, index }) = heap.pop() {
        let p = times.coord(index);
        if state.at(p) == State::Accepted || value > times.at(p) {
            continue;
        }
        state.set(p, State::Accepted);
        accepted.push(p);
        for &(di, dj) in &EIGHT_NEIGHBORS {
            let Some(q) = p.offset(di, dj, w, h) else {
                continue;
            };
            if !region.at(q) || state.at(q) == State::Accepted {
                continue;
            }
            let (seed, reach) = nearest_source(&source, &state, q);
            let t = upwind_update(&times, &state, q).max(reach);
            if t < times.at(q) {
                times.set(q, t);
                source.set(q, seed);
                state.set(q, State::Trial);
                heap.push(Candidate {
                    value: t,
                    index: times.index(q),
                });
            }
        }
    }
    March { times, accepted }
}

/// The seed of an accepted 8-neighbor closest to `p`, with its distance.
fn nearest_source(
    source: &Grid<Option<PixelCoord>>,
    state: &Grid<State>,
    p: PixelCoord,
) -> (Option<PixelCoord>, f64) {
    let (w, h) = source.dims();
    EIGHT_NEIGHBORS
        .iter()
        .filter_map(|&(di, dj)| p.offset(di, dj, w, h))
        .filter(|&q| state.at(q) == State::Accepted)
        .filter_map(|q| source.at(q))
        .map(|s| {
            let (di, dj) = (p.i as f64 - s.i as f64, p.j as f64 - s.j as f64);
            (Some(s), di.hypot(dj))
        })
        .fold((None, f64::INFINITY), |a, b| if b.1 < a.1 { b } else { a })
}

fn upwind_update(times: &Grid<f64>, state: &Grid<State>, p: PixelCoord) -> f64 {
    let (w, h) = times.dims();
    let axis_min = |a: (isize, isize), b: (isize, isize)| {
        [a, b]
            .iter()
            .filter_map(|&(di, dj)| p.offset(di, dj, w, h))
            .filter(|&q| state.at(q) == State::Accepted)
            .map(|q| times.at(q))
            .fold(f64::INFINITY, f64::min)
    };
    let axis = solve_quadratic(axis_min((-1, 0), (1, 0)), axis_min((0, -1), (0, 1)), 1.0);
    let diagonal = solve_quadratic(
        axis_min((-1, -1), (1, 1)),
        axis_min((-1, 1), (1, -1)),
        std::f64::consts::SQRT_2,
    );
    axis.min(diagonal)
}

/// Solves `(t-a)^2 + (t-b)^2 = h^2` for the upwind root, degrading to a
/// one-sided update when only one direction is available or the two disagree
/// by at least `h`.
#[inline]
pub(crate) fn solve_quadratic(a: f64, b: f64, h: f64) -> f64 {
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    if !hi.is_finite() || hi - lo >= h {
        return lo + h;
    }
    let d = hi - lo;
    0.5 * (lo + hi + (2.0 * h * h - d * d).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_update_cases() {
        assert_eq!(solve_quadratic(2.0, f64::INFINITY, 1.0), 3.0);
        assert_eq!(solve_quadratic(0.0, 5.0, 1.0), 1.0);
        assert!((solve_quadratic(0.0, 0.0, 1.0) - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((solve_quadratic(0.0, 0.0, std::f64::consts::SQRT_2) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn chain_gives_integer_steps() {
        let region = BoolGrid::filled(6, 1, true);
        let m = fast_march(&region, [PixelCoord::new(0, 0)]);
        assert_eq!(m.times.as_slice(), &[0.0, 1.0, 2.0, 3.0, 4.0, 5.0]);
    }

    #[test]
    fn accepted_values_are_nondecreasing() {
        let region = BoolGrid::from_fn(20, 15, |p| (p.i + 2 * p.j) % 7 != 0 || p.i == 3);
        let m = fast_march(&region, [PixelCoord::new(3, 3), PixelCoord::new(10, 17)]);
        let vals: Vec<f64> = m.accepted.iter().map(|&p| m.times.at(p)).collect();
        assert!(vals.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn unreachable_pixels_stay_infinite() {
        let region = BoolGrid::from_fn(5, 1, |p| p.j != 2);
        let m = fast_march(&region, [PixelCoord::new(0, 0)]);
        assert_eq!(m.times.at(PixelCoord::new(0, 1)), 1.0);
        assert!(m.times.at(PixelCoord::new(0, 3)).is_infinite());
    }
}
