//! Fast marching against the exact euclidean distance to a few point seeds.

use std::time::Instant;

use coherence_inpaint::distance::fmm::fast_march;
use coherence_inpaint::{BoolGrid, PixelCoord};

fn main() {
    let (w, h) = (64, 64);
    let seed_sets: [&[(usize, usize)]; 3] = [&[(0, 0)], &[(10, 50), (40, 12)], &[(32, 32), (0, 63), (63, 0), (5, 5)]];
    for seeds in seed_sets {
        let seeds: Vec<PixelCoord> = seeds.iter().map(|&(i, j)| PixelCoord::new(i, j)).collect();
        let start = Instant::now();
        let march = fast_march(&BoolGrid::filled(w, h, true), seeds.iter().copied());
        let elapsed = start.elapsed();
        let (mut abs, mut rel) = (0.0f64, 0.0f64);
        for p in march.times.coords() {
            let exact = seeds.iter().map(|s| p.distance(*s)).fold(f64::INFINITY, f64::min);
            let err = (march.times.at(p) - exact).abs();
            abs = abs.max(err);
            if exact >= 3.0 {
                rel = rel.max(err / exact);
            }
        }
        println!("{} seeds: max abs error {abs:.3} px, max rel error {:.2}% (exact >= 3), {elapsed:?}", seeds.len(), 100.0 * rel);
    }
}
