//! Two crossing bars: which one closes under each fill order.
//!
//! Writes the results with their distance contours to OUT_DIR (default: the
//! system temp directory).

use std::path::PathBuf;

use coherence_inpaint::contours::render_contours;
use coherence_inpaint::fixtures::{CaseKind, SyntheticCase};
use coherence_inpaint::metrics::bright_path;
use coherence_inpaint::{io, run_pipeline, DistanceKind, FillParams, PixelCoord, RunParams};

fn main() -> coherence_inpaint::Result<()> {
    let out_dir = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(std::env::temp_dir);
    let case = SyntheticCase::new(CaseKind::CrossJunction);
    let s = case.generate()?;
    let domain = s.domain()?;
    let bar: Vec<usize> = (0..case.height).filter(|&i| s.truth.value(PixelCoord::new(i, 0), 0) == 255.0).collect();
    let mid = bar[bar.len() / 2];
    let cols: Vec<usize> = (0..case.width).filter(|&j| domain.is_masked(PixelCoord::new(mid, j))).collect();
    let (from, to) = (cols[0] - 1, cols[cols.len() - 1] + 1);
    for distance in [DistanceKind::Boundary, DistanceKind::Skeleton] {
        let curves = case.reference_curves(distance);
        let params = RunParams::new(distance, FillParams::coherence(5.0, 100.0, 0.5, 10.0));
        let out = run_pipeline(&s.image, &domain, curves.as_ref(), &params)?;
        let result = out.result.expect("admissible");
        let closed = bright_path(&result, bar[0] - 2..=bar[bar.len() - 1] + 2, from, to, 200.0);
        println!("{:<9} bright bar closed: {closed}", distance.name());
        io::save_image(&render_contours(&out.field, &result, 10)?, out_dir.join(format!("junction-{}.png", distance.name())))?;
    }
    Ok(())
}
