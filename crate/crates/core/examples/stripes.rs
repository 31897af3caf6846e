//! Stripe pattern under three fill orders, scored by vertical periodicity.
//!
//! Usage: `cargo run --release --example stripes [OUT_DIR]`

use std::path::PathBuf;

use coherence_inpaint::fixtures::{CaseKind, SyntheticCase};
use coherence_inpaint::metrics::vertical_periodicity;
use coherence_inpaint::{io, run_pipeline, DistanceKind, FillParams, RunParams};

fn main() -> coherence_inpaint::Result<()> {
    let out_dir = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(std::env::temp_dir);
    let case = SyntheticCase::new(CaseKind::Stripes);
    let s = case.generate()?;
    let domain = s.domain()?;
    let fill = FillParams::coherence(5.0, 100.0, 0.5, 10.0);
    for distance in [DistanceKind::Boundary, DistanceKind::ActiveBoundary, DistanceKind::Skeleton] {
        let params = RunParams::new(distance, fill).with_gamma(0.1);
        let curves = case.reference_curves(distance);
        let out = run_pipeline(&s.image, &domain, curves.as_ref(), &params)?;
        let Some(result) = out.result else {
            println!("{:<10} inadmissible", distance.name());
            continue;
        };
        let active = out.report.active_boundary_pixels.map(|n| format!(", {n} active boundary pixels")).unwrap_or_default();
        println!("{:<10} R = {:.3}{active}", distance.name(), vertical_periodicity(&result, domain.mask(), case.period));
        io::save_image(&result, out_dir.join(format!("stripes-{}.png", distance.name())))?;
    }
    Ok(())
}
