//! Broken diagonals: distance-to-boundary versus harmonic fill order.
//!
//! Usage: `cargo run --release --example broken_diagonal [OUT_DIR]`

use std::path::PathBuf;

use coherence_inpaint::fixtures::{CaseKind, SyntheticCase};
use coherence_inpaint::metrics::{diagonal_corridor, mismatch_fraction};
use coherence_inpaint::{io, run_pipeline, DistanceKind, FillParams, RunParams};

fn main() -> coherence_inpaint::Result<()> {
    let out_dir = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(std::env::temp_dir);
    let fill = FillParams::coherence(3.0, 50.0, 0.5, 5.0);
    for kind in [CaseKind::Diagonal, CaseKind::TwoDiagonals] {
        let case = SyntheticCase::new(kind);
        let s = case.generate()?;
        let domain = s.domain()?;
        for distance in [DistanceKind::Boundary, DistanceKind::Harmonic] {
            let curves = case.reference_curves(distance);
            let out = run_pipeline(&s.image, &domain, curves.as_ref(), &RunParams::new(distance, fill))?;
            let result = out.result.expect("reference curves are admissible");
            let tl2br = diagonal_corridor(&case, &domain, true, 3.0);
            let bl2tr = diagonal_corridor(&case, &domain, false, 3.0);
            println!(
                "{:<14} {:<9} mismatch along tl2br {:5.1}%  bl2tr {:5.1}%",
                kind.name(),
                distance.name(),
                100.0 * mismatch_fraction(&result, &s.truth, &tl2br, 32.0),
                100.0 * mismatch_fraction(&result, &s.truth, &bl2tr, 32.0),
            );
            io::save_image(&result, out_dir.join(format!("{kind}-{}.png", distance.name())))?;
        }
    }
    println!("results written to {}", out_dir.display());
    Ok(())
}
