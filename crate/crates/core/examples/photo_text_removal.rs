//! Removes overlaid text (or any masked region) from a photo.
//!
//! Usage: `cargo run --release --example photo_text_removal IMAGE MASK OUT [--telea]`
//!
//! Mask pixels with luminance >= 128 are inpainted. The fill order is the
//! distance to the mask boundary; thin strokes rarely need anything else.

use coherence_inpaint::{io, run_pipeline, DistanceKind, FillParams, InpaintDomain, RunParams};

fn main() -> coherence_inpaint::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    if args.len() < 3 {
        eprintln!("usage: photo_text_removal IMAGE MASK OUT [--telea]");
        std::process::exit(2);
    }
    let image = io::load_image(&args[0])?;
    let domain = InpaintDomain::new(&image, &io::load_mask(&args[1])?)?;
    let fill = if args.iter().any(|a| a == "--telea") {
        FillParams::telea(4.0)
    } else {
        FillParams::coherence(4.0, 25.0, 2.0, 3.0)
    };
    let out = run_pipeline(&image, &domain, None, &RunParams::new(DistanceKind::Boundary, fill))?;
    let result = out.result.expect("distance to boundary is always admissible");
    io::save_image(&result, &args[2])?;
    println!(
        "{} pixels filled, {} fallbacks, {} with isotropic guidance",
        out.report.pixels_filled, out.report.fallbacks, out.report.isotropic_guidance
    );
    Ok(())
}
