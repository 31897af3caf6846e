//! Harmonic distance with three stop arcs: a low value on the third arc
//! creates interior minima, a high one does not.

use coherence_inpaint::distance::{check_admissible, harmonic_distance, serialize_pixels};
use coherence_inpaint::fixtures::three_arc_case;

fn main() -> coherence_inpaint::Result<()> {
    for t3 in [50.0, 150.0, 249.0] {
        let (domain, stop) = three_arc_case(t3);
        let field = harmonic_distance(&domain, &stop)?;
        let report = check_admissible(&field, &domain);
        print!("t3 = {t3:>5}: ");
        if report.valid {
            let order = serialize_pixels(&field, &domain)?;
            println!("admissible, {} pixels serialized", order.len());
        } else {
            let shown: Vec<String> = report.offending_pixels.iter().take(5).map(|p| p.to_string()).collect();
            println!("{} offending pixels, e.g. {}", report.offending_pixels.len(), shown.join(" "));
            assert!(serialize_pixels(&field, &domain).is_err());
        }
    }
    Ok(())
}
