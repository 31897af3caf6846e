//! Transport direction of the coherence kernel as mu grows.

use coherence_inpaint::transport::{limit_direction, transport_field_estimate};

fn main() -> coherence_inpaint::Result<()> {
    let n = [1.0, 0.0];
    for (label, deg) in [("<g,N> > 0", 60.0f64), ("<g,N> < 0", 120.0), ("<g,N> = 0", 90.0)] {
        let g = if deg == 90.0 { [0.0, 1.0] } else { [deg.to_radians().cos(), deg.to_radians().sin()] };
        let target = limit_direction(g, n);
        print!("{label}:");
        for mu in [1.0, 10.0, 100.0, 1000.0] {
            let c = transport_field_estimate(g, n, mu, 10_000)?;
            print!("  mu={mu:<6} {:7.3} deg", c.angle_to(target));
        }
        println!();
    }
    Ok(())
}
