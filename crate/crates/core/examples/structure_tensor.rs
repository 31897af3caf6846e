//! Guidance directions from the structure tensor on a tilted edge.

use coherence_inpaint::guidance::{coherence_vector, structure_tensor, TensorParams};
use coherence_inpaint::{BoolGrid, PixelCoord, RasterImage};

fn main() -> coherence_inpaint::Result<()> {
    let (w, h) = (40, 40);
    for deg in [0.0f64, 30.0, 45.0, 90.0, 135.0] {
        let (s, c) = deg.to_radians().sin_cos();
        // bright half-plane whose edge runs along (cos, sin) in (i, j) coordinates,
        // offset so that no pixel centre lies on it
        let data = (0..h)
            .flat_map(|i| (0..w).map(move |j| (i as f64 - 20.0, j as f64 - 20.0)))
            .map(|(di, dj)| if di * s - dj * c > 0.37 { 230.0 } else { 20.0 })
            .collect();
        let image = RasterImage::new(w, h, 1, data)?;
        let known = BoolGrid::filled(w, h, true);
        let tensor = structure_tensor(&image, &known, PixelCoord::new(20, 20), &TensorParams::new(1.0, 4.0)?);
        let g = coherence_vector(&tensor);
        let angle = g.g[1].atan2(g.g[0]).to_degrees().rem_euclid(180.0);
        println!("edge at {deg:>5.1} deg -> g = ({:+.3}, {:+.3}), {angle:6.2} deg, coherence {:.1}", g.g[0], g.g[1], g.coherence);
    }
    Ok(())
}
