//! Luxemburg-Nakano norms with a variable exponent, Muckenhoupt constants of
//! power weights, and BMO at a point.

use nakano::curve::Curve;
use nakano::spaces::{ap_constant, bmo_at, modular, nakano_norm, ExponentField, Site, Weight};

fn main() -> Result<(), nakano::Error> {
    let c = Curve::unit_circle().with_resolution(1 << 12)?;
    let p = ExponentField::from_fn(&c, |s, _| 2.0 + 0.5 * s.cos())?;
    let f: Vec<f64> = c.sample_s().iter().map(|s| 1.0 + 0.5 * s.sin()).collect();
    for (name, w) in [
        ("w ≡ 1", Weight::unit()),
        ("|τ − 1|^0.3", Weight::power(0.0, 0.3)),
    ] {
        let bw = w.bind(&c)?;
        let n = nakano_norm(&c, &f, &p, &bw)?;
        println!(
            "‖f‖ with p = 2 + cos/2, {name}: {n:.10} (modular there {:.12})",
            modular(&c, &f, &p, &bw, n)?
        );
    }

    println!("\nA_p constants of |τ − 1|^λ for p = 2 (finite iff −1/2 < λ < 1/2):");
    for lambda in [-0.6, -0.4, 0.0, 0.25, 0.45, 0.55] {
        let r = ap_constant(&c, &Weight::power(0.0, lambda), 2.0)?;
        if r.divergent {
            println!("  λ = {lambda:+.2}: divergent at s = {:.3}", r.t);
        } else {
            println!("  λ = {lambda:+.2}: {:.4} at R = {:.3e}", r.value, r.radius);
        }
    }

    let log = bmo_at(&c, 0.0, &|s: &Site| s.r.ln())?;
    let inv = bmo_at(&c, 0.0, &|s: &Site| 1.0 / s.r)?;
    println!("\nBMO at 1: ln|τ − 1| refinements {:.4?}", log.refinement);
    println!("          1/|τ − 1|  refinements {:.4?}", inv.refinement);
    Ok(())
}
