//! Carleson constants of the built-in curves and the arcs `Γ(t, R)` of the
//! log spiral seen from a point of its closing circle.

use nakano::curve::Curve;
use num_complex::Complex64;

fn main() -> Result<(), nakano::Error> {
    let curves = [
        ("unit circle", Curve::unit_circle()),
        (
            "segment [0, 1]",
            Curve::segment(Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0))?,
        ),
        ("log spiral δ = 1", Curve::log_spiral(1.0)?),
    ];
    for (name, c) in &curves {
        let r = c.carleson_constant(None);
        println!(
            "{name:>18}: length {:.6}, Carleson {:.6} at s = {:.4}, R = {:.4}",
            c.length(),
            r.value,
            r.t,
            r.radius
        );
    }

    let spiral = &curves[2].1;
    let t = 0.84 * spiral.length();
    println!("\nportions of the spiral around s = {t:.4}:");
    for r in [0.1, 0.3, 0.5, 0.6, 0.8] {
        let p = spiral.portion(t, r)?;
        let comps: Vec<String> = p
            .components
            .iter()
            .map(|(a, b)| format!("[{a:.4}, {b:.4}]"))
            .collect();
        println!(
            "  R = {r:.1}: measure {:.4}, {}",
            p.measure(),
            comps.join(" ")
        );
    }
    let branch = spiral.arg_branch(spiral.attachment().expect("spiral attachment"))?;
    println!("\narg(τ − t) near the attachment point, against −δ ln|τ − t|:");
    for k in 1..=4 {
        let s = branch.centre() + 10f64.powi(-k);
        let r = (spiral.point_at(s)? - spiral.point_at(branch.centre())?).norm();
        println!(
            "  |τ − t| = {r:.3e}: arg {:.6}, −ln r {:.6}",
            branch.eval(s)?,
            -r.ln()
        );
    }
    Ok(())
}
