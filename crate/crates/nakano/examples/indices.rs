//! Indices of `W⁰ψ` for power and oscillating weights, and the spirality
//! indices of the circle and of log spirals at their attachment point.

use nakano::curve::Curve;
use nakano::indices::{index_pair, spirality, w0, Lattice};
use nakano::spaces::{RadialTable, Weight, WeightFactor};
use num_complex::Complex64;

fn main() -> Result<(), nakano::Error> {
    let lattice = Lattice::default();
    let circle = Curve::unit_circle();
    let segment = Curve::segment(Complex64::new(-1.0, 0.0), Complex64::new(1.0, 0.0))?;
    for (name, c, t) in [
        ("circle, t = 1", &circle, 0.0),
        ("segment, midpoint", &segment, 1.0),
    ] {
        for lambda in [-0.4, 0.3, 0.7] {
            let ip = index_pair(&w0(c, t, &Weight::power(t, lambda), lattice)?.sample)?;
            println!(
                "{name}: |τ − t|^{lambda}: α = {:.6} ± {:.1e}, β = {:.6} ± {:.1e}",
                ip.alpha, ip.alpha_ci, ip.beta, ip.beta_ci
            );
        }
    }

    // r^0.2 e^{0.3 sin(2 ln r)}: bounded oscillation around a power. The table
    // must cover the whole lattice; past its ends it continues linearly.
    let table = RadialTable::from_fn(
        |r| r.powf(0.2) * (0.3 * (2.0 * r.ln()).sin()).exp(),
        1e-14,
        2.0,
        64,
    )?;
    let w = Weight::single(WeightFactor::radial(0.0, table));
    let ip = index_pair(&w0(&circle, 0.0, &w, lattice)?.sample)?;
    println!(
        "circle, oscillating r^0.2: α = {:.4} ± {:.1e}, β = {:.4} ± {:.1e}",
        ip.alpha, ip.alpha_ci, ip.beta, ip.beta_ci
    );

    let s = spirality(&circle, 0.0, lattice, 2e-2)?;
    println!(
        "\nspirality of the circle: ({:.2e}, {:.2e})",
        s.delta_minus, s.delta_plus
    );
    for delta in [0.5, 1.0, 2.0] {
        let g = Curve::log_spiral(delta)?;
        let s = spirality(&g, g.attachment().expect("attachment"), lattice, 2e-2)?;
        println!(
            "spirality of the δ = {delta} spiral: ({:.6}, {:.6}), scaling checks {}",
            s.delta_minus,
            s.delta_plus,
            if s.scaling_ok { "ok" } else { "failed" }
        );
    }
    Ok(())
}
