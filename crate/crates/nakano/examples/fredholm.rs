//! Fredholmness of `aP + bQ` with per-jump diagnostics: the criterion
//! expression, the integer `k`, and the local boundedness check.

use nakano::curve::Curve;
use nakano::fredholm::{decide_fredholm, PcSymbol, SpaceSpec, Tolerances};
use nakano::spaces::{ExponentField, Weight};
use num_complex::Complex64;

fn main() -> Result<(), nakano::Error> {
    let tol = Tolerances::default();
    let g = Curve::unit_circle();
    let c = Complex64::new;
    let one = PcSymbol::constant(&g, c(1.0, 0.0))?;
    let quarter = PcSymbol::jump(&g, 0.0, c(1.0, 0.0), c(0.0, 1.0))?;
    for (name, weight) in [
        ("w ≡ 1", Weight::unit()),
        ("|τ − 1|^{1/4}", Weight::power(0.0, 0.25)),
    ] {
        let space = SpaceSpec::new(g.clone(), ExponentField::constant(2.0)?, weight)?;
        let r = decide_fredholm(&quarter, &one, &space, &tol)?;
        println!("jump 1 → i, p = 2, {name}: {}", r.verdict);
        for j in &r.jumps {
            println!(
                "  s = {:.3}: γ = {:.4}{:+.4}i, α* = {:.4}, β* = {:.4}, criterion distance to ℤ {:.4}, k = {:?}, local S {:?}",
                j.s, j.gamma.re, j.gamma.im, j.alpha_star, j.beta_star, j.criterion_distance, j.k, j.local_bounded
            );
        }
        if let Some(w) = &r.witness {
            println!("  witness: {w:?}");
        }
    }

    // Two jumps whose quotient winds: a/b has limits that differ in modulus.
    let space = SpaceSpec::new(g.clone(), ExponentField::constant(3.0)?, Weight::unit())?;
    let a = PcSymbol::new(
        &g,
        vec![
            nakano::fredholm::Knot {
                s: 1.0,
                left: c(1.0, 0.0),
                right: c(-0.5, 0.5),
            },
            nakano::fredholm::Knot {
                s: 4.0,
                left: c(2.0, 0.0),
                right: c(0.0, -1.0),
            },
        ],
    )?;
    let b = PcSymbol::jump(&g, 2.5, c(1.0, 0.0), c(0.5, 0.5))?;
    let r = decide_fredholm(&a, &b, &space, &tol)?;
    println!(
        "\ntwo jumps in a, one in b, p = 3: {} (inf|b| = {:.3})",
        r.verdict, r.inf_b
    );
    for j in &r.jumps {
        println!("  s = {:.3}: gap {:+.4}, {}", j.s, j.gap, j.verdict);
    }
    Ok(())
}
