//! Leaves joining one-sided limits: a straight segment for the half turn at
//! `p = 2`, circular arcs for other exponents, a lens when the indicator
//! values differ, and a spiralling arc on the log spiral.

use nakano::curve::Curve;
use nakano::fredholm::{leaf, IndicatorProfile, SpaceSpec, Tolerances};
use nakano::spaces::{ExponentField, Weight};
use num_complex::Complex64;

fn summary(name: &str, lf: &nakano::fredholm::Leaf) {
    let zero = Complex64::new(0.0, 0.0);
    let mid = lf.lower.len() / 2;
    println!(
        "{name}: {} boundary samples, midpoints {:.4} / {:.4}, 0 inside: {} (gap {:+.4})",
        lf.lower.len(),
        lf.lower[mid],
        lf.upper[mid],
        lf.contains(zero, 1e-9),
        lf.index_gap(zero)
    );
}

fn main() -> Result<(), nakano::Error> {
    let (one, minus) = (Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0));
    let flat = IndicatorProfile::constant(0.0, 0.0);
    summary("half turn, p = 2", &leaf(one, minus, 2.0, &flat)?);
    summary("half turn, p = 3", &leaf(one, minus, 3.0, &flat)?);
    summary(
        "quarter turn, p = 2, [α, β] = [−0.1, 0.2]",
        &leaf(
            one,
            Complex64::new(0.0, 1.0),
            2.0,
            &IndicatorProfile::constant(-0.1, 0.2),
        )?,
    );

    let spiral = Curve::log_spiral(1.0)?;
    let t = spiral.attachment().expect("attachment");
    let space = SpaceSpec::new(spiral, ExponentField::constant(2.0)?, Weight::unit())?;
    let profile = space.profile(t, &Tolerances::default())?;
    println!(
        "spiral profile at the attachment: α*(x) = {:.3?} on x = {:?}",
        [profile.at(-1.0).0, profile.at(0.0).0, profile.at(1.0).0],
        [-1, 0, 1]
    );
    summary(
        "half turn on the spiral, p = 2",
        &leaf(one, minus, 2.0, &profile)?,
    );
    Ok(())
}
