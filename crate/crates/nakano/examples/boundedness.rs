//! Boundedness of `S` on the circle with one power weight, over a grid of
//! constant exponents and weight powers: the strip `0 < 1/p + λ < 1`.

use nakano::curve::Curve;
use nakano::fredholm::{decide_s_bounded, SpaceSpec, Tolerances, Verdict};
use nakano::spaces::{ExponentField, Weight};

fn main() -> Result<(), nakano::Error> {
    let tol = Tolerances::default();
    let lambdas: Vec<f64> = (-9..=9).map(|k| 0.1 * k as f64).collect();
    print!("  p \\ λ ");
    for l in &lambdas {
        print!("{l:>5.1}");
    }
    println!();
    for p in [1.5, 2.0, 3.0, 4.0] {
        let base = SpaceSpec::new(
            Curve::unit_circle(),
            ExponentField::constant(p)?,
            Weight::unit(),
        )?;
        print!("{p:>7.1} ");
        for &l in &lambdas {
            let r = decide_s_bounded(&base.with_weight(Weight::power(0.0, l))?, &tol)?;
            let mark = match r.verdict {
                Verdict::Yes => "+",
                Verdict::No => ".",
                Verdict::Borderline => "?",
            };
            print!("{mark:>5}");
        }
        println!();
    }
    println!("\n+ bounded, . unbounded, ? borderline (1/p + λ within the margin of 0 or 1)");
    Ok(())
}
