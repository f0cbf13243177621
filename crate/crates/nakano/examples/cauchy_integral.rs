//! The Cauchy singular integral by principal-value quadrature: exponentials
//! on the circle are eigenfunctions with eigenvalue ±1, and `S1 = 1` on any
//! closed curve. Also the maximal function of `ln|τ|` at a segment end.

use nakano::curve::{Curve, CurveKind};
use nakano::lab::{maximal_function, pv_cauchy, DEFAULT_PV_NODES};
use nakano::spaces::Site;
use num_complex::Complex64;

fn main() -> Result<(), nakano::Error> {
    let circle = Curve::unit_circle();
    println!("  n   (S e_n)(1.3) / e_n(1.3)   arc/chord agree");
    for n in [-32, -3, -1, 0, 1, 5, 32] {
        let f = move |s: f64| Complex64::from_polar(1.0, n as f64 * s);
        let r = pv_cauchy(&circle, &f, 1.3, DEFAULT_PV_NODES)?;
        let q = r.value / f(1.3);
        println!("{n:>3}   {:+.10} {:+.1e}i   {}", q.re, q.im, r.agree);
    }

    let ellipse = Curve::new(
        CurveKind::SmoothJordan {
            coefficients: vec![
                (1, Complex64::new(1.0, 0.0)),
                (-1, Complex64::new(0.3, 0.0)),
            ],
        },
        1 << 12,
    )?;
    let r = pv_cauchy(
        &ellipse,
        &|_| Complex64::new(1.0, 0.0),
        0.7,
        DEFAULT_PV_NODES,
    )?;
    println!(
        "\nS1 on an ellipse: {:.10} {:+.1e}i (spread {:.1e})",
        r.value.re, r.value.im, r.spread
    );

    let seg = Curve::segment(Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0))?;
    let m = maximal_function(&seg, &|s: &Site| s.r.ln(), 0.0, None)?;
    println!(
        "maximal function of ln|τ| at 0: refinements {:.3?}, growing {}",
        m.refinement, m.growing
    );
    Ok(())
}
