use crate::curve::{Curve, RadialScan, ScanDepth};
use crate::error::Result;

use super::Site;

/// Mean oscillation of `f` at a point, with the refinement trend used to
/// decide boundedness.
#[derive(Clone, Debug, PartialEq)]
pub struct BmoReport {
    /// Sup over the finest grid.
    pub value: f64,
    /// Radius attaining it.
    pub radius: f64,
    /// Sups over radii `≥ 4h`, `≥ 2h`, `≥ h` (`h` the sample spacing).
    pub refinement: [f64; 3],
    /// False when the sup grows by more than 1.5 per halving of the smallest
    /// radius.
    pub bounded: bool,
}

const PER_DECADE: usize = 64;
const GROWTH: f64 = 1.5;

/// `sup_R |Γ(t,R)|^{-1} ∫_{Γ(t,R)} |f − Δ_t(f,R)| |dτ|`, `Δ_t(f,R)` the mean of
/// `f` over the portion.
pub fn bmo_at(curve: &Curve, t: f64, f: &dyn Fn(&Site) -> f64) -> Result<BmoReport> {
    let scan = RadialScan::new(curve, t, ScanDepth::Default)?;
    let h = curve.spacing();
    let fv: Vec<f64> = scan
        .probes()
        .iter()
        .map(|p| {
            if p.centre {
                f64::NAN
            } else {
                f(&Site::from_probe(&scan, p))
            }
        })
        .collect();
    let pre = scan.prefix(&fv);
    let radii = crate::curve::log_grid(h, scan.d_t(), PER_DECADE);
    let sets = scan.crossing_sets(&radii);
    let mut osc = Vec::with_capacity(radii.len());
    for (&r, set) in radii.iter().zip(&sets) {
        let fc: Vec<f64> = set
            .iter()
            .map(|c| f(&Site::from_crossing(&scan, c)))
            .collect();
        let (m, i) = scan.integrate(r, set, &fv, &pre, &fc)?;
        if m <= 0.0 {
            osc.push(0.0);
            continue;
        }
        let mean = i / m;
        let gv: Vec<f64> = fv.iter().map(|v| (v - mean).abs()).collect();
        let gc: Vec<f64> = fc.iter().map(|v| (v - mean).abs()).collect();
        let gpre = scan.prefix(&gv);
        let (_, gi) = scan.integrate(r, set, &gv, &gpre, &gc)?;
        osc.push(gi / m);
    }
    let sup_from = |lo: f64| {
        radii
            .iter()
            .zip(&osc)
            .filter(|(r, _)| **r >= lo * (1.0 - 1e-12))
            .fold(
                (0.0f64, 0.0f64),
                |best, (&r, &o)| if o > best.0 { (o, r) } else { best },
            )
    };
    let s4 = sup_from(4.0 * h);
    let s2 = sup_from(2.0 * h);
    let s1 = sup_from(h);
    let grows = |a: f64, b: f64| a > 0.0 && b / a > GROWTH;
    Ok(BmoReport {
        value: s1.0,
        radius: s1.1,
        refinement: [s4.0, s2.0, s1.0],
        bounded: !(grows(s4.0, s2.0) && grows(s2.0, s1.0)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn segment() -> Curve {
        Curve::segment(Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)).unwrap()
    }

    #[test]
    fn constants_have_no_oscillation() {
        let r = bmo_at(&Curve::unit_circle(), 0.0, &|_| 3.0).unwrap();
        assert!(r.value.abs() < 1e-12 && r.bounded);
    }

    #[test]
    fn logarithm_is_bmo() {
        let r = bmo_at(&segment(), 0.0, &|s: &Site| s.r.ln()).unwrap();
        assert!(r.bounded);
        // Scale invariance gives exactly 2/e on every portion [0, R).
        assert!(
            (r.value - 2.0 / std::f64::consts::E).abs() < 1e-3,
            "{}",
            r.value
        );
    }

    #[test]
    fn reciprocal_is_not_bmo() {
        let r = bmo_at(&segment(), 0.0, &|s: &Site| 1.0 / s.r).unwrap();
        assert!(!r.bounded, "{:?}", r.refinement);
    }
}
