//! Numerical corroboration: principal-value quadrature of the Cauchy
//! integral, the maximal function, and finite sections of `aP + bQ` on the
//! unit circle.

mod section;
mod suite;

pub use section::{
    finite_section, finite_section_shifted, projections, sigma_min, sigma_min_trend, FiniteSection,
    ShiftTrend, TrendClass, TrendReport, TREND_SHIFTS,
};
pub use suite::{
    agreement_suite, random_jump_check, suite_cases, JumpCheck, JumpCheckReport, SuiteCase,
    SuiteOutcome, SuiteReport, SUITE_ORDERS,
};

use std::f64::consts::PI;

use nalgebra::{Matrix4, Vector4};
use num_complex::Complex64;
use serde::Serialize;

use crate::curve::{log_grid, Curve, RadialScan, ScanDepth};
use crate::error::{Error, Result};
use crate::spaces::Site;

/// Principal value with both exclusion conventions.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PvReport {
    /// `(Sf)(t)` with arcs `|s − t| < ε` removed.
    pub value: Complex64,
    /// `(Sf)(t)` with chord balls `|τ − t| < ε` removed.
    pub chord_value: Complex64,
    /// Change of the arc extrapolant when the ε ladder moves one step.
    pub spread: f64,
    pub agree: bool,
}

pub const DEFAULT_PV_NODES: usize = 4096;
const LADDER: usize = 5;
const CONVERGENCE: f64 = 1e-5;
const AGREEMENT: f64 = 1e-6;

const GAUSS5: [(f64, f64); 5] = [
    (0.0, 0.568_888_888_888_888_9),
    (-0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
    (0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
    (-0.906_179_845_938_664, 0.236_926_885_056_189_1),
    (0.906_179_845_938_664, 0.236_926_885_056_189_1),
];

/// Extrapolates `I(m) = I₀ + c₁m + c₃m³ + c₅m⁵` from four consecutive `m`.
fn odd_richardson(vals: &[Complex64], first: usize) -> Complex64 {
    let m = Matrix4::from_fn(|r, c| ((first + r) as f64).powi([0, 1, 3, 5][c]));
    let lu = m.lu();
    let re = lu
        .solve(&Vector4::from_fn(|r, _| vals[first + r - 1].re))
        .expect("Vandermonde");
    let im = lu
        .solve(&Vector4::from_fn(|r, _| vals[first + r - 1].im))
        .expect("Vandermonde");
    Complex64::new(re[0], im[0])
}

/// `(Sf)(t) = (1/πi) p.v. ∫ f(τ)/(τ − t) dτ` by trapezoid quadrature on
/// `nodes` arclength points centred at `t`, with the excluded window
/// `ε = m·h`, `m = 1..5`, removed symmetrically and the result extrapolated
/// to `ε → 0` in odd powers of `ε`. The chord-ball variant corrects each
/// window by the asymmetric strip between the arc and chord exclusions.
/// `f` maps arclength to values.
pub fn pv_cauchy(
    curve: &Curve,
    f: &dyn Fn(f64) -> Complex64,
    t: f64,
    nodes: usize,
) -> Result<PvReport> {
    let l = curve.length();
    if nodes < 64 {
        return Err(Error::InvalidInput(format!(
            "at least 64 nodes needed (got {nodes})"
        )));
    }
    if !(t.is_finite() && t >= -1e-9 * l && t <= l * (1.0 + 1e-9)) {
        return Err(Error::OutOfRange { s: t, length: l });
    }
    let h = l / nodes as f64;
    // Node offsets k·h and trapezoid weights over the curve.
    let (ks, t): (Vec<i64>, f64) = if curve.is_closed() {
        let half = nodes as i64 / 2;
        ((-half + 1..=half).filter(|&k| k != 0).collect(), t)
    } else {
        let i = (t / h).round() as i64;
        if i <= LADDER as i64 || i >= nodes as i64 - LADDER as i64 {
            return Err(Error::InvalidInput(format!(
                "point s = {t} too close to an end of the curve"
            )));
        }
        (
            (-i..=nodes as i64 - i).filter(|&k| k != 0).collect(),
            i as f64 * h,
        )
    };
    let integrand = |u: f64| -> Complex64 {
        let s = curve.wrap(t + u);
        f(s) * curve.tangent(s) / curve.displacement(t, u)
    };
    let open_end = |k: i64| !curve.is_closed() && (k == ks[0] || k == *ks.last().unwrap());
    let g: Vec<(i64, Complex64)> = ks.iter().map(|&k| (k, integrand(k as f64 * h))).collect();
    let values: Vec<Complex64> = g.iter().map(|(_, v)| *v).collect();
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidInput("integrand not finite at a node".into()));
    }
    let arc: Vec<Complex64> = (1..=LADDER as i64)
        .map(|m| {
            g.iter()
                .filter(|(k, _)| k.abs() >= m)
                .map(|(k, v)| {
                    let w = if k.abs() == m || open_end(*k) {
                        0.5
                    } else {
                        1.0
                    };
                    v * w * h
                })
                .sum()
        })
        .collect();
    let chord: Vec<Complex64> = arc
        .iter()
        .enumerate()
        .map(|(i, &a)| {
            let m = (i + 1) as f64;
            let eps = curve.displacement(t, m * h).norm();
            let u_minus = chord_crossing(curve, t, eps, -m * h);
            // Arc window [−mh, mh] against chord window [u₋, mh].
            let (lo, hi) = (u_minus, -m * h);
            let (c, r) = (0.5 * (lo + hi), 0.5 * (hi - lo));
            let strip: Complex64 = GAUSS5
                .iter()
                .map(|(x, w)| integrand(c + r * x) * (w * r))
                .sum();
            a - strip
        })
        .collect();
    let value = odd_richardson(&arc, 1);
    let check = odd_richardson(&arc, 2);
    let chord_value = odd_richardson(&chord, 1);
    let spread = (value - check).norm();
    if !(spread <= CONVERGENCE * value.norm().max(1.0)) {
        return Err(Error::Extrapolation(format!(
            "principal value extrapolants differ by {spread:.3e}"
        )));
    }
    let pi_i = Complex64::new(0.0, PI);
    Ok(PvReport {
        value: value / pi_i,
        chord_value: chord_value / pi_i,
        spread: spread / PI,
        agree: (value - chord_value).norm() <= AGREEMENT * PI * value.norm().max(1.0),
    })
}

/// Offset `u` near `guess < 0` with `|τ(t + u) − τ(t)| = ε`.
fn chord_crossing(curve: &Curve, t: f64, eps: f64, guess: f64) -> f64 {
    let phi = |u: f64| curve.displacement(t, u).norm() - eps;
    let (mut a, mut b) = (guess * 0.5, guess * 2.0);
    if phi(a) > 0.0 || phi(b) < 0.0 {
        return guess;
    }
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if phi(mid) < 0.0 {
            a = mid;
        } else {
            b = mid;
        }
        if (b - a).abs() <= 1e-15 * guess.abs() {
            break;
        }
    }
    0.5 * (a + b)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MaximalReport {
    pub value: f64,
    pub radius: f64,
    /// Sups over radii `≥ 4h`, `≥ 2h`, `≥ h` (`h` the sample spacing).
    pub refinement: [f64; 3],
    /// The sup keeps growing as the smallest radius halves.
    pub growing: bool,
}

const MAX_PER_DECADE: usize = 64;

/// `sup_R |Γ(t,R)|^{-1} ∫_{Γ(t,R)} |f| |dτ|` over a radius grid (default: a
/// log grid from the sample spacing to `d_t`).
pub fn maximal_function(
    curve: &Curve,
    f: &dyn Fn(&Site) -> f64,
    t: f64,
    radii: Option<&[f64]>,
) -> Result<MaximalReport> {
    let scan = RadialScan::new(curve, t, ScanDepth::Default)?;
    let h = curve.spacing();
    let radii: Vec<f64> = match radii {
        Some(r) => {
            if r.iter().any(|&x| !(x > 0.0 && x.is_finite())) {
                return Err(Error::InvalidInput("radii must be positive".into()));
            }
            r.to_vec()
        }
        None => log_grid(h, scan.d_t(), MAX_PER_DECADE),
    };
    let fv: Vec<f64> = scan
        .probes()
        .iter()
        .map(|p| {
            if p.centre {
                f64::NAN
            } else {
                f(&Site::from_probe(&scan, p)).abs()
            }
        })
        .collect();
    let pre = scan.prefix(&fv);
    let sets = scan.crossing_sets(&radii);
    let mut avgs = Vec::with_capacity(radii.len());
    for (&r, set) in radii.iter().zip(&sets) {
        let fc: Vec<f64> = set
            .iter()
            .map(|c| f(&Site::from_crossing(&scan, c)).abs())
            .collect();
        let (m, i) = scan.integrate(r, set, &fv, &pre, &fc)?;
        avgs.push(if m > 0.0 { i / m } else { 0.0 });
    }
    let sup_from = |lo: f64| {
        radii
            .iter()
            .zip(&avgs)
            .filter(|(r, _)| **r >= lo * (1.0 - 1e-12))
            .fold(
                (0.0f64, 0.0f64),
                |best, (&r, &v)| if v > best.0 { (v, r) } else { best },
            )
    };
    let all =
        radii.iter().zip(&avgs).fold(
            (0.0f64, 0.0f64),
            |best, (&r, &v)| if v > best.0 { (v, r) } else { best },
        );
    let (s4, s2, s1) = (sup_from(4.0 * h).0, sup_from(2.0 * h).0, sup_from(h).0);
    let (d1, d2) = (s2 - s4, s1 - s2);
    let scale = s1.max(1.0);
    Ok(MaximalReport {
        value: all.0,
        radius: all.1,
        refinement: [s4, s2, s1],
        growing: d1 > 1e-3 * scale && d2 > 0.5 * d1,
    })
}
