use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::spaces::{Weight, WeightFactor};

use super::{
    decide_s_bounded, leaf, BoundednessReport, IndicatorProfile, PcSymbol, SpaceSpec, Tolerances,
    Verdict,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FredholmVerdict {
    Fredholm,
    NotFredholm,
    Borderline,
}

impl std::fmt::Display for FredholmVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            FredholmVerdict::Fredholm => "FREDHOLM",
            FredholmVerdict::NotFredholm => "NOT FREDHOLM",
            FredholmVerdict::Borderline => "BORDERLINE",
        })
    }
}

/// Why a symbol is singular.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum Witness {
    /// `b` (nearly) vanishes at `s`.
    BVanishes { s: f64, value: Complex64 },
    /// The range of `a/b` (nearly) meets the origin at `s`.
    RangeMeetsZero { s: f64, value: Complex64 },
    /// The leaf of the jump at `s` contains the origin.
    LeafContainsZero { s: f64, gap: f64 },
}

/// `γ_t` from the one-sided limits: `Re γ = arg(c(t−0)/c(t+0))/2π` on the
/// principal branch, `Im γ = −ln|c(t−0)/c(t+0)|/2π`.
pub fn gamma_local(c: &PcSymbol, t: f64) -> Result<Complex64> {
    let (z1, z2) = c.one_sided(t);
    gamma_of(z1, z2)
}

fn gamma_of(z1: Complex64, z2: Complex64) -> Result<Complex64> {
    if z1.norm() == 0.0 || z2.norm() == 0.0 || !(z1.is_finite() && z2.is_finite()) {
        return Err(Error::InvalidInput("one-sided limit vanishes".into()));
    }
    let q = z1 / z2;
    // A negative zero imaginary part would land on −π; the branch is (−π, π].
    let arg = if q.arg() <= -PI { PI } else { q.arg() };
    Ok(Complex64::new(
        arg / (2.0 * PI),
        -q.norm().ln() / (2.0 * PI),
    ))
}

/// 101 uniform points on `[0, 1]`.
pub fn theta_grid() -> Vec<f64> {
    (0..=100).map(|k| k as f64 / 100.0).collect()
}

/// `1/p − Re γ + θ α*(−Im γ) + (1 − θ) β*(−Im γ)` on the θ grid.
pub fn criterion_values(
    p: f64,
    gamma: Complex64,
    profile: &IndicatorProfile,
    thetas: &[f64],
) -> Vec<f64> {
    let (a, b) = profile.at(-gamma.im);
    thetas
        .iter()
        .map(|th| 1.0 / p - gamma.re + th * a + (1.0 - th) * b)
        .collect()
}

fn distance_to_integers(v: f64) -> f64 {
    (v - v.round()).abs()
}

/// The integer `k` with `0 < k + E(θ) < 1` on the whole θ grid (with margin),
/// `E` the criterion expression; `None` when the expression meets `ℤ`.
pub fn select_kt(
    space: &SpaceSpec,
    t: f64,
    gamma: Complex64,
    thetas: &[f64],
    tol: &Tolerances,
) -> Result<Option<i64>> {
    let profile = space.profile(t, tol)?;
    Ok(select_k(
        &criterion_values(space.p_at(t), gamma, &profile, thetas),
        tol.margin,
    ))
}

fn select_k(values: &[f64], margin: f64) -> Option<i64> {
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let k = (-lo).floor() + 1.0;
    (k + lo > margin && k + hi < 1.0 - margin).then_some(k as i64)
}

/// `φ_{t,γ}(τ) = |(τ − t)^γ|`.
pub fn phi_weight(t: f64, gamma: Complex64) -> WeightFactor {
    WeightFactor::phi_gamma(t, gamma)
}

/// Boundedness of `S` with the weight `φ_{t,k−γ}·w`; `Yes` makes the local
/// representative at `t` Fredholm.
pub fn local_s_bounded(
    space: &SpaceSpec,
    t: f64,
    gamma: Complex64,
    k: i64,
    tol: &Tolerances,
) -> Result<BoundednessReport> {
    let w = space.weight().product(&Weight::single(phi_weight(
        t,
        Complex64::new(k as f64, 0.0) - gamma,
    )));
    decide_s_bounded(&space.with_weight(w)?, tol)
}

/// Per-jump record of the leaf and criterion computations.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct JumpDiagnostics {
    pub s: f64,
    pub z1: Complex64,
    pub z2: Complex64,
    pub p: f64,
    pub gamma: Complex64,
    /// `−Im γ`, where the indicator functions are read.
    pub x_hat: f64,
    pub alpha_star: f64,
    pub beta_star: f64,
    /// Largest extrapolation half-width of the indicator values used.
    pub ci: f64,
    /// Signed index-unit distance of the origin from the leaf.
    pub gap: f64,
    /// Euclidean distance of the origin from the sampled leaf.
    pub origin_distance: f64,
    /// Criterion expression on the θ grid.
    pub criterion: Vec<f64>,
    pub criterion_distance: f64,
    pub k: Option<i64>,
    /// Boundedness of `S` with the local factorization weight, when `k` exists.
    pub local_bounded: Option<Verdict>,
    pub verdict: FredholmVerdict,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NonsingularReport {
    pub nonsingular: bool,
    pub verdict: FredholmVerdict,
    pub inf_modulus: f64,
    pub witness: Option<Witness>,
    pub jumps: Vec<JumpDiagnostics>,
}

const RANGE_SAMPLES: usize = 4096;

fn jump_diagnostics(
    space: &SpaceSpec,
    s: f64,
    z1: Complex64,
    z2: Complex64,
    tol: &Tolerances,
) -> Result<JumpDiagnostics> {
    let profile = space.profile(s, tol)?;
    let p = space.p_at(s);
    let gamma = gamma_of(z1, z2)?;
    let lf = leaf(z1, z2, p, &profile)?;
    let origin = Complex64::new(0.0, 0.0);
    let gap = lf.index_gap(origin);
    let (alpha_star, beta_star) = profile.at(-gamma.im);
    let (ca, cb) = profile.ci_at(-gamma.im);
    let ci = ca.max(cb);
    let criterion = criterion_values(p, gamma, &profile, &theta_grid());
    let criterion_distance = criterion
        .iter()
        .map(|&v| distance_to_integers(v))
        .fold(f64::INFINITY, f64::min);
    let k = select_k(&criterion, tol.margin);
    let local_bounded = match k {
        Some(k) => Some(local_s_bounded(space, s, gamma, k, tol)?.verdict),
        None => None,
    };
    let verdict = if gap <= tol.margin {
        FredholmVerdict::NotFredholm
    } else if gap <= tol.margin + ci {
        FredholmVerdict::Borderline
    } else {
        FredholmVerdict::Fredholm
    };
    Ok(JumpDiagnostics {
        s,
        z1,
        z2,
        p,
        gamma,
        x_hat: -gamma.im,
        alpha_star,
        beta_star,
        ci,
        gap,
        origin_distance: lf.distance(origin),
        criterion,
        criterion_distance,
        k,
        local_bounded,
        verdict,
    })
}

/// A symbol is nonsingular when its range avoids the origin and no jump leaf
/// contains it.
pub fn nonsingular(c: &PcSymbol, space: &SpaceSpec, tol: &Tolerances) -> Result<NonsingularReport> {
    let (s_min, v_min) = c
        .range_samples(RANGE_SAMPLES)
        .into_iter()
        .min_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
        .expect("range samples");
    let inf_modulus = v_min.norm();
    if inf_modulus <= tol.margin {
        return Ok(NonsingularReport {
            nonsingular: false,
            verdict: FredholmVerdict::NotFredholm,
            inf_modulus,
            witness: Some(Witness::RangeMeetsZero {
                s: s_min,
                value: v_min,
            }),
            jumps: vec![],
        });
    }
    let jumps = c
        .jumps()
        .par_iter()
        .map(|j| jump_diagnostics(space, j.s, j.left, j.right, tol))
        .collect::<Result<Vec<_>>>()?;
    let worst = jumps
        .iter()
        .filter(|j| j.verdict == FredholmVerdict::NotFredholm)
        .min_by(|a, b| a.gap.total_cmp(&b.gap));
    let verdict = if worst.is_some() {
        FredholmVerdict::NotFredholm
    } else if jumps
        .iter()
        .any(|j| j.verdict == FredholmVerdict::Borderline)
    {
        FredholmVerdict::Borderline
    } else {
        FredholmVerdict::Fredholm
    };
    Ok(NonsingularReport {
        nonsingular: verdict == FredholmVerdict::Fredholm,
        verdict,
        inf_modulus,
        witness: worst.map(|j| Witness::LeafContainsZero { s: j.s, gap: j.gap }),
        jumps,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FredholmReport {
    pub verdict: FredholmVerdict,
    pub inf_b: f64,
    pub witness: Option<Witness>,
    pub jumps: Vec<JumpDiagnostics>,
    pub boundedness: BoundednessReport,
}

/// Fredholmness of `aP + bQ`: `inf|b| > 0` and `a/b` nonsingular. Requires `S`
/// bounded on the space and a closed curve.
pub fn decide_fredholm(
    a: &PcSymbol,
    b: &PcSymbol,
    space: &SpaceSpec,
    tol: &Tolerances,
) -> Result<FredholmReport> {
    if !space.curve().is_closed() {
        return Err(Error::InvalidInput(
            "the Fredholm criterion needs a closed curve".into(),
        ));
    }
    if (a.length() - space.curve().length()).abs() > 1e-9 * a.length() {
        return Err(Error::InvalidInput(
            "symbols do not live on the space's curve".into(),
        ));
    }
    let boundedness = decide_s_bounded(space, tol)?;
    if boundedness.verdict != Verdict::Yes {
        return Err(Error::Unbounded(format!(
            "{}: {}",
            boundedness.verdict, boundedness.reason
        )));
    }
    let (s_min, b_min) = b
        .range_samples(RANGE_SAMPLES)
        .into_iter()
        .min_by(|x, y| x.1.norm().total_cmp(&y.1.norm()))
        .expect("range samples");
    let inf_b = b_min.norm();
    if inf_b <= tol.margin {
        return Ok(FredholmReport {
            verdict: FredholmVerdict::NotFredholm,
            inf_b,
            witness: Some(Witness::BVanishes {
                s: s_min,
                value: b_min,
            }),
            jumps: vec![],
            boundedness,
        });
    }
    let ns = nonsingular(&a.quotient(b)?, space, tol)?;
    Ok(FredholmReport {
        verdict: ns.verdict,
        inf_b,
        witness: ns.witness,
        jumps: ns.jumps,
        boundedness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::Curve;
    use crate::spaces::ExponentField;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn circle(p: f64) -> SpaceSpec {
        SpaceSpec::new(
            Curve::unit_circle(),
            ExponentField::constant(p).unwrap(),
            Weight::unit(),
        )
        .unwrap()
    }

    #[test]
    fn gamma_of_quarter_turn() {
        let g = Curve::unit_circle();
        let a = PcSymbol::jump(&g, 0.0, c(1.0, 0.0), c(0.0, 1.0)).unwrap();
        let gm = gamma_local(&a, 0.0).unwrap();
        assert!((gm.re + 0.25).abs() < 1e-15 && gm.im.abs() < 1e-15);
        let z = PcSymbol::jump(&g, 0.0, c(1.0, 0.0), c(0.0, 0.0)).unwrap();
        assert!(gamma_local(&z, 0.0).is_err());
    }

    #[test]
    fn k_selection() {
        let tol = Tolerances::default();
        let half = Complex64::new(0.5, 0.0);
        assert_eq!(
            select_kt(&circle(2.0), 0.0, half, &theta_grid(), &tol).unwrap(),
            None
        );
        assert_eq!(
            select_kt(&circle(3.0), 0.0, half, &theta_grid(), &tol).unwrap(),
            Some(1)
        );
    }

    #[test]
    fn local_weights() {
        let tol = Tolerances::default();
        let s = circle(2.0);
        assert_eq!(
            local_s_bounded(&s, 0.0, c(0.25, 0.0), 0, &tol)
                .unwrap()
                .verdict,
            Verdict::Yes
        );
        assert_ne!(
            local_s_bounded(&s, 0.0, c(0.5, 0.0), 0, &tol)
                .unwrap()
                .verdict,
            Verdict::Yes
        );
        assert_eq!(
            local_s_bounded(&s, 0.0, c(2.0, 0.0), 2, &tol)
                .unwrap()
                .verdict,
            Verdict::Yes
        );
    }

    #[test]
    fn half_turn_jump() {
        let tol = Tolerances::default();
        let g = Curve::unit_circle();
        let a = PcSymbol::jump(&g, 0.0, c(1.0, 0.0), c(-1.0, 0.0)).unwrap();
        let one = PcSymbol::constant(&g, c(1.0, 0.0)).unwrap();
        let r = nonsingular(&a, &circle(2.0), &tol).unwrap();
        assert!(!r.nonsingular && matches!(r.witness, Some(Witness::LeafContainsZero { .. })));
        let r = nonsingular(&a, &circle(3.0), &tol).unwrap();
        assert!(
            r.nonsingular
                && r.jumps[0].k == Some(1)
                && r.jumps[0].local_bounded == Some(Verdict::Yes)
        );
        let f = decide_fredholm(&a, &one, &circle(2.0), &tol).unwrap();
        assert_eq!(f.verdict, FredholmVerdict::NotFredholm);
        assert!(f.jumps[0].origin_distance < 1e-9);
        let two = PcSymbol::constant(&g, c(2.0, 0.0)).unwrap();
        let half_a = a.quotient(&two).unwrap();
        assert_eq!(
            decide_fredholm(&a, &two, &circle(2.0), &tol)
                .unwrap()
                .verdict,
            decide_fredholm(&half_a, &one, &circle(2.0), &tol)
                .unwrap()
                .verdict
        );
    }

    #[test]
    fn identity_and_vanishing_b() {
        let tol = Tolerances::default();
        let g = Curve::unit_circle();
        let one = PcSymbol::constant(&g, c(1.0, 0.0)).unwrap();
        assert_eq!(
            decide_fredholm(&one, &one, &circle(2.0), &tol)
                .unwrap()
                .verdict,
            FredholmVerdict::Fredholm
        );
        let b = PcSymbol::jump(&g, 1.0, c(1.0, 0.0), c(0.0, 0.0)).unwrap();
        let r = decide_fredholm(&one, &b, &circle(2.0), &tol).unwrap();
        assert!(
            r.verdict == FredholmVerdict::NotFredholm
                && matches!(r.witness, Some(Witness::BVanishes { .. }))
        );
    }

    #[test]
    fn unbounded_space_is_an_error() {
        let g = Curve::unit_circle();
        let s = SpaceSpec::new(
            g.clone(),
            ExponentField::constant(2.0).unwrap(),
            Weight::power(0.0, 0.7),
        )
        .unwrap();
        let one = PcSymbol::constant(&g, c(1.0, 0.0)).unwrap();
        assert!(matches!(
            decide_fredholm(&one, &one, &s, &Tolerances::default()),
            Err(Error::Unbounded(_))
        ));
    }
}
