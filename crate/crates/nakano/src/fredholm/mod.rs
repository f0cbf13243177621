//! Boundedness of the maximal and Cauchy singular integral operators, leaves,
//! and the Fredholm criterion for `aP + bQ`.

mod criterion;
mod leaf;
mod profile;
mod symbol;

pub use criterion::{
    criterion_values, decide_fredholm, gamma_local, local_s_bounded, nonsingular, phi_weight,
    select_kt, theta_grid, FredholmReport, FredholmVerdict, JumpDiagnostics, NonsingularReport,
    Witness,
};
pub use leaf::{interval_gap, leaf, mobius, Leaf};
pub use profile::{default_x_grid, indicator_profile, Asymptotes, IndicatorProfile, Line};
pub use symbol::{Jump, Knot, PcSymbol};

use std::sync::{Arc, Mutex, OnceLock};

use serde::Serialize;

use crate::curve::{CarlesonReport, Curve};
use crate::error::{Error, Result};
use crate::indices::{index_pair, IndexEngine, IndexPair, Lattice};
use crate::spaces::{dini_lipschitz_certify, DiniReport, ExponentField, Weight};

/// Three-valued outcome of a strict inequality test with a margin.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Yes,
    No,
    Borderline,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Yes => "YES",
            Verdict::No => "NO",
            Verdict::Borderline => "BORDERLINE",
        })
    }
}

/// Numerical tolerances shared by the decision procedures.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    /// Margin in index units for strict inequalities.
    pub margin: f64,
    /// Allowed concavity/convexity defect of indicator functions.
    pub shape: f64,
    /// Allowed mismatch between asymptote slopes and spirality indices.
    pub slope: f64,
    pub lattice: Lattice,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            margin: 1e-3,
            shape: 5e-3,
            slope: 2e-2,
            lattice: Lattice::default(),
        }
    }
}

/// Above this value a sampled Carleson constant is taken as a sign that the
/// curve is not Carleson.
pub const CARLESON_LIMIT: f64 = 1e4;

/// A curve, a Dini-Lipschitz exponent and a weight.
#[derive(Clone, Debug)]
pub struct SpaceSpec {
    curve: Curve,
    exponent: ExponentField,
    weight: Weight,
    dini: DiniReport,
    carleson: Arc<OnceLock<CarlesonReport>>,
    profiles: Arc<Mutex<Vec<(f64, Lattice, IndicatorProfile)>>>,
}

impl SpaceSpec {
    pub fn new(curve: Curve, exponent: ExponentField, weight: Weight) -> Result<SpaceSpec> {
        weight.bind(&curve)?;
        let dini = dini_lipschitz_certify(&exponent, &curve);
        if !dini.certified {
            return Err(Error::InvalidInput(format!(
                "exponent fails the Dini-Lipschitz certificate (worst pair {:?})",
                dini.worst
            )));
        }
        Ok(SpaceSpec {
            curve,
            exponent,
            weight,
            dini,
            carleson: Arc::new(OnceLock::new()),
            profiles: Default::default(),
        })
    }

    /// The same curve and exponent with another weight; reuses cached curve data.
    pub fn with_weight(&self, weight: Weight) -> Result<SpaceSpec> {
        weight.bind(&self.curve)?;
        Ok(SpaceSpec {
            weight,
            profiles: Default::default(),
            ..self.clone()
        })
    }

    /// The same curve and weight with another exponent.
    pub fn with_exponent(&self, exponent: ExponentField) -> Result<SpaceSpec> {
        let fresh = SpaceSpec::new(self.curve.clone(), exponent, self.weight.clone())?;
        Ok(SpaceSpec {
            carleson: self.carleson.clone(),
            ..fresh
        })
    }

    pub fn curve(&self) -> &Curve {
        &self.curve
    }

    pub fn exponent(&self) -> &ExponentField {
        &self.exponent
    }

    pub fn weight(&self) -> &Weight {
        &self.weight
    }

    pub fn dini(&self) -> &DiniReport {
        &self.dini
    }

    pub fn p_at(&self, t: f64) -> f64 {
        self.exponent.at(self.curve.wrap(t))
    }

    pub fn carleson(&self) -> &CarlesonReport {
        self.carleson
            .get_or_init(|| self.curve.carleson_constant(None))
    }

    /// Indicator profile at `t` on the default grid, computed once per point.
    pub fn profile(&self, t: f64, tol: &Tolerances) -> Result<IndicatorProfile> {
        let t = self.curve.wrap(t);
        let hit = |c: &[(f64, Lattice, IndicatorProfile)]| {
            c.iter()
                .find(|(s, l, _)| *l == tol.lattice && self.curve.same_point(*s, t))
                .map(|e| e.2.clone())
        };
        if let Some(p) = hit(&self.profiles.lock().expect("profile cache")) {
            return Ok(p);
        }
        let p = indicator_profile(self, t, &default_x_grid(), tol)?;
        self.profiles
            .lock()
            .expect("profile cache")
            .push((t, tol.lattice, p.clone()));
        Ok(p)
    }
}

/// Boundedness conditions at one singular point `t_j` of the weight.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PointMargins {
    pub t: f64,
    pub p: f64,
    /// Indices of `W⁰ψ_j`.
    pub alpha: f64,
    pub beta: f64,
    pub alpha_ci: f64,
    pub beta_ci: f64,
    /// `1/p + α`, required positive.
    pub lower: f64,
    /// `1/p + β`, required below one.
    pub upper: f64,
    pub status: Verdict,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundednessReport {
    pub verdict: Verdict,
    pub carleson: f64,
    pub jordan: bool,
    pub points: Vec<PointMargins>,
    pub reason: String,
}

/// Indices of `W⁰ψ_j` at every singular point, after checking that `W ψ_j` is
/// regular.
pub fn point_indices(space: &SpaceSpec, lattice: Lattice) -> Result<Vec<(f64, IndexPair)>> {
    let curve = space.curve();
    space
        .weight()
        .singular_points(curve)
        .into_iter()
        .map(|t| {
            let local = space.weight().local(curve, t).bind(curve)?;
            let engine = IndexEngine::new(curve, t, lattice)?;
            let ext = IndexEngine::extrema(&engine.crossing_values(&local));
            let w = engine.w_from(&ext);
            if !w.is_regular() {
                return Err(Error::NonRegular(format!(
                    "W ψ at s = {t:.6} is unbounded near x = 1"
                )));
            }
            Ok((t, index_pair(&engine.w0_from(&ext).sample)?))
        })
        .collect()
}

fn margins(space: &SpaceSpec, tol: &Tolerances) -> Result<Vec<PointMargins>> {
    Ok(point_indices(space, tol.lattice)?
        .into_iter()
        .map(|(t, ip)| {
            let p = space.p_at(t);
            let lower = 1.0 / p + ip.alpha;
            let upper = 1.0 / p + ip.beta;
            let (lm, um) = (lower - ip.alpha_ci, 1.0 - upper - ip.beta_ci);
            let status = if lm > tol.margin && um > tol.margin {
                Verdict::Yes
            } else if lower + ip.alpha_ci < -tol.margin || upper - ip.beta_ci > 1.0 + tol.margin {
                Verdict::No
            } else {
                Verdict::Borderline
            };
            PointMargins {
                t,
                p,
                alpha: ip.alpha,
                beta: ip.beta,
                alpha_ci: ip.alpha_ci,
                beta_ci: ip.beta_ci,
                lower,
                upper,
                status,
            }
        })
        .collect())
}

fn combine(points: &[PointMargins]) -> Verdict {
    if points.iter().any(|p| p.status == Verdict::No) {
        Verdict::No
    } else if points.iter().any(|p| p.status == Verdict::Borderline) {
        Verdict::Borderline
    } else {
        Verdict::Yes
    }
}

/// Sufficient condition for boundedness of the maximal operator: at every
/// singular point `0 < 1/p + α(W⁰ψ_j)` and `1/p + β(W⁰ψ_j) < 1`. `No` means the
/// sufficient condition fails by more than the margin.
pub fn decide_maximal_bounded(space: &SpaceSpec, tol: &Tolerances) -> Result<BoundednessReport> {
    let carleson = space.carleson().value;
    let jordan = space.curve().is_closed();
    if !(carleson.is_finite() && carleson < CARLESON_LIMIT) {
        return Ok(BoundednessReport {
            verdict: Verdict::No,
            carleson,
            jordan,
            points: vec![],
            reason: "not Carleson".into(),
        });
    }
    let points = margins(space, tol)?;
    let verdict = combine(&points);
    let reason = match verdict {
        Verdict::Yes => "index conditions hold with margin",
        Verdict::No => "sufficient index condition violated",
        Verdict::Borderline => "index condition within tolerance of the boundary",
    };
    Ok(BoundednessReport {
        verdict,
        carleson,
        jordan,
        points,
        reason: reason.into(),
    })
}

/// Boundedness of `S`. The strict index conditions are sufficient on Carleson
/// curves; their non-strict forms are necessary on every curve, and the strict
/// forms are necessary on Jordan curves. Values within the margin of the
/// boundary are reported as `Borderline`.
pub fn decide_s_bounded(space: &SpaceSpec, tol: &Tolerances) -> Result<BoundednessReport> {
    let carleson = space.carleson().value;
    let jordan = space.curve().is_closed();
    if !(carleson.is_finite() && carleson < CARLESON_LIMIT) {
        return Ok(BoundednessReport {
            verdict: Verdict::No,
            carleson,
            jordan,
            points: vec![],
            reason: "not Carleson".into(),
        });
    }
    let points = margins(space, tol)?;
    let verdict = combine(&points);
    let reason = match (verdict, jordan) {
        (Verdict::Yes, _) => "strict index conditions hold with margin",
        (Verdict::No, true) => "strict index condition fails on a Jordan curve",
        (Verdict::No, false) => "necessary non-strict index condition fails",
        (Verdict::Borderline, true) => {
            "index condition at the boundary; equality would mean unbounded"
        }
        (Verdict::Borderline, false) => {
            "index condition at the boundary; undetermined on an open curve"
        }
    };
    Ok(BoundednessReport {
        verdict,
        carleson,
        jordan,
        points,
        reason: reason.into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn circle_space(p: f64, lambda: f64) -> SpaceSpec {
        SpaceSpec::new(
            Curve::unit_circle(),
            ExponentField::constant(p).unwrap(),
            Weight::power(0.0, lambda),
        )
        .unwrap()
    }

    #[test]
    fn khvedelidze_examples() {
        let tol = Tolerances::default();
        assert_eq!(
            decide_s_bounded(&circle_space(2.0, 0.25), &tol)
                .unwrap()
                .verdict,
            Verdict::Yes
        );
        assert_eq!(
            decide_s_bounded(&circle_space(2.0, 0.6), &tol)
                .unwrap()
                .verdict,
            Verdict::No
        );
        assert_eq!(
            decide_s_bounded(&circle_space(2.0, 0.5), &tol)
                .unwrap()
                .verdict,
            Verdict::Borderline
        );
        assert_eq!(
            decide_maximal_bounded(&circle_space(2.0, 0.25), &tol)
                .unwrap()
                .verdict,
            Verdict::Yes
        );
        assert_eq!(
            decide_maximal_bounded(&circle_space(2.0, 0.0), &tol)
                .unwrap()
                .verdict,
            Verdict::Yes
        );
        assert_ne!(
            decide_maximal_bounded(&circle_space(2.0, 0.5), &tol)
                .unwrap()
                .verdict,
            Verdict::Yes
        );
    }

    #[test]
    fn unweighted_is_bounded() {
        let s = SpaceSpec::new(
            Curve::unit_circle(),
            ExponentField::constant(2.0).unwrap(),
            Weight::unit(),
        )
        .unwrap();
        let r = decide_s_bounded(&s, &Tolerances::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Yes);
        assert!(r.points.is_empty());
    }

    #[test]
    fn open_segment_boundary_is_borderline() {
        let g = Curve::segment(Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)).unwrap();
        let s = SpaceSpec::new(
            g,
            ExponentField::constant(2.0).unwrap(),
            Weight::power(0.5, -0.5),
        )
        .unwrap();
        let r = decide_s_bounded(&s, &Tolerances::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Borderline);
        assert!(!r.jordan);
    }

    #[test]
    fn non_dini_exponent_is_rejected() {
        let g = Curve::unit_circle();
        let p = ExponentField::from_fn(&g, |_, z| {
            let r = (z - 1.0).norm();
            if r == 0.0 {
                2.0
            } else {
                2.0 + 1.0 / (1.0 - r.ln()).sqrt()
            }
        })
        .unwrap();
        assert!(matches!(
            SpaceSpec::new(g, p, Weight::unit()),
            Err(Error::InvalidInput(_))
        ));
    }
}
