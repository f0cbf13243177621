use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::curve::Curve;
use crate::error::Result;
use crate::fredholm::{decide_fredholm, FredholmVerdict, PcSymbol, SpaceSpec, Tolerances};
use crate::spaces::{ExponentField, Weight};

use super::{sigma_min_trend, TrendClass, TrendReport};

/// A single jump `1 → z2` at `τ = 1` on the unit circle, `b ≡ 1`, constant
/// `p` and weight `|τ − 1|^λ`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SuiteCase {
    pub z2: Complex64,
    pub p: f64,
    pub lambda: f64,
}

pub fn suite_cases() -> Vec<SuiteCase> {
    let targets = [
        Complex64::new(0.0, 1.0),
        Complex64::from_polar(1.0, -2.0 * PI / 3.0),
        Complex64::from_polar(1.0, 0.2 * PI),
    ];
    let mut out = Vec::new();
    for z2 in targets {
        for p in [2.0, 3.0] {
            for lambda in [0.0, 0.25] {
                out.push(SuiteCase { z2, p, lambda });
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteOutcome {
    pub case: SuiteCase,
    pub verdict: FredholmVerdict,
    pub trend: TrendReport,
    /// `None` for borderline verdicts, which are not compared.
    pub agree: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub outcomes: Vec<SuiteOutcome>,
    pub compared: usize,
    pub agreements: usize,
}

pub const SUITE_ORDERS: [usize; 4] = [32, 64, 128, 256];

/// Finite-section trends against the Fredholm criterion on [`suite_cases`].
pub fn agreement_suite(tol: &Tolerances) -> Result<SuiteReport> {
    let g = Curve::unit_circle();
    let base = SpaceSpec::new(g.clone(), ExponentField::constant(2.0)?, Weight::unit())?;
    base.carleson();
    let one = PcSymbol::constant(&g, Complex64::new(1.0, 0.0))?;
    let outcomes = suite_cases()
        .par_iter()
        .map(|case| {
            let space = base
                .with_exponent(ExponentField::constant(case.p)?)?
                .with_weight(Weight::power(0.0, case.lambda))?;
            let a = PcSymbol::jump(&g, 0.0, Complex64::new(1.0, 0.0), case.z2)?;
            let verdict = decide_fredholm(&a, &one, &space, tol)?.verdict;
            let trend = sigma_min_trend(&a, &one, &SUITE_ORDERS, case.lambda, case.p)?;
            let agree = match verdict {
                FredholmVerdict::Borderline => None,
                FredholmVerdict::Fredholm => Some(trend.class == TrendClass::Plateau),
                FredholmVerdict::NotFredholm => Some(trend.class == TrendClass::Decay),
            };
            Ok(SuiteOutcome {
                case: *case,
                verdict,
                trend,
                agree,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let compared = outcomes.iter().filter(|o| o.agree.is_some()).count();
    let agreements = outcomes.iter().filter(|o| o.agree == Some(true)).count();
    Ok(SuiteReport {
        outcomes,
        compared,
        agreements,
    })
}

/// One random jump checked against the closed-form criterion.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct JumpCheck {
    pub s: f64,
    pub left: Complex64,
    pub right: Complex64,
    pub p: f64,
    /// `1/p − arg(left/right)/2π`.
    pub expression: f64,
    pub expected: FredholmVerdict,
    pub verdict: FredholmVerdict,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct JumpCheckReport {
    pub checks: Vec<JumpCheck>,
    pub agreements: usize,
}

/// Closed form on the unit circle with constant `p` and no weight: `aP + Q`
/// with one jump is Fredholm iff `1/p − arg(a(t−0)/a(t+0))/2π ∉ ℤ`.
/// Positions are uniform on the circle; values have modulus in `[1/2, 2]` so that jumps with `|z₁| ≠ |z₂|`
/// are exercised too.
pub fn random_jump_check(
    seed: u64,
    count: usize,
    exponents: &[f64],
    tol: &Tolerances,
) -> Result<JumpCheckReport> {
    let g = Curve::unit_circle();
    let base = SpaceSpec::new(g.clone(), ExponentField::constant(2.0)?, Weight::unit())?;
    base.carleson();
    let one = PcSymbol::constant(&g, Complex64::new(1.0, 0.0))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cases = Vec::with_capacity(count * exponents.len());
    for _ in 0..count {
        let mut draw =
            || Complex64::from_polar(2f64.powf(rng.gen_range(-1.0..=1.0)), rng.gen_range(-PI..PI));
        let (left, right) = (draw(), draw());
        let s = rng.gen_range(0.0..2.0 * PI);
        for &p in exponents {
            cases.push((s, left, right, p));
        }
    }
    let mut spaces = Vec::new();
    for &p in exponents {
        spaces.push((p, base.with_exponent(ExponentField::constant(p)?)?));
    }
    let checks = cases
        .par_iter()
        .map(|&(s, left, right, p)| {
            let space = &spaces.iter().find(|(q, _)| *q == p).expect("space").1;
            let mut turn = (left.arg() - right.arg()) / (2.0 * PI);
            if turn <= -0.5 {
                turn += 1.0;
            } else if turn > 0.5 {
                turn -= 1.0;
            }
            let expression = 1.0 / p - turn;
            let expected = if (expression - expression.round()).abs() <= tol.margin {
                FredholmVerdict::NotFredholm
            } else {
                FredholmVerdict::Fredholm
            };
            let a = PcSymbol::jump(&g, s, left, right)?;
            let verdict = decide_fredholm(&a, &one, space, tol)?.verdict;
            Ok(JumpCheck {
                s,
                left,
                right,
                p,
                expression,
                expected,
                verdict,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let agreements = checks.iter().filter(|c| c.expected == c.verdict).count();
    Ok(JumpCheckReport { checks, agreements })
}
