//! Variable exponents, weights and the function-space functionals built on
//! them: the Luxemburg–Nakano norm, mean oscillation at a point and the
//! Muckenhoupt constant.

mod muckenhoupt;
mod norm;
mod oscillation;
mod weight;

pub use muckenhoupt::{ap_constant, weights_equivalent, ApReport, EquivalenceReport};
pub use norm::{modular, nakano_norm};
pub use oscillation::{bmo_at, BmoReport};
pub use weight::{eta, BoundWeight, FactorKind, LnWeight, RadialTable, Site, Weight, WeightFactor};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::curve::{ArcPortion, Curve};
use crate::error::{Error, Result};

/// A variable exponent `p(·)` on a curve, piecewise linear in arclength.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum ExponentField {
    Constant(f64),
    Table {
        s: Vec<f64>,
        p: Vec<f64>,
        length: f64,
        closed: bool,
    },
}

impl ExponentField {
    pub fn constant(p: f64) -> Result<ExponentField> {
        if !(p.is_finite() && p > 1.0) {
            return Err(Error::InvalidInput(format!(
                "exponent must exceed 1 (got {p})"
            )));
        }
        Ok(ExponentField::Constant(p))
    }

    /// Samples `f(s, τ(s))` at every arclength sample of the curve.
    pub fn from_fn(curve: &Curve, f: impl Fn(f64, Complex64) -> f64) -> Result<ExponentField> {
        let knots = curve
            .sample_s()
            .iter()
            .zip(curve.sample_z())
            .map(|(&s, &z)| (s, f(s, z)))
            .collect();
        ExponentField::table(curve, knots)
    }

    /// Knots `(s, p)`, sorted by arclength.
    pub fn table(curve: &Curve, mut knots: Vec<(f64, f64)>) -> Result<ExponentField> {
        if knots.is_empty() {
            return Err(Error::InvalidInput("exponent table is empty".into()));
        }
        let l = curve.length();
        for &(s, p) in &knots {
            if !(s.is_finite() && (-1e-12 * l..=l * (1.0 + 1e-12)).contains(&s)) {
                return Err(Error::OutOfRange { s, length: l });
            }
            if !(p.is_finite() && p > 1.0) {
                return Err(Error::InvalidInput(format!(
                    "exponent must exceed 1 (got {p} at s = {s})"
                )));
            }
        }
        knots.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        knots.dedup_by(|a, b| a.0 == b.0);
        if knots.len() == 1 {
            return Ok(ExponentField::Constant(knots[0].1));
        }
        let (s, p) = knots.into_iter().unzip();
        Ok(ExponentField::Table {
            s,
            p,
            length: l,
            closed: curve.is_closed(),
        })
    }

    pub fn at(&self, s: f64) -> f64 {
        match self {
            ExponentField::Constant(p) => *p,
            ExponentField::Table {
                s: ks,
                p,
                length,
                closed,
            } => {
                let n = ks.len();
                let x = if *closed {
                    s.rem_euclid(*length)
                } else {
                    s.clamp(0.0, *length)
                };
                let j = ks.partition_point(|&k| k <= x);
                if j == 0 || j == n {
                    if !*closed {
                        return if j == 0 { p[0] } else { p[n - 1] };
                    }
                    // Periodic wrap between the last and first knots.
                    let (a, b) = (ks[n - 1], ks[0] + length);
                    let xx = if j == 0 { x + length } else { x };
                    let f = (xx - a) / (b - a);
                    return p[n - 1] + f * (p[0] - p[n - 1]);
                }
                let f = (x - ks[j - 1]) / (ks[j] - ks[j - 1]);
                p[j - 1] + f * (p[j] - p[j - 1])
            }
        }
    }

    pub fn min(&self) -> f64 {
        match self {
            ExponentField::Constant(p) => *p,
            ExponentField::Table { p, .. } => p.iter().copied().fold(f64::INFINITY, f64::min),
        }
    }

    pub fn max(&self) -> f64 {
        match self {
            ExponentField::Constant(p) => *p,
            ExponentField::Table { p, .. } => p.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        }
    }

    pub fn constant_value(&self) -> Option<f64> {
        match self {
            ExponentField::Constant(p) => Some(*p),
            ExponentField::Table { p, .. } => {
                let first = p[0];
                p.iter().all(|&x| x == first).then_some(first)
            }
        }
    }
}

/// Outcome of a Dini–Lipschitz check.
#[derive(Clone, Debug, PartialEq)]
pub struct DiniReport {
    /// Smallest `C` with `|p(τ) − p(t)| ≤ −C / ln|τ − t|` over sampled pairs.
    pub constant: f64,
    /// Arclength pair `(t, τ)` attaining the constant.
    pub worst: Option<(f64, f64)>,
    /// False when the constant keeps growing over the finest dyadic shells.
    pub certified: bool,
    /// Per-shell maxima, shell `k` covering `|τ − t| ∈ (2^{-k-1}, 2^{-k}]`.
    pub shells: Vec<f64>,
}

const DINI_CENTRES: usize = 1024;

pub fn dini_lipschitz_certify(p: &ExponentField, curve: &Curve) -> DiniReport {
    let n_shells = 64;
    let zs = curve.sample_z();
    let ss = curve.sample_s();
    let pv: Vec<f64> = ss.iter().map(|&s| p.at(s)).collect();
    let per_centre: Vec<(f64, (f64, f64), Vec<f64>)> = curve
        .centre_subsample(DINI_CENTRES)
        .into_par_iter()
        .map(|t| {
            let zt = curve.point_at(t).expect("subsample lies on the curve");
            let pt = p.at(t);
            let mut best = (0.0, (t, t));
            let mut shells = vec![0.0f64; n_shells];
            for (k, z) in zs.iter().enumerate() {
                let r = (z - zt).norm();
                if r <= 0.0 || r > 0.5 {
                    continue;
                }
                let c = (pv[k] - pt).abs() * -r.ln();
                if c > best.0 {
                    best = (c, (t, ss[k]));
                }
                let shell = ((-r.log2()).floor() as usize).min(n_shells - 1);
                shells[shell] = shells[shell].max(c);
            }
            (best.0, best.1, shells)
        })
        .collect();
    let mut constant = 0.0;
    let mut worst = None;
    let mut shells = vec![0.0f64; n_shells];
    for (c, pair, sh) in per_centre {
        if c > constant {
            constant = c;
            worst = Some(pair);
        }
        for (a, b) in shells.iter_mut().zip(sh) {
            *a = a.max(b);
        }
    }
    // Shells finer than the sample spacing carry no pairs.
    let resolved = (-(curve.spacing().log2())).floor().max(1.0) as usize;
    shells.truncate(resolved.min(n_shells));
    let tail: Vec<f64> = shells.iter().rev().take(5).rev().copied().collect();
    let growing = tail.len() == 5
        && tail[0] > 0.0
        && tail.windows(2).all(|w| w[1] > w[0])
        && tail[4] / tail[0] > 1.1;
    DiniReport {
        constant,
        worst: if constant > 0.0 { worst } else { None },
        certified: !growing,
        shells,
    }
}

/// `min p` over the arclength samples of `region` (the whole curve if `None`),
/// including the region's end points.
pub fn p_star(p: &ExponentField, curve: &Curve, region: Option<&ArcPortion>) -> f64 {
    if let ExponentField::Constant(v) = p {
        return *v;
    }
    match region {
        None => p.min(),
        Some(portion) => {
            let l = curve.length();
            let mut m = f64::INFINITY;
            for &(a, b) in &portion.components {
                m = m
                    .min(p.at(portion.centre + a))
                    .min(p.at(portion.centre + b));
                for &s in curve.sample_s() {
                    let v = s - portion.centre;
                    let inside = (a..=b).contains(&v)
                        || (curve.is_closed()
                            && ((a..=b).contains(&(v + l)) || (a..=b).contains(&(v - l))));
                    if inside {
                        m = m.min(p.at(s));
                    }
                }
            }
            m
        }
    }
}
