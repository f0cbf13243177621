use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::curve::{Crossing, Curve, Probe, RadialScan, ScanDepth};
use crate::error::{Error, Result};

/// Positive radial profile `ω(r)`, interpolated linearly in `(ln r, ln ω)`
/// and extended beyond its ends with the end slopes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadialTable {
    ln_r: Vec<f64>,
    ln_w: Vec<f64>,
}

impl RadialTable {
    pub fn new(points: &[(f64, f64)]) -> Result<RadialTable> {
        if points.len() < 2 {
            return Err(Error::InvalidInput(
                "radial table needs at least two points".into(),
            ));
        }
        let mut pts: Vec<(f64, f64)> = Vec::with_capacity(points.len());
        for &(r, w) in points {
            if !(r > 0.0 && w > 0.0 && r.is_finite() && w.is_finite()) {
                return Err(Error::InvalidInput(format!(
                    "radial table needs positive finite entries (got {r}, {w})"
                )));
            }
            pts.push((r.ln(), w.ln()));
        }
        pts.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        pts.dedup_by(|a, b| a.0 == b.0);
        if pts.len() < 2 {
            return Err(Error::InvalidInput(
                "radial table needs two distinct radii".into(),
            ));
        }
        let (ln_r, ln_w) = pts.into_iter().unzip();
        Ok(RadialTable { ln_r, ln_w })
    }

    /// Tabulates `f` on a log grid over `[lo, hi]`.
    pub fn from_fn(
        f: impl Fn(f64) -> f64,
        lo: f64,
        hi: f64,
        per_decade: usize,
    ) -> Result<RadialTable> {
        let pts: Vec<(f64, f64)> = crate::curve::log_grid(lo, hi, per_decade)
            .into_iter()
            .map(|r| (r, f(r)))
            .collect();
        RadialTable::new(&pts)
    }

    pub fn ln_at(&self, r: f64) -> f64 {
        let x = r.ln();
        let n = self.ln_r.len();
        let j = self.ln_r.partition_point(|&a| a <= x).clamp(1, n - 1);
        let (x0, x1) = (self.ln_r[j - 1], self.ln_r[j]);
        let (y0, y1) = (self.ln_w[j - 1], self.ln_w[j]);
        y0 + (x - x0) * (y1 - y0) / (x1 - x0)
    }

    fn scaled(&self, s: f64) -> RadialTable {
        RadialTable {
            ln_r: self.ln_r.clone(),
            ln_w: self.ln_w.iter().map(|y| s * y).collect(),
        }
    }

    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.ln_r
            .iter()
            .zip(&self.ln_w)
            .map(|(x, y)| (x.exp(), y.exp()))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum FactorKind {
    /// `|τ − t|^λ`.
    Power { lambda: f64 },
    /// `ω(|τ − t|)`.
    RadialOscillating { table: RadialTable },
    /// `η_t(τ)^x = e^{−x·arg(τ − t)}`.
    EtaPower { x: f64 },
    /// `|(τ − t)^γ| = |τ − t|^{Re γ} e^{−Im γ · arg(τ − t)}`.
    PhiGamma { gamma: Complex64 },
}

/// A weight with a single singularity at arclength `at`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightFactor {
    pub at: f64,
    pub kind: FactorKind,
}

impl WeightFactor {
    pub fn power(at: f64, lambda: f64) -> WeightFactor {
        WeightFactor {
            at,
            kind: FactorKind::Power { lambda },
        }
    }

    pub fn eta_power(at: f64, x: f64) -> WeightFactor {
        WeightFactor {
            at,
            kind: FactorKind::EtaPower { x },
        }
    }

    pub fn phi_gamma(at: f64, gamma: Complex64) -> WeightFactor {
        WeightFactor {
            at,
            kind: FactorKind::PhiGamma { gamma },
        }
    }

    pub fn radial(at: f64, table: RadialTable) -> WeightFactor {
        WeightFactor {
            at,
            kind: FactorKind::RadialOscillating { table },
        }
    }

    /// `ln ψ` from polar coordinates of `τ − t` on the curve's branch.
    pub fn ln_polar(&self, r: f64, arg: f64) -> f64 {
        match &self.kind {
            FactorKind::Power { lambda } => {
                if *lambda == 0.0 {
                    0.0
                } else {
                    lambda * r.ln()
                }
            }
            FactorKind::RadialOscillating { table } => table.ln_at(r),
            FactorKind::EtaPower { x } => {
                if *x == 0.0 {
                    0.0
                } else {
                    -x * arg
                }
            }
            FactorKind::PhiGamma { gamma } => {
                let a = if gamma.re == 0.0 {
                    0.0
                } else {
                    gamma.re * r.ln()
                };
                let b = if gamma.im == 0.0 {
                    0.0
                } else {
                    -gamma.im * arg
                };
                a + b
            }
        }
    }

    /// `ψ^s`.
    pub fn pow(&self, s: f64) -> WeightFactor {
        let kind = match &self.kind {
            FactorKind::Power { lambda } => FactorKind::Power { lambda: s * lambda },
            FactorKind::RadialOscillating { table } => FactorKind::RadialOscillating {
                table: table.scaled(s),
            },
            FactorKind::EtaPower { x } => FactorKind::EtaPower { x: s * x },
            FactorKind::PhiGamma { gamma } => FactorKind::PhiGamma { gamma: gamma * s },
        };
        WeightFactor { at: self.at, kind }
    }
}

/// `η_t`.
pub fn eta(curve: &Curve, t: f64) -> WeightFactor {
    WeightFactor::eta_power(curve.wrap(t), 1.0)
}

/// A finite product of single-singularity factors times a positive constant.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Weight {
    factors: Vec<WeightFactor>,
    log_scale: f64,
}

impl Weight {
    pub fn unit() -> Weight {
        Weight::default()
    }

    pub fn from_factors(factors: Vec<WeightFactor>) -> Weight {
        Weight {
            factors,
            log_scale: 0.0,
        }
    }

    pub fn single(f: WeightFactor) -> Weight {
        Weight::from_factors(vec![f])
    }

    pub fn power(at: f64, lambda: f64) -> Weight {
        Weight::single(WeightFactor::power(at, lambda))
    }

    pub fn factors(&self) -> &[WeightFactor] {
        &self.factors
    }

    pub fn log_scale(&self) -> f64 {
        self.log_scale
    }

    /// `c·w` for `c > 0`.
    pub fn scaled(&self, c: f64) -> Weight {
        assert!(c > 0.0, "weights scale by positive constants");
        Weight {
            factors: self.factors.clone(),
            log_scale: self.log_scale + c.ln(),
        }
    }

    pub fn powf(&self, s: f64) -> Weight {
        Weight {
            factors: self.factors.iter().map(|f| f.pow(s)).collect(),
            log_scale: s * self.log_scale,
        }
    }

    pub fn product(&self, other: &Weight) -> Weight {
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().cloned());
        Weight {
            factors,
            log_scale: self.log_scale + other.log_scale,
        }
    }

    /// Distinct singular points (arclength), in first-seen order.
    pub fn singular_points(&self, curve: &Curve) -> Vec<f64> {
        let mut pts: Vec<f64> = Vec::new();
        for f in &self.factors {
            let a = curve.wrap(f.at);
            if !pts.iter().any(|&p| curve.same_point(p, a)) {
                pts.push(a);
            }
        }
        pts
    }

    /// The factors sitting at `t`.
    pub fn local(&self, curve: &Curve, t: f64) -> Weight {
        Weight {
            factors: self
                .factors
                .iter()
                .filter(|f| curve.same_point(f.at, t))
                .cloned()
                .collect(),
            log_scale: 0.0,
        }
    }

    /// Attaches argument branches for every singular point.
    pub fn bind(&self, curve: &Curve) -> Result<BoundWeight> {
        let l = curve.length();
        let mut groups: Vec<Group> = Vec::new();
        for f in &self.factors {
            if !(f.at.is_finite() && f.at >= -1e-9 * l && f.at <= l * (1.0 + 1e-9)) {
                return Err(Error::OutOfRange { s: f.at, length: l });
            }
            let at = curve.wrap(f.at);
            match groups.iter_mut().find(|g| curve.same_point(g.at, at)) {
                Some(g) => g.factors.push(f.clone()),
                None => groups.push(Group {
                    at,
                    factors: vec![f.clone()],
                    scan: None,
                }),
            }
        }
        for g in &mut groups {
            g.scan = Some(Arc::new(RadialScan::new(curve, g.at, ScanDepth::Default)?));
        }
        Ok(BoundWeight {
            curve: curve.clone(),
            groups,
            log_scale: self.log_scale,
        })
    }
}

/// A point of the curve together with its polar coordinates relative to a
/// reference centre (typically the centre of the scan that produced it).
#[derive(Clone, Copy, Debug)]
pub struct Site {
    pub s: f64,
    pub centre: f64,
    pub r: f64,
    pub arg: f64,
}

impl Site {
    pub fn from_probe(scan: &RadialScan, p: &Probe) -> Site {
        Site {
            s: scan.probe_s(p),
            centre: scan.centre(),
            r: p.r,
            arg: p.arg,
        }
    }

    pub fn from_crossing(scan: &RadialScan, c: &Crossing) -> Site {
        Site {
            s: c.s,
            centre: scan.centre(),
            r: c.r,
            arg: c.arg,
        }
    }
}

/// Anything that yields `ln w` at a point of the curve.
pub trait LnWeight: Sync {
    fn ln_at(&self, site: &Site) -> f64;
}

impl<F: Fn(&Site) -> f64 + Sync> LnWeight for F {
    fn ln_at(&self, site: &Site) -> f64 {
        self(site)
    }
}

#[derive(Clone, Debug)]
struct Group {
    at: f64,
    factors: Vec<WeightFactor>,
    scan: Option<Arc<RadialScan>>,
}

/// A weight bound to a curve, with one argument branch per singular point.
#[derive(Clone, Debug)]
pub struct BoundWeight {
    curve: Curve,
    groups: Vec<Group>,
    log_scale: f64,
}

impl BoundWeight {
    pub fn curve(&self) -> &Curve {
        &self.curve
    }

    pub fn singular_points(&self) -> Vec<f64> {
        self.groups.iter().map(|g| g.at).collect()
    }

    pub fn is_unit(&self) -> bool {
        self.groups.is_empty() && self.log_scale == 0.0
    }

    /// The branch scan used for the singular point at `t`, if any.
    pub fn scan_at(&self, t: f64) -> Option<Arc<RadialScan>> {
        self.groups
            .iter()
            .find(|g| self.curve.same_point(g.at, t))
            .and_then(|g| g.scan.clone())
    }

    /// `ln w(τ(s))`; NaN at a singular point.
    pub fn ln_s(&self, s: f64) -> f64 {
        self.ln_at(&Site {
            s,
            centre: f64::NAN,
            r: f64::NAN,
            arg: f64::NAN,
        })
    }

    pub fn value(&self, s: f64) -> f64 {
        self.ln_s(s).exp()
    }
}

impl LnWeight for BoundWeight {
    fn ln_at(&self, site: &Site) -> f64 {
        let mut acc = self.log_scale;
        for g in &self.groups {
            let (r, arg) = if site.centre.is_finite() && self.curve.same_point(g.at, site.centre) {
                (site.r, site.arg)
            } else {
                match g.scan.as_ref().map(|sc| sc.polar_at(site.s)) {
                    Some(Ok(pa)) => pa,
                    _ => return f64::NAN,
                }
            };
            if !(r > 0.0) {
                return f64::NAN;
            }
            for f in &g.factors {
                acc += f.ln_polar(r, arg);
            }
        }
        acc
    }
}
