use rayon::prelude::*;

use super::{LnWeight, Site, Weight};
use crate::curve::{Curve, RadialScan, ScanDepth};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct ApReport {
    /// The constant, `+∞` when flagged divergent.
    pub value: f64,
    pub divergent: bool,
    /// Maximizing centre and radius (for divergence: the singular centre).
    pub t: f64,
    pub radius: f64,
}

const PER_DECADE: usize = 64;
const CENTRES: usize = 64;

/// Exclusion depths (relative to `L`) for the divergence test at singular points.
const EXCLUSION: [i32; 9] = [4, 5, 6, 7, 8, 9, 10, 11, 12];

/// `sup_{t,R} (R^{-1}∫_{Γ(t,R)} w^p)^{1/p} (R^{-1}∫_{Γ(t,R)} w^{-q})^{1/q}`.
pub fn ap_constant(curve: &Curve, w: &Weight, p: f64) -> Result<ApReport> {
    if !(p > 1.0 && p.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "A_p needs 1 < p < ∞ (got {p})"
        )));
    }
    let q = p / (p - 1.0);
    let bound = w.bind(curve)?;
    let singular = bound.singular_points();
    let mut centres = singular.clone();
    for c in curve.centre_subsample(CENTRES) {
        if !centres.iter().any(|&s| curve.same_point(s, c)) {
            centres.push(c);
        }
    }
    let h = curve.spacing();
    let results: Vec<Result<ApReport>> = centres
        .par_iter()
        .map(|&t| {
            let scan = RadialScan::new(curve, t, ScanDepth::Default)?;
            let lw: Vec<f64> = scan
                .probes()
                .iter()
                .map(|pr| {
                    if pr.centre {
                        f64::NAN
                    } else {
                        bound.ln_at(&Site::from_probe(&scan, pr))
                    }
                })
                .collect();
            let fp: Vec<f64> = lw.iter().map(|l| (p * l).exp()).collect();
            let fq: Vec<f64> = lw.iter().map(|l| (-q * l).exp()).collect();
            if singular.iter().any(|&s| curve.same_point(s, t)) && diverges(&scan, &fp, &fq)? {
                return Ok(ApReport {
                    value: f64::INFINITY,
                    divergent: true,
                    t,
                    radius: 0.0,
                });
            }
            let pp = scan.prefix(&fp);
            let pq = scan.prefix(&fq);
            let mut radii = crate::curve::log_grid(4.0 * h, scan.d_t(), PER_DECADE);
            radii.push(scan.d_t() * (1.0 + 1e-12));
            let sets = scan.crossing_sets(&radii);
            let mut best = ApReport {
                value: 0.0,
                divergent: false,
                t,
                radius: 0.0,
            };
            for (&r, set) in radii.iter().zip(&sets) {
                let lc: Vec<f64> = set
                    .iter()
                    .map(|c| bound.ln_at(&Site::from_crossing(&scan, c)))
                    .collect();
                let cp: Vec<f64> = lc.iter().map(|l| (p * l).exp()).collect();
                let cq: Vec<f64> = lc.iter().map(|l| (-q * l).exp()).collect();
                let (_, ip) = scan.integrate(r, set, &fp, &pp, &cp)?;
                let (_, iq) = scan.integrate(r, set, &fq, &pq, &cq)?;
                let v = (ip / r).powf(1.0 / p) * (iq / r).powf(1.0 / q);
                if v > best.value {
                    best = ApReport {
                        value: v,
                        divergent: false,
                        t,
                        radius: r,
                    };
                }
            }
            Ok(best)
        })
        .collect();
    let mut best: Option<ApReport> = None;
    for r in results {
        let r = r?;
        if best.as_ref().is_none_or(|b| r.value > b.value) {
            best = Some(r);
        }
    }
    Ok(best.expect("at least one centre"))
}

/// Integrals over the whole curve with the arc `|v| < ε` removed, for a
/// decreasing sequence of `ε`; divergent when the increments stop shrinking.
fn diverges(scan: &RadialScan, fp: &[f64], fq: &[f64]) -> Result<bool> {
    let l = scan.curve().length();
    let check = |f: &[f64]| {
        let totals: Vec<f64> = EXCLUSION
            .iter()
            .map(|&k| {
                let eps = l * 10f64.powi(-k);
                let g: Vec<f64> = scan
                    .probes()
                    .iter()
                    .zip(f)
                    .map(|(pr, &v)| if pr.v.abs() < eps { f64::NAN } else { v })
                    .collect();
                scan.prefix(&g).total()
            })
            .collect();
        let n = totals.len();
        let d1 = totals[n - 2] - totals[n - 3];
        let d2 = totals[n - 1] - totals[n - 2];
        !totals[n - 1].is_finite() || (d1 > 0.0 && d2 / d1 >= 0.9 && d2 / totals[n - 1] > 1e-3)
    };
    Ok(check(fp) || check(fq))
}

#[derive(Clone, Debug, PartialEq)]
pub struct EquivalenceReport {
    pub equivalent: bool,
    pub sup_ratio: f64,
    pub inf_ratio: f64,
}

const DRIFT: f64 = 1e-2;

/// Whether `w1 / w2` is bounded and bounded away from zero. Near each given
/// singular point the log-ratio is averaged over three consecutive six-decade
/// windows of radii; a monotone drift between them marks the ratio unbounded.
pub fn weights_equivalent(
    curve: &Curve,
    w1: &dyn LnWeight,
    w2: &dyn LnWeight,
    singular: &[f64],
) -> Result<EquivalenceReport> {
    let mut sup = f64::NEG_INFINITY;
    let mut inf = f64::INFINITY;
    let mut drifting = false;
    let mut track = |d: f64| {
        if d.is_finite() {
            sup = sup.max(d);
            inf = inf.min(d);
        }
    };
    for &s in curve.sample_s() {
        if singular.iter().any(|&t| curve.same_point(s, t)) {
            continue;
        }
        let site = Site {
            s,
            centre: f64::NAN,
            r: f64::NAN,
            arg: f64::NAN,
        };
        track(w1.ln_at(&site) - w2.ln_at(&site));
    }
    for &t in singular {
        let scan = RadialScan::new(curve, t, ScanDepth::Default)?;
        let floor = scan
            .probes()
            .iter()
            .filter(|p| !p.centre)
            .map(|p| p.r)
            .fold(f64::INFINITY, f64::min);
        for side in [1.0, -1.0] {
            let mut sums = [(0.0, 0usize); 3];
            for pr in scan
                .probes()
                .iter()
                .filter(|p| !p.centre && p.v * side > 0.0)
            {
                let site = Site::from_probe(&scan, pr);
                let d = w1.ln_at(&site) - w2.ln_at(&site);
                track(d);
                let dec = (pr.r / floor).log10();
                let k = (dec / 6.0).floor();
                if d.is_finite() && (0.0..3.0).contains(&k) {
                    sums[k as usize].0 += d;
                    sums[k as usize].1 += 1;
                }
            }
            if sums.iter().all(|s| s.1 > 0) {
                let m: Vec<f64> = sums.iter().map(|s| s.0 / s.1 as f64).collect();
                let (a, b) = (m[0] - m[1], m[1] - m[2]);
                if a.abs() > DRIFT && b.abs() > DRIFT && a.signum() == b.signum() {
                    drifting = true;
                }
            }
        }
    }
    Ok(EquivalenceReport {
        equivalent: !drifting && sup.is_finite() && inf.is_finite(),
        sup_ratio: sup.exp(),
        inf_ratio: inf.exp(),
    })
}
