use std::sync::Arc;

use crate::curve::{Crossing, Curve, RadialScan, ScanDepth};
use crate::error::{Error, Result};
use crate::spaces::{LnWeight, Site};

use super::{SubmultiplicativeSample, PER_DECADE};

/// Index grid and radius lattice.
///
/// The `x` grid has `J = 25·decades/2` points per side. Radii are
/// `r_m = d_t·10^{−m/25}`, `m = 0..=m_max`, with `m_max = 2J + 150`; the
/// limsup windows start at `c_k = J + 25k`, `k = 0..=4`, so the innermost
/// window still holds every grid ratio with 50 lattice steps to spare.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Lattice {
    pub decades: usize,
}

impl Default for Lattice {
    fn default() -> Self {
        Lattice { decades: 12 }
    }
}

impl Lattice {
    pub fn new(decades: usize) -> Result<Lattice> {
        if !(4..=14).contains(&decades) || !decades.is_multiple_of(2) {
            return Err(Error::InvalidInput(format!(
                "grid decades must be even and in [4, 14] (got {decades})"
            )));
        }
        Ok(Lattice { decades })
    }

    pub fn j_max(&self) -> usize {
        PER_DECADE * self.decades / 2
    }

    pub fn m_max(&self) -> usize {
        2 * self.j_max() + 150
    }

    pub fn window_start(&self, k: usize) -> usize {
        self.j_max() + PER_DECADE * k
    }
}

/// `W⁰` sample with the limsup window trend.
#[derive(Clone, Debug, PartialEq)]
pub struct W0Sample {
    pub sample: SubmultiplicativeSample,
    /// Per grid point, `|v(c₃) − v(c₄)|` in log units.
    pub half_widths: Vec<f64>,
}

/// Crossing sets of one centre on the radius lattice, reusable for any
/// number of weights.
#[derive(Clone, Debug)]
pub struct IndexEngine {
    scan: Arc<RadialScan>,
    lattice: Lattice,
    radii: Vec<f64>,
    sets: Vec<Vec<Crossing>>,
}

impl IndexEngine {
    pub fn new(curve: &Curve, t: f64, lattice: Lattice) -> Result<IndexEngine> {
        let scan = Arc::new(RadialScan::new(curve, t, ScanDepth::Default)?);
        IndexEngine::from_scan(scan, lattice)
    }

    pub fn from_scan(scan: Arc<RadialScan>, lattice: Lattice) -> Result<IndexEngine> {
        // Just inside d_t: arcs of the curve may lie on the circle |τ − t| = d_t.
        let d = scan.d_t() * (1.0 - 1e-9);
        let radii: Vec<f64> = (0..=lattice.m_max())
            .map(|m| d * 10f64.powf(-(m as f64) / PER_DECADE as f64))
            .collect();
        let sets = scan.crossing_sets(&radii);
        if sets.iter().all(|s| s.is_empty()) {
            return Err(Error::Resolution(
                "no circle intersections on the radius lattice".into(),
            ));
        }
        Ok(IndexEngine {
            scan,
            lattice,
            radii,
            sets,
        })
    }

    pub fn scan(&self) -> &RadialScan {
        &self.scan
    }

    pub fn lattice(&self) -> Lattice {
        self.lattice
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn crossing_sets(&self) -> &[Vec<Crossing>] {
        &self.sets
    }

    /// `ln ψ` at every crossing of every lattice radius.
    pub fn crossing_values(&self, ln: &dyn LnWeight) -> Vec<Vec<f64>> {
        self.sets
            .iter()
            .map(|set| {
                set.iter()
                    .map(|c| ln.ln_at(&Site::from_crossing(&self.scan, c)))
                    .collect()
            })
            .collect()
    }

    /// `(max, min)` of the given crossing values per lattice radius; NaN for
    /// empty sets.
    pub fn extrema(values: &[Vec<f64>]) -> Vec<(f64, f64)> {
        values
            .iter()
            .map(|v| {
                if v.is_empty() || v.iter().any(|x| !x.is_finite()) {
                    (f64::NAN, f64::NAN)
                } else {
                    v.iter()
                        .fold((f64::NEG_INFINITY, f64::INFINITY), |(a, b), &x| {
                            (a.max(x), b.min(x))
                        })
                }
            })
            .collect()
    }

    /// `sup_{a − b = −j, lo ≤ a, b ≤ m_max} up[a] − low[b]` for every grid `j`.
    fn pair_sup(&self, up: &[f64], low: &[f64], lo: usize) -> Vec<f64> {
        let jm = self.lattice.j_max() as i64;
        let mm = self.lattice.m_max() as i64;
        (-jm..=jm)
            .map(|j| {
                let mut best = f64::NEG_INFINITY;
                for b in lo as i64..=mm {
                    let a = b - j;
                    if a < lo as i64 || a > mm {
                        continue;
                    }
                    let v = up[a as usize] - low[b as usize];
                    if v > best {
                        best = v;
                    }
                }
                if best == f64::NEG_INFINITY {
                    f64::NAN
                } else {
                    best
                }
            })
            .collect()
    }

    pub fn w_from(&self, ext: &[(f64, f64)]) -> SubmultiplicativeSample {
        let (up, low): (Vec<f64>, Vec<f64>) = ext.iter().copied().unzip();
        SubmultiplicativeSample::from_ln(self.lattice.j_max(), self.pair_sup(&up, &low, 0))
    }

    pub fn w0_from(&self, ext: &[(f64, f64)]) -> W0Sample {
        let (up, low): (Vec<f64>, Vec<f64>) = ext.iter().copied().unzip();
        self.limsup(&up, &low)
    }

    fn limsup(&self, up: &[f64], low: &[f64]) -> W0Sample {
        let v3 = self.pair_sup(up, low, self.lattice.window_start(3));
        let v4 = self.pair_sup(up, low, self.lattice.window_start(4));
        let half_widths = v3.iter().zip(&v4).map(|(a, b)| (a - b).abs()).collect();
        W0Sample {
            sample: SubmultiplicativeSample::from_ln(self.lattice.j_max(), v4),
            half_widths,
        }
    }

    pub fn w(&self, ln: &dyn LnWeight) -> SubmultiplicativeSample {
        self.w_from(&Self::extrema(&self.crossing_values(ln)))
    }

    pub fn w0(&self, ln: &dyn LnWeight) -> W0Sample {
        self.w0_from(&Self::extrema(&self.crossing_values(ln)))
    }

    /// Portion means `|Γ(t, r_m)|^{-1} ∫ ln w` on the lattice.
    pub fn portion_means(&self, ln: &dyn LnWeight) -> Result<Vec<f64>> {
        let scan = &self.scan;
        let f: Vec<f64> = scan
            .probes()
            .iter()
            .map(|p| {
                if p.centre {
                    f64::NAN
                } else {
                    ln.ln_at(&Site::from_probe(scan, p))
                }
            })
            .collect();
        let pre = scan.prefix(&f);
        let fc = self.crossing_values(ln);
        self.radii
            .iter()
            .zip(&self.sets)
            .zip(&fc)
            .map(|((&r, set), vals)| {
                let (m, i) = scan.integrate(r, set, &f, &pre, vals)?;
                Ok(if m > 0.0 { i / m } else { f64::NAN })
            })
            .collect()
    }

    pub fn v_from(&self, means: &[f64]) -> SubmultiplicativeSample {
        SubmultiplicativeSample::from_ln(self.lattice.j_max(), self.pair_sup(means, means, 0))
    }

    pub fn v0_from(&self, means: &[f64]) -> W0Sample {
        self.limsup(means, means)
    }

    /// `ln H_{w,t}(R₁, R₂)` for arbitrary radii.
    pub fn ln_h(&self, ln: &dyn LnWeight, r1: f64, r2: f64) -> Result<f64> {
        let scan = &self.scan;
        let f: Vec<f64> = scan
            .probes()
            .iter()
            .map(|p| {
                if p.centre {
                    f64::NAN
                } else {
                    ln.ln_at(&Site::from_probe(scan, p))
                }
            })
            .collect();
        let pre = scan.prefix(&f);
        let mean = |r: f64| -> Result<f64> {
            let set = &scan.crossing_sets(&[r])[0];
            let vals: Vec<f64> = set
                .iter()
                .map(|c| ln.ln_at(&Site::from_crossing(scan, c)))
                .collect();
            let (m, i) = scan.integrate(r, set, &f, &pre, &vals)?;
            if m <= 0.0 || !i.is_finite() {
                return Err(Error::NotInSpace(format!(
                    "log w not integrable on Γ(t, {r:.3e})"
                )));
            }
            Ok(i / m)
        };
        Ok(mean(r1)? - mean(r2)?)
    }
}
