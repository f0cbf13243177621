use num_complex::Complex64;

use super::Curve;
use crate::error::{Error, Result};

/// How far below the sample spacing a scan resolves radii.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ScanDepth {
    /// Fine probes down to `1e-21·d_t`.
    Default,
    /// Fine probes down to the given absolute distance.
    Down(f64),
    /// Arclength samples only.
    SamplesOnly,
}

impl ScanDepth {
    pub fn relative(r: f64) -> ScanDepth {
        ScanDepth::Down(r)
    }
}

/// One point of a scan, at signed arclength offset `v` from the centre.
#[derive(Clone, Copy, Debug)]
pub struct Probe {
    /// Position along `Γ ∖ {t}` used for ordering.
    pub u: f64,
    /// Signed offset from the centre, `s = s_t + v`.
    pub v: f64,
    pub dz: Complex64,
    pub r: f64,
    /// Unwrapped `arg(τ − t)`; NaN at the centre.
    pub arg: f64,
    pub centre: bool,
    pub fine: bool,
}

/// A point of `{τ ∈ Γ : |τ − t| = R}`.
#[derive(Clone, Copy, Debug)]
pub struct Crossing {
    pub v: f64,
    pub u: f64,
    pub s: f64,
    pub dz: Complex64,
    pub r: f64,
    pub arg: f64,
    /// Index `i` of the probe pair `(i, i + 1)` that brackets the crossing.
    pub pair: usize,
}

/// `Γ(t, R)` as a union of arclength intervals `s_t + [a, b]`.
#[derive(Clone, Debug, PartialEq)]
pub struct ArcPortion {
    pub centre: f64,
    pub radius: f64,
    /// Offsets `(a, b)` relative to the centre, `a < b`.
    pub components: Vec<(f64, f64)>,
}

impl ArcPortion {
    pub fn measure(&self) -> f64 {
        self.components.iter().map(|(a, b)| b - a).sum()
    }

    /// Whether arclength offset `v` from the centre lies in the portion.
    pub fn contains_offset(&self, v: f64, length: f64, closed: bool) -> bool {
        self.components.iter().any(|&(a, b)| {
            let hit = |x: f64| x >= a && x <= b;
            hit(v) || (closed && (hit(v + length) || hit(v - length)))
        })
    }
}

const MAX_COMPONENTS: usize = 64;
const FINE_PER_DECADE: f64 = 50.0;
const FINE_START: f64 = 128.0;

/// Geometry of `Γ` as seen from one centre `t`: distances and the unwrapped
/// argument at every sample plus geometrically refined probes near `t`.
#[derive(Clone, Debug)]
pub struct RadialScan {
    curve: Curve,
    s_t: f64,
    z_t: Complex64,
    d_t: f64,
    probes: Vec<Probe>,
    du: Vec<f64>,
}

impl RadialScan {
    pub fn new(curve: &Curve, t: f64, depth: ScanDepth) -> Result<RadialScan> {
        let l = curve.length();
        let closed = curve.is_closed();
        let s_t = curve.wrap(t);
        let z_t = curve.point_at(s_t)?;
        let offset = |s: f64| -> (f64, f64) {
            if closed {
                let u = (s - s_t).rem_euclid(l);
                (u, if u <= 0.5 * l { u } else { u - l })
            } else {
                (s - s_t, s - s_t)
            }
        };
        let mut raw: Vec<(f64, f64, bool, bool)> =
            Vec::with_capacity(curve.sample_s().len() + 2200);
        let mut h_plus = f64::INFINITY;
        let mut h_minus = f64::INFINITY;
        for &s in curve.sample_s() {
            let (u, v) = offset(s);
            if v.abs() <= 1e-12 * l {
                continue;
            }
            if v > 0.0 {
                h_plus = h_plus.min(v);
            } else {
                h_minus = h_minus.min(-v);
            }
            raw.push((u, v, false, false));
        }
        if closed {
            raw.push((0.0, 0.0, true, false));
            raw.push((l, -0.0, true, false));
        } else {
            raw.push((0.0, 0.0, true, false));
        }
        let floor = match depth {
            ScanDepth::SamplesOnly => None,
            ScanDepth::Default => Some(1e-21 * curve.d_max(s_t)),
            ScanDepth::Down(r) => Some(r.max(1e-300)),
        };
        if let Some(floor) = floor {
            for (h, sign) in [(h_plus, 1.0), (h_minus, -1.0)] {
                if !h.is_finite() {
                    continue;
                }
                // Start well outside the first samples so that portions of a few
                // sample spacings are resolved geometrically too (spiral arms
                // turn by δ·ln ratio per step).
                let h = h + FINE_START * curve.spacing();
                let mut i = 1;
                loop {
                    let mag = h * 10f64.powf(-(i as f64) / FINE_PER_DECADE);
                    if mag < 0.5 * floor {
                        break;
                    }
                    let v = sign * mag;
                    let u = if closed && v < 0.0 { l + v } else { v };
                    raw.push((u, v, false, true));
                    i += 1;
                }
            }
        }
        raw.sort_by(|a, b| {
            a.0.partial_cmp(&b.0)
                .unwrap()
                .then(a.1.partial_cmp(&b.1).unwrap())
        });
        let mut probes: Vec<Probe> = raw
            .into_iter()
            .map(|(u, v, centre, fine)| {
                let dz = if centre {
                    Complex64::new(0.0, 0.0)
                } else {
                    curve.displacement(s_t, v)
                };
                Probe {
                    u,
                    v,
                    dz,
                    r: dz.norm(),
                    arg: f64::NAN,
                    centre,
                    fine,
                }
            })
            .collect();
        if floor.is_some() {
            unwrap_args(&mut probes, closed)?;
        }
        let d_t = probes.iter().map(|p| p.r).fold(0.0, f64::max);
        let du = probes
            .windows(2)
            .map(|w| {
                if same_side(&w[0], &w[1]) {
                    w[1].v - w[0].v
                } else {
                    w[1].u - w[0].u
                }
            })
            .collect();
        Ok(RadialScan {
            curve: curve.clone(),
            s_t,
            z_t,
            d_t,
            probes,
            du,
        })
    }

    /// A scan over the arclength samples only (cheap; no sub-sample radii, no
    /// argument branch).
    pub fn samples_only(curve: &Curve, t: f64) -> RadialScan {
        RadialScan::new(curve, t, ScanDepth::SamplesOnly).expect("sample scans do not unwrap")
    }

    pub fn curve(&self) -> &Curve {
        &self.curve
    }

    pub fn centre(&self) -> f64 {
        self.s_t
    }

    pub fn centre_point(&self) -> Complex64 {
        self.z_t
    }

    pub fn d_t(&self) -> f64 {
        self.d_t
    }

    pub fn probes(&self) -> &[Probe] {
        &self.probes
    }

    /// Arclength increment of probe pair `(i, i + 1)`.
    pub fn pair_length(&self, i: usize) -> f64 {
        self.du[i]
    }

    pub fn probe_s(&self, p: &Probe) -> f64 {
        self.curve.wrap(self.s_t + p.v)
    }

    fn r_of(&self, v: f64) -> f64 {
        self.curve.displacement(self.s_t, v).norm()
    }

    /// `(|τ − t|, arg(τ − t))` on the scan's continuous branch.
    pub fn polar_at(&self, s: f64) -> Result<(f64, f64)> {
        let l = self.curve.length();
        let closed = self.curve.is_closed();
        let (u, v) = if closed {
            let u = (s - self.s_t).rem_euclid(l);
            (u, if u <= 0.5 * l { u } else { u - l })
        } else {
            (s - self.s_t, s - self.s_t)
        };
        if v.abs() <= 1e-15 * l {
            return Err(Error::InvalidInput(
                "argument branch evaluated at its own centre".into(),
            ));
        }
        let idx = self.probes.partition_point(|p| p.u < u);
        let mut best: Option<&Probe> = None;
        for j in [idx.wrapping_sub(1), idx, idx + 1, idx.wrapping_sub(2)] {
            if let Some(p) = self.probes.get(j) {
                if p.centre || p.v.signum() != v.signum() && !closed {
                    continue;
                }
                if best.is_none_or(|b| (p.u - u).abs() < (b.u - u).abs()) {
                    best = Some(p);
                }
            }
        }
        let p = best.ok_or_else(|| Error::Resolution("no probe near evaluation point".into()))?;
        let dz = self.curve.displacement(self.s_t, v);
        Ok((dz.norm(), p.arg + (dz / p.dz).arg()))
    }

    /// Crossing sets `{|τ − t| = R}` for every radius, each in curve order.
    pub fn crossing_sets(&self, radii: &[f64]) -> Vec<Vec<Crossing>> {
        let mut order: Vec<usize> = (0..radii.len()).collect();
        order.sort_by(|&a, &b| radii[a].partial_cmp(&radii[b]).unwrap());
        let sorted: Vec<f64> = order.iter().map(|&k| radii[k]).collect();
        let mut sets = vec![Vec::new(); radii.len()];
        for i in 0..self.probes.len() - 1 {
            let (a, b) = (&self.probes[i], &self.probes[i + 1]);
            let lo = a.r.min(b.r);
            let hi = a.r.max(b.r);
            let mut k = sorted.partition_point(|&r| r <= lo);
            while k < sorted.len() && sorted[k] <= hi {
                sets[order[k]].push(self.refine(i, sorted[k]));
                k += 1;
            }
        }
        sets
    }

    fn refine(&self, i: usize, radius: f64) -> Crossing {
        let (a, b) = (&self.probes[i], &self.probes[i + 1]);
        let inside_a = a.r < radius;
        let by_v = same_side(a, b);
        let (mut lo, mut hi) = if by_v { (a.v, b.v) } else { (a.u, b.u) };
        let l = self.curve.length();
        let to_v = |x: f64| {
            if by_v {
                x
            } else if self.curve.is_closed() && x > 0.5 * l {
                x - l
            } else {
                x
            }
        };
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid == lo || mid == hi {
                break;
            }
            let rm = self.r_of(to_v(mid));
            if (rm < radius) == inside_a {
                lo = mid;
            } else {
                hi = mid;
            }
            if (hi - lo).abs() <= 2.0 * f64::EPSILON * mid.abs() {
                break;
            }
        }
        let x = 0.5 * (lo + hi);
        let v = to_v(x);
        let dz = self.curve.displacement(self.s_t, v);
        let anchor = if a.centre { b } else { a };
        let arg = anchor.arg + (dz / anchor.dz).arg();
        let u = if by_v {
            if self.curve.is_closed() && v < 0.0 {
                l + v
            } else {
                v
            }
        } else {
            x
        };
        Crossing {
            v,
            u,
            s: self.curve.wrap(self.s_t + v),
            dz,
            r: radius,
            arg,
            pair: i,
        }
    }

    /// `Γ(t, R)` from exact crossings.
    pub fn portion(&self, radius: f64) -> ArcPortion {
        let sets = self.crossing_sets(&[radius]);
        self.portion_from(radius, &sets[0])
    }

    /// Components of `Γ(t, R)` given the crossing set at `R`.
    pub fn portion_from(&self, radius: f64, set: &[Crossing]) -> ArcPortion {
        let l = self.curve.length();
        let closed = self.curve.is_closed();
        let first = &self.probes[0];
        let last = self.probes.last().unwrap();
        // Intervals in ordering coordinate u, then mapped to offsets.
        let mut raw: Vec<(f64, f64)> = Vec::new();
        let mut inside = first.r < radius;
        let mut start = first.v;
        for c in set {
            if inside {
                raw.push((start, c.v));
            } else {
                start = c.v;
            }
            inside = !inside;
        }
        if inside {
            raw.push((start, last.v));
        }
        let mut components: Vec<(f64, f64)> = raw
            .into_iter()
            // Ordering runs once around: an interval that runs backwards in v wrapped past the far side.
            .map(|(a, b)| if closed && b < a { (a, b + l) } else { (a, b) })
            .collect();
        if closed {
            // The pieces ending at the two centre probes are one arc through t.
            let n = components.len();
            if n == 1 && set.is_empty() {
                components = vec![(-0.5 * l, 0.5 * l)];
            } else if n >= 2 && first.r < radius {
                let head = components.remove(0);
                let mut tail = components.pop().unwrap();
                if tail.1 > 0.5 * l {
                    tail = (tail.0 - l, tail.1 - l);
                }
                components.push((tail.0, head.1));
            }
        }
        ArcPortion {
            centre: self.s_t,
            radius,
            components,
        }
    }

    /// The component of `Γ(t, δ)` that contains `t`.
    pub fn omega_arc(&self, delta: f64) -> ArcPortion {
        let p = self.portion(delta);
        let comp = p
            .components
            .iter()
            .copied()
            .find(|&(a, b)| a <= 0.0 && b >= 0.0)
            .unwrap_or((0.0, 0.0));
        ArcPortion {
            centre: self.s_t,
            radius: delta,
            components: vec![comp],
        }
    }

    /// `|Γ(t, R)|` for many radii at once, by linear interpolation of `|τ − t|`
    /// between probes.
    pub fn measures(&self, radii: &[f64]) -> Vec<f64> {
        let mut order: Vec<usize> = (0..radii.len()).collect();
        order.sort_by(|&a, &b| radii[a].partial_cmp(&radii[b]).unwrap());
        let sorted: Vec<f64> = order.iter().map(|&k| radii[k]).collect();
        let mut full = vec![0.0; sorted.len() + 1];
        let mut partial = vec![0.0; sorted.len()];
        for (i, w) in self.probes.windows(2).enumerate() {
            let (ra, rb) = (w[0].r, w[1].r);
            let du = self.du[i];
            let lo = ra.min(rb);
            let hi = ra.max(rb);
            let k_full = sorted.partition_point(|&r| r <= hi);
            full[k_full] += du;
            let mut k = sorted.partition_point(|&r| r <= lo);
            while k < k_full {
                let r = sorted[k];
                let f = (r - ra) / (rb - ra);
                partial[k] += if ra < r { du * f } else { du * (1.0 - f) };
                k += 1;
            }
        }
        let mut acc = 0.0;
        let mut out = vec![0.0; radii.len()];
        for k in 0..sorted.len() {
            acc += full[k];
            out[order[k]] = acc + partial[k];
        }
        out
    }

    /// Trapezoid prefix sums of probe values; pairs touching a non-finite
    /// value (the centre, excluded samples) contribute nothing.
    pub fn prefix(&self, values: &[f64]) -> Prefix {
        let mut c = Vec::with_capacity(values.len());
        c.push((0.0, 0.0));
        let (mut hi, mut lo) = (0.0f64, 0.0f64);
        for i in 0..values.len() - 1 {
            let (a, b) = (values[i], values[i + 1]);
            if a.is_finite() && b.is_finite() {
                let x = 0.5 * self.du[i] * (a + b);
                let s = hi + x;
                let bb = s - hi;
                lo += (hi - (s - bb)) + (x - bb);
                hi = s;
            }
            c.push((hi, lo));
        }
        Prefix(c)
    }

    /// `(measure, ∫ f)` over the portion bounded by `set`, from probe values
    /// `f` (with prefix sums `pre`) and values `fc` at the crossings.
    pub fn integrate(
        &self,
        radius: f64,
        set: &[Crossing],
        f: &[f64],
        pre: &Prefix,
        fc: &[f64],
    ) -> Result<(f64, f64)> {
        if set.len() > 2 * MAX_COMPONENTS {
            return Err(Error::Resolution(format!(
                "portion at radius {radius:.3e} has more than {MAX_COMPONENTS} components"
            )));
        }
        let last = self.probes.len() - 1;
        // Interval endpoints as (pair index, offset within pair, value).
        let mut inside = self.probes[0].r < radius;
        let mut start: Option<(usize, f64, f64)> = if inside { Some((0, 0.0, f[0])) } else { None };
        let mut measure = 0.0;
        let mut integral = 0.0;
        let mut piece = |a: (usize, f64, f64), b: (usize, f64, f64)| {
            // a lies in pair a.0 at distance a.1 from its left probe.
            if a.0 == b.0 {
                let len = b.1 - a.1;
                measure += len;
                if a.2.is_finite() && b.2.is_finite() {
                    integral += 0.5 * len * (a.2 + b.2);
                }
                return;
            }
            let left_len = self.du[a.0] - a.1;
            measure += left_len;
            let fr = f[a.0 + 1];
            if a.2.is_finite() && fr.is_finite() {
                integral += 0.5 * left_len * (a.2 + fr);
            }
            for k in a.0 + 1..b.0 {
                measure += self.du[k];
            }
            integral += pre.range(a.0 + 1, b.0);
            measure += b.1;
            let fl = f[b.0];
            if fl.is_finite() && b.2.is_finite() {
                integral += 0.5 * b.1 * (fl + b.2);
            }
        };
        for (c, &val) in set.iter().zip(fc) {
            let off = self.offset_in_pair(c);
            let here = (c.pair, off, val);
            if inside {
                piece(start.take().unwrap(), here);
            } else {
                start = Some(here);
            }
            inside = !inside;
        }
        if inside {
            let a = start.take().unwrap();
            piece(a, (last - 1, self.du[last - 1], f[last]));
        }
        Ok((measure, integral))
    }

    fn offset_in_pair(&self, c: &Crossing) -> f64 {
        let a = &self.probes[c.pair];
        let b = &self.probes[c.pair + 1];
        if same_side(a, b) {
            c.v - a.v
        } else {
            c.u - a.u
        }
    }
}

/// Compensated running sums, so that short ranges near the end of a long
/// curve keep full relative precision.
#[derive(Clone, Debug)]
pub struct Prefix(Vec<(f64, f64)>);

impl Prefix {
    /// Sum over pairs `a..b`.
    pub fn range(&self, a: usize, b: usize) -> f64 {
        let (ha, la) = self.0[a];
        let (hb, lb) = self.0[b];
        (hb - ha) + (lb - la)
    }

    pub fn total(&self) -> f64 {
        let (h, l) = *self.0.last().unwrap();
        h + l
    }
}

fn same_side(a: &Probe, b: &Probe) -> bool {
    let sa = if a.centre { 0.0 } else { a.v.signum() };
    let sb = if b.centre { 0.0 } else { b.v.signum() };
    sa == 0.0 || sb == 0.0 || sa == sb
}

fn unwrap_args(probes: &mut [Probe], closed: bool) -> Result<()> {
    let n = probes.len();
    let runs: Vec<Vec<usize>> = if closed {
        vec![(0..n).filter(|&i| !probes[i].centre).collect()]
    } else {
        let pos: Vec<usize> = (0..n)
            .filter(|&i| !probes[i].centre && probes[i].v > 0.0)
            .collect();
        let mut neg: Vec<usize> = (0..n)
            .filter(|&i| !probes[i].centre && probes[i].v < 0.0)
            .collect();
        neg.reverse();
        vec![pos, neg]
    };
    for run in runs {
        if run.is_empty() {
            continue;
        }
        // Anchor at the sample adjacent to the centre on the positive side
        // (on the negative side for the second run of an open curve).
        let anchor = run
            .iter()
            .position(|&i| !probes[i].fine && probes[i].v > 0.0)
            .or_else(|| run.iter().position(|&i| !probes[i].fine))
            .unwrap_or(0);
        let a = run[anchor];
        probes[a].arg = probes[a].dz.arg();
        for w in anchor + 1..run.len() {
            step(probes, run[w - 1], run[w])?;
        }
        for w in (0..anchor).rev() {
            step(probes, run[w + 1], run[w])?;
        }
    }
    Ok(())
}

fn step(probes: &mut [Probe], from: usize, to: usize) -> Result<()> {
    let d = (probes[to].dz / probes[from].dz).arg();
    if d.abs() > 0.75 * std::f64::consts::PI {
        return Err(Error::Resolution(format!(
            "argument jumps by {d:.3} between adjacent probes (v = {:.3e}, {:.3e}); increase curve resolution",
            probes[from].v, probes[to].v
        )));
    }
    probes[to].arg = probes[from].arg + d;
    Ok(())
}
