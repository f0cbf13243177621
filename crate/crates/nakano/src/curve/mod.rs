//! Curve geometry: arclength parametrization, circle portions, the Carleson
//! constant and the continuous argument branch.
//!
//! A [`Curve`] is an immutable, cheaply clonable handle. All sups and infs over
//! the curve are taken over its arclength samples; queries close to a chosen
//! centre go through a [`RadialScan`], which adds geometrically spaced probes
//! so that radii far below the sample spacing stay resolvable.

mod scan;

pub use scan::{ArcPortion, Crossing, Prefix, Probe, RadialScan, ScanDepth};

use std::f64::consts::{PI, TAU};
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default number of arclength samples.
pub const DEFAULT_RESOLUTION: usize = 1 << 14;

/// Construction parameters of a curve.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum CurveKind {
    /// `e^{is}`, `s ∈ [0, 2π)`.
    UnitCircle,
    /// `z(θ) = Σ c_k e^{ikθ}`; reparametrized by arclength.
    SmoothJordan { coefficients: Vec<(i32, Complex64)> },
    /// A logarithmic spiral arm through the attachment point, closed by a
    /// half circle of radius `r0` about that point.
    LogSpiralAttached { delta: f64, r0: f64 },
    /// Polygon through the given points, optionally closed.
    PolylineSampled {
        points: Vec<Complex64>,
        closed: bool,
    },
}

#[derive(Debug)]
enum Geometry {
    Circle,
    Fourier(Fourier),
    Spiral(Spiral),
    Polyline(Polyline),
}

#[derive(Debug)]
struct Inner {
    kind: CurveKind,
    geometry: Geometry,
    length: f64,
    closed: bool,
    s: Vec<f64>,
    z: Vec<Complex64>,
    special: Vec<f64>,
}

/// A simple rectifiable curve, closed (Jordan, counter-clockwise, origin
/// inside) or open.
#[derive(Clone, Debug)]
pub struct Curve {
    inner: Arc<Inner>,
}

/// `e^{iφ} − 1` without cancellation for small `φ`.
pub(crate) fn expm1i(phi: f64) -> Complex64 {
    let h = 0.5 * phi;
    Complex64::new(0.0, 2.0 * h.sin()) * Complex64::from_polar(1.0, h)
}

impl Curve {
    pub fn new(kind: CurveKind, resolution: usize) -> Result<Curve> {
        if resolution < 64 {
            return Err(Error::InvalidCurve(format!(
                "resolution {resolution} below 64"
            )));
        }
        let (geometry, length, closed, special, kind) = match kind {
            CurveKind::UnitCircle => (
                Geometry::Circle,
                TAU,
                true,
                vec![0.0],
                CurveKind::UnitCircle,
            ),
            CurveKind::SmoothJordan { coefficients } => {
                let f = Fourier::new(&coefficients, resolution)?;
                let l = f.length();
                let stored = CurveKind::SmoothJordan {
                    coefficients: f.coeffs.clone(),
                };
                (Geometry::Fourier(f), l, true, vec![0.0], stored)
            }
            CurveKind::LogSpiralAttached { delta, r0 } => {
                let sp = Spiral::new(delta, r0)?;
                let l = sp.length();
                let att = sp.attachment();
                (
                    Geometry::Spiral(sp),
                    l,
                    true,
                    vec![att],
                    CurveKind::LogSpiralAttached { delta, r0 },
                )
            }
            CurveKind::PolylineSampled { points, closed } => {
                let pl = Polyline::new(points, closed)?;
                let l = pl.length();
                let special = pl.vertex_arclengths();
                let stored = CurveKind::PolylineSampled {
                    points: pl.pts.clone(),
                    closed,
                };
                (Geometry::Polyline(pl), l, closed, special, stored)
            }
        };
        let h = length / resolution as f64;
        let count = if closed { resolution } else { resolution + 1 };
        let s: Vec<f64> = (0..count).map(|k| k as f64 * h).collect();
        let mut inner = Inner {
            kind,
            geometry,
            length,
            closed,
            s,
            z: Vec::new(),
            special,
        };
        inner.z = inner.s.iter().map(|&s| inner.eval(s)).collect();
        let curve = Curve {
            inner: Arc::new(inner),
        };
        curve.validate()?;
        Ok(curve)
    }

    pub fn unit_circle() -> Curve {
        Curve::new(CurveKind::UnitCircle, DEFAULT_RESOLUTION).expect("unit circle is valid")
    }

    pub fn segment(a: Complex64, b: Complex64) -> Result<Curve> {
        Curve::new(
            CurveKind::PolylineSampled {
                points: vec![a, b],
                closed: false,
            },
            DEFAULT_RESOLUTION,
        )
    }

    pub fn log_spiral(delta: f64) -> Result<Curve> {
        Curve::new(
            CurveKind::LogSpiralAttached { delta, r0: 0.5 },
            DEFAULT_RESOLUTION,
        )
    }

    pub fn with_resolution(&self, resolution: usize) -> Result<Curve> {
        Curve::new(self.inner.kind.clone(), resolution)
    }

    pub fn kind(&self) -> &CurveKind {
        &self.inner.kind
    }

    pub fn length(&self) -> f64 {
        self.inner.length
    }

    pub fn is_closed(&self) -> bool {
        self.inner.closed
    }

    /// Number of arclength intervals between samples.
    pub fn resolution(&self) -> usize {
        if self.inner.closed {
            self.inner.s.len()
        } else {
            self.inner.s.len() - 1
        }
    }

    /// Sample spacing in arclength.
    pub fn spacing(&self) -> f64 {
        self.inner.length / self.resolution() as f64
    }

    pub fn sample_s(&self) -> &[f64] {
        &self.inner.s
    }

    pub fn sample_z(&self) -> &[Complex64] {
        &self.inner.z
    }

    /// Points where the geometry is special: the spiral attachment point,
    /// polyline vertices, the parameter origin.
    pub fn special_points(&self) -> &[f64] {
        &self.inner.special
    }

    /// Arclength of the spiral attachment point, if this is a spiral.
    pub fn attachment(&self) -> Option<f64> {
        match &self.inner.geometry {
            Geometry::Spiral(sp) => Some(sp.attachment()),
            _ => None,
        }
    }

    pub fn point_at(&self, s: f64) -> Result<Complex64> {
        let l = self.inner.length;
        let slack = 1e-12 * l;
        if !(s >= -slack && s <= l + slack) {
            return Err(Error::OutOfRange { s, length: l });
        }
        Ok(self.inner.eval(s.clamp(0.0, l)))
    }

    /// Reduce an arclength into the parameter range (periodic when closed).
    pub fn wrap(&self, s: f64) -> f64 {
        if self.inner.closed {
            let w = s.rem_euclid(self.inner.length);
            if w >= self.inner.length {
                0.0
            } else {
                w
            }
        } else {
            s.clamp(0.0, self.inner.length)
        }
    }

    /// Whether two arclengths name the same point.
    pub fn same_point(&self, a: f64, b: f64) -> bool {
        let l = self.inner.length;
        let d = (a - b).abs();
        let d = if self.inner.closed { d.min(l - d) } else { d };
        d <= 1e-9 * l
    }

    /// `τ(s + u) − τ(s)`, accurate relative to its own size even for tiny `u`.
    pub fn displacement(&self, s: f64, u: f64) -> Complex64 {
        if u == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let inner = &*self.inner;
        match &inner.geometry {
            Geometry::Circle => Complex64::from_polar(1.0, s) * expm1i(u),
            Geometry::Fourier(f) => f.displacement(s, u),
            Geometry::Spiral(sp) => sp.displacement(s, u, inner.length),
            Geometry::Polyline(pl) => pl.displacement(s, u),
        }
    }

    /// Unit tangent `dτ/ds`; one-sided at the ends of an open curve and at
    /// polyline vertices.
    pub fn tangent(&self, s: f64) -> Complex64 {
        let s = self.wrap(s);
        if let Geometry::Circle = self.inner.geometry {
            return Complex64::new(0.0, 1.0) * Complex64::from_polar(1.0, s);
        }
        let h = 1e-6 * self.inner.length;
        let l = self.inner.length;
        let d = if !self.inner.closed && s + h > l {
            -self.displacement(s, -h)
        } else if !self.inner.closed && s - h < 0.0 {
            self.displacement(s, h)
        } else {
            (self.displacement(s, h) - self.displacement(s, -h)) * 0.5
        };
        d / d.norm()
    }

    /// `d_t = max |τ − t|` over samples.
    pub fn d_max(&self, t: f64) -> f64 {
        let zt = self.inner.eval(self.wrap(t));
        self.inner
            .z
            .iter()
            .map(|z| (z - zt).norm())
            .fold(0.0, f64::max)
    }

    pub fn diameter(&self) -> f64 {
        let z = &self.inner.z;
        let step = (z.len() / 512).max(1);
        let mut best: f64 = 0.0;
        for i in (0..z.len()).step_by(step) {
            for zj in z {
                best = best.max((z[i] - zj).norm());
            }
        }
        best
    }

    /// `Γ(t, R)` with exact circle crossings.
    pub fn portion(&self, t: f64, radius: f64) -> Result<ArcPortion> {
        if !(radius > 0.0) {
            return Err(Error::InvalidInput(format!(
                "portion radius {radius} must be positive"
            )));
        }
        let scan = RadialScan::new(self, t, ScanDepth::relative(radius * 1e-3))?;
        let portion = scan.portion(radius);
        if portion.measure() == 0.0 {
            return Err(Error::Resolution(format!(
                "portion of radius {radius} is empty"
            )));
        }
        Ok(portion)
    }

    /// `ω(t, δ)`: the arc through `t` whose endpoints lie on `|τ − t| = δ`.
    pub fn omega_arc(&self, t: f64, delta: f64) -> Result<ArcPortion> {
        let d = self.d_max(t);
        if !(delta > 0.0 && delta < d) {
            return Err(Error::InvalidInput(format!(
                "omega arc radius {delta} must lie in (0, {d})"
            )));
        }
        let scan = RadialScan::new(self, t, ScanDepth::relative(delta * 1e-3))?;
        Ok(scan.omega_arc(delta))
    }

    /// The continuous branch of `arg(τ − t)` on `Γ ∖ {t}`.
    pub fn arg_branch(&self, t: f64) -> Result<ArgBranch> {
        let scan = RadialScan::new(self, t, ScanDepth::Default)?;
        Ok(ArgBranch {
            scan: Arc::new(scan),
        })
    }

    /// Default radius grid for sups over `R`: 64 per decade from four sample
    /// spacings up to the diameter.
    pub fn default_radii(&self) -> Vec<f64> {
        let lo = 4.0 * self.spacing();
        let hi = self.diameter();
        log_grid(lo, hi, 64)
    }

    /// `sup |Γ(t, R)| / R` over sampled centres and the given radii (plus
    /// `R = d_t` for every centre).
    pub fn carleson_constant(&self, radii: Option<&[f64]>) -> CarlesonReport {
        let owned;
        let radii = match radii {
            Some(r) => r,
            None => {
                owned = self.default_radii();
                &owned
            }
        };
        let centres = self.centre_subsample(512);
        use rayon::prelude::*;
        let best = centres
            .par_iter()
            .map(|&t| {
                let scan = RadialScan::samples_only(self, t);
                let mut grid: Vec<f64> = radii.iter().copied().filter(|&r| r > 0.0).collect();
                grid.push(scan.d_t());
                let measures = scan.measures(&grid);
                let mut best = CarlesonReport {
                    value: 0.0,
                    t,
                    radius: grid[0],
                };
                for (r, m) in grid.iter().zip(measures) {
                    let q = m / r;
                    if q > best.value {
                        best = CarlesonReport {
                            value: q,
                            t,
                            radius: *r,
                        };
                    }
                }
                best
            })
            .reduce_with(|a, b| if b.value > a.value { b } else { a })
            .expect("at least one centre");
        best
    }

    /// Up to `max` evenly spaced sample arclengths, plus the special points.
    pub fn centre_subsample(&self, max: usize) -> Vec<f64> {
        let s = &self.inner.s;
        let step = (s.len() / max).max(1);
        let mut out: Vec<f64> = s.iter().copied().step_by(step).collect();
        if !self.inner.closed {
            out.push(self.inner.length);
        }
        for &p in &self.inner.special {
            if !out.iter().any(|&q| self.same_point(p, q)) {
                out.push(p);
            }
        }
        out
    }

    fn validate(&self) -> Result<()> {
        let z = &self.inner.z;
        if z.iter().any(|p| !p.re.is_finite() || !p.im.is_finite()) {
            return Err(Error::InvalidCurve("non-finite sample".into()));
        }
        if self.inner.closed {
            let mut wind = 0.0;
            for k in 0..z.len() {
                let a = z[k];
                let b = z[(k + 1) % z.len()];
                if a.norm() == 0.0 || b.norm() == 0.0 {
                    return Err(Error::InvalidCurve(
                        "closed curve passes through the origin".into(),
                    ));
                }
                wind += (b / a).arg();
            }
            let w = (wind / TAU).round();
            if w != 1.0 {
                return Err(Error::InvalidCurve(format!(
                    "closed curve must wind once counter-clockwise around the origin (winding {w})"
                )));
            }
        }
        Ok(())
    }
}

/// Result of [`Curve::carleson_constant`] with the maximizing centre and radius.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CarlesonReport {
    pub value: f64,
    pub t: f64,
    pub radius: f64,
}

/// Log-spaced grid from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, per_decade: usize) -> Vec<f64> {
    if !(lo > 0.0 && hi > lo) {
        return vec![hi.max(lo)];
    }
    let n = ((hi / lo).log10() * per_decade as f64).ceil() as usize;
    (0..=n)
        .map(|k| lo * (hi / lo).powf(k as f64 / n as f64))
        .collect()
}

/// A continuous branch of `arg(τ − t)` anchored at the sample adjacent to `t`.
#[derive(Clone, Debug)]
pub struct ArgBranch {
    scan: Arc<RadialScan>,
}

impl ArgBranch {
    pub fn centre(&self) -> f64 {
        self.scan.centre()
    }

    pub fn scan(&self) -> &RadialScan {
        &self.scan
    }

    pub fn eval(&self, s: f64) -> Result<f64> {
        self.scan.polar_at(s).map(|(_, a)| a)
    }
}

impl Inner {
    fn eval(&self, s: f64) -> Complex64 {
        match &self.geometry {
            Geometry::Circle => Complex64::from_polar(1.0, s),
            Geometry::Fourier(f) => f.point(s),
            Geometry::Spiral(sp) => sp.point(s),
            Geometry::Polyline(pl) => pl.point(s),
        }
    }
}

// ---------------------------------------------------------------------------
// Trigonometric curves.

const GL_X: [f64; 5] = [
    0.0,
    -0.538_469_310_105_683_1,
    0.538_469_310_105_683_1,
    -0.906_179_845_938_664,
    0.906_179_845_938_664,
];
const GL_W: [f64; 5] = [
    0.568_888_888_888_888_9,
    0.478_628_670_499_366_5,
    0.478_628_670_499_366_5,
    0.236_926_885_056_189_1,
    0.236_926_885_056_189_1,
];

#[derive(Debug)]
struct Fourier {
    coeffs: Vec<(i32, Complex64)>,
    step: f64,
    cum: Vec<f64>,
}

impl Fourier {
    fn new(coeffs: &[(i32, Complex64)], resolution: usize) -> Result<Fourier> {
        if coeffs.is_empty() {
            return Err(Error::InvalidCurve("empty coefficient list".into()));
        }
        let area: f64 = coeffs
            .iter()
            .map(|(k, c)| *k as f64 * c.norm_sqr())
            .sum::<f64>()
            * PI;
        if area.abs() < 1e-12 {
            return Err(Error::InvalidCurve(
                "trigonometric curve encloses no area".into(),
            ));
        }
        // Clockwise input is reversed so the curve runs counter-clockwise.
        let coeffs: Vec<(i32, Complex64)> = if area < 0.0 {
            coeffs.iter().map(|&(k, c)| (-k, c)).collect()
        } else {
            coeffs.to_vec()
        };
        let nodes = 4 * resolution;
        let step = TAU / nodes as f64;
        let mut f = Fourier {
            coeffs,
            step,
            cum: Vec::with_capacity(nodes + 1),
        };
        let mut acc = 0.0;
        f.cum.push(0.0);
        for j in 0..nodes {
            let a = j as f64 * step;
            acc += f.arc(a, step);
            f.cum.push(acc);
        }
        if f.cum
            .iter()
            .zip(0..)
            .any(|(_, j)| f.speed(j as f64 * step) < 1e-9)
        {
            return Err(Error::InvalidCurve(
                "trigonometric curve has a singular point".into(),
            ));
        }
        Ok(f)
    }

    fn length(&self) -> f64 {
        *self.cum.last().unwrap()
    }

    fn z(&self, th: f64) -> Complex64 {
        self.coeffs
            .iter()
            .map(|&(k, c)| c * Complex64::from_polar(1.0, k as f64 * th))
            .sum()
    }

    fn speed(&self, th: f64) -> f64 {
        self.coeffs
            .iter()
            .map(|&(k, c)| {
                c * Complex64::new(0.0, k as f64) * Complex64::from_polar(1.0, k as f64 * th)
            })
            .sum::<Complex64>()
            .norm()
    }

    /// Arclength of the parameter interval `[a, a + w]`.
    fn arc(&self, a: f64, w: f64) -> f64 {
        let h = 0.5 * w;
        let m = a + h;
        GL_X.iter()
            .zip(GL_W.iter())
            .map(|(x, w)| w * self.speed(m + h * x))
            .sum::<f64>()
            * h
    }

    fn theta(&self, s: f64) -> f64 {
        let l = self.length();
        let s = s.rem_euclid(l);
        let j = match self.cum.binary_search_by(|c| c.partial_cmp(&s).unwrap()) {
            Ok(j) => return j as f64 * self.step,
            Err(j) => j.saturating_sub(1).min(self.cum.len() - 2),
        };
        let a = j as f64 * self.step;
        let target = s - self.cum[j];
        let mut th = a + target / self.speed(a).max(1e-300);
        for _ in 0..40 {
            let f = self.arc(a, th - a) - target;
            let d = f / self.speed(th);
            th -= d;
            if d.abs() <= 1e-16 * (1.0 + th.abs()) {
                break;
            }
        }
        th
    }

    fn increment(&self, th: f64, u: f64) -> f64 {
        let mut d = u / self.speed(th);
        for _ in 0..40 {
            let f = self.arc(th, d) - u;
            let step = f / self.speed(th + d);
            d -= step;
            if step.abs() <= 1e-16 * d.abs() {
                break;
            }
        }
        d
    }

    fn point(&self, s: f64) -> Complex64 {
        self.z(self.theta(s))
    }

    fn displacement(&self, s: f64, u: f64) -> Complex64 {
        let th = self.theta(s);
        let small = u.abs() <= self.length() / self.cum.len() as f64;
        let d = if small {
            self.increment(th, u)
        } else {
            self.theta(s + u) - th
        };
        self.coeffs
            .iter()
            .map(|&(k, c)| c * Complex64::from_polar(1.0, k as f64 * th) * expm1i(k as f64 * d))
            .sum()
    }
}

// ---------------------------------------------------------------------------
// Logarithmic spiral attached to a half circle.

#[derive(Debug)]
struct Spiral {
    delta: f64,
    r0: f64,
    kappa: f64,
    theta0: f64,
    offset: Complex64,
}

impl Spiral {
    fn new(delta: f64, r0: f64) -> Result<Spiral> {
        if !(delta.is_finite() && r0 > 0.0 && r0.is_finite()) {
            return Err(Error::InvalidCurve(format!(
                "spiral needs finite delta and r0 > 0 (got {delta}, {r0})"
            )));
        }
        let kappa = (1.0 + delta * delta).sqrt();
        let theta0 = -delta * r0.ln();
        // An interior point at half the radius, midway between the two arms.
        let offset = Complex64::from_polar(0.5 * r0, theta0 + delta * 2f64.ln() + 0.5 * PI);
        Ok(Spiral {
            delta,
            r0,
            kappa,
            theta0,
            offset,
        })
    }

    fn arm_end(&self) -> f64 {
        2.0 * self.r0 * self.kappa
    }

    fn length(&self) -> f64 {
        self.arm_end() + PI * self.r0
    }

    fn attachment(&self) -> f64 {
        self.r0 * self.kappa
    }

    fn arm(&self, x: f64) -> Complex64 {
        if x == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        Complex64::from_polar(x, -self.delta * x.abs().ln())
    }

    fn local(&self, s: f64) -> Complex64 {
        if s <= self.arm_end() {
            self.arm((s - self.attachment()) / self.kappa)
        } else {
            Complex64::from_polar(self.r0, self.theta0 + (s - self.arm_end()) / self.r0)
        }
    }

    fn point(&self, s: f64) -> Complex64 {
        self.local(s) - self.offset
    }

    fn displacement(&self, s: f64, u: f64, length: f64) -> Complex64 {
        let raw = s + u;
        let s2 = raw.rem_euclid(length);
        let wrapped = raw != s2;
        let arm_end = self.arm_end();
        if s <= arm_end && s2 <= arm_end {
            let x1 = (s - self.attachment()) / self.kappa;
            let x2 = if wrapped {
                (s2 - self.attachment()) / self.kappa
            } else {
                x1 + u / self.kappa
            };
            let dx = if wrapped { x2 - x1 } else { u / self.kappa };
            if x1 == 0.0 {
                return self.arm(x2);
            }
            if x2 == 0.0 {
                return -self.arm(x1);
            }
            if x1.signum() == x2.signum() {
                let dphi = -self.delta * (dx / x1).ln_1p();
                let phi1 = -self.delta * x1.abs().ln();
                let inner = Complex64::from_polar(dx, dphi) + x1 * expm1i(dphi);
                return Complex64::from_polar(1.0, phi1) * inner;
            }
            return self.arm(x2) - self.arm(x1);
        }
        if s > arm_end && s2 > arm_end && !wrapped {
            let phi1 = self.theta0 + (s - arm_end) / self.r0;
            return Complex64::from_polar(self.r0, phi1) * expm1i(u / self.r0);
        }
        self.local(s2) - self.local(s)
    }
}

// ---------------------------------------------------------------------------
// Polylines.

#[derive(Debug)]
struct Polyline {
    pts: Vec<Complex64>,
    closed: bool,
    cum: Vec<f64>,
    dirs: Vec<Complex64>,
}

impl Polyline {
    fn new(points: Vec<Complex64>, closed: bool) -> Result<Polyline> {
        let mut pts = points;
        pts.dedup();
        if closed && pts.len() > 1 && pts.first() == pts.last() {
            pts.pop();
        }
        if pts.len() < 2 || (closed && pts.len() < 3) {
            return Err(Error::InvalidCurve(
                "polyline needs at least two distinct points (three when closed)".into(),
            ));
        }
        if closed {
            let area: f64 = (0..pts.len())
                .map(|k| (pts[k].conj() * pts[(k + 1) % pts.len()]).im)
                .sum();
            if area < 0.0 {
                pts[1..].reverse();
            }
        }
        let nseg = if closed { pts.len() } else { pts.len() - 1 };
        let mut cum = vec![0.0];
        let mut dirs = Vec::with_capacity(nseg);
        for k in 0..nseg {
            let d = pts[(k + 1) % pts.len()] - pts[k];
            cum.push(cum[k] + d.norm());
            dirs.push(d / d.norm());
        }
        let pl = Polyline {
            pts,
            closed,
            cum,
            dirs,
        };
        pl.check_simple()?;
        Ok(pl)
    }

    fn check_simple(&self) -> Result<()> {
        let n = self.dirs.len();
        if n > 4096 {
            return Ok(());
        }
        let seg = |k: usize| (self.pts[k], self.pts[(k + 1) % self.pts.len()]);
        let cross = |a: Complex64, b: Complex64| (a.conj() * b).im;
        for i in 0..n {
            for j in (i + 2)..n {
                if self.closed && i == 0 && j == n - 1 {
                    continue;
                }
                let (p, p2) = seg(i);
                let (q, q2) = seg(j);
                let (r, sv) = (p2 - p, q2 - q);
                let den = cross(r, sv);
                if den.abs() < 1e-300 {
                    continue;
                }
                let a = cross(q - p, sv) / den;
                let b = cross(q - p, r) / den;
                if (0.0..=1.0).contains(&a) && (0.0..=1.0).contains(&b) {
                    return Err(Error::InvalidCurve(format!(
                        "polyline segments {i} and {j} intersect"
                    )));
                }
            }
        }
        Ok(())
    }

    fn length(&self) -> f64 {
        *self.cum.last().unwrap()
    }

    fn vertex_arclengths(&self) -> Vec<f64> {
        let end = if self.closed {
            self.cum.len() - 1
        } else {
            self.cum.len()
        };
        self.cum[..end].to_vec()
    }

    fn locate(&self, s: f64) -> (usize, f64) {
        let k = match self.cum.binary_search_by(|c| c.partial_cmp(&s).unwrap()) {
            Ok(k) => k,
            Err(k) => k.saturating_sub(1),
        };
        let k = k.min(self.dirs.len() - 1);
        (k, s - self.cum[k])
    }

    fn point(&self, s: f64) -> Complex64 {
        let (k, off) = self.locate(s);
        self.pts[k] + self.dirs[k] * off
    }

    fn displacement(&self, s: f64, u: f64) -> Complex64 {
        if u < 0.0 {
            let l = self.length();
            let start = if self.closed {
                (s + u).rem_euclid(l)
            } else {
                s + u
            };
            return -self.displacement(start, -u);
        }
        let (mut k, off) = self.locate(s);
        let mut left = u;
        let mut room = self.cum[k + 1] - self.cum[k] - off;
        let mut acc = Complex64::new(0.0, 0.0);
        let mut steps = 0;
        while left > room {
            acc += self.dirs[k] * room;
            left -= room;
            k += 1;
            if k == self.dirs.len() {
                if !self.closed {
                    return acc + self.dirs[k - 1] * left;
                }
                k = 0;
            }
            room = self.cum[k + 1] - self.cum[k];
            steps += 1;
            if steps > 64 {
                let l = self.length();
                let end = if self.closed {
                    (s + u).rem_euclid(l)
                } else {
                    (s + u).min(l)
                };
                return self.point(end) - self.point(s);
            }
        }
        acc + self.dirs[k] * left
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn circle_points() {
        let g = Curve::unit_circle();
        assert!((g.point_at(0.0).unwrap() - c(1.0, 0.0)).norm() < 1e-15);
        assert!((g.point_at(PI).unwrap() - c(-1.0, 0.0)).norm() < 1e-15);
        assert!(g.point_at(7.0).is_err());
    }

    #[test]
    fn segment_midpoint() {
        let g = Curve::segment(c(0.0, 0.0), c(1.0, 0.0)).unwrap();
        assert!((g.point_at(0.5).unwrap() - c(0.5, 0.0)).norm() < 1e-15);
        assert!(!g.is_closed());
    }

    #[test]
    fn chords_sum_to_length() {
        let curves = [
            Curve::unit_circle(),
            Curve::log_spiral(1.0).unwrap(),
            Curve::new(
                CurveKind::SmoothJordan {
                    coefficients: vec![(1, c(1.0, 0.0)), (-1, c(0.3, 0.0)), (2, c(0.05, 0.02))],
                },
                4096,
            )
            .unwrap(),
        ];
        for g in &curves {
            let z = g.sample_z();
            let chords: f64 = (0..z.len())
                .map(|k| (z[(k + 1) % z.len()] - z[k]).norm())
                .sum();
            assert!((chords / g.length() - 1.0).abs() < 1e-3, "{:?}", g.kind());
        }
    }

    #[test]
    fn ellipse_arclength_matches_series() {
        // Ellipse with semi-axes 1.3, 0.7: Ramanujan's second approximation is
        // accurate to ~1e-10 relative at this eccentricity.
        let (a, b) = (1.3, 0.7);
        let g = Curve::new(
            CurveKind::SmoothJordan {
                coefficients: vec![(1, c(0.5 * (a + b), 0.0)), (-1, c(0.5 * (a - b), 0.0))],
            },
            2048,
        )
        .unwrap();
        let h = ((a - b) / (a + b)).powi(2);
        let ramanujan = PI * (a + b) * (1.0 + 3.0 * h / (10.0 + (4.0 - 3.0 * h).sqrt()));
        assert!((g.length() - ramanujan).abs() < 1e-8 * ramanujan);
    }

    #[test]
    fn clockwise_inputs_are_reoriented() {
        let g = Curve::new(
            CurveKind::SmoothJordan {
                coefficients: vec![(-1, c(1.0, 0.0))],
            },
            256,
        )
        .unwrap();
        let z0 = g.point_at(0.0).unwrap();
        let z1 = g.point_at(0.1).unwrap();
        assert!((z1 / z0).arg() > 0.0);
        let sq = vec![c(1.0, 1.0), c(1.0, -1.0), c(-1.0, -1.0), c(-1.0, 1.0)];
        assert!(Curve::new(
            CurveKind::PolylineSampled {
                points: sq,
                closed: true
            },
            256
        )
        .is_ok());
    }

    #[test]
    fn origin_must_be_inside() {
        let sq = vec![c(2.0, 0.0), c(3.0, 0.0), c(3.0, 1.0), c(2.0, 1.0)];
        assert!(matches!(
            Curve::new(
                CurveKind::PolylineSampled {
                    points: sq,
                    closed: true
                },
                256
            ),
            Err(Error::InvalidCurve(_))
        ));
    }

    #[test]
    fn self_intersecting_polyline_rejected() {
        let bow = vec![c(-1.0, -1.0), c(1.0, 1.0), c(1.0, -1.0), c(-1.0, 1.0)];
        assert!(Curve::new(
            CurveKind::PolylineSampled {
                points: bow,
                closed: true
            },
            256
        )
        .is_err());
    }

    #[test]
    fn displacement_is_stable_for_tiny_offsets() {
        let spiral = Curve::log_spiral(1.0).unwrap();
        let ell = Curve::new(
            CurveKind::SmoothJordan {
                coefficients: vec![(1, c(1.0, 0.0)), (-1, c(0.3, 0.0))],
            },
            1024,
        )
        .unwrap();
        let square = Curve::new(
            CurveKind::PolylineSampled {
                points: vec![c(1.0, -1.0), c(1.0, 1.0), c(-1.0, 1.0), c(-1.0, -1.0)],
                closed: true,
            },
            1024,
        )
        .unwrap();
        for g in [Curve::unit_circle(), spiral, ell, square] {
            let t = 0.37 * g.length();
            for e in [-20, -15, -10, -5] {
                for sign in [1.0, -1.0] {
                    let u = sign * 10f64.powi(e);
                    let d = g.displacement(t, u);
                    // Arclength is the integral of |τ'|, so |Δτ| ≈ |u| at tiny scale.
                    assert!(
                        (d.norm() / u.abs() - 1.0).abs() < 1e-6,
                        "{:?} u={u} |d|={}",
                        g.kind(),
                        d.norm()
                    );
                }
            }
            let u = 0.2 * g.length();
            let direct = g.point_at(t + u).unwrap() - g.point_at(t).unwrap();
            assert!((g.displacement(t, u) - direct).norm() < 1e-12);
        }
    }

    #[test]
    fn spiral_arm_argument_is_logarithmic() {
        let delta = 2.0;
        let g = Curve::log_spiral(delta).unwrap();
        let t = g.attachment().unwrap();
        let kappa = (1.0 + delta * delta).sqrt();
        for e in [-12, -8, -4] {
            let x = 10f64.powi(e);
            let d = g.displacement(t, kappa * x);
            assert!((d.norm() - x).abs() < 1e-14 * x);
            assert!((d.arg() + delta * x.ln()).sin().abs() < 1e-9);
        }
    }

    #[test]
    fn circle_carleson_constant_is_pi() {
        let g = Curve::unit_circle();
        let rep = g.carleson_constant(None);
        assert!((rep.value - PI).abs() < 1e-3, "{rep:?}");
    }

    #[test]
    fn segment_carleson_constant_is_two() {
        let g = Curve::segment(c(0.0, 0.0), c(1.0, 0.0)).unwrap();
        let rep = g.carleson_constant(None);
        assert!((rep.value - 2.0).abs() < 1e-3, "{rep:?}");
    }

    #[test]
    fn spiral_carleson_constant_exceeds_two() {
        let g = Curve::log_spiral(1.0).unwrap();
        let rep = g.carleson_constant(None);
        assert!(rep.value > 2.0 && rep.value.is_finite(), "{rep:?}");
    }

    #[test]
    fn d_max_on_circle() {
        assert!((Curve::unit_circle().d_max(0.0) - 2.0).abs() < 1e-12);
    }
}
