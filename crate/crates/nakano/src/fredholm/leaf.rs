use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

use super::IndicatorProfile;

/// `(z₂ζ − z₁)/(ζ − 1)`; a non-finite `ζ` stands for `∞` and maps to `z₂`.
pub fn mobius(z1: Complex64, z2: Complex64, zeta: Complex64) -> Result<Complex64> {
    if !zeta.is_finite() {
        return Ok(z2);
    }
    if zeta == Complex64::new(1.0, 0.0) {
        return Err(Error::InvalidInput(
            "ζ = 1 is the pole of the Möbius map".into(),
        ));
    }
    Ok((z2 * zeta - z1) / (zeta - 1.0))
}

/// Tolerance for the boundary ends reaching `z₁` and `z₂`.
const END_TOL: f64 = 1e-6;
const X_STEP: f64 = 0.25;
const X_LIMIT: f64 = 64.0;
/// Boundary sample spacing in `x`.
const SAMPLE_STEP: f64 = 1.0 / 32.0;

/// Sampled leaf between `z₁ = c(t−0)` and `z₂ = c(t+0)`: the image of
/// `{x + iy : 1/p + α*(x) ≤ y ≤ 1/p + β*(x)}` under `ζ ↦ M(e^{2πζ})`, plus
/// both endpoints.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Leaf {
    pub z1: Complex64,
    pub z2: Complex64,
    pub p: f64,
    pub x: Vec<f64>,
    /// Image of `y = 1/p + α*(x)`; NaN where the curve passes the pole.
    pub lower: Vec<Complex64>,
    /// Image of `y = 1/p + β*(x)`.
    pub upper: Vec<Complex64>,
    #[serde(skip)]
    profile: IndicatorProfile,
}

fn image(z1: Complex64, z2: Complex64, x: f64, y: f64) -> Complex64 {
    let zeta = Complex64::from_polar((2.0 * PI * x).exp(), 2.0 * PI * y);
    mobius(z1, z2, zeta).unwrap_or(Complex64::new(f64::NAN, f64::NAN))
}

pub fn leaf(z1: Complex64, z2: Complex64, p: f64, profile: &IndicatorProfile) -> Result<Leaf> {
    if !(z1.is_finite() && z2.is_finite()) {
        return Err(Error::InvalidInput("leaf endpoints must be finite".into()));
    }
    if !(p > 1.0 && p.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "exponent {p} must lie in (1, ∞)"
        )));
    }
    let mut x = Vec::new();
    let (mut lower, mut upper) = (Vec::new(), Vec::new());
    if z1 != z2 {
        let ends_ok = |xv: f64, target: Complex64| {
            let (a, b) = profile.at(xv);
            (image(z1, z2, xv, 1.0 / p + a) - target).norm() < END_TOL
                && (image(z1, z2, xv, 1.0 / p + b) - target).norm() < END_TOL
        };
        let mut left = profile.x[0];
        while !ends_ok(left, z1) {
            left -= X_STEP;
            if left < -X_LIMIT {
                return Err(Error::Extrapolation(
                    "leaf boundary does not reach z₁".into(),
                ));
            }
        }
        let mut right = *profile.x.last().unwrap();
        while !ends_ok(right, z2) {
            right += X_STEP;
            if right > X_LIMIT {
                return Err(Error::Extrapolation(
                    "leaf boundary does not reach z₂".into(),
                ));
            }
        }
        let n = ((right - left) / SAMPLE_STEP).round() as usize;
        x.extend((0..=n).map(|k| left + k as f64 * SAMPLE_STEP));
        for &xv in &x {
            let (a, b) = profile.at(xv);
            lower.push(image(z1, z2, xv, 1.0 / p + a));
            upper.push(image(z1, z2, xv, 1.0 / p + b));
        }
    }
    Ok(Leaf {
        z1,
        z2,
        p,
        x,
        lower,
        upper,
        profile: profile.clone(),
    })
}

impl Leaf {
    pub fn is_degenerate(&self) -> bool {
        self.z1 == self.z2
    }

    pub fn profile(&self) -> &IndicatorProfile {
        &self.profile
    }

    /// Signed distance, in index units, of `z` from the leaf: pulled back
    /// through the Möbius map, `ζ = (z − z₁)/(z − z₂) = e^{2π(x₀+iy₀)}` must
    /// have `y₀ + k ∈ [1/p + α*(x₀), 1/p + β*(x₀)]` for some integer `k`.
    /// Non-positive inside (the depth), positive outside.
    pub fn index_gap(&self, z: Complex64) -> f64 {
        if z == self.z1 || z == self.z2 {
            return 0.0;
        }
        if self.is_degenerate() {
            return f64::INFINITY;
        }
        let zeta = (z - self.z1) / (z - self.z2);
        let x0 = zeta.norm().ln() / (2.0 * PI);
        let y0 = zeta.arg() / (2.0 * PI);
        let (a, b) = self.profile.at(x0);
        interval_gap(y0, 1.0 / self.p + a, 1.0 / self.p + b)
    }

    /// The `x₀` of the pull-back of `z`.
    pub fn pullback_x(&self, z: Complex64) -> f64 {
        ((z - self.z1) / (z - self.z2)).norm().ln() / (2.0 * PI)
    }

    /// Euclidean distance of `z` from the sampled leaf; zero inside.
    pub fn distance(&self, z: Complex64) -> f64 {
        if self.index_gap(z) <= 0.0 {
            return 0.0;
        }
        self.boundary()
            .map(|w| (w - z).norm())
            .fold(f64::INFINITY, f64::min)
    }

    pub fn contains(&self, z: Complex64, tol: f64) -> bool {
        (z - self.z1).norm() <= tol
            || (z - self.z2).norm() <= tol
            || self.index_gap(z) <= 0.0
            || self.distance(z) <= tol
    }

    /// Endpoints and both boundary polylines.
    pub fn boundary(&self) -> impl Iterator<Item = Complex64> + '_ {
        [self.z1, self.z2]
            .into_iter()
            .chain(self.lower.iter().copied())
            .chain(self.upper.iter().copied())
            .filter(|w| w.is_finite())
    }
}

/// Distance of `y + ℤ` from `[lo, hi]`; minus the depth when some shift lies inside.
pub fn interval_gap(y: f64, lo: f64, hi: f64) -> f64 {
    if hi - lo >= 1.0 {
        return -0.5;
    }
    let k = (lo - y).ceil();
    let yk = y + k;
    if yk <= hi {
        -(yk - lo).min(hi - yk)
    } else {
        (yk - hi).min(lo - (yk - 1.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn mobius_values() {
        let (z1, z2) = (c(0.3, 1.0), c(-2.0, 0.5));
        assert_eq!(mobius(z1, z2, c(0.0, 0.0)).unwrap(), z1);
        assert_eq!(mobius(z1, z2, c(f64::INFINITY, 0.0)).unwrap(), z2);
        assert!(
            mobius(c(1.0, 0.0), c(-1.0, 0.0), Complex64::from_polar(1.0, PI))
                .unwrap()
                .norm()
                < 1e-15
        );
        assert!(mobius(z1, z2, c(1.0, 0.0)).is_err());
    }

    #[test]
    fn half_turn_leaf_is_a_segment() {
        let l = leaf(
            c(1.0, 0.0),
            c(-1.0, 0.0),
            2.0,
            &IndicatorProfile::constant(0.0, 0.0),
        )
        .unwrap();
        for (x, w) in l.x.iter().zip(&l.lower) {
            let e = (2.0 * PI * x).exp();
            assert!((w - c((1.0 - e) / (1.0 + e), 0.0)).norm() < 1e-12);
        }
        assert!(l.contains(c(0.0, 0.0), 1e-9));
        assert!(l.boundary().any(|w| w.norm() < 1e-9));
        assert!(!l.contains(c(0.0, 0.2), 1e-9));
    }

    #[test]
    fn p_arc_through_anchors() {
        let (z1, z2, p) = (c(1.0, 0.0), c(0.0, 1.0), 3.0);
        let l = leaf(z1, z2, p, &IndicatorProfile::constant(0.0, 0.0)).unwrap();
        for x in [-1.0, 0.0, 1.0] {
            let i = l.x.iter().position(|&g| (g - x).abs() < 1e-12).unwrap();
            let zeta = Complex64::from_polar((2.0 * PI * x).exp(), 2.0 * PI / p);
            assert!((l.lower[i] - (z2 * zeta - z1) / (zeta - 1.0)).norm() < 1e-12);
        }
        // Every point of a constant-y leaf sees [z₁, z₂] under the same angle.
        let angle = |w: Complex64| ((z1 - w) / (z2 - w)).arg();
        let a0 = angle(l.lower[l.x.len() / 2]);
        assert!(l
            .x
            .iter()
            .zip(&l.lower)
            .filter(|(x, _)| x.abs() <= 1.0)
            .all(|(_, &w)| (angle(w) - a0).abs() < 1e-9));
        assert!((l.lower[0] - z1).norm() < 1e-6 && (l.lower.last().unwrap() - z2).norm() < 1e-6);
    }

    #[test]
    fn degenerate_leaf_is_a_point() {
        let l = leaf(
            c(5.0, 0.0),
            c(5.0, 0.0),
            2.0,
            &IndicatorProfile::constant(0.0, 0.0),
        )
        .unwrap();
        assert!(l.is_degenerate() && l.x.is_empty());
        assert!(l.contains(c(5.0, 0.0), 0.0) && !l.contains(c(4.0, 0.0), 1e-9));
    }

    #[test]
    fn gap_modulo_integers() {
        assert!((interval_gap(0.1, 0.3, 0.4) - 0.2).abs() < 1e-15);
        assert!((interval_gap(0.9, 0.3, 0.4) - 0.4).abs() < 1e-12);
        assert!((interval_gap(1.35, 0.3, 0.4) + 0.05).abs() < 1e-12);
        assert!(interval_gap(0.0, 0.5, 1.5) < 0.0);
    }
}
