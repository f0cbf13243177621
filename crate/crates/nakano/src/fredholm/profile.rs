use serde::Serialize;

use crate::error::{Error, Result};
use crate::indices::{index_pair, IndexEngine, IndexPair};

use super::{SpaceSpec, Tolerances};

/// `intercept + slope·x`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Line {
    pub intercept: f64,
    pub slope: f64,
}

impl Line {
    pub fn at(&self, x: f64) -> f64 {
        self.intercept + self.slope * x
    }

    fn fit(pts: &[(f64, f64)]) -> Line {
        let n = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
        Line {
            intercept: my - slope * mx,
            slope,
        }
    }
}

/// Asymptote lines of the two indicator functions towards `x → −∞` and `x → +∞`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Asymptotes {
    pub alpha_minus: Line,
    pub alpha_plus: Line,
    pub beta_minus: Line,
    pub beta_plus: Line,
}

/// Sampled indicator functions `α*(x) = α(W⁰(η^x ψ))`, `β*(x) = β(W⁰(η^x ψ))`
/// at one point, `ψ` the weight factors sitting there.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IndicatorProfile {
    pub t: f64,
    pub x: Vec<f64>,
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
    pub alpha_ci: Vec<f64>,
    pub beta_ci: Vec<f64>,
    pub delta_minus: f64,
    pub delta_plus: f64,
    pub asymptotes: Asymptotes,
}

pub fn default_x_grid() -> Vec<f64> {
    (-16..=16).map(|k| k as f64 * 0.25).collect()
}

/// Fraction of the grid at each end used for asymptote fits.
const OUTER: f64 = 0.25;

impl IndicatorProfile {
    /// The profile with `α* ≡ alpha`, `β* ≡ beta` (no spirality).
    pub fn constant(alpha: f64, beta: f64) -> IndicatorProfile {
        let x = default_x_grid();
        let n = x.len();
        let flat = |c| Line {
            intercept: c,
            slope: 0.0,
        };
        IndicatorProfile {
            t: 0.0,
            x,
            alpha: vec![alpha; n],
            beta: vec![beta; n],
            alpha_ci: vec![0.0; n],
            beta_ci: vec![0.0; n],
            delta_minus: 0.0,
            delta_plus: 0.0,
            asymptotes: Asymptotes {
                alpha_minus: flat(alpha),
                alpha_plus: flat(alpha),
                beta_minus: flat(beta),
                beta_plus: flat(beta),
            },
        }
    }

    fn interp(&self, v: &[f64], x: f64) -> Option<f64> {
        let (first, last) = (self.x[0], *self.x.last().unwrap());
        if x < first || x > last {
            return None;
        }
        let i = self
            .x
            .partition_point(|&g| g <= x)
            .clamp(1, self.x.len() - 1);
        let (x0, x1) = (self.x[i - 1], self.x[i]);
        let u = if x1 > x0 { (x - x0) / (x1 - x0) } else { 0.0 };
        Some(v[i - 1] + u * (v[i] - v[i - 1]))
    }

    /// `(α*(x), β*(x))`; linear interpolation on the grid, asymptote lines
    /// outside it.
    pub fn at(&self, x: f64) -> (f64, f64) {
        match (self.interp(&self.alpha, x), self.interp(&self.beta, x)) {
            (Some(a), Some(b)) => (a, b),
            _ if x < self.x[0] => (
                self.asymptotes.alpha_minus.at(x),
                self.asymptotes.beta_minus.at(x),
            ),
            _ => (
                self.asymptotes.alpha_plus.at(x),
                self.asymptotes.beta_plus.at(x),
            ),
        }
    }

    /// Extrapolation half-widths at `x` (those of the nearest grid end outside).
    pub fn ci_at(&self, x: f64) -> (f64, f64) {
        let xc = x.clamp(self.x[0], *self.x.last().unwrap());
        (
            self.interp(&self.alpha_ci, xc).unwrap_or(0.0),
            self.interp(&self.beta_ci, xc).unwrap_or(0.0),
        )
    }

    /// Concavity of `α*`, convexity of `β*`, `α* ≤ β*` and the asymptote
    /// slopes against the spirality indices.
    pub fn check_shape(&self, tol: &Tolerances) -> Result<()> {
        let n = self.x.len();
        for i in 0..n {
            if self.alpha[i] > self.beta[i] + tol.shape {
                return Err(Error::Shape(format!(
                    "α*({}) = {} exceeds β* = {}",
                    self.x[i], self.alpha[i], self.beta[i]
                )));
            }
        }
        for i in 1..n.saturating_sub(1) {
            let (h0, h1) = (self.x[i] - self.x[i - 1], self.x[i + 1] - self.x[i]);
            let mid = |v: &[f64]| (h1 * v[i - 1] + h0 * v[i + 1]) / (h0 + h1);
            if self.alpha[i] < mid(&self.alpha) - tol.shape {
                return Err(Error::Shape(format!("α* not concave at x = {}", self.x[i])));
            }
            if self.beta[i] > mid(&self.beta) + tol.shape {
                return Err(Error::Shape(format!("β* not convex at x = {}", self.x[i])));
            }
        }
        if self.x[0] < 0.0 && *self.x.last().unwrap() > 0.0 {
            // Over a finite window the secant slope may deviate from the limit
            // by the spread of the weight's own indices over the window width.
            let width = (self.x[n - 1] - self.x[0]) * OUTER;
            let i0 = self.x.partition_point(|&g| g < 0.0).min(n - 1);
            let spread = (self.beta[i0] - self.alpha[i0]).max(0.0);
            let slack = tol.slope + spread / width.max(1e-12);
            let a = &self.asymptotes;
            for (name, got, want) in [
                ("α* at +∞", a.alpha_plus.slope, self.delta_minus),
                ("α* at −∞", a.alpha_minus.slope, self.delta_plus),
                ("β* at +∞", a.beta_plus.slope, self.delta_plus),
                ("β* at −∞", a.beta_minus.slope, self.delta_minus),
            ] {
                if (got - want).abs() > slack {
                    return Err(Error::Shape(format!(
                        "{name}: slope {got:.4} against spirality {want:.4}"
                    )));
                }
            }
        }
        Ok(())
    }
}

fn asymptotes(x: &[f64], alpha: &[f64], beta: &[f64]) -> Asymptotes {
    let n = x.len();
    let k = ((n as f64 * OUTER).round() as usize).clamp(2.min(n), n);
    let pts = |v: &[f64], range: std::ops::Range<usize>| -> Vec<(f64, f64)> {
        range.map(|i| (x[i], v[i])).collect()
    };
    Asymptotes {
        alpha_minus: Line::fit(&pts(alpha, 0..k)),
        alpha_plus: Line::fit(&pts(alpha, n - k..n)),
        beta_minus: Line::fit(&pts(beta, 0..k)),
        beta_plus: Line::fit(&pts(beta, n - k..n)),
    }
}

/// Indicator functions at `t` over an increasing `x_grid`. At a singular point
/// of the weight the local factors `ψ_j` enter; elsewhere `η_t^x` alone.
pub fn indicator_profile(
    space: &SpaceSpec,
    t: f64,
    x_grid: &[f64],
    tol: &Tolerances,
) -> Result<IndicatorProfile> {
    if x_grid.len() < 3
        || x_grid.windows(2).any(|w| !(w[1] > w[0]))
        || x_grid.iter().any(|x| !x.is_finite())
    {
        return Err(Error::InvalidInput(
            "x grid must be finite, strictly increasing, with at least 3 points".into(),
        ));
    }
    let curve = space.curve();
    let l = curve.length();
    if !(t.is_finite() && t >= -1e-9 * l && t <= l * (1.0 + 1e-9)) {
        return Err(Error::OutOfRange { s: t, length: l });
    }
    let t = curve.wrap(t);
    let engine = IndexEngine::new(curve, t, tol.lattice)?;
    let psi = space.weight().local(curve, t).bind(curve)?;
    let base = engine.crossing_values(&psi);
    let args: Vec<Vec<f64>> = engine
        .crossing_sets()
        .iter()
        .map(|s| s.iter().map(|c| c.arg).collect())
        .collect();
    let pair_at = |x: f64, with_psi: bool| -> Result<IndexPair> {
        let vals: Vec<Vec<f64>> = base
            .iter()
            .zip(&args)
            .map(|(b, a)| {
                b.iter()
                    .zip(a)
                    .map(|(l, arg)| if with_psi { l - x * arg } else { -x * arg })
                    .collect()
            })
            .collect();
        index_pair(&engine.w0_from(&IndexEngine::extrema(&vals)).sample)
    };
    let spiral = pair_at(1.0, false)?;
    let pairs = x_grid
        .iter()
        .map(|&x| pair_at(x, true))
        .collect::<Result<Vec<_>>>()?;
    let alpha: Vec<f64> = pairs.iter().map(|p| p.alpha).collect();
    let beta: Vec<f64> = pairs.iter().map(|p| p.beta).collect();
    let profile = IndicatorProfile {
        t,
        x: x_grid.to_vec(),
        asymptotes: asymptotes(x_grid, &alpha, &beta),
        alpha,
        beta,
        alpha_ci: pairs.iter().map(|p| p.alpha_ci).collect(),
        beta_ci: pairs.iter().map(|p| p.beta_ci).collect(),
        delta_minus: spiral.alpha,
        delta_plus: spiral.beta,
    };
    profile.check_shape(tol)?;
    Ok(profile)
}
