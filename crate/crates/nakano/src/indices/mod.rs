//! Lower and upper indices of submultiplicative functions and the functions
//! `W_tψ`, `W_t⁰ψ`, `V_tw`, `V_t⁰w` whose indices drive every criterion.

mod engine;
mod local;

pub use engine::{IndexEngine, Lattice, W0Sample};
pub use local::{envelope_constants, h_ratio, spirality, v, v0, w, w0, Envelope, Spirality};

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Points per decade of the `x` grid and of the radius lattice.
pub const PER_DECADE: usize = 25;

/// `ln ϱ(x_j)` on `x_j = 10^{j/25}`, `j ∈ [−J, J]`; NaN marks dropped points.
#[derive(Clone, Debug, PartialEq)]
pub struct SubmultiplicativeSample {
    j_max: usize,
    ln_values: Vec<f64>,
    regular: bool,
}

impl SubmultiplicativeSample {
    pub fn from_ln(j_max: usize, ln_values: Vec<f64>) -> SubmultiplicativeSample {
        assert_eq!(ln_values.len(), 2 * j_max + 1);
        let regular = (j_max - 5..=j_max + 5)
            .all(|k| ln_values[k].is_finite() && ln_values[k] <= 1e8f64.ln());
        SubmultiplicativeSample {
            j_max,
            ln_values,
            regular,
        }
    }

    /// Samples `ϱ` over `decades` decades centred at `x = 1`.
    pub fn from_fn(decades: usize, f: impl Fn(f64) -> f64) -> SubmultiplicativeSample {
        let j_max = PER_DECADE * decades / 2;
        let vals = (0..=2 * j_max)
            .map(|k| f(x_of(k as i64 - j_max as i64)).ln())
            .collect();
        SubmultiplicativeSample::from_ln(j_max, vals)
    }

    pub fn j_max(&self) -> usize {
        self.j_max
    }

    pub fn is_regular(&self) -> bool {
        self.regular
    }

    pub fn x(&self, j: i64) -> f64 {
        x_of(j)
    }

    /// `ln ϱ(10^{j/25})`.
    pub fn ln_at(&self, j: i64) -> f64 {
        self.ln_values[(j + self.j_max as i64) as usize]
    }

    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        let jm = self.j_max as i64;
        (-jm..=jm).map(move |j| (x_of(j), self.ln_at(j).exp()))
    }

    /// Largest violation of `ϱ(x_i x_j) ≤ ϱ(x_i) ϱ(x_j)` over grid pairs of
    /// equal sign, as a relative excess.
    pub fn submultiplicative_excess(&self) -> f64 {
        let jm = self.j_max as i64;
        let mut worst: f64 = 0.0;
        for i in 1..=jm {
            for j in 1..=jm - i {
                for sign in [1, -1] {
                    let (a, b, c) = (
                        self.ln_at(sign * i),
                        self.ln_at(sign * j),
                        self.ln_at(sign * (i + j)),
                    );
                    if a.is_finite() && b.is_finite() && c.is_finite() {
                        worst = worst.max((c - a - b).exp_m1());
                    }
                }
            }
        }
        worst
    }
}

fn x_of(j: i64) -> f64 {
    10f64.powf(j as f64 / PER_DECADE as f64)
}

/// Lower and upper indices with extrapolation half-widths.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IndexPair {
    pub alpha: f64,
    pub beta: f64,
    pub alpha_ci: f64,
    pub beta_ci: f64,
}

impl IndexPair {
    pub fn scaled(&self, s: f64) -> IndexPair {
        if s >= 0.0 {
            IndexPair {
                alpha: s * self.alpha,
                beta: s * self.beta,
                alpha_ci: s * self.alpha_ci,
                beta_ci: s * self.beta_ci,
            }
        } else {
            IndexPair {
                alpha: s * self.beta,
                beta: s * self.alpha,
                alpha_ci: -s * self.beta_ci,
                beta_ci: -s * self.alpha_ci,
            }
        }
    }
}

const FIT_RESIDUAL: f64 = 1e-4;
const CROSS_CHECK_SLACK: f64 = 1e-3;
const MIN_TAIL_POINTS: usize = 8;

/// Indices of a sampled submultiplicative function.
///
/// The limit `ln ϱ(x)/ln x` at each end is extrapolated by fitting
/// `c₀ + α L + c₁ ln|L| + c₂/L` (`L = ln x`) over the outermost quarter of the
/// grid; the half-width is the change when the window moves one decade
/// inwards. When that model does not fit (oscillating `ϱ`) the sup over
/// `(0, 1)` (inf over `(1, ∞)`) is used, which equals the index exactly.
/// The fitted limit must not fall below the sup (above the inf) by more than
/// ten half-widths.
pub fn index_pair(s: &SubmultiplicativeSample) -> Result<IndexPair> {
    if !s.regular {
        return Err(Error::NonRegular("not bounded near x = 1".into()));
    }
    let (alpha, alpha_ci) = one_side(s, -1)?;
    let (beta, beta_ci) = one_side(s, 1)?;
    Ok(IndexPair {
        alpha,
        beta,
        alpha_ci,
        beta_ci,
    })
}

fn one_side(s: &SubmultiplicativeSample, side: i64) -> Result<(f64, f64)> {
    let jm = s.j_max as i64;
    let window = |from: i64, to: i64| -> Vec<(f64, f64)> {
        (from..=to)
            .map(|j| j * side)
            .filter_map(|j| {
                let y = s.ln_at(j);
                y.is_finite()
                    .then(|| (j as f64 / PER_DECADE as f64 * std::f64::consts::LN_10, y))
            })
            .collect()
    };
    let tail = window(jm / 2, jm);
    let shifted = window(jm / 2 - PER_DECADE as i64, jm - PER_DECADE as i64);
    if tail.len() < MIN_TAIL_POINTS || shifted.len() < MIN_TAIL_POINTS {
        return Err(Error::Resolution(format!(
            "fewer than {MIN_TAIL_POINTS} valid samples in the index tail"
        )));
    }
    // sup over x<1 / inf over x>1 of ln ϱ / ln x.
    let all = window(1, jm);
    let extreme = |pts: &[(f64, f64)]| {
        let it = pts.iter().map(|(l, y)| y / l);
        if side < 0 {
            it.fold(f64::NEG_INFINITY, f64::max)
        } else {
            it.fold(f64::INFINITY, f64::min)
        }
    };
    let bound = extreme(&all);
    let (a, res_a) = tail_fit(&tail)?;
    let (b, res_b) = tail_fit(&shifted)?;
    if res_a > FIT_RESIDUAL || res_b > FIT_RESIDUAL {
        let near = extreme(&tail);
        // One touching edge cannot tell a bounded remainder from a slope:
        // its range over the side, spread over |L|, stays ambiguous.
        let osc = |idx: f64| {
            let (lo, hi) = all
                .iter()
                .map(|(l, y)| y - idx * l)
                .fold((f64::INFINITY, f64::NEG_INFINITY), |b, r| {
                    (b.0.min(r), b.1.max(r))
                });
            (hi - lo) / all.last().map_or(1.0, |p| p.0.abs())
        };
        return Ok(match hull_slope(&all, side) {
            Some((est, ci, n)) if n >= 2 => (est, ci),
            Some((est, ci, _)) => (est, ci.max(osc(est))),
            None => (bound, (near - bound).abs().max(osc(bound))),
        });
    }
    let ci = (a - b).abs();
    let violation = if side < 0 { bound - a } else { a - bound };
    if violation > 10.0 * ci + CROSS_CHECK_SLACK {
        return Err(Error::Inconsistent(format!(
            "limit {a:.6} and {} {bound:.6} disagree beyond ten half-widths ({ci:.2e})",
            if side < 0 { "sup" } else { "inf" }
        )));
    }
    Ok((a, ci))
}

/// `ln ϱ ≥ αL` for `L < 0` and `ln ϱ ≥ βL` for `L > 0`, so both indices are
/// slopes of supporting lines below the points `(|L|, ln ϱ)`. A bounded
/// remainder touches such a line at its minima; the longest lower-hull edge
/// in the outer half that does not end at the last sample is taken, the
/// spread of the other outer edges is the half-width. Returns the slope,
/// half-width and edge count; `None` without such an edge.
fn hull_slope(pts: &[(f64, f64)], side: i64) -> Option<(f64, f64, usize)> {
    let pts: Vec<(f64, f64)> = pts.iter().map(|&(l, y)| (l.abs(), y)).collect();
    let mut hull: Vec<usize> = Vec::new();
    for (k, p) in pts.iter().enumerate() {
        while let [.., a, b] = hull[..] {
            let (a, b) = (pts[a], pts[b]);
            if (b.0 - a.0) * (p.1 - a.1) - (b.1 - a.1) * (p.0 - a.0) <= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(k);
    }
    // A vertex may sit half a step off the true minimum: height error g''h²/8.
    let off = |k: usize| match (k.checked_sub(1).map(|i| pts[i]), pts.get(k + 1)) {
        (Some(a), Some(c)) => (a.1 - 2.0 * pts[k].1 + c.1).abs() / 8.0,
        _ => 0.0,
    };
    let last = pts.len() - 1;
    let half = 0.5 * pts[last].0;
    let edges: Vec<(f64, f64, f64)> = hull
        .windows(2)
        .filter(|e| pts[e[1]].0 >= half && e[1] < last)
        .map(|e| {
            let (a, b) = (pts[e[0]], pts[e[1]]);
            let len = b.0 - a.0;
            ((b.1 - a.1) / len, len, (off(e[0]) + off(e[1])) / len)
        })
        .collect();
    let &(slope, _, grid) = edges.iter().max_by(|a, b| a.1.total_cmp(&b.1))?;
    let spread = edges
        .iter()
        .map(|e| (e.0 - slope).abs())
        .fold(0.0, f64::max);
    let sign = if side < 0 { -1.0 } else { 1.0 };
    Some((sign * slope, spread + grid, edges.len()))
}

/// Least-squares coefficient of `L` and the rms residual.
fn tail_fit(pts: &[(f64, f64)]) -> Result<(f64, f64)> {
    let n = pts.len();
    let a = DMatrix::from_fn(n, 4, |i, k| {
        let l = pts[i].0;
        match k {
            0 => 1.0,
            1 => l,
            2 => l.abs().ln(),
            _ => 1.0 / l,
        }
    });
    let y = DVector::from_iterator(n, pts.iter().map(|p| p.1));
    let svd = a.clone().svd(true, true);
    let c = svd
        .solve(&y, 1e-14)
        .map_err(|e| Error::Resolution(format!("index fit failed: {e}")))?;
    let r = &a * &c - &y;
    Ok((c[1], (r.norm_squared() / n as f64).sqrt()))
}
