use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fredholm::PcSymbol;

/// Largest admissible truncation order.
pub const MAX_ORDER: usize = 2048;
/// Quadrature nodes per unit of truncation order.
const NODES_PER_ORDER: usize = 8;

/// Compression of `w(aP + bQ)w⁻¹` to Fourier exponentials, rows
/// `e_m, m ∈ [−N + shift, N + shift]`, columns `e_n, n ∈ [−N, N]`.
#[derive(Clone, Debug)]
pub struct FiniteSection {
    pub n: usize,
    pub shift: i64,
    pub lambda: f64,
    pub p: f64,
    pub nodes: usize,
    pub matrix: DMatrix<Complex64>,
}

/// The similarity weight on the circle: `|τ − 1|^λ` times
/// `|τ − t_k|^{1/p − 1/2}` at every jump `t_k`, which moves the `L^p` jump
/// behaviour into the `L²` discretization.
fn weight_at(theta: f64, lambda: f64, p: f64, jumps: &[f64]) -> f64 {
    let tau = Complex64::from_polar(1.0, theta);
    let mut w = (tau - 1.0).norm().powf(lambda);
    for &s in jumps {
        w *= (tau - Complex64::from_polar(1.0, s))
            .norm()
            .powf(1.0 / p - 0.5);
    }
    w
}

pub fn finite_section(
    a: &PcSymbol,
    b: &PcSymbol,
    n: usize,
    lambda: f64,
    p: f64,
) -> Result<FiniteSection> {
    finite_section_shifted(a, b, n, 0, lambda, p)
}

pub fn finite_section_shifted(
    a: &PcSymbol,
    b: &PcSymbol,
    n: usize,
    shift: i64,
    lambda: f64,
    p: f64,
) -> Result<FiniteSection> {
    if n > MAX_ORDER {
        return Err(Error::CostGuard(format!(
            "truncation order {n} exceeds {MAX_ORDER}"
        )));
    }
    if n == 0 || !(p > 1.0 && p.is_finite()) || !lambda.is_finite() {
        return Err(Error::InvalidInput(format!(
            "need N ≥ 1, 1 < p < ∞ and finite λ (got N = {n}, p = {p}, λ = {lambda})"
        )));
    }
    for s in [a, b] {
        if (s.length() - 2.0 * PI).abs() > 1e-9 {
            return Err(Error::InvalidInput(
                "finite sections are defined on the unit circle only".into(),
            ));
        }
    }
    let m_nodes = (NODES_PER_ORDER * n).max(64);
    let h = 2.0 * PI / m_nodes as f64;
    let thetas: Vec<f64> = (0..m_nodes).map(|j| (j as f64 + 0.5) * h).collect();
    let jumps: Vec<f64> = a.quotient(b)?.jumps().iter().map(|j| j.s).collect();
    let w: Vec<f64> = thetas
        .iter()
        .map(|&t| weight_at(t, lambda, p, &jumps))
        .collect();
    let av: Vec<Complex64> = thetas.iter().map(|&t| a.value(t)).collect();
    let bv: Vec<Complex64> = thetas.iter().map(|&t| b.value(t)).collect();
    let mut planner = FftPlanner::<f64>::new();
    let fwd = planner.plan_fft_forward(m_nodes);
    let inv = planner.plan_fft_inverse(m_nodes);
    let dim = 2 * n + 1;
    let inv_m = 1.0 / m_nodes as f64;
    let columns: Vec<Vec<Complex64>> = (0..dim)
        .into_par_iter()
        .map(|c| {
            let col = c as i64 - n as i64;
            let mut g: Vec<Complex64> = thetas
                .iter()
                .zip(&w)
                .map(|(&t, &wj)| Complex64::from_polar(1.0 / wj, col as f64 * t))
                .collect();
            let orig = g.clone();
            // Projection onto non-negative frequencies; phases of the
            // midpoint grid cancel between the two transforms.
            fwd.process(&mut g);
            for (k, v) in g.iter_mut().enumerate() {
                if k >= m_nodes / 2 {
                    *v = Complex64::new(0.0, 0.0);
                }
            }
            inv.process(&mut g);
            let mut out: Vec<Complex64> = (0..m_nodes)
                .map(|j| {
                    let pg = g[j] * inv_m;
                    w[j] * (av[j] * pg + bv[j] * (orig[j] - pg))
                })
                .collect();
            fwd.process(&mut out);
            (0..dim)
                .map(|r| {
                    let row = r as i64 - n as i64 + shift;
                    let k = row.rem_euclid(m_nodes as i64) as usize;
                    out[k] * Complex64::from_polar(inv_m, -(row as f64) * h / 2.0)
                })
                .collect()
        })
        .collect();
    let matrix = DMatrix::from_fn(dim, dim, |r, c| columns[c][r]);
    Ok(FiniteSection {
        n,
        shift,
        lambda,
        p,
        nodes: m_nodes,
        matrix,
    })
}

/// `P_N = diag(1_{n ≥ 0})` and `Q_N = I − P_N` on `|n| ≤ N`.
pub fn projections(n: usize) -> (DMatrix<Complex64>, DMatrix<Complex64>) {
    let dim = 2 * n + 1;
    let p = DMatrix::from_fn(dim, dim, |r, c| {
        if r == c && r >= n {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let q = DMatrix::identity(dim, dim) - &p;
    (p, q)
}

const POWER_ITERATIONS: usize = 200;
const POWER_TOL: f64 = 1e-10;

/// Smallest singular value by inverse power iteration on `AᴴA`, with a full
/// SVD when the iteration does not settle. Singular matrices give 0.
pub fn sigma_min(a: &DMatrix<Complex64>) -> f64 {
    let n = a.nrows();
    let lu = a.clone().lu();
    let lu_h = a.adjoint().lu();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut x = nalgebra::DVector::from_fn(n, |_, _| {
        Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
    });
    x /= Complex64::new(x.norm(), 0.0);
    let mut last = f64::NAN;
    for _ in 0..POWER_ITERATIONS {
        let Some(z) = lu_h.solve(&x) else { return 0.0 };
        let Some(y) = lu.solve(&z) else { return 0.0 };
        let growth = y.norm();
        if !growth.is_finite() {
            return 0.0;
        }
        let sigma = 1.0 / growth.sqrt();
        x = y / Complex64::new(growth, 0.0);
        if (sigma - last).abs() <= POWER_TOL * sigma {
            return sigma;
        }
        last = sigma;
    }
    a.clone()
        .svd(false, false)
        .singular_values
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum TrendClass {
    Plateau,
    Decay,
    Inconclusive,
}

impl std::fmt::Display for TrendClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            TrendClass::Plateau => "Plateau",
            TrendClass::Decay => "Decay",
            TrendClass::Inconclusive => "Inconclusive",
        })
    }
}

/// Row shifts tried by the trend test. A Fredholm operator of nonzero index
/// has shrinking finite sections unless the row window is shifted by the index.
pub const TREND_SHIFTS: [i64; 3] = [-1, 0, 1];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ShiftTrend {
    pub shift: i64,
    pub sigma: Vec<f64>,
    /// Last over first increment of `1/σ_min`.
    pub increment_ratio: f64,
    pub plateau: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrendReport {
    pub ns: Vec<usize>,
    pub shifts: Vec<ShiftTrend>,
    pub class: TrendClass,
    /// Classification of the unshifted sequence by the plain rule: last three
    /// values within 20% and above 1e-3 is a plateau, a log-log slope below
    /// −0.5 per doubling is decay.
    pub plain_class: TrendClass,
}

const SIGMA_FLOOR: f64 = 1e-3;
const PLATEAU_RATIO: f64 = 0.97;
const DECAY_RATIO: f64 = 0.98;

fn shift_trend(shift: i64, sigma: Vec<f64>) -> ShiftTrend {
    let g: Vec<f64> = sigma.iter().map(|s| 1.0 / s).collect();
    let d: Vec<f64> = g.windows(2).map(|w| w[1] - w[0]).collect();
    let g_max = g.iter().copied().fold(0.0, f64::max);
    let flat = d.iter().all(|x| x.abs() <= 1e-9 * g_max);
    let ratio = if flat { 0.0 } else { d[d.len() - 1] / d[0] };
    let last = *sigma.last().unwrap();
    let plateau = last > SIGMA_FLOOR && (flat || ratio < PLATEAU_RATIO);
    ShiftTrend {
        shift,
        sigma,
        increment_ratio: ratio,
        plateau,
    }
}

fn plain_rule(ns: &[usize], sigma: &[f64]) -> TrendClass {
    let k = sigma.len();
    let tail = &sigma[k - 3..];
    let (lo, hi) = tail
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(a, b), &s| (a.min(s), b.max(s)));
    if lo > SIGMA_FLOOR && hi <= 1.2 * lo {
        return TrendClass::Plateau;
    }
    let xs: Vec<f64> = ns.iter().map(|&n| (n as f64).log2()).collect();
    let ys: Vec<f64> = sigma.iter().map(|s| s.max(1e-300).ln()).collect();
    let mx = xs.iter().sum::<f64>() / k as f64;
    let my = ys.iter().sum::<f64>() / k as f64;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxy / sxx < -0.5 {
        TrendClass::Decay
    } else {
        TrendClass::Inconclusive
    }
}

/// Smallest singular values of the finite sections over increasing `N` and
/// the row shifts in [`TREND_SHIFTS`].
///
/// For each shift the increments of `1/σ_min` are compared: bounded inverses
/// have increments that shrink (ratio of last to first below 0.97), while a
/// non-Fredholm operator makes them persist or grow. `Plateau` when some shift
/// plateaus above 1e-3; `Decay` when every shift has ratio at least 0.98 or a
/// final value below 1e-3; `Inconclusive` otherwise.
pub fn sigma_min_trend(
    a: &PcSymbol,
    b: &PcSymbol,
    ns: &[usize],
    lambda: f64,
    p: f64,
) -> Result<TrendReport> {
    if ns.len() < 4 || ns.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidInput(
            "need at least four increasing truncation orders".into(),
        ));
    }
    let shifts = TREND_SHIFTS
        .iter()
        .map(|&shift| {
            let sigma = ns
                .iter()
                .map(|&n| {
                    Ok(sigma_min(
                        &finite_section_shifted(a, b, n, shift, lambda, p)?.matrix,
                    ))
                })
                .collect::<Result<Vec<f64>>>()?;
            Ok(shift_trend(shift, sigma))
        })
        .collect::<Result<Vec<_>>>()?;
    let class = if shifts.iter().any(|s| s.plateau) {
        TrendClass::Plateau
    } else if shifts
        .iter()
        .all(|s| s.increment_ratio >= DECAY_RATIO || *s.sigma.last().unwrap() < SIGMA_FLOOR)
    {
        TrendClass::Decay
    } else {
        TrendClass::Inconclusive
    };
    let unshifted = shifts.iter().find(|s| s.shift == 0).expect("shift 0");
    let plain_class = plain_rule(ns, &unshifted.sigma);
    Ok(TrendReport {
        ns: ns.to_vec(),
        shifts,
        class,
        plain_class,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::Curve;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn constant(v: Complex64) -> PcSymbol {
        PcSymbol::constant(&Curve::unit_circle(), v).unwrap()
    }

    #[test]
    fn identity_and_multiplier_sections() {
        let one = constant(c(1.0, 0.0));
        let s = finite_section(&one, &one, 8, 0.3, 3.0).unwrap();
        let dim = s.matrix.nrows();
        assert!((&s.matrix - DMatrix::<Complex64>::identity(dim, dim)).norm() < 1e-12);
        let two = constant(c(2.0, 0.0));
        let s = finite_section(&two, &one, 8, 0.0, 2.0).unwrap();
        for r in 0..dim {
            for cc in 0..dim {
                let want = if r != cc {
                    0.0
                } else if r >= 8 {
                    2.0
                } else {
                    1.0
                };
                assert!((s.matrix[(r, cc)] - want).norm() < 1e-12);
            }
        }
        assert!((sigma_min(&s.matrix) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn projections_are_idempotent() {
        let (p, q) = projections(16);
        assert!((&p * &p - &p).norm() < 1e-10 && (&q * &q - &q).norm() < 1e-10);
        assert_eq!(&p + &q, DMatrix::identity(33, 33));
    }

    #[test]
    fn jump_section_matches_direct_quadrature() {
        let g = Curve::unit_circle();
        let a = PcSymbol::jump(&g, 0.0, c(1.0, 0.0), c(-1.0, 0.0)).unwrap();
        let one = constant(c(1.0, 0.0));
        let n = 8;
        let s = finite_section(&a, &one, n, 0.0, 2.0).unwrap();
        // With w ≡ 1: A_{mn} = â_{m−n} for n ≥ 0 and δ_{mn} for n < 0.
        let fine = 1 << 16;
        let coeff = |k: i64| -> Complex64 {
            (0..fine)
                .map(|j| {
                    let t = (j as f64 + 0.5) * 2.0 * PI / fine as f64;
                    a.value(t) * Complex64::from_polar(1.0 / fine as f64, -(k as f64) * t)
                })
                .sum()
        };
        let mut worst: f64 = 0.0;
        for r in 0..=2 * n {
            for cc in 0..=2 * n {
                let (m, nn) = (r as i64 - n as i64, cc as i64 - n as i64);
                let want = if nn >= 0 {
                    coeff(m - nn)
                } else if m == nn {
                    c(1.0, 0.0)
                } else {
                    c(0.0, 0.0)
                };
                worst = worst.max((s.matrix[(r, cc)] - want).norm());
            }
        }
        assert!(worst < 2e-2, "{worst}");
    }

    #[test]
    fn sigma_min_agrees_with_svd() {
        let g = Curve::unit_circle();
        let a = PcSymbol::jump(&g, 0.0, c(1.0, 0.0), c(0.0, 1.0)).unwrap();
        let s = finite_section(&a, &constant(c(1.0, 0.0)), 16, 0.1, 2.5).unwrap();
        let svd = s.matrix.clone().svd(false, false).singular_values.min();
        assert!((sigma_min(&s.matrix) - svd).abs() < 1e-8 * svd.max(1.0));
    }

    #[test]
    fn trend_examples() {
        let g = Curve::unit_circle();
        let one = constant(c(1.0, 0.0));
        let ns = [32, 64, 128, 256];
        assert_eq!(
            sigma_min_trend(&one, &one, &ns, 0.0, 2.0).unwrap().class,
            TrendClass::Plateau
        );
        let half = PcSymbol::jump(&g, 0.0, c(1.0, 0.0), c(-1.0, 0.0)).unwrap();
        assert_eq!(
            sigma_min_trend(&half, &one, &ns, 0.0, 2.0).unwrap().class,
            TrendClass::Decay
        );
        let quarter = PcSymbol::jump(&g, 0.0, c(1.0, 0.0), c(0.0, 1.0)).unwrap();
        assert_eq!(
            sigma_min_trend(&quarter, &one, &ns, 0.0, 2.0)
                .unwrap()
                .class,
            TrendClass::Plateau
        );
        assert!(finite_section(&one, &one, MAX_ORDER + 1, 0.0, 2.0).is_err());
        assert!(sigma_min_trend(&one, &one, &ns[..3], 0.0, 2.0).is_err());
    }
}
