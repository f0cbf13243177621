use crate::curve::Curve;
use crate::error::{Error, Result};
use crate::spaces::{LnWeight, Site, Weight};

use super::{index_pair, IndexEngine, IndexPair, Lattice, SubmultiplicativeSample, W0Sample};

pub fn w(curve: &Curve, t: f64, psi: &Weight, lattice: Lattice) -> Result<SubmultiplicativeSample> {
    let bound = psi.bind(curve)?;
    Ok(IndexEngine::new(curve, t, lattice)?.w(&bound))
}

pub fn w0(curve: &Curve, t: f64, psi: &Weight, lattice: Lattice) -> Result<W0Sample> {
    let bound = psi.bind(curve)?;
    Ok(IndexEngine::new(curve, t, lattice)?.w0(&bound))
}

pub fn v(
    curve: &Curve,
    t: f64,
    weight: &Weight,
    lattice: Lattice,
) -> Result<SubmultiplicativeSample> {
    let bound = weight.bind(curve)?;
    let e = IndexEngine::new(curve, t, lattice)?;
    Ok(e.v_from(&e.portion_means(&bound)?))
}

pub fn v0(curve: &Curve, t: f64, weight: &Weight, lattice: Lattice) -> Result<W0Sample> {
    let bound = weight.bind(curve)?;
    let e = IndexEngine::new(curve, t, lattice)?;
    Ok(e.v0_from(&e.portion_means(&bound)?))
}

/// `H_{w,t}(R₁, R₂)`.
pub fn h_ratio(curve: &Curve, weight: &Weight, t: f64, r1: f64, r2: f64) -> Result<f64> {
    let d = curve.d_max(t);
    for r in [r1, r2] {
        if !(r > 0.0 && r <= d * (1.0 + 1e-12)) {
            return Err(Error::InvalidInput(format!(
                "radius {r} outside (0, d_t = {d}]"
            )));
        }
    }
    let bound = weight.bind(curve)?;
    let e = IndexEngine::new(curve, t, Lattice::default())?;
    Ok(e.ln_h(&bound, r1, r2)?.exp())
}

#[derive(Clone, Debug, PartialEq)]
pub struct Spirality {
    pub delta_minus: f64,
    pub delta_plus: f64,
    pub pair: IndexPair,
    /// `(x, computed indices of W⁰(η_t^x), expected (min, max){δ⁻x, δ⁺x})`.
    pub scaling: Vec<(f64, IndexPair, (f64, f64))>,
    pub scaling_ok: bool,
}

const SCALING_X: [f64; 4] = [-2.0, -1.0, 1.0, 2.0];

/// Indices of `W_t⁰η_t`, with the scaling law for `η_t^x` checked at
/// `x ∈ {−2, −1, 1, 2}`.
pub fn spirality(curve: &Curve, t: f64, lattice: Lattice, tol: f64) -> Result<Spirality> {
    let e = IndexEngine::new(curve, t, lattice)?;
    let args: Vec<Vec<f64>> = e
        .crossing_sets()
        .iter()
        .map(|s| s.iter().map(|c| c.arg).collect())
        .collect();
    let index_of = |x: f64| -> Result<IndexPair> {
        let vals: Vec<Vec<f64>> = args
            .iter()
            .map(|a| a.iter().map(|arg| -x * arg).collect())
            .collect();
        index_pair(&e.w0_from(&IndexEngine::extrema(&vals)).sample)
    };
    let pair = index_of(1.0)?;
    let (dm, dp) = (pair.alpha, pair.beta);
    let mut scaling = Vec::new();
    let mut ok = true;
    for x in SCALING_X {
        let ip = index_of(x)?;
        let expected = ((dm * x).min(dp * x), (dm * x).max(dp * x));
        let slack = tol * x.abs().max(1.0);
        ok &= (ip.alpha - expected.0).abs() <= slack && (ip.beta - expected.1).abs() <= slack;
        scaling.push((x, ip, expected));
    }
    Ok(Spirality {
        delta_minus: dm,
        delta_plus: dp,
        pair,
        scaling,
        scaling_ok: ok,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Envelope {
    pub c1: f64,
    pub c2: f64,
    pub indices: IndexPair,
}

/// Smallest constants, over sampled points, in the power-type envelopes of a
/// one-singularity weight `ψ` at `t₀`:
/// `ψ(t)/ψ(τ) ≤ C₁ |(t−t₀)/(τ−t₀)|^{β+ε}` for `t ∉ ω(t₀,δ)`, `τ ∈ ω(t₀,δ)`, and
/// `ψ(t)/ψ(τ) ≤ C₂ |(t−t₀)/(τ−t₀)|^{α−ε}` for `t ∈ ω(t₀,δ)`, `τ ∉ ω(t₀,δ)`,
/// with `α, β` the indices of `W_{t₀}ψ`.
pub fn envelope_constants(
    curve: &Curve,
    t0: f64,
    psi: &Weight,
    eps: f64,
    delta: f64,
    lattice: Lattice,
) -> Result<Envelope> {
    let e = IndexEngine::new(curve, t0, lattice)?;
    if !(delta > 0.0 && delta < e.scan().d_t()) {
        return Err(Error::InvalidInput(format!(
            "δ = {delta} must lie in (0, d_t = {})",
            e.scan().d_t()
        )));
    }
    let bound = psi.bind(curve)?;
    let indices = index_pair(&e.w(&bound))?;
    let scan = e.scan();
    let arc = scan.omega_arc(delta);
    let (lo, hi) = arc.components[0];
    let upper = indices.beta + eps;
    let lower = indices.alpha - eps;
    let mut f_out = f64::NEG_INFINITY;
    let mut f_in = f64::INFINITY;
    let mut g_in = f64::NEG_INFINITY;
    let mut g_out = f64::INFINITY;
    for p in scan.probes().iter().filter(|p| !p.centre) {
        let l = bound.ln_at(&Site::from_probe(scan, p));
        if !l.is_finite() {
            continue;
        }
        let lr = p.r.ln();
        let (f, g) = (l - upper * lr, l - lower * lr);
        if p.v > lo && p.v < hi {
            f_in = f_in.min(f);
            g_in = g_in.max(g);
        } else {
            f_out = f_out.max(f);
            g_out = g_out.min(g);
        }
    }
    Ok(Envelope {
        c1: (f_out - f_in).exp(),
        c2: (g_in - g_out).exp(),
        indices,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::indices::index_pair;
    use crate::spaces::WeightFactor;
    use num_complex::Complex64;

    fn segment() -> Curve {
        Curve::segment(Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)).unwrap()
    }

    #[test]
    fn power_weight_has_exact_w0() {
        for g in [Curve::unit_circle(), segment()] {
            for lambda in [-0.4, 0.25] {
                let s = w0(&g, 0.0, &Weight::power(0.0, lambda), Lattice::default()).unwrap();
                for (x, v) in s.sample.points() {
                    assert!((v / x.powf(lambda) - 1.0).abs() < 1e-6, "{x} {v}");
                }
                let ip = index_pair(&s.sample).unwrap();
                assert!(
                    (ip.alpha - lambda).abs() < 1e-3 && (ip.beta - lambda).abs() < 1e-3,
                    "{ip:?}"
                );
            }
        }
    }

    #[test]
    fn unit_and_segment_eta_are_trivial() {
        let g = Curve::unit_circle();
        let s = w(&g, 1.0, &Weight::unit(), Lattice::default()).unwrap();
        assert!(s.points().all(|(_, v)| (v - 1.0).abs() < 1e-12));
        let sg = segment();
        let e = Weight::single(crate::spaces::eta(&sg, 0.5));
        // The two sides differ in argument by π, so W is the constant e^π.
        let s = w(&sg, 0.5, &e, Lattice::default()).unwrap();
        assert!(s
            .points()
            .all(|(_, v)| (v.ln() - std::f64::consts::PI).abs() < 1e-9));
        let ip = index_pair(&s).unwrap();
        assert!(ip.alpha.abs() < 1e-9 && ip.beta.abs() < 1e-9);
    }

    #[test]
    fn spirality_of_smooth_and_spiral_curves() {
        let c = spirality(&Curve::unit_circle(), 0.0, Lattice::default(), 2e-2).unwrap();
        assert!(
            c.delta_minus.abs() < 2e-2 && c.delta_plus.abs() < 2e-2 && c.scaling_ok,
            "{c:?}"
        );
        for delta in [0.5, 1.0, 2.0] {
            let g = Curve::log_spiral(delta).unwrap();
            let t = g.attachment().unwrap();
            let sp = spirality(&g, t, Lattice::default(), 2e-2).unwrap();
            assert!(
                (sp.delta_minus - delta).abs() < 2e-2 && (sp.delta_plus - delta).abs() < 2e-2,
                "{delta}: {sp:?}"
            );
            assert!(sp.scaling_ok);
        }
    }

    #[test]
    fn v0_of_power_weight() {
        let g = Curve::unit_circle();
        let s = v0(&g, 0.0, &Weight::power(0.0, 0.3), Lattice::default()).unwrap();
        let ip = index_pair(&s.sample).unwrap();
        assert!(
            (ip.alpha - 0.3).abs() < 1e-3 && (ip.beta - 0.3).abs() < 1e-3,
            "{ip:?}"
        );
    }

    #[test]
    fn oscillating_radial_weight() {
        let (a, b, c) = (0.2, 0.3, 1.0);
        let table = crate::spaces::RadialTable::from_fn(
            |r| r.powf(a) * (b * (c * r.ln()).sin()).exp(),
            1e-24,
            10.0,
            50,
        )
        .unwrap();
        let psi = Weight::single(WeightFactor::radial(0.0, table));
        let s = w0(&segment(), 0.0, &psi, Lattice::default()).unwrap();
        for (x, v) in s.sample.points() {
            let expected = x.powf(a) * (2.0 * b * (0.5 * c * x.ln()).sin().abs()).exp();
            assert!((v / expected - 1.0).abs() < 1e-2, "{x} {v} {expected}");
        }
    }

    #[test]
    fn reciprocal_symmetry() {
        let g = Curve::unit_circle();
        let psi =
            Weight::power(0.0, 0.3).product(&Weight::single(WeightFactor::eta_power(0.0, 0.5)));
        let s = w(&g, 0.0, &psi, Lattice::default()).unwrap();
        let jm = s.j_max() as i64;
        for j in 0..=jm {
            assert!(s.ln_at(j) + s.ln_at(-j) >= -1e-9);
        }
    }

    #[test]
    fn envelope_of_power_weight() {
        let g = Curve::unit_circle();
        let e = envelope_constants(
            &g,
            0.0,
            &Weight::power(0.0, 0.4),
            0.1,
            0.5,
            Lattice::default(),
        )
        .unwrap();
        // Sampled sups approach 1 from below at the boundary of ω.
        assert!(
            (0.999..=10.0).contains(&e.c1) && (0.999..=10.0).contains(&e.c2),
            "{e:?}"
        );
    }

    #[test]
    fn h_ratio_of_constant_weight() {
        let g = Curve::unit_circle();
        let h = h_ratio(&g, &Weight::unit().scaled(3.0), 0.0, 0.1, 1.0).unwrap();
        assert!((h - 1.0).abs() < 1e-12);
        assert!(h_ratio(&g, &Weight::unit(), 0.0, 5.0, 1.0).is_err());
    }
}
