use super::{BoundWeight, ExponentField};
use crate::curve::Curve;
use crate::error::{Error, Result};

/// Per-sample data `(ln|f w|, p, quadrature weight)`; samples where `f = 0` or
/// the weight is singular are dropped.
fn integrand(
    curve: &Curve,
    f: &[f64],
    p: &ExponentField,
    w: &BoundWeight,
) -> Result<Vec<(f64, f64, f64)>> {
    let s = curve.sample_s();
    if f.len() != s.len() {
        return Err(Error::InvalidInput(format!(
            "function has {} samples, curve has {}",
            f.len(),
            s.len()
        )));
    }
    let h = curve.spacing();
    let last = s.len() - 1;
    let mut out = Vec::with_capacity(s.len());
    for (k, (&sk, &fk)) in s.iter().zip(f).enumerate() {
        if !fk.is_finite() {
            return Err(Error::NotInSpace(format!("non-finite sample at s = {sk}")));
        }
        if fk == 0.0 {
            continue;
        }
        let lw = if w.is_unit() { 0.0 } else { w.ln_s(sk) };
        if lw.is_nan() {
            continue;
        }
        if lw == f64::INFINITY {
            return Err(Error::NotInSpace(format!("weight infinite at s = {sk}")));
        }
        let q = if !curve.is_closed() && (k == 0 || k == last) {
            0.5 * h
        } else {
            h
        };
        out.push((fk.abs().ln() + lw, p.at(sk), q));
    }
    Ok(out)
}

fn modular_ln(data: &[(f64, f64, f64)], ln_lambda: f64) -> f64 {
    data.iter()
        .map(|&(g, p, q)| q * (p * (g - ln_lambda)).exp())
        .sum()
}

/// `∫_Γ |f w / λ|^{p(τ)} |dτ|` by the trapezoid rule on the arclength samples.
pub fn modular(
    curve: &Curve,
    f: &[f64],
    p: &ExponentField,
    w: &BoundWeight,
    lambda: f64,
) -> Result<f64> {
    if !(lambda > 0.0) {
        return Err(Error::InvalidInput(format!(
            "modular needs λ > 0 (got {lambda})"
        )));
    }
    let data = integrand(curve, f, p, w)?;
    Ok(modular_ln(&data, lambda.ln()))
}

/// `inf{λ > 0 : modular(f, λ) ≤ 1}` by bisection in `ln λ` to relative `1e-10`.
/// Returns the upper end, so the modular at the result never exceeds one.
pub fn nakano_norm(curve: &Curve, f: &[f64], p: &ExponentField, w: &BoundWeight) -> Result<f64> {
    let data = integrand(curve, f, p, w)?;
    if data.is_empty() {
        return Ok(0.0);
    }
    let m1 = modular_ln(&data, 0.0);
    if !m1.is_finite() {
        return Err(Error::NotInSpace("modular diverges at λ = 1".into()));
    }
    let p_min = data.iter().map(|d| d.1).fold(f64::INFINITY, f64::min);
    let mut hi = (m1.powf(1.0 / p_min) + 1.0).ln();
    let mut lo = f64::EPSILON.ln();
    // Very large or small functions: widen until the bracket is valid.
    while modular_ln(&data, lo) <= 1.0 {
        lo -= 50.0;
        if lo < -700.0 {
            return Ok(lo.exp());
        }
    }
    while modular_ln(&data, hi) > 1.0 {
        hi += 10.0;
    }
    while hi - lo > 1e-10 {
        let mid = 0.5 * (lo + hi);
        if modular_ln(&data, mid) > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(hi.exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::Weight;
    use num_complex::Complex64;
    use std::f64::consts::PI;

    fn unit(curve: &Curve) -> BoundWeight {
        Weight::unit().bind(curve).unwrap()
    }

    #[test]
    fn constant_function_on_circle() {
        let g = Curve::unit_circle();
        let p = ExponentField::constant(2.0).unwrap();
        for c in [1.0, 3.5, 1e-3] {
            let f = vec![c; g.sample_s().len()];
            let n = nakano_norm(&g, &f, &p, &unit(&g)).unwrap();
            assert!((n / (c * (2.0 * PI).sqrt()) - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn zero_function_has_zero_norm() {
        let g = Curve::unit_circle();
        let f = vec![0.0; g.sample_s().len()];
        assert_eq!(
            nakano_norm(&g, &f, &ExponentField::constant(3.0).unwrap(), &unit(&g)).unwrap(),
            0.0
        );
    }

    #[test]
    fn indicator_of_unit_arc() {
        let g = Curve::unit_circle();
        let f: Vec<f64> = g
            .sample_s()
            .iter()
            .map(|&s| if (1.0..2.0).contains(&s) { 1.0 } else { 0.0 })
            .collect();
        let n = nakano_norm(&g, &f, &ExponentField::constant(3.0).unwrap(), &unit(&g)).unwrap();
        assert!((n - 1.0).abs() < 1e-3, "{n}");
    }

    #[test]
    fn variable_exponent_is_refinement_stable() {
        let norm_at = |res: usize| {
            let g = Curve::unit_circle().with_resolution(res).unwrap();
            let p = ExponentField::from_fn(&g, |s, _| 2.5 - 0.5 * s.cos()).unwrap();
            let f = vec![1.0; g.sample_s().len()];
            nakano_norm(&g, &f, &p, &unit(&g)).unwrap()
        };
        let a = norm_at(4096);
        let b = norm_at(40960);
        assert!((a / b - 1.0).abs() < 1e-6, "{a} {b}");
    }

    #[test]
    fn weighted_constant_exponent_matches_classical() {
        let g = Curve::unit_circle();
        let w = Weight::power(0.0, 0.3).bind(&g).unwrap();
        let p = ExponentField::constant(2.5).unwrap();
        let f: Vec<f64> = g
            .sample_z()
            .iter()
            .map(|z| (z - Complex64::new(0.3, 0.0)).norm())
            .collect();
        let n = nakano_norm(&g, &f, &p, &w).unwrap();
        let h = g.spacing();
        let classical: f64 = g
            .sample_s()
            .iter()
            .zip(&f)
            .map(|(&s, &fk)| {
                let v = w.value(s);
                if v.is_nan() {
                    0.0
                } else {
                    h * (fk * v).powf(2.5)
                }
            })
            .sum::<f64>()
            .powf(1.0 / 2.5);
        assert!((n / classical - 1.0).abs() < 1e-8);
        let m = modular(&g, &f, &p, &w, n).unwrap();
        assert!((1.0 - 1e-6..=1.0 + 1e-9).contains(&m));
    }

    #[test]
    fn bad_lambda_is_rejected() {
        let g = Curve::unit_circle();
        let f = vec![1.0; g.sample_s().len()];
        assert!(modular(
            &g,
            &f,
            &ExponentField::constant(2.0).unwrap(),
            &unit(&g),
            0.0
        )
        .is_err());
    }
}
