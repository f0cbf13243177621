use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::curve::Curve;
use crate::error::{Error, Result};

/// One-sided limits at an arclength position.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Knot {
    pub s: f64,
    /// `c(s − 0)`.
    pub left: Complex64,
    /// `c(s + 0)`.
    pub right: Complex64,
}

/// A knot whose one-sided limits differ.
pub type Jump = Knot;

#[derive(Clone, Debug, PartialEq)]
enum Repr {
    /// Geometric interpolation from each knot's right limit to the next
    /// knot's left limit.
    Knots(Vec<Knot>),
    Product(Box<PcSymbol>, Box<PcSymbol>),
    Quotient(Box<PcSymbol>, Box<PcSymbol>),
}

/// Piecewise continuous function on a curve with finitely many jumps.
#[derive(Clone, Debug, PartialEq)]
pub struct PcSymbol {
    length: f64,
    closed: bool,
    repr: Repr,
}

const JUMP_REL: f64 = 1e-12;

fn differs(a: Complex64, b: Complex64) -> bool {
    (a - b).norm() > JUMP_REL * a.norm().max(b.norm()).max(1.0)
}

/// `a (b/a)^u` on the principal branch, linear when either end vanishes.
fn geometric(a: Complex64, b: Complex64, u: f64) -> Complex64 {
    if a == Complex64::new(0.0, 0.0) || b == Complex64::new(0.0, 0.0) {
        a + (b - a) * u
    } else {
        a * ((b / a).ln() * u).exp()
    }
}

impl PcSymbol {
    /// Knots in any order; positions are wrapped onto the curve.
    pub fn new(curve: &Curve, mut knots: Vec<Knot>) -> Result<PcSymbol> {
        let l = curve.length();
        if knots.is_empty() {
            return Err(Error::InvalidInput(
                "a symbol needs at least one knot".into(),
            ));
        }
        for k in &mut knots {
            if !(k.s.is_finite() && k.s >= -1e-9 * l && k.s <= l * (1.0 + 1e-9)) {
                return Err(Error::OutOfRange { s: k.s, length: l });
            }
            if !(k.left.is_finite() && k.right.is_finite()) {
                return Err(Error::InvalidInput(format!(
                    "one-sided limits at s = {} must be finite",
                    k.s
                )));
            }
            k.s = curve.wrap(k.s);
        }
        knots.sort_by(|a, b| a.s.total_cmp(&b.s));
        if knots.windows(2).any(|w| curve.same_point(w[0].s, w[1].s)) {
            return Err(Error::InvalidInput("two knots at the same point".into()));
        }
        Ok(PcSymbol {
            length: l,
            closed: curve.is_closed(),
            repr: Repr::Knots(knots),
        })
    }

    pub fn constant(curve: &Curve, c: Complex64) -> Result<PcSymbol> {
        PcSymbol::new(
            curve,
            vec![Knot {
                s: 0.0,
                left: c,
                right: c,
            }],
        )
    }

    /// A single jump `left → right` at `s`, closed up by geometric interpolation.
    pub fn jump(curve: &Curve, s: f64, left: Complex64, right: Complex64) -> Result<PcSymbol> {
        PcSymbol::new(curve, vec![Knot { s, left, right }])
    }

    pub fn product(&self, other: &PcSymbol) -> Result<PcSymbol> {
        self.compatible(other)?;
        Ok(PcSymbol {
            repr: Repr::Product(Box::new(self.clone()), Box::new(other.clone())),
            ..self.clone()
        })
    }

    /// `self / other`, one-sided limits divided jump-wise.
    pub fn quotient(&self, other: &PcSymbol) -> Result<PcSymbol> {
        self.compatible(other)?;
        Ok(PcSymbol {
            repr: Repr::Quotient(Box::new(self.clone()), Box::new(other.clone())),
            ..self.clone()
        })
    }

    fn compatible(&self, other: &PcSymbol) -> Result<()> {
        if (self.length - other.length).abs() > 1e-9 * self.length || self.closed != other.closed {
            return Err(Error::InvalidInput(
                "symbols live on different curves".into(),
            ));
        }
        Ok(())
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    /// All knot positions, sorted.
    pub fn knot_positions(&self) -> Vec<f64> {
        let mut s = match &self.repr {
            Repr::Knots(k) => k.iter().map(|k| k.s).collect(),
            Repr::Product(a, b) | Repr::Quotient(a, b) => {
                let mut s = a.knot_positions();
                s.extend(b.knot_positions());
                s
            }
        };
        s.sort_by(f64::total_cmp);
        s.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * self.length);
        s
    }

    fn wrap(&self, s: f64) -> f64 {
        if self.closed {
            s.rem_euclid(self.length)
        } else {
            s.clamp(0.0, self.length)
        }
    }

    /// `(c(s − 0), c(s + 0))`.
    pub fn one_sided(&self, s: f64) -> (Complex64, Complex64) {
        let s = self.wrap(s);
        match &self.repr {
            Repr::Knots(knots) => match knots
                .iter()
                .find(|k| (k.s - s).abs() <= 1e-12 * self.length)
            {
                Some(k) => (k.left, k.right),
                None => {
                    let v = self.value(s);
                    (v, v)
                }
            },
            Repr::Product(a, b) => {
                let (x, y) = (a.one_sided(s), b.one_sided(s));
                (x.0 * y.0, x.1 * y.1)
            }
            Repr::Quotient(a, b) => {
                let (x, y) = (a.one_sided(s), b.one_sided(s));
                (x.0 / y.0, x.1 / y.1)
            }
        }
    }

    /// Value at `s`; the right limit at a knot.
    pub fn value(&self, s: f64) -> Complex64 {
        let s = self.wrap(s);
        match &self.repr {
            Repr::Knots(knots) => self.piece_value(knots, s),
            Repr::Product(a, b) => a.value(s) * b.value(s),
            Repr::Quotient(a, b) => a.value(s) / b.value(s),
        }
    }

    fn piece_value(&self, knots: &[Knot], s: f64) -> Complex64 {
        let n = knots.len();
        let i = knots.partition_point(|k| k.s <= s);
        if !self.closed {
            return match i {
                0 => knots[0].left,
                i if i == n => knots[n - 1].right,
                i => {
                    let (a, b) = (&knots[i - 1], &knots[i]);
                    geometric(a.right, b.left, (s - a.s) / (b.s - a.s))
                }
            };
        }
        let (a, b) = if i == 0 {
            (&knots[n - 1], &knots[0])
        } else {
            (&knots[i - 1], &knots[i % n])
        };
        let mut span = b.s - a.s;
        if span <= 0.0 {
            span += self.length;
        }
        let off = (s - a.s).rem_euclid(self.length);
        geometric(a.right, b.left, off / span)
    }

    pub fn jumps(&self) -> Vec<Jump> {
        self.knot_positions()
            .into_iter()
            .filter_map(|s| {
                let (left, right) = self.one_sided(s);
                differs(left, right).then_some(Knot { s, left, right })
            })
            .collect()
    }

    /// Values on `n` uniform points plus both one-sided limits at every knot.
    pub fn range_samples(&self, n: usize) -> Vec<(f64, Complex64)> {
        let mut out: Vec<(f64, Complex64)> = (0..n)
            .map(|k| {
                let s = self.length * k as f64 / n as f64;
                (s, self.value(s))
            })
            .collect();
        for s in self.knot_positions() {
            let (l, r) = self.one_sided(s);
            out.push((s, l));
            out.push((s, r));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn single_jump_closes_up_geometrically() {
        let g = Curve::unit_circle();
        let a = PcSymbol::jump(&g, 0.0, c(1.0, 0.0), c(-1.0, 0.0)).unwrap();
        assert_eq!(a.one_sided(0.0), (c(1.0, 0.0), c(-1.0, 0.0)));
        assert!(a
            .range_samples(256)
            .iter()
            .all(|(_, v)| (v.norm() - 1.0).abs() < 1e-12));
        let l = g.length();
        assert!((a.value(l - 1e-9) - c(1.0, 0.0)).norm() < 1e-8);
        assert!((a.value(1e-9) - c(-1.0, 0.0)).norm() < 1e-8);
        assert_eq!(a.jumps().len(), 1);
    }

    #[test]
    fn quotient_divides_limits() {
        let g = Curve::unit_circle();
        let a = PcSymbol::jump(&g, 1.0, c(1.0, 0.0), c(0.0, 1.0)).unwrap();
        let b = PcSymbol::constant(&g, c(2.0, 0.0)).unwrap();
        let q = a.quotient(&b).unwrap();
        let j = q.jumps();
        assert_eq!(j.len(), 1);
        assert!(
            (j[0].left - c(0.5, 0.0)).norm() < 1e-15 && (j[0].right - c(0.0, 0.5)).norm() < 1e-15
        );
        assert!((q.value(3.0) - a.value(3.0) / 2.0).norm() < 1e-15);
        let p = q.product(&b).unwrap();
        assert!((p.value(3.0) - a.value(3.0)).norm() < 1e-14);
    }

    #[test]
    fn continuous_knots_are_not_jumps() {
        let g = Curve::unit_circle();
        let k = vec![
            Knot {
                s: 1.0,
                left: c(1.0, 0.0),
                right: c(1.0, 0.0),
            },
            Knot {
                s: 4.0,
                left: c(3.0, 0.0),
                right: c(3.0, 0.0),
            },
        ];
        let a = PcSymbol::new(&g, k).unwrap();
        assert!(a.jumps().is_empty());
        assert!((a.value(2.5) - c(3f64.sqrt(), 0.0)).norm() < 1e-12);
    }

    #[test]
    fn rejects_bad_knots() {
        let g = Curve::unit_circle();
        assert!(PcSymbol::new(&g, vec![]).is_err());
        assert!(PcSymbol::jump(&g, 100.0, c(1.0, 0.0), c(2.0, 0.0)).is_err());
        assert!(PcSymbol::jump(&g, 1.0, c(f64::NAN, 0.0), c(2.0, 0.0)).is_err());
    }
}
