//! Scene files: one TOML document with `schema = 1`.
//!
//! ```toml
//! schema = 1
//!
//! [curve]
//! kind = "unit_circle"          # segment | log_spiral | smooth_jordan | polyline
//!
//! [exponent]
//! kind = "constant"             # table | formula
//! value = 2.0
//!
//! [[weight]]
//! kind = "power"                # eta | phi | radial
//! at = 0.0
//! lambda = 0.25
//!
//! [symbols.a]
//! knots = [{ s = 0.0, left = [1.0, 0.0], right = [-1.0, 0.0] }]
//! ```

use num_complex::Complex64;
use serde::Deserialize;

use crate::curve::{Curve, CurveKind, DEFAULT_RESOLUTION};
use crate::error::{Error, Result};
use crate::fredholm::{Knot, PcSymbol, Tolerances};
use crate::indices::Lattice;
use crate::spaces::{ExponentField, RadialTable, Weight, WeightFactor};

pub const SCHEMA: u32 = 1;

type Pair = [f64; 2];

/// An arclength, or `"attachment"` (the spiral attachment point) or `"end"`
/// (the far end of the parametrization).
#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum Position {
    Arclength(f64),
    Named(String),
}

impl Position {
    pub fn resolve(&self, curve: &Curve, location: &str) -> Result<f64> {
        let l = curve.length();
        let s = match self {
            Position::Arclength(s) => *s,
            Position::Named(n) if n == "attachment" => curve
                .attachment()
                .ok_or_else(|| config_error(location, "the curve has no attachment point"))?,
            Position::Named(n) if n == "end" => l,
            Position::Named(n) => {
                return Err(config_error(
                    location,
                    format!("unknown position {n:?} (use a number, \"attachment\" or \"end\")"),
                ))
            }
        };
        if !(s.is_finite() && s >= -1e-9 * l && s <= l * (1.0 + 1e-9)) {
            return Err(config_error(
                location,
                format!("arclength {s} is not on the curve [0, {l}]"),
            ));
        }
        Ok(s.clamp(0.0, l))
    }
}

fn cx(p: Pair) -> Complex64 {
    Complex64::new(p[0], p[1])
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneConfig {
    pub schema: u32,
    #[serde(default)]
    pub curve: Option<CurveSpec>,
    #[serde(default)]
    pub exponent: Option<ExponentSpec>,
    #[serde(default)]
    pub weight: Vec<FactorSpec>,
    /// Positive constant multiplying the weight.
    #[serde(default)]
    pub weight_scale: Option<f64>,
    #[serde(default)]
    pub symbols: SymbolsSpec,
    #[serde(default)]
    pub tolerances: TolerancesSpec,
    #[serde(default)]
    pub grids: GridsSpec,
    /// Point for `indices`, `spirality`, `profile` and `leaf`; defaults to the
    /// weight's singular points, else the curve's special points.
    #[serde(default)]
    pub point: Option<Position>,
    #[serde(default)]
    pub leaf: Option<LeafSpec>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum CurveSpec {
    UnitCircle {
        #[serde(default)]
        resolution: Option<usize>,
    },
    Segment {
        a: Pair,
        b: Pair,
        #[serde(default)]
        resolution: Option<usize>,
    },
    LogSpiral {
        delta: f64,
        #[serde(default)]
        r0: Option<f64>,
        #[serde(default)]
        resolution: Option<usize>,
    },
    SmoothJordan {
        /// `[k, re, im]` per Fourier coefficient.
        coefficients: Vec<[f64; 3]>,
        #[serde(default)]
        resolution: Option<usize>,
    },
    Polyline {
        points: Vec<Pair>,
        #[serde(default)]
        closed: bool,
        #[serde(default)]
        resolution: Option<usize>,
    },
}

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ExponentSpec {
    Constant {
        value: f64,
    },
    /// `[s, p]` knots, piecewise linear in arclength.
    Table {
        knots: Vec<Pair>,
    },
    /// A built-in formula, see [`FORMULAS`].
    Formula {
        name: String,
        #[serde(default)]
        params: Vec<f64>,
    },
}

/// Built-in exponent formulas and their parameters.
pub const FORMULAS: [(&str, &str); 3] = [
    (
        "distance",
        "p(τ) = base + slope·|τ − τ(at)|; params [base, slope, at]",
    ),
    ("cosine", "p(s) = base + amp·cos(2πs/L); params [base, amp]"),
    (
        "log_dini",
        "p(τ) = base + c/(1 − ln|τ − τ(at)|); params [base, c, at]",
    ),
];

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FactorSpec {
    Power {
        at: Position,
        lambda: f64,
    },
    Eta {
        at: Position,
        x: f64,
    },
    Phi {
        at: Position,
        gamma: Pair,
    },
    /// `[r, ω(r)]` samples of a radial factor.
    Radial {
        at: Position,
        table: Vec<Pair>,
    },
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymbolsSpec {
    #[serde(default)]
    pub a: Option<SymbolSpec>,
    #[serde(default)]
    pub b: Option<SymbolSpec>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymbolSpec {
    #[serde(default)]
    pub constant: Option<Pair>,
    #[serde(default)]
    pub knots: Vec<KnotSpec>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KnotSpec {
    pub s: Position,
    #[serde(default)]
    pub value: Option<Pair>,
    #[serde(default)]
    pub left: Option<Pair>,
    #[serde(default)]
    pub right: Option<Pair>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TolerancesSpec {
    pub margin: Option<f64>,
    pub shape: Option<f64>,
    pub slope: Option<f64>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridsSpec {
    pub decades: Option<usize>,
    pub x: Option<Vec<f64>>,
    pub orders: Option<Vec<usize>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LeafSpec {
    pub z1: Pair,
    pub z2: Pair,
    pub p: f64,
    /// Constant indicator values `[α*, β*]`; when absent the profile at
    /// `point` is used.
    #[serde(default)]
    pub profile: Option<Pair>,
}

fn config_error(location: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Config {
        location: location.into(),
        message: message.into(),
    }
}

/// Line and column of a byte offset.
fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let col = before
        .rfind('\n')
        .map_or(before.len(), |i| before.len() - i - 1)
        + 1;
    (line, col)
}

impl SceneConfig {
    pub fn parse(text: &str) -> Result<SceneConfig> {
        let cfg: SceneConfig = toml::from_str(text).map_err(|e| {
            let location = match e.span() {
                Some(span) => {
                    let (l, c) = line_col(text, span.start);
                    format!("line {l}, column {c}")
                }
                None => "document".into(),
            };
            config_error(location, e.message().to_string())
        })?;
        if cfg.schema != SCHEMA {
            return Err(config_error(
                "schema",
                format!("unsupported schema {} (expected {SCHEMA})", cfg.schema),
            ));
        }
        Ok(cfg)
    }

    pub fn load(path: &std::path::Path) -> Result<SceneConfig> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        SceneConfig::parse(&text)
    }

    pub fn curve(&self) -> Result<Curve> {
        let spec = self
            .curve
            .as_ref()
            .ok_or_else(|| config_error("curve", "missing [curve] table"))?;
        let (kind, res) = match spec {
            CurveSpec::UnitCircle { resolution } => (CurveKind::UnitCircle, *resolution),
            CurveSpec::Segment { a, b, resolution } => (
                CurveKind::PolylineSampled {
                    points: vec![cx(*a), cx(*b)],
                    closed: false,
                },
                *resolution,
            ),
            CurveSpec::LogSpiral {
                delta,
                r0,
                resolution,
            } => (
                CurveKind::LogSpiralAttached {
                    delta: *delta,
                    r0: r0.unwrap_or(0.5),
                },
                *resolution,
            ),
            CurveSpec::SmoothJordan {
                coefficients,
                resolution,
            } => {
                let mut cs = Vec::new();
                for (i, c) in coefficients.iter().enumerate() {
                    if c[0].fract() != 0.0 {
                        return Err(config_error(
                            format!("curve.coefficients[{i}]"),
                            "frequency must be an integer",
                        ));
                    }
                    cs.push((c[0] as i32, Complex64::new(c[1], c[2])));
                }
                (CurveKind::SmoothJordan { coefficients: cs }, *resolution)
            }
            CurveSpec::Polyline {
                points,
                closed,
                resolution,
            } => (
                CurveKind::PolylineSampled {
                    points: points.iter().copied().map(cx).collect(),
                    closed: *closed,
                },
                *resolution,
            ),
        };
        Curve::new(kind, res.unwrap_or(DEFAULT_RESOLUTION))
    }

    pub fn exponent(&self, curve: &Curve) -> Result<ExponentField> {
        let spec = self
            .exponent
            .as_ref()
            .ok_or_else(|| config_error("exponent", "missing [exponent] table"))?;
        match spec {
            ExponentSpec::Constant { value } => ExponentField::constant(*value),
            ExponentSpec::Table { knots } => {
                ExponentField::table(curve, knots.iter().map(|k| (k[0], k[1])).collect())
            }
            ExponentSpec::Formula { name, params } => {
                let need = |n: usize| {
                    if params.len() == n {
                        Ok(())
                    } else {
                        Err(config_error(
                            "exponent.params",
                            format!("formula {name} takes {n} parameters"),
                        ))
                    }
                };
                match name.as_str() {
                    "distance" => {
                        need(3)?;
                        let centre = curve.point_at(params[2])?;
                        ExponentField::from_fn(curve, |_, z| {
                            params[0] + params[1] * (z - centre).norm()
                        })
                    }
                    "cosine" => {
                        need(2)?;
                        let l = curve.length();
                        ExponentField::from_fn(curve, |s, _| {
                            params[0] + params[1] * (2.0 * std::f64::consts::PI * s / l).cos()
                        })
                    }
                    "log_dini" => {
                        need(3)?;
                        let centre = curve.point_at(params[2])?;
                        ExponentField::from_fn(curve, |_, z| {
                            let r = (z - centre).norm();
                            if r == 0.0 {
                                params[0]
                            } else {
                                params[0] + params[1] / (1.0 - r.ln())
                            }
                        })
                    }
                    other => Err(config_error(
                        "exponent.name",
                        format!(
                            "unknown formula {other:?}; known: {}",
                            FORMULAS.map(|f| f.0).join(", ")
                        ),
                    )),
                }
            }
        }
    }

    pub fn weight(&self, curve: &Curve) -> Result<Weight> {
        let mut factors = Vec::new();
        for (i, f) in self.weight.iter().enumerate() {
            let at = |p: &Position| p.resolve(curve, &format!("weight[{i}].at"));
            let factor = match f {
                FactorSpec::Power { at: p, lambda } => WeightFactor::power(at(p)?, *lambda),
                FactorSpec::Eta { at: p, x } => WeightFactor::eta_power(at(p)?, *x),
                FactorSpec::Phi { at: p, gamma } => WeightFactor::phi_gamma(at(p)?, cx(*gamma)),
                FactorSpec::Radial { at: p, table } => {
                    let pts: Vec<(f64, f64)> = table.iter().map(|p| (p[0], p[1])).collect();
                    WeightFactor::radial(
                        at(p)?,
                        RadialTable::new(&pts).map_err(|e| {
                            config_error(format!("weight[{i}].table"), e.to_string())
                        })?,
                    )
                }
            };
            factors.push(factor);
        }
        let w = Weight::from_factors(factors);
        match self.weight_scale {
            None => Ok(w),
            Some(c) if c > 0.0 && c.is_finite() => Ok(w.scaled(c)),
            Some(c) => Err(config_error(
                "weight_scale",
                format!("must be positive (got {c})"),
            )),
        }
    }

    fn symbol(curve: &Curve, spec: Option<&SymbolSpec>, name: &str) -> Result<PcSymbol> {
        let Some(spec) = spec else {
            return PcSymbol::constant(curve, Complex64::new(1.0, 0.0));
        };
        if let Some(c) = spec.constant {
            if !spec.knots.is_empty() {
                return Err(config_error(
                    format!("symbols.{name}"),
                    "give either constant or knots",
                ));
            }
            return PcSymbol::constant(curve, cx(c));
        }
        let mut knots = Vec::new();
        for (i, k) in spec.knots.iter().enumerate() {
            let (left, right) = match (k.value, k.left, k.right) {
                (Some(v), None, None) => (cx(v), cx(v)),
                (None, Some(l), Some(r)) => (cx(l), cx(r)),
                _ => {
                    return Err(config_error(
                        format!("symbols.{name}.knots[{i}]"),
                        "give value, or both left and right",
                    ))
                }
            };
            knots.push(Knot {
                s: k.s
                    .resolve(curve, &format!("symbols.{name}.knots[{i}].s"))?,
                left,
                right,
            });
        }
        PcSymbol::new(curve, knots)
            .map_err(|e| config_error(format!("symbols.{name}"), e.to_string()))
    }

    pub fn symbols(&self, curve: &Curve) -> Result<(PcSymbol, PcSymbol)> {
        Ok((
            Self::symbol(curve, self.symbols.a.as_ref(), "a")?,
            Self::symbol(curve, self.symbols.b.as_ref(), "b")?,
        ))
    }

    pub fn point(&self, curve: &Curve) -> Result<Option<f64>> {
        self.point
            .as_ref()
            .map(|p| p.resolve(curve, "point"))
            .transpose()
    }

    pub fn tolerances(&self) -> Result<Tolerances> {
        let mut t = Tolerances::default();
        if let Some(m) = self.tolerances.margin {
            t.margin = m;
        }
        if let Some(s) = self.tolerances.shape {
            t.shape = s;
        }
        if let Some(s) = self.tolerances.slope {
            t.slope = s;
        }
        for (name, v) in [("margin", t.margin), ("shape", t.shape), ("slope", t.slope)] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(config_error(
                    format!("tolerances.{name}"),
                    "must be non-negative",
                ));
            }
        }
        if let Some(d) = self.grids.decades {
            t.lattice =
                Lattice::new(d).map_err(|e| config_error("grids.decades", e.to_string()))?;
        }
        Ok(t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_a_full_scene() {
        let text = r#"
schema = 1
point = "end"
weight_scale = 2.0

[curve]
kind = "unit_circle"

[exponent]
kind = "formula"
name = "distance"
params = [2.0, 0.5, 0.0]

[[weight]]
kind = "power"
at = 0.0
lambda = 0.25

[[weight]]
kind = "eta"
at = 1.0
x = 0.5

[symbols.a]
knots = [{ s = 0.0, left = [1.0, 0.0], right = [-1.0, 0.0] }, { s = 2.0, value = [1.0, 1.0] }]

[symbols.b]
constant = [2.0, 0.0]

[tolerances]
margin = 1e-3

[grids]
decades = 10
"#;
        let cfg = SceneConfig::parse(text).unwrap();
        let g = cfg.curve().unwrap();
        assert!(matches!(
            cfg.exponent(&g).unwrap(),
            ExponentField::Table { .. }
        ));
        let w = cfg.weight(&g).unwrap();
        assert_eq!(w.factors().len(), 2);
        assert!((w.log_scale() - 2f64.ln()).abs() < 1e-15);
        let (a, b) = cfg.symbols(&g).unwrap();
        assert_eq!(a.jumps().len(), 1);
        assert_eq!(b.value(1.0), Complex64::new(2.0, 0.0));
        assert_eq!(cfg.tolerances().unwrap().lattice.decades, 10);
        assert_eq!(cfg.point(&g).unwrap(), Some(g.length()));
    }

    #[test]
    fn errors_carry_locations() {
        let err =
            SceneConfig::parse("schema = 1\n[curve]\nkind = \"moebius_strip\"\n").unwrap_err();
        match err {
            Error::Config { location, .. } => assert!(location == "line 3, column 8", "{location}"),
            e => panic!("{e:?}"),
        }
        assert!(matches!(
            SceneConfig::parse("schema = 2\n"),
            Err(Error::Config { .. })
        ));
        let cfg = SceneConfig::parse("schema = 1\n[curve]\nkind = \"unit_circle\"\n[[weight]]\nkind = \"power\"\nat = 99.0\nlambda = 0.1\n").unwrap();
        let g = cfg.curve().unwrap();
        match cfg.weight(&g).unwrap_err() {
            Error::Config { location, .. } => assert_eq!(location, "weight[0].at"),
            e => panic!("{e:?}"),
        }
        let cfg = SceneConfig::parse(
            "schema = 1\npoint = \"attachment\"\n[curve]\nkind = \"unit_circle\"\n",
        )
        .unwrap();
        assert!(matches!(
            cfg.point(&cfg.curve().unwrap()),
            Err(Error::Config { .. })
        ));
    }
}
