//! Index-algebra checks on weight pairs: scaling of `W⁰(ψ^s)`, the product
//! sandwiches for `W` and `W⁰`, equality of `W⁰` and `V⁰` indices, and the
//! mixed `V⁰(ψw)` sandwich. Shared by the property test and the acceptance run.

use std::sync::LazyLock;

use nakano::curve::Curve;
use nakano::indices::{index_pair, IndexEngine, IndexPair, Lattice};
use nakano::spaces::Site;
use num_complex::Complex64;
use proptest::prelude::*;

/// One factor of a weight singular at the engine's centre, in polar
/// coordinates about it.
// Weights with genuinely separated indices vary on log-log scales that a
// twelve-decade lattice does not resolve, so the families are power-like up
// to bounded oscillation; `W` and `W⁰` still differ for them. Ripples run at
// least one period per four decades so the limsup windows see them repeat.
#[derive(Clone, Copy, Debug)]
pub enum Factor {
    /// `r^λ`.
    Power(f64),
    /// `e^{−x arg}`; nontrivial only on the spiral.
    Eta(f64),
    /// `r^a e^{b sin(c ln r)}`: bounded oscillation, indices `(a, a)`.
    Ripple { a: f64, b: f64, c: f64 },
}

impl Factor {
    fn ln(&self, r: f64, arg: f64) -> f64 {
        let l = r.ln();
        match *self {
            Factor::Power(lambda) => lambda * l,
            Factor::Eta(x) => -x * arg,
            Factor::Ripple { a, b, c } => a * l + b * (c * l).sin(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Psi(Vec<Factor>);

impl Psi {
    fn ln(&self, site: &Site) -> f64 {
        self.0.iter().map(|f| f.ln(site.r, site.arg)).sum()
    }
}

pub struct Scene {
    pub name: &'static str,
    engine: IndexEngine,
}

pub static SCENES: LazyLock<Vec<Scene>> = LazyLock::new(|| {
    let lattice = Lattice::default();
    let circle = Curve::unit_circle();
    let segment = Curve::segment(Complex64::new(-1.0, 0.0), Complex64::new(1.0, 0.0)).unwrap();
    let spiral = Curve::log_spiral(0.8).unwrap();
    vec![
        Scene {
            name: "circle",
            engine: IndexEngine::new(&circle, 0.0, lattice).unwrap(),
        },
        Scene {
            name: "segment midpoint",
            engine: IndexEngine::new(&segment, 1.0, lattice).unwrap(),
        },
        Scene {
            name: "spiral",
            engine: IndexEngine::new(&spiral, spiral.attachment().unwrap(), lattice).unwrap(),
        },
    ]
});

fn w(e: &IndexEngine, ln: &(dyn Fn(&Site) -> f64 + Sync)) -> IndexPair {
    index_pair(&e.w(&ln)).unwrap()
}

fn w0(e: &IndexEngine, ln: &(dyn Fn(&Site) -> f64 + Sync)) -> IndexPair {
    index_pair(&e.w0(&ln).sample).unwrap()
}

fn v0(e: &IndexEngine, ln: &(dyn Fn(&Site) -> f64 + Sync)) -> IndexPair {
    index_pair(&e.v0_from(&e.portion_means(&ln).unwrap()).sample).unwrap()
}

const TOL: f64 = 2e-3;

fn ci(p: &IndexPair) -> f64 {
    p.alpha_ci.max(p.beta_ci)
}

pub fn factor() -> impl Strategy<Value = Factor> {
    prop_oneof![
        (-0.6..0.6f64).prop_map(Factor::Power),
        (-1.0..1.0f64).prop_map(Factor::Eta),
        (-0.5..0.5f64, 0.0..0.3f64, 1.5..4.0f64).prop_map(|(a, b, c)| Factor::Ripple { a, b, c }),
    ]
}

pub fn psi() -> impl Strategy<Value = Psi> {
    proptest::collection::vec(factor(), 1..=2).prop_map(Psi)
}

/// Collects failures so one case reports every violated inequality.
#[derive(Default)]
struct Checks(Vec<String>);

impl Checks {
    fn le(&mut self, what: &str, lhs: f64, rhs: f64, slack: f64) {
        if lhs > rhs + slack {
            self.0
                .push(format!("{what}: {lhs:.5} > {rhs:.5} (+{slack:.1e})"));
        }
    }

    fn close(&mut self, what: &str, a: f64, b: f64, slack: f64) {
        if (a - b).abs() > slack {
            self.0
                .push(format!("{what}: {a:.5} vs {b:.5} (±{slack:.1e})"));
        }
    }
}

fn sandwich(
    c: &mut Checks,
    tag: &str,
    one: &IndexPair,
    two: &IndexPair,
    prod: &IndexPair,
    slack: f64,
) {
    c.le(
        &format!("{tag}: α₁ + α₂ ≤ α(ψ₁ψ₂)"),
        one.alpha + two.alpha,
        prod.alpha,
        slack,
    );
    c.le(
        &format!("{tag}: α(ψ₁ψ₂) ≤ α₁ + β₂"),
        prod.alpha,
        one.alpha + two.beta,
        slack,
    );
    c.le(
        &format!("{tag}: α(ψ₁ψ₂) ≤ β₁ + α₂"),
        prod.alpha,
        one.beta + two.alpha,
        slack,
    );
    c.le(
        &format!("{tag}: β(ψ₁ψ₂) ≤ β₁ + β₂"),
        prod.beta,
        one.beta + two.beta,
        slack,
    );
    c.le(
        &format!("{tag}: α₁ + β₂ ≤ β(ψ₁ψ₂)"),
        one.alpha + two.beta,
        prod.beta,
        slack,
    );
    c.le(
        &format!("{tag}: β₁ + α₂ ≤ β(ψ₁ψ₂)"),
        one.beta + two.alpha,
        prod.beta,
        slack,
    );
}

pub fn run_case(scene: &Scene, p1: &Psi, p2: &Psi) -> Vec<String> {
    let e = &scene.engine;
    let mut c = Checks::default();
    let l1 = |s: &Site| p1.ln(s);
    let l2 = |s: &Site| p2.ln(s);
    let l12 = |s: &Site| p1.ln(s) + p2.ln(s);

    let (w1, w2, w12) = (w(e, &l1), w(e, &l2), w(e, &l12));
    let (z1, z2, z12) = (w0(e, &l1), w0(e, &l2), w0(e, &l12));
    for p in [&w1, &w2, &w12, &z1, &z2, &z12] {
        c.le("α ≤ β", p.alpha, p.beta, TOL + ci(p));
    }

    // Submultiplicativity at 1: W(x)·W(1/x) ≥ 1.
    let sample = e.w(&l1);
    let jm = sample.j_max() as i64;
    for j in 0..=jm {
        c.le(
            "ln W(x) + ln W(1/x) ≥ 0",
            0.0,
            sample.ln_at(j) + sample.ln_at(-j),
            1e-9,
        );
    }

    // Scaling: W(ψ^s) and W⁰(ψ^s) both carry the scaled W⁰ψ indices.
    for s in [-2.0, -0.5, 0.5, 3.0] {
        let ls = move |site: &Site| s * p1.ln(site);
        let want = z1.scaled(s);
        let slack = TOL * s.abs().max(1.0) + ci(&want);
        for (kind, got) in [("W", w(e, &ls)), ("W⁰", w0(e, &ls))] {
            c.close(
                &format!("α({kind}(ψ^{s}))"),
                got.alpha,
                want.alpha,
                slack + ci(&got),
            );
            c.close(
                &format!("β({kind}(ψ^{s}))"),
                got.beta,
                want.beta,
                slack + ci(&got),
            );
        }
    }

    let slack = TOL + ci(&w1) + ci(&w2) + ci(&w12);
    sandwich(&mut c, "W", &w1, &w2, &w12, slack);
    let slack = TOL + ci(&z1) + ci(&z2) + ci(&z12);
    sandwich(&mut c, "W⁰", &z1, &z2, &z12, slack);

    // W⁰ and V⁰ indices coincide.
    let (v1, v2, v12) = (v0(e, &l1), v0(e, &l2), v0(e, &l12));
    let slack = 5e-3 + ci(&z1) + ci(&v1);
    c.close("α(W⁰ψ) = α(V⁰ψ)", z1.alpha, v1.alpha, slack);
    c.close("β(W⁰ψ) = β(V⁰ψ)", z1.beta, v1.beta, slack);

    // Mixed sandwich with w = ψ₂ as the weight.
    let slack = 5e-3 + ci(&v2) + ci(&w1) + ci(&v12);
    c.le(
        "α(V⁰w) + α(Wψ) ≤ α(V⁰(ψw))",
        v2.alpha + w1.alpha,
        v12.alpha,
        slack,
    );
    c.le(
        "α(V⁰(ψw)) ≤ α(V⁰w) + β(Wψ)",
        v12.alpha,
        v2.alpha + w1.beta,
        slack,
    );
    c.le(
        "α(V⁰(ψw)) ≤ β(V⁰w) + α(Wψ)",
        v12.alpha,
        v2.beta + w1.alpha,
        slack,
    );
    c.le(
        "β(V⁰(ψw)) ≤ β(V⁰w) + β(Wψ)",
        v12.beta,
        v2.beta + w1.beta,
        slack,
    );
    c.le(
        "α(V⁰w) + β(Wψ) ≤ β(V⁰(ψw))",
        v2.alpha + w1.beta,
        v12.beta,
        slack,
    );
    c.le(
        "β(V⁰w) + α(Wψ) ≤ β(V⁰(ψw))",
        v2.beta + w1.alpha,
        v12.beta,
        slack,
    );
    c.0
}
