//! The ten acceptance criteria, one pass/fail line each.

#[path = "support/lemmas.rs"]
mod lemmas;

use std::f64::consts::PI;
use std::path::Path;
use std::time::Instant;

use clap::Parser;
use nakano::cli::{execute, Cli};
use nakano::curve::Curve;
use nakano::fredholm::{decide_s_bounded, leaf, IndicatorProfile, SpaceSpec, Tolerances, Verdict};
use nakano::indices::{index_pair, spirality, w0, Lattice};
use nakano::lab::{agreement_suite, pv_cauchy, random_jump_check, DEFAULT_PV_NODES};
use nakano::spaces::{modular, nakano_norm, ExponentField, Weight};
use num_complex::Complex64;
use proptest::strategy::{Strategy, ValueTree};
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

/// Name and check; the check gets the start time for its own runtime limit.
type Criterion = (&'static str, fn(Instant) -> Outcome);

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn fail(e: impl std::fmt::Display) -> String {
    format!("error: {e}")
}

fn fourier_multiplier() -> Outcome {
    let g = Curve::unit_circle();
    let mut worst: f64 = 0.0;
    for n in -32i32..=32 {
        for t in [0.0, 1.3, 4.0] {
            let f = move |s: f64| Complex64::from_polar(1.0, n as f64 * s);
            let r = pv_cauchy(&g, &f, t, DEFAULT_PV_NODES).map_err(fail)?;
            let want = if n >= 0 { f(t) } else { -f(t) };
            worst = worst.max((r.value - want).norm());
        }
    }
    check(
        worst <= 1e-6,
        format!("max error {worst:.2e} over |n| ≤ 32"),
    )
}

fn index_recovery() -> Outcome {
    let lattice = Lattice::default();
    let circle = Curve::unit_circle();
    let segment =
        Curve::segment(Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)).map_err(fail)?;
    let mut worst: f64 = 0.0;
    for (c, t) in [(&circle, 0.0), (&segment, 0.5)] {
        for lambda in [-0.4, 0.0, 0.3, 0.7] {
            let s = w0(c, t, &Weight::power(t, lambda), lattice).map_err(fail)?;
            let ip = index_pair(&s.sample).map_err(fail)?;
            worst = worst
                .max((ip.alpha - lambda).abs())
                .max((ip.beta - lambda).abs());
        }
    }
    check(worst <= 1e-3, format!("max index error {worst:.2e}"))
}

fn spiralities() -> Outcome {
    let lattice = Lattice::default();
    let tol = Tolerances::default();
    let c = spirality(&Curve::unit_circle(), 0.0, lattice, tol.slope).map_err(fail)?;
    let circle_err = c.delta_minus.abs().max(c.delta_plus.abs());
    let mut spiral_err: f64 = 0.0;
    for delta in [0.5, 1.0, 2.0] {
        let g = Curve::log_spiral(delta).map_err(fail)?;
        let t = g.attachment().ok_or("spiral without attachment point")?;
        let s = spirality(&g, t, lattice, tol.slope).map_err(fail)?;
        spiral_err = spiral_err
            .max((s.delta_minus - delta).abs())
            .max((s.delta_plus - delta).abs());
    }
    check(
        circle_err <= 1e-6 && spiral_err <= 2e-2,
        format!("circle {circle_err:.2e}, spirals {spiral_err:.2e}"),
    )
}

fn khvedelidze_table() -> Outcome {
    let tol = Tolerances::default();
    let circle = Curve::unit_circle();
    let mut wrong = Vec::new();
    let mut counts = [0usize; 3];
    for p in [1.5, 2.0, 3.0, 4.0] {
        let base = SpaceSpec::new(
            circle.clone(),
            ExponentField::constant(p).map_err(fail)?,
            Weight::unit(),
        )
        .map_err(fail)?;
        for k in -19..=19 {
            let lambda = 0.05 * k as f64;
            let v = 1.0 / p + lambda;
            let expected = if v > tol.margin && v < 1.0 - tol.margin {
                Verdict::Yes
            } else if v < -tol.margin || v > 1.0 + tol.margin {
                Verdict::No
            } else {
                Verdict::Borderline
            };
            let got = decide_s_bounded(
                &base.with_weight(Weight::power(0.0, lambda)).map_err(fail)?,
                &tol,
            )
            .map_err(fail)?
            .verdict;
            counts[expected as usize] += 1;
            if got != expected {
                wrong.push(format!("p={p} λ={lambda:.2}: {got} (want {expected})"));
            }
        }
    }
    check(
        wrong.is_empty(),
        format!(
            "{} misclassified of 156 (yes {}, no {}, borderline {}){}",
            wrong.len(),
            counts[0],
            counts[1],
            counts[2],
            if wrong.is_empty() {
                String::new()
            } else {
                format!(": {}", wrong.join("; "))
            }
        ),
    )
}

fn lemma_suite() -> Outcome {
    let config = Config {
        failure_persistence: None,
        ..Config::default()
    };
    let mut runner =
        TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha));
    let strategy = (0..3usize, lemmas::psi(), lemmas::psi());
    let mut failures = Vec::new();
    const PAIRS: usize = 50;
    for _ in 0..PAIRS {
        let (scene, p1, p2) = strategy.new_tree(&mut runner).map_err(fail)?.current();
        let s = &lemmas::SCENES[scene];
        let f = lemmas::run_case(s, &p1, &p2);
        if !f.is_empty() {
            failures.push(format!("{} {:?} {:?}: {}", s.name, p1, p2, f.join("; ")));
        }
    }
    check(
        failures.is_empty(),
        format!(
            "{}/{PAIRS} pairs pass{}",
            PAIRS - failures.len(),
            failures
                .first()
                .map_or(String::new(), |f| format!("; first failure {f}"))
        ),
    )
}

fn gohberg_krupnik() -> Outcome {
    let r = random_jump_check(2024, 100, &[2.0, 3.0], &Tolerances::default()).map_err(fail)?;
    check(
        r.agreements == r.checks.len(),
        format!("{}/{} random jumps agree", r.agreements, r.checks.len()),
    )
}

fn finite_sections(start: Instant) -> Outcome {
    let r = agreement_suite(&Tolerances::default()).map_err(fail)?;
    let secs = start.elapsed().as_secs_f64();
    check(
        r.agreements == r.compared && r.compared > 0 && secs < 300.0,
        format!(
            "{}/{} non-Borderline agreements in {secs:.1} s",
            r.agreements, r.compared
        ),
    )
}

fn leaf_geometry() -> Outcome {
    let origin = Complex64::new(0.0, 0.0);
    let half_turn = leaf(
        Complex64::new(1.0, 0.0),
        Complex64::new(-1.0, 0.0),
        2.0,
        &IndicatorProfile::constant(0.0, 0.0),
    )
    .map_err(fail)?;
    let zero_in = half_turn.contains(origin, 1e-9);

    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut value =
        || Complex64::from_polar(2f64.powf(rng.gen_range(-1.0..1.0)), rng.gen_range(-PI..PI));
    let mut ends_ok = 0;
    const LEAVES: usize = 100;
    for k in 0..LEAVES {
        let (z1, z2) = (value(), value());
        let lo = -0.3 + 0.006 * k as f64;
        let lf = leaf(
            z1,
            z2,
            1.5 + 0.03 * k as f64,
            &IndicatorProfile::constant(lo, lo + 0.1),
        )
        .map_err(fail)?;
        ends_ok += usize::from(lf.contains(z1, 0.0) && lf.contains(z2, 0.0));
    }

    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("scenes");
    let mut scenes: Vec<_> = std::fs::read_dir(&dir)
        .map_err(fail)?
        .filter_map(|e| e.ok())
        .map(|e| e.path())
        .collect();
    scenes.sort();
    let out = std::env::temp_dir().join(format!("nakano-acceptance-{}", std::process::id()));
    let mut bad_shapes = Vec::new();
    for path in &scenes {
        let cli = Cli::try_parse_from([
            "nakano",
            "--config",
            path.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
            "profile",
        ])
        .map_err(fail)?;
        let report = execute(&cli).map_err(fail)?.report;
        if !report.lines().any(|l| l == "shape: ok") {
            bad_shapes.push(path.file_name().unwrap().to_string_lossy().into_owned());
        }
    }
    let _ = std::fs::remove_dir_all(&out);
    check(
        zero_in && ends_ok == LEAVES && bad_shapes.is_empty(),
        format!(
            "0 in half-turn leaf: {zero_in}; endpoints members {ends_ok}/{LEAVES}; shape ok on {}/{} scenes{}",
            scenes.len() - bad_shapes.len(),
            scenes.len(),
            if bad_shapes.is_empty() { String::new() } else { format!(" (failing: {})", bad_shapes.join(", ")) }
        ),
    )
}

fn norm_axioms() -> Outcome {
    let c = Curve::unit_circle()
        .with_resolution(1 << 12)
        .map_err(fail)?;
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let (mut homog, mut ball, mut classical): (f64, f64, f64) = (0.0, 0.0, 0.0);
    let mut ball_ok = true;
    const TRIPLES: usize = 20;
    for k in 0..TRIPLES {
        let modes: Vec<(f64, f64)> = (0..rng.gen_range(1..=4))
            .map(|_| (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let f: Vec<f64> = c
            .sample_s()
            .iter()
            .map(|&s| {
                0.3 + modes
                    .iter()
                    .enumerate()
                    .map(|(m, (a, b))| a * (m as f64 * s).cos() + b * (m as f64 * s).sin())
                    .sum::<f64>()
            })
            .collect();
        let constant = k % 2 == 0;
        let (base, amp) = (rng.gen_range(1.3..3.5), rng.gen_range(0.0..0.3));
        let p = if constant {
            ExponentField::constant(base)
        } else {
            ExponentField::from_fn(&c, |s, _| base + amp * s.cos())
        }
        .map_err(fail)?;
        let w = if k % 3 == 0 {
            Weight::unit()
        } else {
            Weight::power(rng.gen_range(0.0..2.0 * PI), rng.gen_range(-0.2..0.5))
        };
        let w = w.bind(&c).map_err(fail)?;
        let n = nakano_norm(&c, &f, &p, &w).map_err(fail)?;
        let scale = [-3.7, 0.01, 250.0][k % 3];
        let cf: Vec<f64> = f.iter().map(|v| scale * v).collect();
        let nc = nakano_norm(&c, &cf, &p, &w).map_err(fail)?;
        homog = homog.max((nc / (scale.abs() * n) - 1.0).abs());
        let m = modular(&c, &f, &p, &w, n).map_err(fail)?;
        ball = ball.max((m - 1.0).abs());
        ball_ok &= (1.0 - 1e-6..=1.0 + 1e-9).contains(&m);
        if constant {
            let sum: f64 = c
                .sample_s()
                .iter()
                .zip(&f)
                .map(|(&s, &v)| (v.abs() * w.value(s)).powf(base))
                .filter(|x| x.is_finite())
                .sum();
            let lp = (sum * c.spacing()).powf(1.0 / base);
            classical = classical.max((n / lp - 1.0).abs());
        }
    }
    check(
        homog <= 1e-9 && ball_ok && classical <= 1e-8,
        format!("{TRIPLES} triples: homogeneity {homog:.1e}, |modular − 1| {ball:.1e}, classical {classical:.1e}"),
    )
}

fn carleson_circle() -> Outcome {
    let r = Curve::unit_circle().carleson_constant(None);
    check(
        (r.value - PI).abs() <= 1e-3,
        format!("{:.9} (π ± 1e-3)", r.value),
    )
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("Fourier multiplier identity", |_| fourier_multiplier()),
        ("index recovery for power weights", |_| index_recovery()),
        ("spirality of circle and spirals", |_| spiralities()),
        ("boundedness table for power weights", |_| {
            khvedelidze_table()
        }),
        ("index-algebra lemmas on 50 pairs", |_| lemma_suite()),
        ("single jumps against the closed form", |_| {
            gohberg_krupnik()
        }),
        ("finite-section agreement suite", finite_sections),
        ("leaf geometry and profile shapes", |_| leaf_geometry()),
        ("norm axioms", |_| norm_axioms()),
        ("Carleson constant of the circle", |_| carleson_circle()),
    ];
    let limits: [Option<f64>; 10] = [
        Some(10.0),
        None,
        None,
        None,
        None,
        None,
        Some(300.0),
        None,
        None,
        None,
    ];
    let mut passed = 0;
    for (k, ((name, run), limit)) in criteria.iter().zip(limits).enumerate() {
        let start = Instant::now();
        let outcome = run(start);
        let secs = start.elapsed().as_secs_f64();
        let outcome = match (outcome, limit) {
            (Ok(d), Some(l)) if secs >= l => Err(format!("{d}; over the {l} s limit")),
            (o, _) => o,
        };
        let (tag, detail) = match &outcome {
            Ok(d) => ("PASS", d),
            Err(d) => ("FAIL", d),
        };
        passed += usize::from(outcome.is_ok());
        println!("[{tag}] {:>2}. {name}: {detail} ({secs:.1} s)", k + 1);
    }
    println!("{passed}/10 criteria pass");
    if passed < 10 {
        std::process::exit(1);
    }
}
