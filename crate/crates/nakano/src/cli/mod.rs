//! Batch front end: `nakano <command> --config scene.toml --out dir`.
//!
//! Every command writes `report.txt` (and echoes it to stdout), plus CSV
//! tables and SVG plots where they apply. Exit codes: 0 when a verdict was
//! computed (borderline included), 2 for input errors, 3 for numerical
//! failures.

pub mod config;
mod svg;

use std::ffi::OsString;
use std::fmt::Display;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fredholm::{
    decide_fredholm, decide_maximal_bounded, decide_s_bounded, indicator_profile, leaf,
    BoundednessReport, IndicatorProfile, Leaf, SpaceSpec, Tolerances, Witness,
};
use crate::indices::{index_pair, spirality, v0};
use crate::lab::{agreement_suite, random_jump_check, TREND_SHIFTS};

pub use config::SceneConfig;
use svg::Plot;

#[derive(Debug, Parser)]
#[command(
    name = "nakano",
    version,
    about = "Boundedness of S and Fredholmness of aP + bQ on weighted variable-exponent spaces"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Scene file (TOML, `schema = 1`).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    pub out: PathBuf,
    /// Decision margin, overriding the scene's.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Decades of the radius lattice, overriding the scene's.
    #[arg(long, global = true)]
    pub grid_decades: Option<usize>,
    /// Seed for randomized checks (`validate`).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Carleson constant of the curve.
    Carleson,
    /// Indices of the weight factors at their singular points.
    Indices,
    /// Spirality indices at a point.
    Spirality,
    /// Sufficient condition for the maximal operator.
    BoundedM,
    /// Boundedness of the Cauchy singular integral.
    BoundedS,
    /// Indicator functions at a point.
    Profile,
    /// Leaf between two jump values.
    Leaf,
    /// Fredholmness of aP + bQ.
    Fredholm,
    /// Finite-section agreement suite, and with --seed random circle jumps.
    Validate,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Carleson => "carleson",
            Command::Indices => "indices",
            Command::Spirality => "spirality",
            Command::BoundedM => "bounded-m",
            Command::BoundedS => "bounded-s",
            Command::Profile => "profile",
            Command::Leaf => "leaf",
            Command::Fredholm => "fredholm",
            Command::Validate => "validate",
        }
    }
}

/// What a command produced.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Artifacts {
    pub report: String,
    pub files: Vec<PathBuf>,
}

#[derive(Default)]
struct Report(String);

impl Report {
    fn kv(&mut self, key: &str, value: impl Display) {
        self.0.push_str(&format!("{key}: {value}\n"));
    }

    fn section(&mut self, name: impl Display) {
        self.0.push_str(&format!("\n[{name}]\n"));
    }
}

/// Shortest round-trip text: positional in `[1e-4, 1e15)`, exponent form
/// otherwise; `−0` prints as `0`.
pub fn num(v: f64) -> String {
    let v = v + 0.0;
    let a = v.abs();
    if v == 0.0 || !v.is_finite() || (1e-4..1e15).contains(&a) {
        v.to_string()
    } else {
        format!("{v:e}")
    }
}

fn cnum(z: Complex64) -> String {
    let im = z.im + 0.0;
    format!(
        "{} {} {}i",
        num(z.re),
        if im.is_sign_negative() { '-' } else { '+' },
        num(im.abs())
    )
}

/// Comma-separated rows; floats in shortest round-trip form, complex values
/// as `re,im` pairs.
#[derive(Default)]
struct Csv(String);

enum Cell {
    F(f64),
    Z(Complex64),
    S(String),
}

impl Csv {
    fn new(header: &[&str]) -> Csv {
        Csv(header.join(",") + "\n")
    }

    fn row(&mut self, cells: &[Cell]) {
        let parts: Vec<String> = cells
            .iter()
            .map(|c| match c {
                Cell::F(v) => num(*v),
                Cell::Z(z) => format!("{},{}", num(z.re), num(z.im)),
                Cell::S(s) => s.clone(),
            })
            .collect();
        self.0.push_str(&parts.join(","));
        self.0.push('\n');
    }
}

struct Output {
    dir: PathBuf,
    files: Vec<PathBuf>,
}

impl Output {
    fn write(&mut self, name: &str, content: &str) -> Result<()> {
        std::fs::create_dir_all(&self.dir)
            .map_err(|e| Error::Io(format!("{}: {e}", self.dir.display())))?;
        let path = self.dir.join(name);
        std::fs::write(&path, content)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        self.files.push(path);
        Ok(())
    }
}

/// Parses arguments, runs the command and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(a) => {
            print!("{}", a.report);
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    if e.is_input_error() {
        2
    } else {
        3
    }
}

pub fn execute(cli: &Cli) -> Result<Artifacts> {
    let cfg = match &cli.config {
        Some(path) => Some(SceneConfig::load(path)?),
        None if cli.command == Command::Validate => None,
        None => {
            return Err(Error::Config {
                location: "--config".into(),
                message: "a scene file is required".into(),
            })
        }
    };
    let mut tol = match &cfg {
        Some(c) => c.tolerances()?,
        None => Tolerances::default(),
    };
    if let Some(m) = cli.tol {
        if !(m >= 0.0 && m.is_finite()) {
            return Err(Error::Config {
                location: "--tol".into(),
                message: format!("must be non-negative (got {m})"),
            });
        }
        tol.margin = m;
    }
    if let Some(d) = cli.grid_decades {
        tol.lattice = crate::indices::Lattice::new(d).map_err(|e| Error::Config {
            location: "--grid-decades".into(),
            message: e.to_string(),
        })?;
    }
    let mut out = Output {
        dir: cli.out.clone(),
        files: vec![],
    };
    let mut rep = Report::default();
    rep.kv("command", cli.command.name());
    let scene = |cfg: &Option<SceneConfig>| cfg.clone().expect("scene present for this command");
    match cli.command {
        Command::Validate => validate(cli.seed, &tol, &mut rep, &mut out)?,
        Command::Carleson => {
            let cfg = scene(&cfg);
            let curve = cfg.curve()?;
            let c = curve.carleson_constant(None);
            rep.kv("carleson_constant", num(c.value));
            rep.kv("attained_at_s", num(c.t));
            rep.kv("attained_at_radius", num(c.radius));
        }
        cmd => {
            let cfg = scene(&cfg);
            let curve = cfg.curve()?;
            let space = SpaceSpec::new(curve.clone(), cfg.exponent(&curve)?, cfg.weight(&curve)?)?;
            rep.kv("curve_length", num(curve.length()));
            rep.kv("closed", curve.is_closed());
            rep.kv("dini_certified", space.dini().certified);
            match cmd {
                Command::Indices => indices(&cfg, &space, &tol, &mut rep, &mut out)?,
                Command::Spirality => {
                    for t in points(&cfg, &space)? {
                        let s = spirality(&curve, t, tol.lattice, tol.slope)?;
                        rep.section(format!("point s = {t}"));
                        rep.kv("delta_minus", num(s.delta_minus));
                        rep.kv("delta_plus", num(s.delta_plus));
                        rep.kv("ci", num(s.pair.alpha_ci.max(s.pair.beta_ci)));
                        rep.kv(
                            "scaling_law",
                            if s.scaling_ok { "holds" } else { "violated" },
                        );
                    }
                }
                Command::BoundedM => {
                    boundedness(&decide_maximal_bounded(&space, &tol)?, &mut rep, &mut out)?
                }
                Command::BoundedS => {
                    boundedness(&decide_s_bounded(&space, &tol)?, &mut rep, &mut out)?
                }
                Command::Profile => {
                    let mut csv = Csv::new(&["s", "x", "alpha", "beta", "alpha_ci", "beta_ci"]);
                    for t in points(&cfg, &space)? {
                        let pr = profile_at(&cfg, &space, t, &tol)?;
                        rep.section(format!("point s = {t}"));
                        rep.kv("delta_minus", num(pr.delta_minus));
                        rep.kv("delta_plus", num(pr.delta_plus));
                        rep.kv(
                            "shape",
                            match pr.check_shape(&tol) {
                                Ok(()) => "ok".to_string(),
                                Err(e) => format!("failed ({e})"),
                            },
                        );
                        for i in 0..pr.x.len() {
                            csv.row(&[
                                Cell::F(t),
                                Cell::F(pr.x[i]),
                                Cell::F(pr.alpha[i]),
                                Cell::F(pr.beta[i]),
                                Cell::F(pr.alpha_ci[i]),
                                Cell::F(pr.beta_ci[i]),
                            ]);
                        }
                    }
                    out.write("profile.csv", &csv.0)?;
                }
                Command::Leaf => leaf_command(&cfg, &space, &tol, &mut rep, &mut out)?,
                Command::Fredholm => fredholm(&cfg, &space, &tol, &mut rep, &mut out)?,
                Command::Carleson | Command::Validate => unreachable!(),
            }
        }
    }
    out.write("report.txt", &rep.0)?;
    Ok(Artifacts {
        report: rep.0,
        files: out.files,
    })
}

/// Points where local quantities are evaluated: `point`, else the weight's
/// singular points, else the curve's special points, else `s = 0`.
fn points(cfg: &SceneConfig, space: &SpaceSpec) -> Result<Vec<f64>> {
    if let Some(p) = cfg.point(space.curve())? {
        return Ok(vec![p]);
    }
    let sing = space.weight().singular_points(space.curve());
    if !sing.is_empty() {
        return Ok(sing);
    }
    let special = space.curve().special_points();
    if !special.is_empty() {
        return Ok(special.to_vec());
    }
    Ok(vec![0.0])
}

fn profile_at(
    cfg: &SceneConfig,
    space: &SpaceSpec,
    t: f64,
    tol: &Tolerances,
) -> Result<IndicatorProfile> {
    match &cfg.grids.x {
        Some(x) => indicator_profile(space, t, x, tol),
        None => space.profile(t, tol),
    }
}

fn indices(
    cfg: &SceneConfig,
    space: &SpaceSpec,
    tol: &Tolerances,
    rep: &mut Report,
    out: &mut Output,
) -> Result<()> {
    let curve = space.curve();
    let mut csv = Csv::new(&["s", "function", "alpha", "beta", "alpha_ci", "beta_ci"]);
    for t in points(cfg, space)? {
        let psi = space.weight().local(curve, t);
        let w0 = index_pair(&crate::indices::w0(curve, t, &psi, tol.lattice)?.sample)?;
        let v0 = index_pair(&v0(curve, t, space.weight(), tol.lattice)?.sample)?;
        rep.section(format!("point s = {t}"));
        for (name, ip) in [("W0_psi", w0), ("V0_w", v0)] {
            rep.kv(&format!("{name}_alpha"), num(ip.alpha));
            rep.kv(&format!("{name}_beta"), num(ip.beta));
            rep.kv(&format!("{name}_ci"), num(ip.alpha_ci.max(ip.beta_ci)));
            csv.row(&[
                Cell::F(t),
                Cell::S(name.into()),
                Cell::F(ip.alpha),
                Cell::F(ip.beta),
                Cell::F(ip.alpha_ci),
                Cell::F(ip.beta_ci),
            ]);
        }
    }
    out.write("indices.csv", &csv.0)
}

fn boundedness(r: &BoundednessReport, rep: &mut Report, out: &mut Output) -> Result<()> {
    rep.kv("verdict", r.verdict);
    rep.kv("reason", &r.reason);
    rep.kv("carleson_constant", num(r.carleson));
    rep.kv("jordan", r.jordan);
    let mut csv = Csv::new(&[
        "s", "p", "alpha", "beta", "alpha_ci", "beta_ci", "lower", "upper", "status",
    ]);
    for m in &r.points {
        rep.section(format!("point s = {}", num(m.t)));
        rep.kv("p", num(m.p));
        rep.kv("lower (1/p + alpha, needs > 0)", num(m.lower));
        rep.kv("upper (1/p + beta, needs < 1)", num(m.upper));
        rep.kv("status", m.status);
        csv.row(&[
            Cell::F(m.t),
            Cell::F(m.p),
            Cell::F(m.alpha),
            Cell::F(m.beta),
            Cell::F(m.alpha_ci),
            Cell::F(m.beta_ci),
            Cell::F(m.lower),
            Cell::F(m.upper),
            Cell::S(m.status.to_string()),
        ]);
    }
    out.write("margins.csv", &csv.0)
}

fn leaf_rows(csv: &mut Csv, jump: usize, lf: &Leaf) {
    for i in 0..lf.x.len() {
        csv.row(&[
            Cell::F(jump as f64),
            Cell::F(lf.x[i]),
            Cell::Z(lf.lower[i]),
            Cell::Z(lf.upper[i]),
        ]);
    }
}

const LEAF_HEADER: [&str; 6] = ["jump", "x", "lower_re", "lower_im", "upper_re", "upper_im"];

fn plot_leaf(plot: &mut Plot, lf: &Leaf, tag: &str) {
    plot.line(lf.lower.clone(), "#1f77b4");
    plot.line(lf.upper.clone(), "#d62728");
    plot.marker(lf.z1, format!("z1{tag}"), "#2ca02c");
    plot.marker(lf.z2, format!("z2{tag}"), "#9467bd");
}

fn leaf_command(
    cfg: &SceneConfig,
    space: &SpaceSpec,
    tol: &Tolerances,
    rep: &mut Report,
    out: &mut Output,
) -> Result<()> {
    let spec = cfg.leaf.as_ref().ok_or_else(|| Error::Config {
        location: "leaf".into(),
        message: "missing [leaf] table".into(),
    })?;
    let profile = match spec.profile {
        Some([a, b]) => IndicatorProfile::constant(a, b),
        None => profile_at(cfg, space, points(cfg, space)?[0], tol)?,
    };
    let (z1, z2) = (
        Complex64::new(spec.z1[0], spec.z1[1]),
        Complex64::new(spec.z2[0], spec.z2[1]),
    );
    let lf = leaf(z1, z2, spec.p, &profile)?;
    let origin = Complex64::new(0.0, 0.0);
    rep.kv("z1", cnum(z1));
    rep.kv("z2", cnum(z2));
    rep.kv("p", num(spec.p));
    rep.kv("origin_gap", num(lf.index_gap(origin)));
    rep.kv("origin_distance", num(lf.distance(origin)));
    rep.kv("contains_origin", lf.contains(origin, tol.margin));
    let mut csv = Csv::new(&LEAF_HEADER);
    leaf_rows(&mut csv, 0, &lf);
    out.write("leaf.csv", &csv.0)?;
    let mut plot = Plot::new(format!("leaf, p = {}", spec.p));
    plot_leaf(&mut plot, &lf, "");
    out.write("leaf.svg", &plot.render())
}

fn fredholm(
    cfg: &SceneConfig,
    space: &SpaceSpec,
    tol: &Tolerances,
    rep: &mut Report,
    out: &mut Output,
) -> Result<()> {
    let (a, b) = cfg.symbols(space.curve())?;
    let r = decide_fredholm(&a, &b, space, tol)?;
    rep.kv("verdict", r.verdict);
    rep.kv("inf_abs_b", num(r.inf_b));
    rep.kv("s_bounded", r.boundedness.verdict);
    match &r.witness {
        Some(Witness::BVanishes { s, value }) => rep.kv(
            "witness",
            format!("b = {} at s = {}", cnum(*value), num(*s)),
        ),
        Some(Witness::RangeMeetsZero { s, value }) => rep.kv(
            "witness",
            format!("a/b = {} at s = {}", cnum(*value), num(*s)),
        ),
        Some(Witness::LeafContainsZero { s, gap }) => rep.kv(
            "witness",
            format!(
                "leaf of the jump at s = {} contains 0 (gap {})",
                num(*s),
                num(*gap)
            ),
        ),
        None => rep.kv("witness", "none"),
    }
    let c = a.quotient(&b)?;
    let mut leaves = Csv::new(&LEAF_HEADER);
    let mut jumps = Csv::new(&[
        "jump",
        "s",
        "z1_re",
        "z1_im",
        "z2_re",
        "z2_im",
        "gamma_re",
        "gamma_im",
        "gap",
        "origin_distance",
        "criterion_distance",
        "verdict",
    ]);
    let mut plot = Plot::new(format!("a/b and leaves: {}", r.verdict));
    let range: Vec<Complex64> = c.range_samples(2048).into_iter().map(|(_, z)| z).collect();
    let mut range_csv = Csv::new(&["s", "re", "im"]);
    for (s, z) in c.range_samples(2048) {
        range_csv.row(&[Cell::F(s), Cell::Z(z)]);
    }
    plot.dots(range, "#7f7f7f");
    for (i, j) in r.jumps.iter().enumerate() {
        rep.section(format!("jump {i} at s = {}", num(j.s)));
        rep.kv("z1", cnum(j.z1));
        rep.kv("z2", cnum(j.z2));
        rep.kv("p", num(j.p));
        rep.kv("gamma", cnum(j.gamma));
        rep.kv(
            "indicators_at_x_hat",
            format!(
                "({}, {}) at x = {}",
                num(j.alpha_star),
                num(j.beta_star),
                num(j.x_hat)
            ),
        );
        rep.kv("origin_gap", num(j.gap));
        rep.kv("origin_distance", num(j.origin_distance));
        rep.kv("criterion_distance_to_integers", num(j.criterion_distance));
        rep.kv("k", j.k.map_or("none".to_string(), |k| k.to_string()));
        rep.kv(
            "local_factor_bounded",
            j.local_bounded.map_or("n/a".to_string(), |v| v.to_string()),
        );
        rep.kv("verdict", j.verdict);
        jumps.row(&[
            Cell::F(i as f64),
            Cell::F(j.s),
            Cell::Z(j.z1),
            Cell::Z(j.z2),
            Cell::Z(j.gamma),
            Cell::F(j.gap),
            Cell::F(j.origin_distance),
            Cell::F(j.criterion_distance),
            Cell::S(j.verdict.to_string()),
        ]);
        let profile = profile_at(cfg, space, j.s, tol)?;
        let lf = leaf(j.z1, j.z2, j.p, &profile)?;
        leaf_rows(&mut leaves, i, &lf);
        plot_leaf(&mut plot, &lf, &format!(" ({i})"));
    }
    out.write("leaf.csv", &leaves.0)?;
    out.write("jumps.csv", &jumps.0)?;
    out.write("range.csv", &range_csv.0)?;
    out.write("fredholm.svg", &plot.render())
}

fn validate(seed: Option<u64>, tol: &Tolerances, rep: &mut Report, out: &mut Output) -> Result<()> {
    let suite = agreement_suite(tol)?;
    let mut csv = Csv::new(&[
        "case",
        "z2_re",
        "z2_im",
        "p",
        "lambda",
        "verdict",
        "trend",
        "shift",
        "n",
        "sigma_min",
    ]);
    rep.section("finite-section agreement suite");
    for (i, o) in suite.outcomes.iter().enumerate() {
        rep.kv(
            &format!("case {i}"),
            format!(
                "z2 = {}, p = {}, lambda = {}: {} / {} ({})",
                cnum(o.case.z2),
                o.case.p,
                o.case.lambda,
                o.verdict,
                o.trend.class,
                match o.agree {
                    Some(true) => "agree",
                    Some(false) => "DISAGREE",
                    None => "not compared",
                }
            ),
        );
        for (k, sh) in o.trend.shifts.iter().enumerate() {
            for (n, s) in o.trend.ns.iter().zip(&sh.sigma) {
                csv.row(&[
                    Cell::F(i as f64),
                    Cell::Z(o.case.z2),
                    Cell::F(o.case.p),
                    Cell::F(o.case.lambda),
                    Cell::S(o.verdict.to_string()),
                    Cell::S(o.trend.class.to_string()),
                    Cell::F(TREND_SHIFTS[k] as f64),
                    Cell::F(*n as f64),
                    Cell::F(*s),
                ]);
            }
        }
    }
    rep.0.push_str(&format!(
        "{}/{} non-Borderline agreements\n",
        suite.agreements, suite.compared
    ));
    out.write("sigma_trends.csv", &csv.0)?;
    if let Some(seed) = seed {
        let gk = random_jump_check(seed, 100, &[2.0, 3.0], tol)?;
        rep.section(format!("random circle jumps (seed {seed})"));
        let mut csv = Csv::new(&[
            "s",
            "left_re",
            "left_im",
            "right_re",
            "right_im",
            "p",
            "expression",
            "expected",
            "verdict",
        ]);
        for c in &gk.checks {
            csv.row(&[
                Cell::F(c.s),
                Cell::Z(c.left),
                Cell::Z(c.right),
                Cell::F(c.p),
                Cell::F(c.expression),
                Cell::S(c.expected.to_string()),
                Cell::S(c.verdict.to_string()),
            ]);
        }
        rep.0.push_str(&format!(
            "{}/{} random jumps agree with the closed form\n",
            gk.agreements,
            gk.checks.len()
        ));
        out.write("random_jumps.csv", &csv.0)?;
    }
    Ok(())
}
