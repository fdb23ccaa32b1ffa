//! `fixset` command-line front end.
//!
//! Exit statuses: 0 ok, 1 a check failed, 2 usage or parse error,
//! 3 unknown name, 4 dimension mismatch.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use fixset::operators::{dr_iterate, fixed_subspace, OperatorChain};
use fixset::plane;
use fixset::plot::{render_svg, FigureSpec, PlotError};
use fixset::scene::{Scene, SceneError};
use fixset::verify::{check_tolerance, run_suite, Check, CheckReport, RandomSpec};
use fixset::{Error, Subspace, Tolerance};

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_UNKNOWN: u8 = 3;
const EXIT_DIMENSION: u8 = 4;

#[derive(Parser, Debug)]
#[command(
    name = "fixset",
    version,
    about = "Fixed-point sets of compositions of subspace reflectors"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Absolute tolerance for subspace equality and check residuals
    #[arg(long, global = true, value_name = "X")]
    tol: Option<f64>,
    /// Relative singular-value cutoff for rank decisions
    #[arg(long, global = true, value_name = "X")]
    rank_rel: Option<f64>,
    /// Seed for random instances
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write CSV or SVG output to this file instead of stdout
    #[arg(long, short, global = true, value_name = "PATH")]
    output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Fixed-point subspace of a composition in a scene
    Fix { scene: PathBuf, composition: String },
    /// Run checks on a scene composition or on random instances
    Verify(VerifyArgs),
    /// Douglas-Rachford iteration between two subspaces of a scene
    Dr(DrArgs),
    /// SVG panels of planar fixed sets
    Plot(PlotArgs),
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Checks to run (default: all)
    checks: Vec<String>,
    #[arg(long, conflicts_with = "random")]
    scene: Option<PathBuf>,
    /// Composition(s) of the scene to check (default: all)
    #[arg(long, requires = "scene", value_delimiter = ',')]
    composition: Vec<String>,
    /// Random instance spec, e.g. "n=6 dims=2,3"
    #[arg(long, value_name = "SPEC")]
    random: Option<String>,
    #[arg(long, default_value_t = 20)]
    trials: usize,
}

#[derive(Args, Debug)]
struct DrArgs {
    scene: PathBuf,
    u1: String,
    u2: String,
    /// Starting point, comma separated
    #[arg(
        long,
        value_delimiter = ',',
        allow_hyphen_values = true,
        required = true
    )]
    x0: Vec<f64>,
    #[arg(long, default_value_t = 1e-10)]
    eps: f64,
    #[arg(long, default_value_t = 10_000)]
    max_iter: usize,
}

#[derive(Args, Debug)]
struct PlotArgs {
    scene: PathBuf,
    /// Compositions to draw (default: the scene's figure table, else all)
    #[arg(long, value_delimiter = ',')]
    compositions: Vec<String>,
    #[arg(long)]
    width: Option<u32>,
    #[arg(long)]
    height: Option<u32>,
    /// Half-width of the viewport
    #[arg(long)]
    range: Option<f64>,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::DimensionMismatch { .. } => EXIT_DIMENSION,
            Error::UnknownCheck(_) => EXIT_UNKNOWN,
            _ => EXIT_USAGE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<SceneError> for Failure {
    fn from(e: SceneError) -> Self {
        let code = match e {
            SceneError::UnknownSubspace { .. }
            | SceneError::UnknownComposition(_)
            | SceneError::UnknownName(_) => EXIT_UNKNOWN,
            SceneError::Dimension { .. } => EXIT_DIMENSION,
            SceneError::Parse { .. } | SceneError::Invalid(_) | SceneError::Io { .. } => EXIT_USAGE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<PlotError> for Failure {
    fn from(e: PlotError) -> Self {
        match e {
            PlotError::Scene(e) => e.into(),
            PlotError::Numeric(e) => e.into(),
            PlotError::NotPlanar(_) => Failure {
                code: EXIT_DIMENSION,
                message: e.to_string(),
            },
            _ => Failure::usage(e.to_string()),
        }
    }
}

fn tolerance(g: &Global, default_eq: f64) -> Result<Tolerance, Failure> {
    let rank_rel = g.rank_rel.unwrap_or(Tolerance::default().rank_rel);
    Ok(Tolerance::new(rank_rel, g.tol.unwrap_or(default_eq))?)
}

/// Writes machine-readable output to `--output` or stdout.
fn emit(output: &Option<PathBuf>, body: &str) -> Result<(), Failure> {
    match output {
        Some(path) => fs::write(path, body)
            .map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display()))),
        None => io::stdout()
            .write_all(body.as_bytes())
            .map_err(|e| Failure::usage(format!("cannot write stdout: {e}"))),
    }
}

/// Fixed-point notation with 12 significant digits.
fn sig12(x: f64) -> String {
    let x = x + 0.0;
    if x == 0.0 {
        return "0.00000000000".to_string();
    }
    let mag = x.abs().log10().floor() as i32;
    let decimals = (11 - mag).max(0) as usize;
    let s = format!("{x:.decimals$}");
    if s.trim_start_matches('-')
        .chars()
        .all(|c| c == '0' || c == '.')
    {
        format!("{:.decimals$}", 0.0)
    } else {
        s
    }
}

/// Sign-normalized basis rows: planar lines follow the axis angle in
/// `[0, π)`, otherwise the first entry of magnitude above 1e-9 is positive.
fn basis_rows(fix: &Subspace) -> Vec<Vec<f64>> {
    if fix.ambient() == 2 && fix.dim() == 1 {
        if let Ok(a) = plane::axis_angle(fix) {
            return vec![vec![a.cos(), a.sin()]];
        }
    }
    fix.basis()
        .column_iter()
        .map(|c| {
            let flip = c.iter().find(|v| v.abs() > 1e-9).is_some_and(|&v| v < 0.0);
            c.iter().map(|&v| if flip { -v } else { v }).collect()
        })
        .collect()
}

fn load(path: &Path, tol: &Tolerance) -> Result<Scene, Failure> {
    Ok(Scene::load(path, tol)?)
}

fn cmd_fix(g: &Global, scene: &Path, composition: &str) -> Result<u8, Failure> {
    let tol = tolerance(g, Tolerance::default().eq_abs)?;
    let scene = load(scene, &tol)?;
    let chain = scene.chain(composition)?;
    let t = OperatorChain::reflectors(&chain)?.compose();
    let report = fixed_subspace(&t, &tol)?;
    let rows = basis_rows(&report.subspace);

    let mut out = String::new();
    let _ = writeln!(
        out,
        "composition: {composition} = {}",
        scene.notation(composition)?
    );
    let _ = writeln!(out, "ambient: {}", scene.ambient());
    let _ = writeln!(out, "dim: {}", report.dim());
    let _ = writeln!(out, "basis:");
    if rows.is_empty() {
        let _ = writeln!(out, "  (none)");
    }
    for r in &rows {
        let cells: Vec<String> = r.iter().map(|&v| sig12(v)).collect();
        let _ = writeln!(out, "  {}", cells.join(", "));
    }
    let _ = writeln!(
        out,
        "operator norm: {} ({})",
        sig12(report.operator_norm),
        if report.is_nonexpansive(1e-9) {
            "nonexpansive"
        } else {
            "expansive"
        }
    );
    let _ = writeln!(out, "worst residual: {:.3e}", report.worst_residual());
    print!("{out}");

    if let Some(path) = &g.output {
        let n = scene.ambient();
        let mut csv = (1..=n)
            .map(|i| format!("x{i}"))
            .collect::<Vec<_>>()
            .join(",");
        csv.push('\n');
        for r in &rows {
            csv.push_str(&r.iter().map(|&v| sig12(v)).collect::<Vec<_>>().join(","));
            csv.push('\n');
        }
        emit(&Some(path.clone()), &csv)?;
    }
    Ok(0)
}

fn parse_checks(names: &[String]) -> Result<Vec<Check>, Failure> {
    if names.is_empty() {
        return Ok(Check::ALL.to_vec());
    }
    names
        .iter()
        .map(|n| n.parse::<Check>().map_err(Failure::from))
        .collect()
}

fn print_table(reports: &[CheckReport]) {
    let w_name = reports
        .iter()
        .map(|r| r.check_name.len())
        .chain([5])
        .max()
        .unwrap_or(5);
    let w_inst = reports
        .iter()
        .map(|r| r.instance.len())
        .chain([8])
        .max()
        .unwrap_or(8);
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<w_name$}  {:<w_inst$}  {:>10}  RESULT",
        "CHECK", "INSTANCE", "RESIDUAL"
    );
    for r in reports {
        let _ = writeln!(
            out,
            "{:<w_name$}  {:<w_inst$}  {:>10.3e}  {}",
            r.check_name,
            r.instance,
            r.worst_residual,
            if r.passed { "PASS" } else { "FAIL" }
        );
    }
    let passed = reports.iter().filter(|r| r.passed).count();
    let _ = writeln!(out, "{passed}/{} passed", reports.len());
    print!("{out}");
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn cmd_verify(g: &Global, a: &VerifyArgs) -> Result<u8, Failure> {
    let checks = parse_checks(&a.checks)?;
    let reports = match (&a.scene, &a.random) {
        (Some(path), None) => {
            let scene = load(path, &tolerance(g, Tolerance::default().eq_abs)?)?;
            let tol = tolerance(g, check_tolerance(scene.ambient()))?;
            let comps: Vec<String> = if a.composition.is_empty() {
                scene.composition_names().map(str::to_string).collect()
            } else {
                a.composition.clone()
            };
            if comps.is_empty() {
                return Err(Failure::usage("scene has no compositions to check"));
            }
            let mut reports = Vec::new();
            for c in &comps {
                let chain = scene.chain(c)?;
                for &check in &checks {
                    let mut r = check.run_on(&chain, &tol).map_err(|e| {
                        let f = Failure::from(e);
                        Failure {
                            code: f.code,
                            message: format!("{check} on composition `{c}`: {}", f.message),
                        }
                    })?;
                    r.instance = format!("{c} {}", r.instance);
                    reports.push(r);
                }
            }
            reports
        }
        (None, Some(text)) => {
            let spec = RandomSpec::parse(text, g.seed, a.trials)?;
            let tol = tolerance(g, check_tolerance(spec.ambient))?;
            run_suite(&spec, &checks, &tol)?
        }
        _ => {
            return Err(Failure::usage(
                "verify needs exactly one of --scene or --random",
            ))
        }
    };
    print_table(&reports);
    if let Some(path) = &g.output {
        let mut csv = String::from("check,instance,residual,tolerance,result\n");
        for r in &reports {
            let _ = writeln!(
                csv,
                "{},{},{:e},{:e},{}",
                r.check_name,
                csv_field(&r.instance),
                r.worst_residual,
                r.tolerance,
                if r.passed { "PASS" } else { "FAIL" }
            );
        }
        emit(&Some(path.clone()), &csv)?;
    }
    Ok(if reports.iter().all(|r| r.passed) {
        0
    } else {
        EXIT_FAIL
    })
}

fn cmd_dr(g: &Global, a: &DrArgs) -> Result<u8, Failure> {
    let tol = tolerance(g, Tolerance::default().eq_abs)?;
    let scene = load(&a.scene, &tol)?;
    let u1 = scene.subspace(&a.u1)?;
    let u2 = scene.subspace(&a.u2)?;
    let trace = dr_iterate(u1, u2, &a.x0, a.max_iter, a.eps, &tol)?;

    let mut csv = String::from("k,norm_x,shadow_error\n");
    for s in &trace.steps {
        let _ = writeln!(
            csv,
            "{},{:.12e},{:.12e}",
            s.k,
            s.iterate.norm(),
            s.shadow_error
        );
    }
    emit(&g.output, &csv)?;

    let fmt_opt = |r: Option<f64>| r.map_or("n/a".to_string(), |v| format!("{v:.6}"));
    eprintln!("iterations: {}", trace.iterations());
    eprintln!("converged: {}", trace.converged);
    eprintln!("final shadow error: {:.3e}", trace.final_error());
    eprintln!("predicted rate: {}", fmt_opt(trace.predicted_rate));
    eprintln!("observed rate: {}", fmt_opt(trace.observed_rate(5, 1e-12)));
    Ok(0)
}

fn cmd_plot(g: &Global, a: &PlotArgs) -> Result<u8, Failure> {
    let tol = tolerance(g, Tolerance::default().eq_abs)?;
    let scene = load(&a.scene, &tol)?;
    let mut spec = FigureSpec::from_scene(&scene);
    if !a.compositions.is_empty() {
        spec.compositions = a.compositions.clone();
    }
    if let Some(w) = a.width {
        spec.width = w;
    }
    if let Some(h) = a.height {
        spec.height = h;
    }
    if let Some(r) = a.range {
        spec.range = r;
    }
    let svg = render_svg(&scene, &spec, &tol)?;
    emit(&g.output, &svg)?;
    Ok(0)
}

fn run(cli: &Cli) -> Result<u8, Failure> {
    match &cli.command {
        Command::Fix { scene, composition } => cmd_fix(&cli.global, scene, composition),
        Command::Verify(a) => cmd_verify(&cli.global, a),
        Command::Dr(a) => cmd_dr(&cli.global, a),
        Command::Plot(a) => cmd_plot(&cli.global, a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
