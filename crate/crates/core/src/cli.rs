//! The `confspline` batch command line.
//!
//! Exit status is 0 on success, 1 when the numerical method fails (or a
//! self-check does not pass) and 2 for bad input. Output depends only on
//! the inputs.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use nalgebra::Vector3;

use crate::conformal::{
    induced_metric, kernel_dimension, quasi_conformal_error, CrossRatioOperator, DiscreteMetric,
};
use crate::dec::{DualForm1, PrimalForm0, SimplicialSurface};
use crate::diagnostics::{
    conservation_report, flux_class, generate_tube, leibniz_residual, tube_invariants, TubeSpec,
};
use crate::error::{Error, Result};
use crate::io::{self, read_obj, read_scene, read_sidecar, write_obj, LoadedScene, Report};
use crate::solver::{self, newton_solve, ConstraintSystem, QuadraticDifferential, Solution};
use crate::willmore::willmore_energy;
use crate::Point;

/// Largest mesh (in edges) on which `check` runs the dense kernel test.
pub const KERNEL_CHECK_MAX_EDGES: usize = 2000;

#[derive(Debug, Parser)]
#[command(name = "confspline", version, about = "Discrete constrained Willmore surfaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve a scene and write the resulting mesh and report.
    Solve(SolveArgs),
    /// Print the Willmore energy of a mesh.
    Energy { mesh: PathBuf },
    /// Run the conservation, Leibniz and kernel self-checks on a mesh.
    Check {
        mesh: PathBuf,
        /// Bound on every residual.
        #[arg(long, default_value_t = 1e-9)]
        tolerance: f64,
    },
    /// Per-face quasi-conformal error against a reference metric.
    QcError {
        mesh: PathBuf,
        /// Sidecar table of log lengths, or an OBJ with the same faces.
        #[arg(long)]
        reference: PathBuf,
    },
    /// Build a tube around a closed centerline and print its invariants.
    Tube(TubeArgs),
    /// Solve a scene and integrate the flux over dual cycles.
    FluxReport {
        scene: PathBuf,
        /// Cycle file (`around ...` or `halfedges ...` per line).
        #[arg(long)]
        cycles: PathBuf,
    },
}

#[derive(Debug, Args)]
struct SolveArgs {
    scene: PathBuf,
    /// Overrides the scene's `output-mesh`.
    #[arg(long)]
    output_mesh: Option<PathBuf>,
    /// Overrides the scene's `output-report`.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct TubeArgs {
    /// File with one `x y z a` sample per line (closed curve, no repeat).
    #[arg(long, conflicts_with = "circle", required_unless_present = "circle")]
    centerline: Option<PathBuf>,
    /// Use a circle of this radius in the xy-plane instead.
    #[arg(long)]
    circle: Option<f64>,
    /// Samples along the circle.
    #[arg(long, default_value_t = 64)]
    samples: usize,
    /// Constant thickness for the circle.
    #[arg(long, default_value_t = 0.25)]
    thickness: f64,
    /// Vertices per cross section.
    #[arg(long, default_value_t = 16)]
    circumferential: usize,
    #[arg(long)]
    output_mesh: Option<PathBuf>,
}

/// Runs the command line in-process. `args` includes the program name.
pub fn run_cli<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { stdout.write_all(text.as_bytes()) } else { stderr.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(cli.command) {
        Ok(outcome) => {
            let _ = stdout.write_all(outcome.report.to_text().as_bytes());
            if let Some(message) = &outcome.failure {
                let _ = writeln!(stderr, "error: {message}");
                1
            } else {
                0
            }
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(error: &Error) -> i32 {
    if error.is_numerical() {
        1
    } else {
        2
    }
}

/// A finished command: its report, and the reason it counts as a failure.
struct Outcome {
    report: Report,
    failure: Option<String>,
}

impl Outcome {
    fn ok(report: Report) -> Self {
        Self { report, failure: None }
    }
}

fn execute(command: Command) -> Result<Outcome> {
    match command {
        Command::Solve(args) => solve(&args),
        Command::Energy { mesh } => energy(&mesh).map(Outcome::ok),
        Command::Check { mesh, tolerance } => check(&mesh, tolerance),
        Command::QcError { mesh, reference } => qc_error(&mesh, &reference).map(Outcome::ok),
        Command::Tube(args) => tube(&args).map(Outcome::ok),
        Command::FluxReport { scene, cycles } => flux_report(&scene, &cycles),
    }
}

fn run_scene(scene: &LoadedScene) -> Result<Solution> {
    let system = ConstraintSystem::new(&scene.surface, &scene.constraints)?;
    newton_solve(&scene.surface, &scene.positions, system, &scene.config.options)
}

fn solution_report(report: &mut Report, scene: &LoadedScene, sol: &Solution) -> Result<()> {
    let (s, x) = (&scene.surface, &sol.state.positions);
    report.push("vertices", s.vertex_count());
    report.push("faces", s.face_count());
    report.push("termination", sol.termination.as_str());
    report.push("iterations", sol.state.iterations);
    report.push("stationarity", sol.state.stationarity_norm);
    report.push("feasibility", sol.state.feasibility_norm);
    report.push("willmore", willmore_energy(s, x)?.total);
    report.push("area", solver::area(s, x).value);
    if s.is_closed() {
        report.push("volume", solver::volume(s, x)?.value);
    }
    let nu = sol.point_fluxes();
    for (c, flux) in scene.constraints.points.iter().zip(&nu) {
        report.push(format!("flux.{}", c.vertex), *flux);
    }
    if !nu.is_empty() {
        let sum: Vector3<f64> = nu.iter().sum();
        report.push("flux.sum", sum.norm());
        report.push("flux.max", nu.iter().fold(0.0f64, |m, v| m.max(v.norm())));
    }
    if scene.constraints.conformal.is_some() {
        let q = sol.quadratic_differential();
        report.push("qd.max", q.0.iter().fold(0.0f64, |m, v| m.max(v.abs())));
    }
    for r in &sol.state.history {
        report.push(
            format!("history.{}", r.iteration),
            io::Value::Floats(vec![r.stationarity, r.feasibility, r.step, r.damping]),
        );
    }
    Ok(())
}

fn default_output(scene: &Path, suffix: &str) -> PathBuf {
    let stem = scene.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "scene".into());
    scene.with_file_name(format!("{stem}{suffix}"))
}

fn solve(args: &SolveArgs) -> Result<Outcome> {
    let scene = read_scene(&args.scene)?;
    let sol = run_scene(&scene)?;
    let mut report = Report::new("confspline solve");
    scene.config.echo(&mut report);
    solution_report(&mut report, &scene, &sol)?;

    let mesh_path = args
        .output_mesh
        .clone()
        .or_else(|| scene.config.output_mesh.as_deref().map(|p| scene.config.resolve(p)))
        .unwrap_or_else(|| default_output(&args.scene, "-solved.obj"));
    let report_path = args
        .report
        .clone()
        .or_else(|| scene.config.output_report.as_deref().map(|p| scene.config.resolve(p)))
        .unwrap_or_else(|| default_output(&args.scene, "-solved.report"));
    write_obj(&mesh_path, &scene.surface, &sol.state.positions)?;
    io::write_text(&report_path, &report.to_key_value())?;
    Ok(Outcome {
        report,
        failure: sol.error().map(|e| e.to_string()),
    })
}

fn energy(mesh: &Path) -> Result<Report> {
    let (s, f) = read_obj(mesh)?;
    let w = willmore_energy(&s, &f)?;
    let mut report = Report::new("confspline energy");
    report.push("vertices", s.vertex_count());
    report.push("total", w.total);
    report.push("degenerate-edges", w.degenerate_edges);
    let values = w.integrand.values();
    let interior: Vec<usize> = s.interior_vertices().collect();
    let pick = |better: fn(f64, f64) -> bool| {
        interior.iter().copied().fold(None, |best: Option<usize>, v| match best {
            Some(b) if !better(values[v], values[b]) => Some(b),
            _ => Some(v),
        })
    };
    if let (Some(lo), Some(hi)) = (pick(|a, b| a < b), pick(|a, b| a > b)) {
        report.push("min", values[lo]);
        report.push("min-vertex", lo);
        report.push("max", values[hi]);
        report.push("max-vertex", hi);
    }
    Ok(report)
}

/// Deterministic test values in `[−1, 1]`.
fn probe_values(n: usize, salt: f64) -> Vec<f64> {
    (0..n).map(|k| (0.618_033_988_749_895 * k as f64 + salt).sin()).collect()
}

fn check(mesh: &Path, tolerance: f64) -> Result<Outcome> {
    let (s, f) = read_obj(mesh)?;
    let mut report = Report::new("confspline check");
    let mut failed = Vec::new();
    let mut verdict = |report: &mut Report, name: &str, value: f64| {
        report.push(name, value);
        if !(value <= tolerance) {
            failed.push(name.to_string());
        }
    };
    report.push("tolerance", tolerance);

    let c = conservation_report(&s, &f)?;
    report.push("conservation.vertices", c.checked_vertices);
    report.push("conservation.gradient-norm", c.gradient_norm);
    verdict(&mut report, "conservation.tau", c.tau);
    verdict(&mut report, "conservation.sigma", c.sigma);
    verdict(&mut report, "conservation.rho", c.rho);
    verdict(&mut report, "conservation.zeta", c.zeta);

    let phi = PrimalForm0(probe_values(s.vertex_count(), 0.3));
    let alpha = DualForm1(probe_values(s.edge_count(), 1.7));
    verdict(&mut report, "leibniz", leibniz_residual(&s, &phi, &alpha)?);

    // Image of the transposed extended operator has vanishing vertex sums.
    let op = CrossRatioOperator::full(&s);
    let q = QuadraticDifferential(op.apply_transpose(&probe_values(op.matrix.nrows(), 2.9)));
    let sums = q.vertex_sums(&s);
    let interior = s.interior_vertices().fold(0.0f64, |m, v| m.max(sums[v].abs()));
    let boundary = q.boundary_sums(&s).iter().fold(0.0f64, |m, x| m.max(x.abs()));
    verdict(&mut report, "multiplier-sums", interior.max(boundary));

    let expected = s.interior_vertex_count() + s.boundary_component_count();
    report.push("kernel.expected", expected);
    if s.edge_count() <= KERNEL_CHECK_MAX_EDGES {
        let found = kernel_dimension(&s, 1e-9);
        report.push("kernel.dimension", found);
        if found != expected {
            failed.push("kernel.dimension".into());
        }
    } else {
        report.push("kernel.dimension", "skipped");
    }
    report.push("status", if failed.is_empty() { "pass" } else { "fail" });
    Ok(Outcome {
        report,
        failure: (!failed.is_empty()).then(|| format!("checks failed: {}", failed.join(", "))),
    })
}

fn read_reference(path: &Path, surface: &SimplicialSurface) -> Result<DiscreteMetric> {
    if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("obj")) {
        let (other, g) = read_obj(path)?;
        if other.faces() != surface.faces() {
            return Err(Error::Validation(format!("{}: faces differ from the mesh", path.display())));
        }
        induced_metric(surface, &g)
    } else {
        let metric = DiscreteMetric::new(read_sidecar(path, surface)?);
        metric.validate(surface)?;
        Ok(metric)
    }
}

fn qc_error(mesh: &Path, reference: &Path) -> Result<Report> {
    let (s, f) = read_obj(mesh)?;
    let qc = quasi_conformal_error(&s, &f, &read_reference(reference, &s)?)?;
    let mut report = Report::new("confspline qc-error");
    report.push("faces", s.face_count());
    report.push("min", qc.min);
    report.push("mean", qc.mean);
    report.push("median", qc.median);
    report.push("max", qc.max);
    let h = &qc.histogram;
    for (k, &count) in h.counts.iter().enumerate().filter(|(_, &c)| c > 0) {
        let lo = h.lo + k as f64 * h.bin_width();
        report.push(format!("bin.{k}"), format!("{} {}", io::format_float(lo), count));
    }
    Ok(report)
}

fn read_centerline(path: &Path) -> Result<(Vec<Point>, Vec<f64>)> {
    let text = io::read_text(path)?;
    let (mut points, mut thickness) = (Vec::new(), Vec::new());
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let values: Vec<f64> = line
            .split_whitespace()
            .map(|t| t.parse::<f64>().ok().filter(|x| x.is_finite()))
            .collect::<Option<_>>()
            .filter(|v: &Vec<f64>| v.len() == 4)
            .ok_or_else(|| Error::Parse {
                path: path.display().to_string(),
                line: i + 1,
                message: "expected `x y z a`".into(),
            })?;
        points.push(Vector3::new(values[0], values[1], values[2]));
        thickness.push(values[3]);
    }
    Ok((points, thickness))
}

fn tube(args: &TubeArgs) -> Result<Report> {
    let spec = match (&args.centerline, args.circle) {
        (Some(path), _) => {
            let (centerline, thickness) = read_centerline(path)?;
            TubeSpec {
                centerline,
                thickness,
                circumferential: args.circumferential,
            }
        }
        (None, Some(r)) => {
            if !(r > 0.0) {
                return Err(Error::Validation("circle radius must be positive".into()));
            }
            let a = args.thickness;
            TubeSpec::sample(
                |t| {
                    let phi = 2.0 * std::f64::consts::PI * t;
                    Vector3::new(r * phi.cos(), r * phi.sin(), 0.0)
                },
                |_| a,
                args.samples,
                args.circumferential,
            )
        }
        (None, None) => return Err(Error::Validation("give --centerline or --circle".into())),
    };
    let inv = tube_invariants(&spec)?;
    let tube = generate_tube(&spec)?;
    let mut report = Report::new("confspline tube");
    report.push("samples", spec.longitudinal());
    report.push("circumferential", spec.circumferential);
    report.push("length", inv.length);
    report.push("area", inv.area);
    report.push("volume", inv.volume);
    report.push("willmore", inv.willmore);
    report.push("re-tau", inv.re_tau);
    report.push("im-tau", inv.im_tau);
    report.push("monodromy", inv.monodromy);
    report.push("winding", inv.winding);
    let measured = solver::area_volume(&tube.surface, &tube.positions);
    report.push("mesh.area", measured.area.value);
    if let Some(v) = measured.volume {
        report.push("mesh.volume", v.value);
    }
    if let Some(path) = &args.output_mesh {
        write_obj(path, &tube.surface, &tube.positions)?;
    }
    Ok(report)
}

fn flux_report(scene_path: &Path, cycles: &Path) -> Result<Outcome> {
    let scene = read_scene(scene_path)?;
    let chains = io::read_cycles(cycles, &scene.surface)?;
    let sol = run_scene(&scene)?;
    let x = &sol.state.positions;
    let q = sol.system.edge_multiplier(&sol.state.multipliers);
    let paths: Vec<_> = chains.iter().map(|(_, c)| c.clone()).collect();
    let integrals = flux_class(&scene.surface, x, &q, &paths)?;
    let mut report = Report::new("confspline flux-report");
    report.push("termination", sol.termination.as_str());
    report.push("iterations", sol.state.iterations);
    report.push("stationarity", sol.state.stationarity_norm);
    for (c, flux) in scene.constraints.points.iter().zip(sol.point_fluxes()) {
        report.push(format!("flux.{}", c.vertex), flux);
    }
    for (k, ((label, _), integral)) in chains.iter().zip(&integrals).enumerate() {
        report.push(format!("cycle.{k}"), label.as_str());
        report.push(format!("cycle.{k}.integral"), *integral);
    }
    Ok(Outcome {
        report,
        failure: sol.error().map(|e| e.to_string()),
    })
}
