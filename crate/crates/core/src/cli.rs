//! The `zoll` command line.
//!
//! Exit codes: 0 success, 1 a tolerance check failed, 2 bad input, 3 I/O failure.

use std::f64::consts::TAU;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::Value;

use crate::circle::{carpet, uniform_grid};
use crate::gauss::{comb_weights, times_up_to, RationalTime};
use crate::operator::{
    functional_calculus_direct, functional_calculus_quadrature, make_operator, operator_norm, random_spectrum,
    revival_residual, RevivalRecord, SpectralFunction,
};
use crate::phase::Time;
use crate::report::{
    checks_to_json_lines, comb_table, encode_pgm, gauss_table, verify_gauss, verify_revival, verify_scan,
    verify_sphere, write_atomic, Check, Format, LogScale, RunManifest, Table,
};
use crate::singularity::{calibrate, center_grid, scan, Verdict, DEFAULT_RELATIVE_THRESHOLD, DEFAULT_WINDOW_WIDTH};
use crate::sphere::{huygens_concentration, zonal_delta, Generator};

pub const DEFAULT_SEED: u64 = 7;
pub const SEED_ENV: &str = "ZOLL_SEED";

pub const EXIT_OK: i32 = 0;
pub const EXIT_TOLERANCE: i32 = 1;
pub const EXIT_BAD_INPUT: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "zoll", version, about = "Revival experiments on circles, spheres and integer-spectrum operators")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Csv,
    Json,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        }
    }
}

#[derive(Debug, Args)]
pub struct Output {
    #[arg(long, value_enum, default_value = "csv")]
    pub format: FormatArg,
    /// Write the table here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Write the run manifest (JSON) here.
    #[arg(long)]
    pub manifest: Option<PathBuf>,
}

/// A time `2πn/m` or a real `t`.
#[derive(Debug, Args)]
pub struct TimeArg {
    #[arg(long, allow_hyphen_values = true, requires = "m", conflicts_with = "t")]
    pub n: Option<i64>,
    #[arg(long, requires = "n")]
    pub m: Option<i64>,
    /// Real time in radians.
    #[arg(long, allow_hyphen_values = true)]
    pub t: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Gauss sums g(n,m;j) with their vanishing pattern.
    Gauss {
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
        #[arg(long, allow_hyphen_values = true)]
        m: i64,
        #[command(flatten)]
        output: Output,
    },
    /// Comb positions 2πj/m and weights at t = 2πn/m.
    Comb {
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
        #[arg(long, allow_hyphen_values = true)]
        m: i64,
        #[command(flatten)]
        output: Output,
    },
    /// Talbot carpet |G(t,x)| as a binary PGM.
    Carpet {
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        t_min: f64,
        #[arg(long, default_value_t = TAU, allow_hyphen_values = true)]
        t_max: f64,
        #[arg(long, default_value_t = 256)]
        rows: usize,
        #[arg(long, default_value_t = 512)]
        cols: usize,
        #[arg(long = "K", visible_alias = "order", default_value_t = 256)]
        order: usize,
        /// Gaussian filter strength, default 1/K².
        #[arg(long)]
        eps: Option<f64>,
        /// Decades of dynamic range below the brightest pixel.
        #[arg(long, default_value_t = 3.0)]
        decades: f64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        manifest: Option<PathBuf>,
    },
    /// Run a verification suite and report every check as JSON lines.
    Verify {
        #[command(subcommand)]
        suite: Suite,
        #[arg(long, global = true)]
        out: Option<PathBuf>,
        #[arg(long, global = true)]
        manifest: Option<PathBuf>,
    },
    /// Operator revival residuals for one seeded random operator.
    OperatorDemo {
        #[arg(long, default_value_t = 16)]
        dim: usize,
        /// Spectrum drawn from [-radius, radius].
        #[arg(long, default_value_t = 20)]
        radius: i64,
        #[arg(long, default_value_t = 12)]
        mmax: i64,
        #[arg(long)]
        seed: Option<u64>,
        /// Trapezoid nodes for the functional-calculus check, default 4·radius+1.
        #[arg(long)]
        nodes: Option<usize>,
        #[command(flatten)]
        output: Output,
    },
    /// Zonal profile of exp(itΔ)δ on S^d and its Huygens mass fraction.
    Sphere {
        #[arg(long, default_value_t = 3)]
        d: usize,
        #[arg(long = "K", visible_alias = "order", default_value_t = 256)]
        order: usize,
        #[command(flatten)]
        time: TimeArg,
        #[arg(long)]
        eps: Option<f64>,
        /// Arc half-width for the mass fraction, default 10/K.
        #[arg(long)]
        halfwidth: Option<f64>,
        /// Number of polar angles in [0, π].
        #[arg(long, default_value_t = 257)]
        points: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Windowed singularity scan of G(t,·) over equispaced centers.
    Scan {
        #[command(flatten)]
        time: TimeArg,
        #[arg(long = "K", visible_alias = "order", default_value_t = 4096)]
        order: usize,
        #[arg(long, default_value_t = 16)]
        centers: usize,
        #[arg(long, default_value_t = DEFAULT_WINDOW_WIDTH)]
        width: f64,
        /// Threshold as a fraction of the slope at the t = 0 delta.
        #[arg(long, default_value_t = DEFAULT_RELATIVE_THRESHOLD)]
        relative_threshold: f64,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Debug, Subcommand)]
pub enum Suite {
    Gauss {
        #[arg(long, default_value_t = 64)]
        mmax: i64,
    },
    Revival {
        #[arg(long, default_value_t = 16)]
        dim: usize,
        #[arg(long, default_value_t = 16)]
        mmax: i64,
        #[arg(long)]
        seed: Option<u64>,
    },
    Sphere {
        #[arg(long, default_value_t = 3)]
        d: usize,
        #[arg(long = "K", visible_alias = "order", default_value_t = 256)]
        order: usize,
        #[arg(long, default_value_t = 2)]
        m: i64,
    },
    Scan {
        #[arg(long = "K", visible_alias = "order", default_value_t = 4096)]
        order: usize,
        #[arg(long, default_value_t = 16)]
        centers: usize,
    },
}

#[derive(Debug)]
enum Failure {
    BadInput(String),
    Io(String),
    Tolerance(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::BadInput(_) => EXIT_BAD_INPUT,
            Failure::Io(_) => EXIT_IO,
            Failure::Tolerance(_) => EXIT_TOLERANCE,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::BadInput(s) | Failure::Io(s) | Failure::Tolerance(s) => s,
        }
    }
}

impl From<crate::Error> for Failure {
    fn from(e: crate::Error) -> Self {
        Failure::BadInput(e.to_string())
    }
}

fn bad(msg: impl Into<String>) -> Failure {
    Failure::BadInput(msg.into())
}

type CliResult<T> = std::result::Result<T, Failure>;

struct Context<'a> {
    env_seed: Option<String>,
    stdout: &'a mut dyn Write,
    stderr: &'a mut dyn Write,
}

impl Context<'_> {
    fn seed(&self, flag: Option<u64>) -> CliResult<u64> {
        if let Some(s) = flag {
            return Ok(s);
        }
        match &self.env_seed {
            Some(v) => v
                .trim()
                .parse()
                .map_err(|_| bad(format!("{SEED_ENV}={v:?} is not an unsigned integer"))),
            None => Ok(DEFAULT_SEED),
        }
    }

    fn note(&mut self, msg: &str) {
        let _ = writeln!(self.stderr, "{msg}");
    }

    fn emit(&mut self, out: Option<&Path>, bytes: &[u8], manifest: &mut RunManifest) -> CliResult<()> {
        match out {
            Some(path) => {
                write_atomic(path, bytes).map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display())))?;
                manifest.outputs.push(path.display().to_string());
            }
            None => self
                .stdout
                .write_all(bytes)
                .map_err(|e| Failure::Io(format!("cannot write to stdout: {e}")))?,
        }
        Ok(())
    }

    fn emit_table(&mut self, table: &Table, output: &Output, manifest: &mut RunManifest) -> CliResult<()> {
        let format: Format = output.format.into();
        manifest.param(
            "format",
            match format {
                Format::Csv => "csv",
                Format::Json => "json",
            },
        );
        self.emit(output.out.as_deref(), table.render(format).as_bytes(), manifest)?;
        write_manifest(output.manifest.as_deref(), manifest)
    }
}

fn write_manifest(path: Option<&Path>, manifest: &RunManifest) -> CliResult<()> {
    if let Some(path) = path {
        write_atomic(path, manifest.to_json().as_bytes())
            .map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}

/// Parses `args` (program name first), runs the command, and returns the exit code.
/// `ZOLL_SEED` is read from the process environment.
pub fn run_with_io<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with_env(args, std::env::var(SEED_ENV).ok(), stdout, stderr)
}

/// [`run_with_io`] with the seed override passed explicitly.
pub fn run_with_env<I, T>(args: I, env_seed: Option<String>, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_BAD_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    let mut ctx = Context {
        env_seed,
        stdout,
        stderr,
    };
    match dispatch(cli.command, &mut ctx) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            ctx.note(&format!("error: {}", f.message()));
            f.code()
        }
    }
}

fn dispatch(command: Command, ctx: &mut Context) -> CliResult<()> {
    match command {
        Command::Gauss { n, m, output } => cmd_gauss(n, m, &output, ctx),
        Command::Comb { n, m, output } => cmd_comb(n, m, &output, ctx),
        Command::Carpet {
            t_min,
            t_max,
            rows,
            cols,
            order,
            eps,
            decades,
            out,
            manifest,
        } => cmd_carpet(
            CarpetParams {
                t_min,
                t_max,
                rows,
                cols,
                order,
                eps,
                decades,
            },
            &out,
            manifest.as_deref(),
            ctx,
        ),
        Command::Verify { suite, out, manifest } => cmd_verify(suite, out.as_deref(), manifest.as_deref(), ctx),
        Command::OperatorDemo {
            dim,
            radius,
            mmax,
            seed,
            nodes,
            output,
        } => cmd_operator_demo(dim, radius, mmax, seed, nodes, &output, ctx),
        Command::Sphere {
            d,
            order,
            time,
            eps,
            halfwidth,
            points,
            output,
        } => cmd_sphere(d, order, &time, eps, halfwidth, points, &output, ctx),
        Command::Scan {
            time,
            order,
            centers,
            width,
            relative_threshold,
            output,
        } => cmd_scan(&time, order, centers, width, relative_threshold, &output, ctx),
    }
}

fn reduced(n: i64, m: i64, ctx: &mut Context) -> CliResult<RationalTime> {
    if m == 0 {
        return Err(bad("denominator m must be nonzero"));
    }
    let rt = RationalTime::new(n, m)?;
    if (rt.numerator(), rt.denominator()) != (n, m) {
        ctx.note(&format!("note: {n}/{m} reduced to {rt}"));
    }
    Ok(rt)
}

fn resolve_time(time: &TimeArg, ctx: &mut Context, manifest: &mut RunManifest) -> CliResult<Time> {
    match (time.n, time.m, time.t) {
        (Some(n), Some(m), None) => {
            let rt = reduced(n, m, ctx)?;
            manifest.param("n", rt.numerator()).param("m", rt.denominator());
            Ok(Time::Rational(rt))
        }
        (None, None, Some(t)) if t.is_finite() => {
            manifest.param("t", t);
            Ok(Time::Real(t))
        }
        (None, None, Some(_)) => Err(bad("time must be finite")),
        _ => Err(bad("give either --n and --m, or --t")),
    }
}

fn default_eps(order: usize, eps: Option<f64>) -> CliResult<f64> {
    let eps = eps.unwrap_or(1.0 / (order as f64 * order as f64));
    if !(eps >= 0.0 && eps.is_finite()) {
        return Err(bad(format!("filter eps must be finite and nonnegative, got {eps}")));
    }
    Ok(eps)
}

fn cmd_gauss(n: i64, m: i64, output: &Output, ctx: &mut Context) -> CliResult<()> {
    let rt = reduced(n, m, ctx)?;
    let mut manifest = RunManifest::new("gauss");
    manifest.param("n", rt.numerator()).param("m", rt.denominator());
    ctx.emit_table(&gauss_table(rt), output, &mut manifest)
}

fn cmd_comb(n: i64, m: i64, output: &Output, ctx: &mut Context) -> CliResult<()> {
    let rt = reduced(n, m, ctx)?;
    let mut manifest = RunManifest::new("comb");
    manifest.param("n", rt.numerator()).param("m", rt.denominator());
    ctx.emit_table(&comb_table(&comb_weights(rt)), output, &mut manifest)
}

struct CarpetParams {
    t_min: f64,
    t_max: f64,
    rows: usize,
    cols: usize,
    order: usize,
    eps: Option<f64>,
    decades: f64,
}

fn cmd_carpet(p: CarpetParams, out: &Path, manifest_path: Option<&Path>, ctx: &mut Context) -> CliResult<()> {
    if p.rows == 0 || p.cols == 0 {
        return Err(bad(format!("carpet needs rows ≥ 1 and cols ≥ 1, got {}×{}", p.rows, p.cols)));
    }
    if !(p.t_min.is_finite() && p.t_max.is_finite()) {
        return Err(bad("time range must be finite"));
    }
    if !(p.decades > 0.0 && p.decades.is_finite()) {
        return Err(bad("decades must be positive"));
    }
    let eps = default_eps(p.order, p.eps)?;
    let times: Vec<f64> = if p.rows == 1 {
        vec![p.t_min]
    } else {
        (0..p.rows)
            .map(|r| p.t_min + (p.t_max - p.t_min) * r as f64 / (p.rows - 1) as f64)
            .collect()
    };
    let data = carpet(&times, &uniform_grid(p.cols), p.order, eps)?;
    let scale = LogScale::fit(&data, p.decades);
    let mut manifest = RunManifest::new("carpet");
    manifest
        .param("t_min", p.t_min)
        .param("t_max", p.t_max)
        .param("rows", p.rows)
        .param("cols", p.cols)
        .param("K", p.order)
        .param("eps", eps)
        .param("decades", p.decades)
        .param("log_lo", scale.lo)
        .param("log_hi", scale.hi);
    ctx.emit(Some(out), &encode_pgm(&data, scale), &mut manifest)?;
    write_manifest(manifest_path, &manifest)
}

fn cmd_verify(suite: Suite, out: Option<&Path>, manifest_path: Option<&Path>, ctx: &mut Context) -> CliResult<()> {
    let mut manifest = RunManifest::new("verify");
    let checks = match suite {
        Suite::Gauss { mmax } => {
            if mmax < 1 {
                return Err(bad("mmax must be ≥ 1"));
            }
            manifest.param("suite", "gauss").param("mmax", mmax);
            verify_gauss(mmax)
        }
        Suite::Revival { dim, mmax, seed } => {
            if dim == 0 || mmax < 1 {
                return Err(bad("dim and mmax must be ≥ 1"));
            }
            let seed = ctx.seed(seed)?;
            manifest
                .param("suite", "revival")
                .param("dim", dim)
                .param("mmax", mmax)
                .param("seed", seed)
                .param("spectral_radius", 20);
            verify_revival(dim, mmax, seed)
        }
        Suite::Sphere { d, order, m } => {
            if d % 2 == 0 || m < 1 || order == 0 {
                return Err(bad("sphere suite needs odd d, m ≥ 1 and K ≥ 1"));
            }
            let k = order as f64;
            manifest
                .param("suite", "sphere")
                .param("d", d)
                .param("K", order)
                .param("m", m)
                .param("eps", 1.0 / (k * k))
                .param("halfwidth", 10.0 / k);
            verify_sphere(d, order, m)
        }
        Suite::Scan { order, centers } => {
            if order < 64 || centers == 0 {
                return Err(bad("scan suite needs K ≥ 64 and at least one center"));
            }
            let orders = [order / 16, order / 4, order];
            let cal = calibrate(DEFAULT_WINDOW_WIDTH, &orders, DEFAULT_RELATIVE_THRESHOLD)?;
            manifest
                .param("suite", "scan")
                .param("K", order)
                .param("orders", orders)
                .param("centers", centers)
                .param("window_width", DEFAULT_WINDOW_WIDTH)
                .param("relative_threshold", DEFAULT_RELATIVE_THRESHOLD)
                .param("threshold", cal.threshold);
            verify_scan(order, centers)
        }
    };
    ctx.emit(out, checks_to_json_lines(&checks).as_bytes(), &mut manifest)?;
    write_manifest(manifest_path, &manifest)?;
    tolerance_outcome(&checks)
}

fn tolerance_outcome(checks: &[Check]) -> CliResult<()> {
    let failed: Vec<&str> = checks.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Tolerance(format!("failed checks: {}", failed.join(", "))))
    }
}

fn cmd_operator_demo(
    dim: usize,
    radius: i64,
    mmax: i64,
    seed: Option<u64>,
    nodes: Option<usize>,
    output: &Output,
    ctx: &mut Context,
) -> CliResult<()> {
    if dim == 0 || radius < 0 || mmax < 1 {
        return Err(bad("need dim ≥ 1, radius ≥ 0 and mmax ≥ 1"));
    }
    let seed = ctx.seed(seed)?;
    let nodes = nodes.unwrap_or((4 * radius + 1) as usize);
    let op = make_operator(random_spectrum(dim, radius, seed), seed)?;
    let mut manifest = RunManifest::new("operator-demo");
    manifest
        .param("dim", dim)
        .param("radius", radius)
        .param("mmax", mmax)
        .param("seed", seed)
        .param("nodes", nodes);

    let tol = 1e-10 * dim as f64;
    let mut table = Table::new(&["dim", "spectrum", "rt", "residual"]);
    let mut worst = 0.0f64;
    for rt in times_up_to(mmax) {
        let record = RevivalRecord {
            dim,
            spectrum: op.eigenvalues().to_vec(),
            rt: rt.to_string(),
            residual: revival_residual(&op, rt),
        };
        worst = worst.max(record.residual);
        let spectrum: Vec<String> = record.spectrum.iter().map(i64::to_string).collect();
        table.push(vec![
            record.dim.into(),
            Value::String(spectrum.join(" ")),
            record.rt.into(),
            record.residual.into(),
        ]);
    }

    let f = SpectralFunction::from_fn(radius, |k| Time::Real(0.37).phase(k * k));
    let direct = functional_calculus_direct(&op, &f)?;
    let quad = functional_calculus_quadrature(&op, &f, nodes)?;
    let calculus = operator_norm(&(&direct - &quad));
    manifest.param("calculus_residual", calculus).param("max_revival_residual", worst);
    ctx.note(&format!(
        "max revival residual {worst:.3e} (tolerance {tol:.1e}); quadrature calculus residual {calculus:.3e} with {nodes} nodes"
    ));
    ctx.emit_table(&table, output, &mut manifest)?;
    if worst > tol || calculus > 1e-10 {
        return Err(Failure::Tolerance("operator residual above tolerance".into()));
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_sphere(
    d: usize,
    order: usize,
    time: &TimeArg,
    eps: Option<f64>,
    halfwidth: Option<f64>,
    points: usize,
    output: &Output,
    ctx: &mut Context,
) -> CliResult<()> {
    if order == 0 {
        return Err(bad("K must be ≥ 1"));
    }
    let mut manifest = RunManifest::new("sphere");
    manifest.param("d", d).param("K", order);
    let t = resolve_time(time, ctx, &mut manifest)?;
    let eps = default_eps(order, eps)?;
    let halfwidth = halfwidth.unwrap_or(10.0 / order as f64);
    manifest.param("eps", eps).param("halfwidth", halfwidth).param("points", points);

    let state = zonal_delta(d, order)?.evolve(t, Generator::Laplace, eps)?;
    let mut table = Table::new(&["theta", "re", "im", "abs"]);
    let thetas: Vec<f64> = match points {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..points)
            .map(|i| std::f64::consts::PI * i as f64 / (points - 1) as f64)
            .collect(),
    };
    for (theta, u) in thetas.iter().zip(state.profile(&thetas)) {
        table.push(vec![(*theta).into(), u.re.into(), u.im.into(), u.norm().into()]);
    }
    if let Time::Rational(rt) = t {
        if d % 2 == 1 {
            let report = huygens_concentration(d, rt, order, eps, halfwidth)?;
            manifest
                .param("predicted_distances", &report.predicted)
                .param("mass_fraction", report.fraction);
            ctx.note(&format!(
                "mass fraction within {halfwidth:.4} of distances {:?}: {:.6}",
                report.predicted, report.fraction
            ));
        }
    }
    ctx.emit_table(&table, output, &mut manifest)
}

fn cmd_scan(
    time: &TimeArg,
    order: usize,
    centers: usize,
    width: f64,
    relative_threshold: f64,
    output: &Output,
    ctx: &mut Context,
) -> CliResult<()> {
    if order < 64 {
        return Err(bad("scan needs K ≥ 64"));
    }
    let mut manifest = RunManifest::new("scan");
    let t = resolve_time(time, ctx, &mut manifest)?;
    let orders = [order / 16, order / 4, order];
    let cal = calibrate(width, &orders, relative_threshold)?;
    manifest
        .param("K", order)
        .param("orders", orders)
        .param("centers", centers)
        .param("window_width", width)
        .param("relative_threshold", relative_threshold)
        .param("threshold", cal.threshold);
    let points = scan(t, &center_grid(centers), width, &orders, cal.threshold)?;
    let mut table = Table::new(&["center", "slope", "verdict"]);
    for p in &points {
        let verdict = match p.score.verdict {
            Verdict::Smooth => "smooth",
            Verdict::Singular => "singular",
        };
        table.push(vec![p.center.into(), p.score.slope.into(), verdict.into()]);
    }
    ctx.emit_table(&table, output, &mut manifest)
}
