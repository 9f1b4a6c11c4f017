//! The `alphakit` command line.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use alphakit_core::analysis::{
    bergman_membership_check, delta_alpha_residual, max_residual, verify_colonna, verify_composition,
    verify_composition_field, verify_heinz, verify_schwarz, verify_schwarz_pick, BergmanParams, BoundOptions,
    ResidualConfig, VerificationReport,
};
use alphakit_core::kernels::{
    green_alpha_certified, h_alpha, h_alpha_bound, phi, poisson_kernel_alpha, H_TOL,
};
use alphakit_core::series::{AlphaHarmonicSeries, CoefficientSequence, Example1Function, Polynomial};
use alphakit_core::solver::{solve_with, BoundaryData, SourceField};
use alphakit_core::{Alpha, Complex64, Differentiable, Executor, Field, Grid};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::config::{GridSpec, RunConfig};
use crate::error::{CliError, Result};
use crate::exec::Parallel;
use crate::formats::{
    read_json_file, read_kernel_points, write_field_csv, write_kernel_csv, BoundaryFile, CoefficientFile,
    FieldRow, KernelKind, KernelRow, ReportJson, SourceFile,
};
use crate::suites;

/// `solve` certifies a solution when `max |Δ_α f − g|` stays below this.
pub const SOLVE_TOLERANCE: f64 = 1e-4;
/// `series` certifies a series when `max |Δ_α f|` stays below this.
pub const SERIES_TOLERANCE: f64 = 1e-5;
/// Default slack of the Schwarz-type reports, on top of the quadrature error.
pub const REPORT_FLOOR: f64 = 1e-9;

#[derive(Debug, Parser)]
#[command(name = "alphakit", version, about = "Solve and certify Δ_α f = g on the unit disk")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a kernel at points given inline or in a CSV file.
    Kernel(KernelArgs),
    /// Solve the Dirichlet problem and export the field on a grid.
    Solve(SolveArgs),
    /// Check a theorem numerically and emit a verification report.
    Verify(VerifyArgs),
    /// Evaluate a homogeneous series and its Δ_α residual on a grid.
    Series(SeriesArgs),
}

/// A complex number written `re` or `re,im`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexArg(pub Complex64);

impl FromStr for ComplexArg {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let num = |t: &str| t.trim().parse::<f64>().map_err(|_| format!("{s:?} is not re or re,im"));
        let z = match s.split_once(',') {
            Some((re, im)) => Complex64::new(num(re)?, num(im)?),
            None => Complex64::new(num(s)?, 0.0),
        };
        Ok(ComplexArg(z))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KernelKindArg {
    Poisson,
    Green,
    H,
    Phi,
}

impl From<KernelKindArg> for KernelKind {
    fn from(k: KernelKindArg) -> Self {
        match k {
            KernelKindArg::Poisson => KernelKind::Poisson,
            KernelKindArg::Green => KernelKind::Green,
            KernelKindArg::H => KernelKind::H,
            KernelKindArg::Phi => KernelKind::Phi,
        }
    }
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct KernelArgs {
    #[arg(value_enum)]
    pub kind: KernelKindArg,
    #[arg(long, default_value_t = 0.0)]
    pub alpha: f64,
    /// First argument, `re` or `re,im`; repeatable.
    #[arg(long)]
    pub z: Vec<ComplexArg>,
    /// Second argument of `green` and `phi`; a single value is broadcast.
    #[arg(long)]
    pub w: Vec<ComplexArg>,
    /// Argument of `h`; repeatable.
    #[arg(long)]
    pub s: Vec<f64>,
    /// CSV of inputs with the kernel's input columns as header.
    #[arg(long)]
    pub points: Option<PathBuf>,
    /// Output CSV; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Run configuration flags; each overrides the same field of `--config`.
#[derive(Debug, Clone, Default, Args)]
#[command(allow_negative_numbers = true)]
pub struct RunArgs {
    /// JSON run configuration.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub circle_nodes: Option<usize>,
    #[arg(long)]
    pub radial_order: Option<usize>,
    #[arg(long)]
    pub angular_order: Option<usize>,
    /// `polar:NRxNA` or `cartesian:STEP`.
    #[arg(long)]
    pub grid: Option<String>,
    #[arg(long)]
    pub r_max: Option<f64>,
    #[arg(long)]
    pub tolerance: Option<f64>,
    /// Main output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Summary JSON file.
    #[arg(long)]
    pub summary: Option<PathBuf>,
}

impl RunArgs {
    /// Applies the config file, then the flags, on top of `base`.
    pub fn resolve(&self, base: RunConfig) -> Result<RunConfig> {
        let mut c = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)?;
                let mut value: serde_json::Value = serde_json::from_str(&text)?;
                let mut merged = serde_json::to_value(&base)?;
                if let (Some(m), Some(v)) = (merged.as_object_mut(), value.as_object_mut()) {
                    m.append(v);
                } else {
                    return Err(CliError::Invalid("run configuration must be a JSON object".into()));
                }
                serde_json::from_value(merged)?
            }
            None => base,
        };
        if let Some(a) = self.alpha {
            c.alpha = a;
        }
        if let Some(n) = self.circle_nodes {
            c.circle_nodes = n;
        }
        if let Some(n) = self.radial_order {
            c.radial_order = n;
        }
        if let Some(n) = self.angular_order {
            c.angular_order = n;
        }
        if let Some(g) = &self.grid {
            c.grid = g.parse()?;
        }
        if let Some(r) = self.r_max {
            c.r_max = r;
        }
        if self.tolerance.is_some() {
            c.tolerance = self.tolerance;
        }
        if self.out.is_some() {
            c.out = self.out.clone();
        }
        if self.summary.is_some() {
            c.summary = self.summary.clone();
        }
        c.validate()?;
        Ok(c)
    }
}

/// Boundary data and source flags shared by `solve` and the bound checks.
#[derive(Debug, Clone, Default, Args)]
#[command(allow_negative_numbers = true)]
pub struct ProblemArgs {
    /// Boundary JSON; zero boundary data when absent.
    #[arg(long)]
    pub boundary: Option<PathBuf>,
    /// Source JSON; zero source when absent.
    #[arg(long, conflicts_with = "source_const")]
    pub source: Option<PathBuf>,
    /// Constant source `re` or `re,im`.
    #[arg(long)]
    pub source_const: Option<ComplexArg>,
}

impl ProblemArgs {
    pub fn boundary(&self) -> Result<BoundaryData> {
        match &self.boundary {
            Some(p) => read_json_file::<BoundaryFile>(p)?.to_boundary(),
            None => Ok(BoundaryData::zero()),
        }
    }

    pub fn source(&self) -> Result<SourceField> {
        match (&self.source, self.source_const) {
            (Some(p), _) => read_json_file::<SourceFile>(p)?.to_source(),
            (None, Some(c)) => Ok(SourceField::constant(c.0)),
            (None, None) => Ok(SourceField::zero()),
        }
    }
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(subcommand)]
    pub check: VerifyCommand,
}

#[derive(Debug, Subcommand)]
pub enum VerifyCommand {
    /// Modulus bound for solutions with centered boundary data.
    Schwarz(BoundArgs),
    /// Jacobian-norm bound for solutions.
    SchwarzPick(BoundArgs),
    /// The harmonic `(4/π) arctan|z|` bound.
    Heinz(HarmonicArgs),
    /// The harmonic `(4/π)/(1 − |z|²)` Jacobian bound.
    Colonna(HarmonicArgs),
    /// α-harmonicity of `f∘ψ` for an α-harmonic `f`.
    Composition(CompositionArgs),
    /// Membership of a bounded α-harmonic series in the Bergman-type space.
    Bergman(BergmanArgs),
}

#[derive(Debug, Args)]
pub struct BoundArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[command(flatten)]
    pub run: RunArgs,
    /// Subtract `𝒫_α[f*](0)` from the boundary data instead of failing.
    #[arg(long)]
    pub auto_center: bool,
    /// The equality case: α = 0, `f* ≡ 0`, `g ≡ −1`.
    #[arg(long, conflicts_with_all = ["boundary", "source", "source_const", "random"])]
    pub sharp_case: bool,
    /// Run `N × 4 × 3` random cases instead of a single problem.
    #[arg(long, value_name = "N", conflicts_with_all = ["boundary", "source", "source_const"])]
    pub random: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct HarmonicArgs {
    /// Boundary JSON with `|f*| ≤ 1`.
    #[arg(long, required_unless_present = "random")]
    pub boundary: Option<PathBuf>,
    #[command(flatten)]
    pub run: RunArgs,
    /// Check `N` random self-maps instead.
    #[arg(long, value_name = "N", conflicts_with = "boundary")]
    pub random: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct CompositionArgs {
    /// `identity`, `rotation:T`, `dilation:A`, `power:N` or `square`.
    #[arg(long)]
    pub psi: PsiSpec,
    /// Coefficient JSON of `f`; `c₋₁ = 1` when absent.
    #[arg(long, conflicts_with = "example1")]
    pub coeffs: Option<PathBuf>,
    /// The counterexample family, `k=K` or `K`.
    #[arg(long, value_name = "k=K")]
    pub example1: Option<String>,
    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Debug, Args)]
pub struct BergmanArgs {
    /// Coefficient JSON of `f`; `c₁ = c₋₁ = 0.3` when absent.
    #[arg(long)]
    pub coeffs: Option<PathBuf>,
    #[arg(long, default_value_t = 2.0)]
    pub p: f64,
    /// Increasing radii of the truncated integrals, comma separated.
    #[arg(long, value_delimiter = ',', default_values_t = [0.5, 0.9, 0.99, 0.999])]
    pub radii: Vec<f64>,
    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Debug, Args)]
pub struct SeriesArgs {
    /// Coefficient JSON.
    #[arg(long, required_unless_present = "random_terms", conflicts_with = "random_terms")]
    pub coeffs: Option<PathBuf>,
    /// Random coefficients on `−N..=N` with `Σ|c_k| = 1`.
    #[arg(long, value_name = "N")]
    pub random_terms: Option<i64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub run: RunArgs,
}

/// The inner map of a composition check.
#[derive(Debug, Clone, PartialEq)]
pub struct PsiSpec(pub Polynomial);

impl FromStr for PsiSpec {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let bad = || format!("unknown map {s:?}; use identity, rotation:T, dilation:A, power:N or square");
        let (kind, arg) = match s.split_once(':') {
            Some((k, a)) => (k.trim(), Some(a.trim())),
            None => (s.trim(), None),
        };
        let p = match (kind, arg) {
            ("identity", None) => Polynomial::identity(),
            ("square", None) => Polynomial::power(2),
            ("rotation", Some(t)) => Polynomial::rotation(t.parse::<f64>().map_err(|_| bad())?),
            ("dilation", Some(a)) => Polynomial::dilation(a.parse::<ComplexArg>()?.0),
            ("power", Some(n)) => {
                let n: usize = n.parse().map_err(|_| bad())?;
                if n == 0 {
                    return Err("power:N needs N >= 1".into());
                }
                Polynomial::power(n)
            }
            _ => return Err(bad()),
        };
        Ok(PsiSpec(p))
    }
}

fn parse_example1(s: &str) -> Result<u32> {
    let v = s.trim().strip_prefix("k=").unwrap_or(s.trim());
    v.parse::<u32>().map_err(|_| CliError::Invalid(format!("--example1 expects k=K, got {s:?}")))
}

fn writer(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_json<T: Serialize>(path: Option<&Path>, value: &T) -> Result<()> {
    let mut w = writer(path)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

/// Runs a parsed command line.
pub fn run(cli: Cli) -> Result<()> {
    let exec = Parallel::from_env()?;
    match cli.command {
        Command::Kernel(a) => cmd_kernel(&a),
        Command::Solve(a) => cmd_solve(&a, &exec),
        Command::Verify(a) => cmd_verify(&a, &exec),
        Command::Series(a) => cmd_series(&a, &exec),
    }
}

fn broadcast<T: Copy>(a: &[T], b: &[T], what: &str) -> Result<Vec<(T, T)>> {
    match (a.len(), b.len()) {
        (n, m) if n == m => Ok(a.iter().copied().zip(b.iter().copied()).collect()),
        (1, _) => Ok(b.iter().map(|&y| (a[0], y)).collect()),
        (_, 1) => Ok(a.iter().map(|&x| (x, b[0])).collect()),
        (n, m) => Err(CliError::Invalid(format!("{what}: {n} and {m} values cannot be paired"))),
    }
}

fn kernel_inputs(a: &KernelArgs, kind: KernelKind) -> Result<Vec<Vec<f64>>> {
    let mut rows = match &a.points {
        Some(p) => read_kernel_points(File::open(p)?, kind)?,
        None => Vec::new(),
    };
    let zs: Vec<Complex64> = a.z.iter().map(|c| c.0).collect();
    let ws: Vec<Complex64> = a.w.iter().map(|c| c.0).collect();
    match kind {
        KernelKind::Poisson => {
            if !ws.is_empty() || !a.s.is_empty() {
                return Err(CliError::Invalid("poisson takes --z only".into()));
            }
            rows.extend(zs.iter().map(|z| vec![z.re, z.im]));
        }
        KernelKind::H => {
            if !zs.is_empty() || !ws.is_empty() {
                return Err(CliError::Invalid("h takes --s only".into()));
            }
            rows.extend(a.s.iter().map(|&s| vec![s]));
        }
        KernelKind::Green | KernelKind::Phi => {
            if !a.s.is_empty() {
                return Err(CliError::Invalid("green and phi take --z and --w".into()));
            }
            if !(zs.is_empty() && ws.is_empty()) {
                for (z, w) in broadcast(&zs, &ws, "--z/--w")? {
                    rows.push(vec![z.re, z.im, w.re, w.im]);
                }
            }
        }
    }
    if rows.is_empty() {
        return Err(CliError::Invalid("no evaluation points given".into()));
    }
    Ok(rows)
}

pub fn cmd_kernel(a: &KernelArgs) -> Result<()> {
    let kind = KernelKind::from(a.kind);
    let alpha = Alpha::new(a.alpha)?;
    let mut out = Vec::new();
    for inputs in kernel_inputs(a, kind)? {
        let pt = |i: usize| Complex64::new(inputs[i], inputs[i + 1]);
        let (value, abs_bound) = match kind {
            KernelKind::Poisson => (poisson_kernel_alpha(pt(0), alpha)?, None),
            KernelKind::Green => {
                let k = green_alpha_certified(pt(0), pt(2), alpha)?;
                (k.value, k.abs_bound)
            }
            KernelKind::H => {
                let s = inputs[0];
                let v = h_alpha(s, alpha, H_TOL)?;
                (Complex64::new(v, 0.0), (alpha.get() >= 0.0).then(|| h_alpha_bound(s, alpha)))
            }
            KernelKind::Phi => (Complex64::new(phi(pt(0), pt(2))?, 0.0), None),
        };
        out.push(KernelRow { inputs, value, abs_bound });
    }
    let w = writer(a.out.as_deref())?;
    write_kernel_csv(w, kind, &out)
}

/// Summary of a `solve` or `series` run.
#[derive(Debug, Clone, PartialEq, Serialize, serde::Deserialize)]
pub struct FieldSummary {
    pub alpha: f64,
    pub grid: String,
    pub points: usize,
    pub max_residual: f64,
    pub max_residual_x: f64,
    pub max_residual_y: f64,
    pub tolerance: f64,
    pub certified: bool,
}

fn field_rows<F: Differentiable, E: Executor>(f: &F, points: &[Complex64], exec: &E) -> Result<Vec<FieldRow>> {
    let rows = exec.map_points(points, |z| -> alphakit_core::Result<FieldRow> {
        let v = f.value(z)?;
        let (fz, fzbar) = f.wirtinger(z)?;
        Ok(FieldRow::new(z, v, fz, fzbar))
    });
    Ok(rows.into_iter().collect::<alphakit_core::Result<Vec<_>>>()?)
}

/// Writes the field CSV and the summary, then fails if not certified.
fn emit_field(cfg: &RunConfig, rows: &[FieldRow], summary: &FieldSummary) -> Result<()> {
    write_field_csv(writer(cfg.out.as_deref())?, rows)?;
    if let Some(p) = &cfg.summary {
        write_json(Some(p), summary)?;
    }
    let text = serde_json::to_string(summary)?;
    if cfg.out.is_some() {
        println!("{text}");
    } else {
        eprintln!("{text}");
    }
    if summary.certified {
        Ok(())
    } else {
        Err(CliError::NotCertified { residual: summary.max_residual, tolerance: summary.tolerance })
    }
}

/// `max |Δ_α f − g|` over the grid, with its location.
pub fn solution_residual<F: Field, E: Executor>(
    f: &F,
    g: &SourceField,
    alpha: Alpha,
    points: &[Complex64],
    exec: &E,
) -> Result<(f64, Complex64)> {
    let cfg = ResidualConfig::default();
    let res = exec.map_points(points, |z| delta_alpha_residual(f, z, alpha, &cfg).map(|r| (r - g.eval(z)).norm()));
    let mut best = (0.0, Complex64::new(0.0, 0.0));
    for (z, r) in points.iter().zip(res) {
        let r = r?;
        if !(r <= best.0) {
            best = (r, *z);
        }
    }
    Ok(best)
}

pub fn cmd_solve<E: Executor>(a: &SolveArgs, exec: &E) -> Result<()> {
    let cfg = a.run.resolve(RunConfig::default())?;
    let alpha = cfg.alpha()?;
    let fstar = a.problem.boundary()?;
    let g = a.problem.source()?;
    let field = solve_with(&fstar, &g, alpha, cfg.quadrature())?;
    let grid = cfg.to_grid()?;
    let points = grid.points();
    let rows = field_rows(&field, &points, exec)?;
    let (worst, at) = solution_residual(&field, &g, alpha, &points, exec)?;
    let tol = cfg.tolerance_or(SOLVE_TOLERANCE);
    let summary = FieldSummary {
        alpha: alpha.get(),
        grid: grid.describe(),
        points: points.len(),
        max_residual: worst,
        max_residual_x: at.re,
        max_residual_y: at.im,
        tolerance: tol,
        certified: worst <= tol,
    };
    emit_field(&cfg, &rows, &summary)
}

pub fn cmd_series<E: Executor>(a: &SeriesArgs, exec: &E) -> Result<()> {
    let cfg = a.run.resolve(RunConfig::default())?;
    let s = match (&a.coeffs, a.random_terms) {
        (Some(p), _) => read_json_file::<CoefficientFile>(p)?.to_series()?,
        (None, Some(n)) => {
            if n < 0 {
                return Err(CliError::Invalid("--random-terms must be nonnegative".into()));
            }
            suites::random_series(&mut suites::rng(a.seed), cfg.alpha()?, n)
        }
        (None, None) => return Err(CliError::Invalid("series needs --coeffs or --random-terms".into())),
    };
    let grid = cfg.to_grid()?;
    let points = grid.points();
    let rows = field_rows(&s, &points, exec)?;
    let (worst, at) = max_residual(&s, &points, s.alpha(), &ResidualConfig::default(), exec)?;
    let tol = cfg.tolerance_or(SERIES_TOLERANCE);
    let summary = FieldSummary {
        alpha: s.alpha().get(),
        grid: grid.describe(),
        points: points.len(),
        max_residual: worst,
        max_residual_x: at.re,
        max_residual_y: at.im,
        tolerance: tol,
        certified: worst <= tol,
    };
    emit_field(&cfg, &rows, &summary)
}

fn bound_options(cfg: &RunConfig, auto_center: bool) -> BoundOptions {
    BoundOptions { auto_center, quadrature: cfg.quadrature(), tolerance_floor: cfg.tolerance_or(REPORT_FLOOR) }
}

/// Writes one report, or an array for suites, and fails unless all passed.
fn emit_reports(cfg: &RunConfig, reports: &[VerificationReport], single: bool) -> Result<()> {
    let json: Vec<ReportJson> = reports.iter().map(ReportJson::from).collect();
    if single {
        write_json(cfg.out.as_deref(), &json[0])?;
    } else {
        write_json(cfg.out.as_deref(), &json)?;
    }
    let failed = reports.iter().filter(|r| !r.passed).count();
    if failed == 0 {
        Ok(())
    } else {
        Err(CliError::NotPassed(format!("{failed} of {} reports have violations", reports.len())))
    }
}

type BoundCheck<E> = fn(&BoundaryData, &SourceField, Alpha, &Grid, &BoundOptions, &E) -> alphakit_core::Result<VerificationReport>;

fn run_bound<E: Executor>(a: &BoundArgs, check: BoundCheck<E>, exec: &E) -> Result<()> {
    let cfg = a.run.resolve(RunConfig::default())?;
    let grid = cfg.to_grid()?;
    if let Some(n) = a.random {
        let opts = bound_options(&cfg, true);
        let mut reports = Vec::new();
        for case in suites::bound_cases(n, a.seed) {
            reports.push(check(&case.boundary, &case.source, case.alpha, &grid, &opts, exec)?);
        }
        return emit_reports(&cfg, &reports, false);
    }
    let (fstar, g, alpha) = if a.sharp_case {
        (BoundaryData::zero(), SourceField::constant(Complex64::new(-1.0, 0.0)), Alpha::new(0.0)?)
    } else {
        (a.problem.boundary()?, a.problem.source()?, cfg.alpha()?)
    };
    let rep = check(&fstar, &g, alpha, &grid, &bound_options(&cfg, a.auto_center), exec)?;
    emit_reports(&cfg, &[rep], true)
}

type HarmonicCheck<E> = fn(&BoundaryData, &Grid, &BoundOptions, &E) -> alphakit_core::Result<VerificationReport>;

fn run_harmonic<E: Executor>(a: &HarmonicArgs, check: HarmonicCheck<E>, exec: &E) -> Result<()> {
    let cfg = a.run.resolve(RunConfig::default())?;
    let grid = cfg.to_grid()?;
    let opts = bound_options(&cfg, false);
    match (&a.boundary, a.random) {
        (Some(p), _) => {
            let fstar = read_json_file::<BoundaryFile>(p)?.to_boundary()?;
            let rep = check(&fstar, &grid, &opts, exec)?;
            emit_reports(&cfg, &[rep], true)
        }
        (None, Some(n)) => {
            let mut r = suites::rng(a.seed);
            let mut reports = Vec::with_capacity(n);
            for _ in 0..n {
                let fstar = suites::random_centered_self_map(&mut r);
                reports.push(check(&fstar, &grid, &opts, exec)?);
            }
            emit_reports(&cfg, &reports, false)
        }
        (None, None) => Err(CliError::Invalid("needs --boundary or --random".into())),
    }
}

fn residual_config(cfg: &RunConfig) -> ResidualConfig {
    let d = ResidualConfig::default();
    ResidualConfig { tolerance: cfg.tolerance_or(d.tolerance), ..d }
}

fn default_alpha_one() -> RunConfig {
    RunConfig { alpha: 1.0, ..RunConfig::default() }
}

fn run_composition<E: Executor>(a: &CompositionArgs, exec: &E) -> Result<()> {
    let cfg = a.run.resolve(default_alpha_one())?;
    let grid = cfg.to_grid()?;
    let rc = residual_config(&cfg);
    let psi = &a.psi.0;
    let rep = match (&a.coeffs, &a.example1) {
        (_, Some(k)) => {
            let e = Example1Function::new(parse_example1(k)?, cfg.alpha()?)?;
            verify_composition_field(&e, e.alpha(), true, psi, &grid, &rc, exec)?
        }
        (Some(p), None) => {
            let s = read_json_file::<CoefficientFile>(p)?.to_series()?;
            verify_composition(&s, psi, &grid, &rc, exec)?
        }
        (None, None) => {
            let s = AlphaHarmonicSeries::new(
                cfg.alpha()?,
                CoefficientSequence::new([(-1, Complex64::new(1.0, 0.0))]),
            );
            verify_composition(&s, psi, &grid, &rc, exec)?
        }
    };
    emit_reports(&cfg, &[rep], true)
}

fn run_bergman<E: Executor>(a: &BergmanArgs, exec: &E) -> Result<()> {
    let base = RunConfig { grid: GridSpec::Polar { radial: 20, angular: 64 }, r_max: 0.999, ..default_alpha_one() };
    let cfg = a.run.resolve(base)?;
    let s = match &a.coeffs {
        Some(p) => read_json_file::<CoefficientFile>(p)?.to_series()?,
        None => AlphaHarmonicSeries::new(
            cfg.alpha()?,
            CoefficientSequence::new([(1, Complex64::new(0.3, 0.0)), (-1, Complex64::new(0.3, 0.0))]),
        ),
    };
    let mut params = BergmanParams::new(a.p)?;
    params.radii = a.radii.clone();
    params.grid = cfg.to_grid()?;
    if let Some(t) = cfg.tolerance {
        params.tolerance = t;
    }
    let rep = bergman_membership_check(&s, s.alpha(), &params, exec)?;
    emit_reports(&cfg, &[rep], true)
}

pub fn cmd_verify<E: Executor>(a: &VerifyArgs, exec: &E) -> Result<()> {
    match &a.check {
        VerifyCommand::Schwarz(b) => run_bound(b, verify_schwarz::<E>, exec),
        VerifyCommand::SchwarzPick(b) => run_bound(b, verify_schwarz_pick::<E>, exec),
        VerifyCommand::Heinz(h) => run_harmonic(h, verify_heinz::<E>, exec),
        VerifyCommand::Colonna(h) => run_harmonic(h, verify_colonna::<E>, exec),
        VerifyCommand::Composition(c) => run_composition(c, exec),
        VerifyCommand::Bergman(b) => run_bergman(b, exec),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn clap_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn complex_args() {
        assert_eq!("0.5".parse::<ComplexArg>().unwrap().0, Complex64::new(0.5, 0.0));
        assert_eq!("-0.5, 0.25".parse::<ComplexArg>().unwrap().0, Complex64::new(-0.5, 0.25));
        assert!("a,b".parse::<ComplexArg>().is_err());
    }

    #[test]
    fn psi_specs() {
        assert!("rotation:1.1".parse::<PsiSpec>().unwrap().0.is_rotation(1e-12));
        assert_eq!("square".parse::<PsiSpec>().unwrap().0, Polynomial::power(2));
        assert_eq!("dilation:0.5".parse::<PsiSpec>().unwrap().0, Polynomial::dilation(Complex64::new(0.5, 0.0)));
        assert_eq!("identity".parse::<PsiSpec>().unwrap().0, Polynomial::identity());
        for bad in ["power:0", "rotation", "spin:1", "square:2"] {
            assert!(bad.parse::<PsiSpec>().is_err(), "{bad}");
        }
        assert_eq!(parse_example1("k=3").unwrap(), 3);
        assert_eq!(parse_example1("2").unwrap(), 2);
        assert!(parse_example1("k=x").is_err());
    }

    #[test]
    fn flags_override_config() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.json");
        std::fs::write(&path, r#"{"alpha": 2.0, "radial_order": 32, "r_max": 0.5}"#).unwrap();
        let args = RunArgs { config: Some(path), r_max: Some(0.8), ..RunArgs::default() };
        let c = args.resolve(RunConfig::default()).unwrap();
        assert_eq!((c.alpha, c.radial_order, c.r_max), (2.0, 32, 0.8));
        let bad = RunArgs { alpha: Some(-2.0), ..RunArgs::default() };
        assert!(matches!(bad.resolve(RunConfig::default()), Err(CliError::Invalid(_))));
    }

    #[test]
    fn broadcasting() {
        assert_eq!(broadcast(&[1], &[2, 3], "x").unwrap(), vec![(1, 2), (1, 3)]);
        assert_eq!(broadcast(&[1, 2], &[3, 4], "x").unwrap(), vec![(1, 3), (2, 4)]);
        assert!(broadcast(&[1, 2], &[3, 4, 5], "x").is_err());
    }
}
