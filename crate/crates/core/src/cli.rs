//! Command-line front end: convergence studies, dimension tables, and
//! single solves with optional matrix/kernel dumps.
//!
//! Exit codes: 0 on success, 2 for invalid configuration, 3 when the linear
//! solver cannot reach its residual tolerance, 4 when a kernel dimension
//! check fails, 1 for I/O problems.

use crate::analysis::{eoc, error_report, ErrorReport, Problem};
use crate::mesh::Mesh;
use crate::solver::solve_bordered;
use crate::stokes_dg::{build_system, DGSpace, LoadData, SparseSystem};
use crate::trefftz::{build_embedding, condense, local_full_dim, local_kernel_dim};
use crate::{Error, Result};
use clap::{Parser, Subcommand, ValueEnum};
use nalgebra::DVector;
use std::fmt;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum Method {
    /// Interior-penalty discretization solved in the full space.
    Dg,
    /// The same operator condensed onto elementwise equation kernels.
    Trefftz,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Dg => "dg",
            Method::Trefftz => "trefftz",
        })
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "stokes-trefftz",
    version,
    about = "Discontinuous Galerkin Stokes solver with an embedded equation-kernel reduction"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run a mesh-refinement study and emit the error table as CSV.
    Convergence(ConvergenceArgs),
    /// Print per-element dimension counts and verify them numerically.
    CheckDims(CheckDimsArgs),
    /// Solve one configuration and print its diagnostics as key=value lines.
    Solve(SolveArgs),
}

#[derive(clap::Args, Debug)]
pub struct ConvergenceArgs {
    /// Discretizations to run; repeat the flag to select several.
    #[arg(long = "method", default_values_t = vec![Method::Dg, Method::Trefftz])]
    pub method: Vec<Method>,
    /// Velocity degrees to run; repeat the flag to select several.
    #[arg(long = "k", default_values_t = vec![2usize, 3, 4])]
    pub k: Vec<usize>,
    /// Mesh subdivisions per side, comma separated.
    #[arg(long, value_delimiter = ',', default_values_t = vec![2usize, 4, 8, 16])]
    pub levels: Vec<usize>,
    #[arg(long, default_value_t = 1.0)]
    pub nu: f64,
    /// Interior penalty is alpha_scale * k^2 / h per facet.
    #[arg(long, default_value_t = 10.0)]
    pub alpha_scale: f64,
    /// Benchmark problem: vortex, taylor-patch, or zero.
    #[arg(long, default_value = "vortex")]
    pub problem: String,
    /// Write the CSV here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(clap::Args, Debug)]
pub struct CheckDimsArgs {
    /// Largest degree to tabulate.
    #[arg(long, default_value_t = 6)]
    pub k_max: usize,
}

#[derive(clap::Args, Debug)]
pub struct SolveArgs {
    #[arg(long)]
    pub method: Method,
    #[arg(long)]
    pub k: usize,
    /// Mesh subdivisions per side.
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 1.0)]
    pub nu: f64,
    #[arg(long, default_value_t = 10.0)]
    pub alpha_scale: f64,
    #[arg(long, default_value = "vortex")]
    pub problem: String,
    /// Dump the solved bordered operator as "row col value" triplets.
    #[arg(long)]
    pub dump_matrix: Option<PathBuf>,
    /// Dump per-element constraint ranks and kernel dimensions as CSV.
    #[arg(long)]
    pub dump_kernel_dims: Option<PathBuf>,
}

/// One solve described by plain values, shared by both subcommands.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub method: Method,
    pub k: usize,
    pub n: usize,
    pub nu: f64,
    pub alpha_scale: f64,
    pub problem: String,
}

/// Everything a finished run exposes to callers and reports.
pub struct RunOutcome {
    pub method: Method,
    pub report: ErrorReport,
    pub lambda: f64,
    pub algebraic_residual: f64,
    /// Solution coefficients in the full element layout.
    pub coeffs: DVector<f64>,
}

/// Assembles, solves, and measures a single configuration.
pub fn run_single(cfg: &RunConfig) -> Result<RunOutcome> {
    let mesh = Mesh::structured(cfg.n)?;
    let space = DGSpace::new(&mesh, cfg.k)?;
    let problem = Problem::by_name(&cfg.problem, cfg.nu)?;
    let alpha = cfg.alpha_scale * (cfg.k * cfg.k) as f64;
    let f = |p| problem.forcing(p);
    let g = |p| problem.divergence_source(p);
    let dirichlet = |p| problem.dirichlet(p);
    let data = LoadData {
        f: &f,
        g: &g,
        dirichlet: &dirichlet,
    };
    let system = build_system(&space, &data, cfg.nu, alpha);
    let ndof_full = space.n_dofs() + 1;
    let ndof_condensed = mesh.n_elements() * local_kernel_dim(cfg.k, 2) + 1;

    let (coeffs, lambda, residual) = match cfg.method {
        Method::Dg => {
            let sol = solve_bordered(&system)?;
            (sol.coeffs, sol.lambda, sol.relative_residual)
        }
        Method::Trefftz => {
            let emb = build_embedding(&space, &data, cfg.nu)?;
            let cond = condense(&system, &emb);
            let sol = solve_bordered(&cond)?;
            (emb.recover(&sol.coeffs), sol.lambda, sol.relative_residual)
        }
    };
    let report = error_report(&space, &problem, &coeffs, ndof_full, ndof_condensed);
    Ok(RunOutcome {
        method: cfg.method,
        report,
        lambda,
        algebraic_residual: residual,
        coeffs,
    })
}

/// Column header of the study CSV; kept verbatim so downstream parsing can
/// rely on it.
pub const CSV_HEADER: &str = "method,k,nu,n,h,ndof_full,ndof_condensed,ul2error,pl2error,u1h_error,p0h_error,momentum_residual,div_residual";

fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// Formats one study row; floats carry 17 significant digits so reruns can
/// be compared bytewise.
pub fn csv_row(method: Method, r: &ErrorReport) -> String {
    format!(
        "{},{},{},{},{},{},{},{},{},{},{},{},{}",
        method,
        r.k,
        fmt_float(r.nu),
        r.n,
        fmt_float(r.h),
        r.ndof_full,
        r.ndof_condensed,
        fmt_float(r.ul2_error),
        fmt_float(r.pl2_error),
        fmt_float(r.u1h_error),
        fmt_float(r.p0h_error),
        fmt_float(r.momentum_residual),
        fmt_float(r.div_residual),
    )
}

/// Runs the full cartesian study in deterministic row order: method, then
/// degree, then refinement level.
pub fn run_study(args: &ConvergenceArgs) -> Result<Vec<RunOutcome>> {
    let mut methods = args.method.clone();
    methods.sort();
    methods.dedup();
    let mut ks = args.k.clone();
    ks.sort();
    ks.dedup();
    let mut levels = args.levels.clone();
    levels.sort();
    levels.dedup();
    if ks.is_empty() || levels.is_empty() || methods.is_empty() {
        return Err(Error::InvalidArgument(
            "the study needs at least one method, degree, and level".into(),
        ));
    }
    let mut rows = Vec::new();
    for &method in &methods {
        for &k in &ks {
            for &n in &levels {
                let started = std::time::Instant::now();
                let outcome = run_single(&RunConfig {
                    method,
                    k,
                    n,
                    nu: args.nu,
                    alpha_scale: args.alpha_scale,
                    problem: args.problem.clone(),
                })?;
                eprintln!(
                    "{method} k={k} n={n}: solved {} unknowns in {:.1}s",
                    if method == Method::Dg {
                        outcome.report.ndof_full
                    } else {
                        outcome.report.ndof_condensed
                    },
                    started.elapsed().as_secs_f64()
                );
                rows.push(outcome);
            }
        }
    }
    Ok(rows)
}

/// Renders the study as CSV with LF line endings.
pub fn study_csv(rows: &[RunOutcome]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&csv_row(row.method, &row.report));
        out.push('\n');
    }
    out
}

/// Convergence-rate summary across refinement levels, grouped by method and
/// degree, for the velocity and pressure errors.
pub fn study_rates(rows: &[RunOutcome]) -> String {
    let mut out = String::new();
    let mut groups: Vec<(Method, usize)> = rows.iter().map(|r| (r.method, r.report.k)).collect();
    groups.dedup();
    for (method, k) in groups {
        let series: Vec<&RunOutcome> = rows
            .iter()
            .filter(|r| r.method == method && r.report.k == k)
            .collect();
        if series.len() < 2 {
            continue;
        }
        let collect = |pick: &dyn Fn(&ErrorReport) -> f64| {
            let samples: Vec<(f64, f64)> =
                series.iter().map(|r| (r.report.h, pick(&r.report))).collect();
            eoc(&samples)
                .iter()
                .map(|r| format!("{r:.2}"))
                .collect::<Vec<_>>()
                .join(" ")
        };
        let _ = writeln!(
            out,
            "{method} k={k}: u_l2 rates [{}], p_l2 rates [{}]",
            collect(&|r| r.ul2_error),
            collect(&|r| r.pl2_error),
        );
    }
    out
}

fn cmd_convergence(args: &ConvergenceArgs) -> Result<()> {
    let rows = run_study(args)?;
    let csv = study_csv(&rows);
    eprint!("{}", study_rates(&rows));
    match &args.out {
        Some(path) => std::fs::write(path, csv)?,
        None => print!("{csv}"),
    }
    Ok(())
}

fn cmd_check_dims(args: &CheckDimsArgs) -> Result<()> {
    if args.k_max < 1 {
        return Err(Error::InvalidArgument("k-max must be at least 1".into()));
    }
    let mut out = String::new();
    let _ = writeln!(out, "{:>2} {:>2} {:>6} {:>8} {:>7}", "d", "k", "full", "reduced", "ratio");
    for d in [2u32, 3] {
        for k in 1..=args.k_max {
            let full = local_full_dim(k, d);
            let reduced = local_kernel_dim(k, d);
            let _ = writeln!(
                out,
                "{:>2} {:>2} {:>6} {:>8} {:>7.3}",
                d,
                k,
                full,
                reduced,
                reduced as f64 / full as f64
            );
        }
    }
    print!("{out}");

    // Numeric cross-check: build the kernels on a real mesh and let the
    // embedding verify every element's dimension.
    let mesh = Mesh::structured(2)?;
    let data = LoadData {
        f: &|_| nalgebra::Vector2::zeros(),
        g: &|_| 0.0,
        dirichlet: &|_| nalgebra::Vector2::zeros(),
    };
    let verified = args.k_max.min(4);
    for k in 1..=verified {
        let space = DGSpace::new(&mesh, k)?;
        build_embedding(&space, &data, 1.0)?;
    }
    println!("verified numerically on the 2x2 mesh for d=2, k <= {verified}");
    Ok(())
}

fn dump_matrix(system: &SparseSystem, path: &Path) -> Result<()> {
    let border = system.matrix.n();
    let mut entries: Vec<(usize, usize, f64)> = system
        .matrix
        .to_triplets()
        .into_iter()
        .filter(|t| t.2 != 0.0)
        .collect();
    for (j, &v) in system.constraint.iter().enumerate() {
        if v != 0.0 {
            entries.push((border, j, v));
            entries.push((j, border, v));
        }
    }
    entries.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
    let mut w = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(w, "{} {}", system.n_total(), entries.len())?;
    for (i, j, v) in entries {
        writeln!(w, "{i} {j} {}", fmt_float(v))?;
    }
    Ok(())
}

fn cmd_solve(args: &SolveArgs) -> Result<()> {
    let cfg = RunConfig {
        method: args.method,
        k: args.k,
        n: args.n,
        nu: args.nu,
        alpha_scale: args.alpha_scale,
        problem: args.problem.clone(),
    };
    let outcome = run_single(&cfg)?;

    if args.dump_matrix.is_some() || args.dump_kernel_dims.is_some() {
        // Rebuild the solved operator; dumps are rare and solves are cheap
        // compared to keeping every intermediate alive.
        let mesh = Mesh::structured(cfg.n)?;
        let space = DGSpace::new(&mesh, cfg.k)?;
        let problem = Problem::by_name(&cfg.problem, cfg.nu)?;
        let f = |p| problem.forcing(p);
        let g = |p| problem.divergence_source(p);
        let dirichlet = |p| problem.dirichlet(p);
        let data = LoadData {
            f: &f,
            g: &g,
            dirichlet: &dirichlet,
        };
        let alpha = cfg.alpha_scale * (cfg.k * cfg.k) as f64;
        let system = build_system(&space, &data, cfg.nu, alpha);
        if let Some(path) = &args.dump_kernel_dims {
            if cfg.method != Method::Trefftz {
                return Err(Error::InvalidArgument(
                    "--dump-kernel-dims requires --method trefftz".into(),
                ));
            }
            let emb = build_embedding(&space, &data, cfg.nu)?;
            let mut w = std::io::BufWriter::new(std::fs::File::create(path)?);
            writeln!(w, "element,rank,kernel_dim")?;
            for e in 0..emb.n_elements() {
                writeln!(w, "{e},{},{}", emb.rank(e), emb.kernel_dim())?;
            }
        }
        if let Some(path) = &args.dump_matrix {
            match cfg.method {
                Method::Dg => dump_matrix(&system, path)?,
                Method::Trefftz => {
                    let emb = build_embedding(&space, &data, cfg.nu)?;
                    dump_matrix(&condense(&system, &emb), path)?;
                }
            }
        }
    }

    let r = &outcome.report;
    println!("method={}", outcome.method);
    println!("problem={}", cfg.problem);
    println!("k={}", r.k);
    println!("n={}", r.n);
    println!("nu={}", fmt_float(r.nu));
    println!("h={}", fmt_float(r.h));
    println!("ndof_full={}", r.ndof_full);
    println!("ndof_condensed={}", r.ndof_condensed);
    println!("lambda={}", fmt_float(outcome.lambda));
    println!("algebraic_residual={}", fmt_float(outcome.algebraic_residual));
    println!("ul2_error={}", fmt_float(r.ul2_error));
    println!("pl2_error={}", fmt_float(r.pl2_error));
    println!("u1h_error={}", fmt_float(r.u1h_error));
    println!("p0h_error={}", fmt_float(r.p0h_error));
    println!("momentum_residual={}", fmt_float(r.momentum_residual));
    println!("div_residual={}", fmt_float(r.div_residual));
    Ok(())
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidArgument(_) => 2,
        Error::SolverFailure(_) => 3,
        Error::DimensionMismatch(_) | Error::AmbiguousRank(_) => 4,
        Error::Io(_) => 1,
    }
}

/// Parses arguments, dispatches, and returns the process exit code.
pub fn main() -> i32 {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Convergence(args) => cmd_convergence(args),
        Command::CheckDims(args) => cmd_check_dims(args),
        Command::Solve(args) => cmd_solve(args),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
