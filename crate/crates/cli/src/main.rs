//! `relfix`: verify, solve and explore coincidence problems from instance files.

mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use sha2::{Digest, Sha256};

use relfix::catalog::{CATALOG_LISTING, COROLLARY3_LISTING};
use relfix::fuzz::{sweep, FuzzConfig};
use relfix::instance::{
    canonical_json, parse, ContinuousSpec, FiniteSpec, InstanceFile, UrysohnSpec,
};
use relfix::relation::find_g_path;
use relfix::sampled::{verify_sampled, SampledSystem};
use relfix::solver::{
    error_bounds, find_start, iterate, promote_to_common_fixed_point, Certificate, CertificateKind,
    CoincidenceSystem, FiniteSystem, IterationTrace, SolveError,
};
use relfix::urysohn::{check_h, default_samples, solve as solve_urysohn, UrysohnError};
use relfix::verify::{verify, Rank, VerifyError};

use report::{CertificateRow, Exit, RunReport, TraceRow, VerdictRow};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReportFormat {
    Text,
    Machine,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Required {
    Coincidence,
    PointOfCoincidenceUnique,
    CommonFixedPointUnique,
}

impl Required {
    fn rank(self) -> Rank {
        match self {
            Required::Coincidence => Rank::Coincidence,
            Required::PointOfCoincidenceUnique => Rank::PointOfCoincidenceUnique,
            Required::CommonFixedPointUnique => Rank::CommonFixedPointUnique,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "relfix",
    version,
    about = "Coincidence points of relation-preserving mapping pairs"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "text")]
    report: ReportFormat,
    /// Stopping tolerance; overrides the instance file.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Iteration cap; overrides the instance file.
    #[arg(long, global = true)]
    max_iter: Option<usize>,
    /// Seed for the random sweep.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Grid size N for integral equations; overrides the instance file.
    #[arg(long, global = true)]
    grid: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check every hypothesis and report the conclusion rank.
    Verify {
        path: PathBuf,
        /// Rank needed for exit status 0.
        #[arg(long, value_enum, default_value = "coincidence")]
        require: Required,
    },
    /// Run the coincidence iteration and certify its limit.
    Solve {
        path: PathBuf,
        /// Start point (a label for finite instances, a number otherwise).
        #[arg(long)]
        x0: Option<String>,
    },
    /// Search for a g-path joining two points of a finite instance.
    Path {
        path: PathBuf,
        alpha: String,
        beta: String,
        /// Drop the interior condition on witnesses.
        #[arg(long)]
        plain: bool,
        /// Longest path considered; defaults to the number of points.
        #[arg(long)]
        max_len: Option<usize>,
    },
    /// Check the integral-equation conditions and solve on the grid.
    Urysohn {
        path: PathBuf,
        /// Write the solution as `t,u` lines.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List the implicit relations and explicit conditions.
    Catalog,
    /// Random-instance soundness sweep.
    Fuzz {
        /// Seed file; defaults apply without one.
        config: Option<PathBuf>,
        #[arg(long)]
        instances: Option<usize>,
    },
}

type Outcome = (RunReport, Exit);

fn input_error(mut report: RunReport, msg: impl ToString) -> Outcome {
    report.error = Some(msg.to_string());
    report.finish(Exit::Input)
}

fn load(path: &Path, report: &mut RunReport) -> Result<InstanceFile, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let file = parse(&text).map_err(|e| e.to_string())?;
    report.instance = Some(path.display().to_string());
    report.digest = Some(hex::encode(Sha256::digest(
        canonical_json(&file).as_bytes(),
    )));
    Ok(file)
}

fn trace_rows<P>(trace: &IterationTrace<P>, show: impl Fn(&P) -> String) -> Vec<TraceRow> {
    trace
        .x
        .iter()
        .zip(&trace.gx)
        .zip(&trace.residuals)
        .enumerate()
        .map(|(n, ((x, gx), &residual))| TraceRow {
            n,
            x: show(x),
            gx: show(gx),
            residual,
        })
        .collect()
}

fn certificate_row<P>(c: &Certificate<P>, show: impl Fn(&P) -> String) -> CertificateRow {
    CertificateRow {
        kind: c.kind.as_str(),
        point: show(&c.point),
        residual: c.residual,
        note: c.note.clone(),
    }
}

fn solve_error(mut report: RunReport, e: SolveError) -> Outcome {
    let exit = match e {
        SolveError::NonConvergence { .. } => Exit::NonConvergence,
        SolveError::MissingPreimage { .. } => Exit::Failure,
        _ => Exit::Input,
    };
    if let SolveError::NonConvergence { residuals, .. }
    | SolveError::MissingPreimage { residuals, .. } = &e
    {
        if let Some(last) = residuals.last() {
            report.fact("last residual", format!("{last:e}"));
        }
    }
    report.error = Some(e.to_string());
    report.finish(exit)
}

fn cmd_verify(cli: &Cli, path: &Path, require: Required) -> Outcome {
    let mut report = RunReport::new("verify");
    let file = match load(path, &mut report) {
        Ok(f) => f,
        Err(e) => return input_error(report, e),
    };
    let rank = match &file {
        InstanceFile::Finite(spec) => {
            let inst = match spec.build() {
                Ok((inst, _)) => inst,
                Err(e) => return input_error(report, e),
            };
            let result = match verify(&inst) {
                Ok(r) => r,
                Err(VerifyError::Inconsistent(msg)) => {
                    report.error = Some(format!("internal cross-check failed: {msg}"));
                    return report.finish(Exit::Failure);
                }
                Err(e) => return input_error(report, e),
            };
            report.verdicts = result.verdicts.iter().map(VerdictRow::from).collect();
            if let Some(sets) = &result.coincidence {
                let names = |v: &[usize]| {
                    v.iter()
                        .map(|&i| inst.space.label(i))
                        .collect::<Vec<_>>()
                        .join(", ")
                };
                report.fact("coincidence points", format!("{{{}}}", names(&sets.points)));
                report.fact(
                    "points of coincidence",
                    format!("{{{}}}", names(&sets.values)),
                );
                report.fact(
                    "common fixed points",
                    format!("{{{}}}", names(&sets.common_fixed_points)),
                );
            }
            if let Some(w) = result.contraction.as_ref().and_then(|c| c.worst.as_ref()) {
                report.fact(
                    "worst pair",
                    format!(
                        "({}, {}) gives {:.6}",
                        inst.space.label(w.x),
                        inst.space.label(w.y),
                        w.value
                    ),
                );
            }
            result.rank
        }
        InstanceFile::Continuous(spec) => {
            let inst = match spec.build() {
                Ok((inst, _)) => inst,
                Err(e) => return input_error(report, e),
            };
            let result = verify_sampled(&inst);
            report.verdicts = result.verdicts.iter().map(VerdictRow::from).collect();
            report.fact("sample points", inst.points().len());
            result.rank
        }
        InstanceFile::Urysohn(spec) => {
            let (problem, _) = match build_urysohn(cli, spec) {
                Ok(p) => p,
                Err(e) => return input_error(report, e),
            };
            let u0 = UrysohnSpec::grid_values(&problem, &spec.u0);
            let h = match check_h(&problem, &u0, &default_samples(&problem)) {
                Ok(h) => h,
                Err(e) => return input_error(report, e),
            };
            report.verdicts = h
                .entries
                .iter()
                .map(|e| VerdictRow::new(e.condition, e.status, e.witness.clone(), e.note.clone()))
                .collect();
            if h.accepted() {
                Rank::Coincidence
            } else {
                Rank::None
            }
        }
    };
    report.rank = Some(rank.as_str());
    let exit = if rank >= require.rank() {
        Exit::Ok
    } else {
        Exit::Failure
    };
    report.finish(exit)
}

fn resolve(cli: &Cli, file_tol: f64, file_max: usize) -> (f64, usize) {
    (
        cli.tol.unwrap_or(file_tol),
        cli.max_iter.unwrap_or(file_max),
    )
}

fn run_solver<S: CoincidenceSystem>(
    mut report: RunReport,
    system: &S,
    x0: S::Point,
    tol: f64,
    max_iter: usize,
    phi: Option<&relfix::catalog::ComparisonFunction>,
) -> Outcome {
    let (trace, cert) = match iterate(system, x0, tol, max_iter) {
        Ok(out) => out,
        Err(e) => return solve_error(report, e),
    };
    let show = |p: &S::Point| system.describe(p);
    report.trace = trace_rows(&trace, show);
    report.certificates.push(certificate_row(&cert, show));
    let value = system.apply_g(&cert.point);
    report.certificates.push(CertificateRow {
        kind: CertificateKind::PointOfCoincidence.as_str(),
        point: system.describe(&value),
        residual: cert.residual,
        note: "g w = T w".into(),
    });
    let cfp = promote_to_common_fixed_point(system, &cert.point, tol);
    report.certificates.push(certificate_row(&cfp, show));
    if let Some(phi) = phi {
        let bounds = error_bounds(system, &trace, phi);
        report.fact(
            "a priori bound",
            if bounds.holds { "holds" } else { "violated" },
        );
    }
    report.finish(Exit::Ok)
}

fn cmd_solve(cli: &Cli, path: &Path, x0_flag: Option<&str>) -> Outcome {
    let mut report = RunReport::new("solve");
    let file = match load(path, &mut report) {
        Ok(f) => f,
        Err(e) => return input_error(report, e),
    };
    match &file {
        InstanceFile::Finite(spec) => solve_finite(cli, report, spec, x0_flag),
        InstanceFile::Continuous(spec) => solve_continuous(cli, report, spec, x0_flag),
        InstanceFile::Urysohn(_) => {
            report.fact("hint", "use the urysohn subcommand");
            input_error(report, "solve takes finite or continuous instances")
        }
    }
}

fn solve_finite(
    cli: &Cli,
    mut report: RunReport,
    spec: &FiniteSpec,
    x0_flag: Option<&str>,
) -> Outcome {
    let (inst, opts) = match spec.build() {
        Ok(b) => b,
        Err(e) => return input_error(report, e),
    };
    let x0 = match x0_flag {
        Some(label) => match spec.index_of(label) {
            Ok(i) => Some(i),
            Err(e) => return input_error(report, e),
        },
        None => opts.x0,
    };
    let Some(x0) = x0.or_else(|| find_start(&inst.pair, &inst.relation)) else {
        report.error = Some("no start point: (gx, Tx) is in R for no x".into());
        return report.finish(Exit::Failure);
    };
    if !inst.relation.contains(inst.pair.g()[x0], inst.pair.t()[x0]) {
        report.fact(
            "warning",
            format!("(g x0, T x0) is not in R at x0 = {}", inst.space.label(x0)),
        );
    }
    let (tol, max_iter) = resolve(cli, opts.tol, opts.max_iter);
    let system = FiniteSystem {
        space: &inst.space,
        pair: &inst.pair,
    };
    let implicit = inst.contraction.relation();
    run_solver(report, &system, x0, tol, max_iter, implicit.phi())
}

fn solve_continuous(
    cli: &Cli,
    report: RunReport,
    spec: &ContinuousSpec,
    x0_flag: Option<&str>,
) -> Outcome {
    let (inst, opts) = match spec.build() {
        Ok(b) => b,
        Err(e) => return input_error(report, e),
    };
    let x0 = match x0_flag.map(str::parse::<f64>) {
        Some(Ok(x)) => x,
        Some(Err(e)) => return input_error(report, format!("--x0: {e}")),
        None => match opts.x0 {
            Some(x) => x,
            None => return input_error(report, "no x0 given"),
        },
    };
    if !inst.domain.contains(x0) {
        return input_error(report, format!("x0 = {x0} is outside the domain"));
    }
    let (tol, max_iter) = resolve(cli, opts.tol, opts.max_iter);
    run_solver(
        report,
        &SampledSystem(&inst),
        x0,
        tol,
        max_iter,
        inst.contraction.phi(),
    )
}

fn cmd_path(path: &Path, alpha: &str, beta: &str, plain: bool, max_len: Option<usize>) -> Outcome {
    let mut report = RunReport::new("path");
    let file = match load(path, &mut report) {
        Ok(f) => f,
        Err(e) => return input_error(report, e),
    };
    let InstanceFile::Finite(spec) = &file else {
        return input_error(report, "path search needs a finite instance");
    };
    let (inst, _) = match spec.build() {
        Ok(b) => b,
        Err(e) => return input_error(report, e),
    };
    let (a, b) = match (spec.index_of(alpha), spec.index_of(beta)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => return input_error(report, e),
    };
    let (t, g) = (inst.pair.t(), inst.pair.g());
    let limit = max_len.unwrap_or(inst.space.len()).max(1);
    let relation = inst.relation.symmetric_closure();
    report.fact("interior condition", !plain);
    match find_g_path(&relation, g, t, a, b, !plain, limit) {
        Ok(Some(p)) => {
            let hops: Vec<String> = p
                .witnesses
                .iter()
                .map(|&w| format!("{} (g = {})", inst.space.label(w), inst.space.label(g[w])))
                .collect();
            report.fact("length", p.length());
            report.fact("g-path", hops.join(" -> "));
            report.finish(Exit::Ok)
        }
        Ok(None) => {
            report.fact("g-path", format!("none of length <= {limit}"));
            report.finish(Exit::Failure)
        }
        Err(e) => {
            report.error = Some(e.to_string());
            report.finish(Exit::Failure)
        }
    }
}

fn build_urysohn(
    cli: &Cli,
    spec: &UrysohnSpec,
) -> Result<
    (
        relfix::urysohn::UrysohnProblem,
        relfix::instance::SolverOptions<f64>,
    ),
    String,
> {
    let mut spec = spec.clone();
    if let Some(n) = cli.grid {
        spec.grid_size = n;
    }
    spec.build().map_err(|e| e.to_string())
}

fn cmd_urysohn(cli: &Cli, path: &Path, out: Option<&Path>) -> Outcome {
    let mut report = RunReport::new("urysohn");
    let file = match load(path, &mut report) {
        Ok(f) => f,
        Err(e) => return input_error(report, e),
    };
    let InstanceFile::Urysohn(spec) = &file else {
        return input_error(report, "urysohn needs an urysohn instance");
    };
    if spec.grid_size > 0 && cli.grid.is_some() {
        report.fact("grid override", cli.grid.unwrap_or_default());
    }
    let (problem, opts) = match build_urysohn(cli, spec) {
        Ok(b) => b,
        Err(e) => return input_error(report, e),
    };
    let u0 = UrysohnSpec::grid_values(&problem, &spec.u0);
    let h = match check_h(&problem, &u0, &default_samples(&problem)) {
        Ok(h) => h,
        Err(e) => return input_error(report, e),
    };
    report.verdicts = h
        .entries
        .iter()
        .map(|e| VerdictRow::new(e.condition, e.status, e.witness.clone(), e.note.clone()))
        .collect();
    if !h.accepted() {
        report.error = Some("conditions H1-H5 are not all met".into());
        return report.finish(Exit::Failure);
    }
    let (tol, max_iter) = resolve(cli, opts.tol, opts.max_iter);
    let sol = match solve_urysohn(&problem, &u0, tol, max_iter) {
        Ok(s) => s,
        Err(UrysohnError::NonConvergence { steps, residuals }) => {
            report.fact(
                "last residual",
                format!("{:e}", residuals.last().copied().unwrap_or(f64::NAN)),
            );
            report.error = Some(format!("no convergence after {steps} steps"));
            return report.finish(Exit::NonConvergence);
        }
        Err(e) => {
            report.error = Some(e.to_string());
            return report.finish(Exit::Failure);
        }
    };
    report.fact("grid size", problem.grid_size);
    report.fact("iterations", sol.steps());
    let residuals: Vec<String> = sol.residuals.iter().map(|r| format!("{r:.3e}")).collect();
    report.fact("residuals", residuals.join(" "));
    report.fact(
        "final residual",
        format!("{:e}", sol.residuals.last().copied().unwrap_or(f64::NAN)),
    );
    if let Some(exact) = &spec.exact {
        let reference = UrysohnSpec::grid_values(&problem, exact);
        report.fact(
            "sup error vs exact",
            format!("{:e}", sol.u.sup_distance(&reference)),
        );
    }
    if let Some(out) = out {
        if let Err(e) = std::fs::write(out, sol.u.to_csv()) {
            return input_error(report, format!("{}: {e}", out.display()));
        }
        report.fact("solution", out.display());
    }
    report.finish(Exit::Ok)
}

fn cmd_catalog() -> Outcome {
    let mut report = RunReport::new("catalog");
    report.fact(
        "distances",
        "D = d(Tx,Ty), M = d(gx,gy), P = d(gx,Tx), Q = d(gy,Ty), S = d(gx,Ty), U = d(gy,Tx)",
    );
    report.fact(
        "implicit",
        "G(D, M, P, Q, S, U) <= 0 whenever (gx, gy) is in R",
    );
    for e in &CATALOG_LISTING {
        report.fact(&format!("{:>4}", e.id), format!("{}; {}", e.form, e.range));
    }
    report.fact("explicit", "the inequality holds whenever (gx, gy) is in R");
    for e in &COROLLARY3_LISTING {
        report.fact(&format!("({})", e.id), format!("{}; {}", e.form, e.range));
    }
    report.finish(Exit::Ok)
}

fn cmd_fuzz(cli: &Cli, config: Option<&Path>, instances: Option<usize>) -> Outcome {
    let mut report = RunReport::new("fuzz");
    let mut cfg = match config {
        Some(path) => {
            let parsed = std::fs::read_to_string(path)
                .map_err(|e| format!("{}: {e}", path.display()))
                .and_then(|t| serde_json::from_str::<FuzzConfig>(&t).map_err(|e| e.to_string()));
            match parsed {
                Ok(c) => c,
                Err(e) => return input_error(report, e),
            }
        }
        None => FuzzConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(n) = instances {
        cfg.instances = n;
    }
    if cfg.min_points == 0 || cfg.min_points > cfg.max_points {
        return input_error(report, "need 1 <= min_points <= max_points");
    }
    let summary = sweep(&cfg);
    report.fact("seed", summary.seed);
    report.fact("attempts", summary.attempts);
    report.fact("accepted", summary.accepted);
    report.fact(
        "bound violations",
        format!("{:?}", summary.bound_violations),
    );
    report.fact(
        "limit violations",
        format!("{:?}", summary.limit_violations),
    );
    report.fact("path exceptions", format!("{:?}", summary.path_exceptions));
    report.fact("inconsistencies", format!("{:?}", summary.inconsistencies));
    let exit = if summary.clean() && summary.accepted == cfg.instances {
        Exit::Ok
    } else {
        Exit::Failure
    };
    report.finish(exit)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() {
                Exit::Input as u8
            } else {
                Exit::Ok as u8
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let (report, exit) = match &cli.command {
        Command::Verify { path, require } => cmd_verify(&cli, path, *require),
        Command::Solve { path, x0 } => cmd_solve(&cli, path, x0.as_deref()),
        Command::Path {
            path,
            alpha,
            beta,
            plain,
            max_len,
        } => cmd_path(path, alpha, beta, *plain, *max_len),
        Command::Urysohn { path, out } => cmd_urysohn(&cli, path, out.as_deref()),
        Command::Catalog => cmd_catalog(),
        Command::Fuzz { config, instances } => cmd_fuzz(&cli, config.as_deref(), *instances),
    };
    match cli.report {
        ReportFormat::Text => {
            let text = report.render_text();
            if exit == Exit::Ok {
                print!("{text}");
            } else {
                print!("{text}");
                if let Some(e) = &report.error {
                    eprintln!("relfix: {e}");
                }
            }
        }
        ReportFormat::Machine => print!("{}", report.render_machine()),
    }
    ExitCode::from(exit as u8)
}
