use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::cli::config::{parse_config, Config};
use crate::cli::selftest::run_selftest;
use crate::harness::{run_sweep_with_jobs, sharpness_search, Arithmetic, ReportSet};
use crate::inequalities::montgomery_residual;
use crate::scalar::{format_sig12, Rational, Scalar};
use crate::Error;

/// Exit code: everything held.
pub const EXIT_OK: i32 = 0;
/// Exit code: usage, config or I/O error.
pub const EXIT_ERROR: i32 = 1;
/// Exit code: at least one violation.
pub const EXIT_VIOLATION: i32 = 2;

/// Environment variable with `tol_quad=..,tol_ineq=..` overrides.
pub const TOL_ENV: &str = "TSINEQ_TOL_OVERRIDE";

#[derive(Parser, Debug)]
#[command(name = "tsineq", version, about = "Ostrowski-type inequalities on time scales")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the Montgomery identity on every scenario of a plan.
    CheckIdentity(Common),
    /// Evaluate the configured scenarios and print one line per report.
    Eval(Common),
    /// Run a full sweep and print the JSON summary.
    Sweep(Common),
    /// Search for the largest lhs/rhs ratio.
    Sharpness(Common),
    /// Run the built-in oracle table.
    Selftest,
}

#[derive(Args, Debug)]
struct Common {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out_csv: Option<PathBuf>,
    #[arg(long)]
    out_json: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = 0)]
    jobs: usize,
}

/// Runs the command line `argv` (program name first) and returns the exit
/// code. Output goes to `out`, diagnostics to `err`.
pub fn run_cli_with(argv: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    let res = match cli.command {
        Command::Selftest => Ok(run_selftest(out)),
        Command::CheckIdentity(c) => load(&c).and_then(|cfg| check_identity(&cfg, out)),
        Command::Eval(c) => load(&c).and_then(|cfg| sweep(&cfg, c.jobs, out, true)),
        Command::Sweep(c) => load(&c).and_then(|cfg| sweep(&cfg, c.jobs, out, false)),
        Command::Sharpness(c) => load(&c).and_then(|cfg| sharpness(&cfg, out)),
    };
    match res {
        Ok(code) => code,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_ERROR
        }
    }
}

/// [`run_cli_with`] on the process's stdout and stderr.
pub fn run_cli(argv: &[String]) -> i32 {
    run_cli_with(argv, &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}

type CliResult = std::result::Result<i32, String>;

fn load(c: &Common) -> std::result::Result<Config, String> {
    let text = std::fs::read_to_string(&c.config).map_err(|e| format!("{}: {e}", c.config.display()))?;
    let mut cfg = parse_config(&text).map_err(|e| format!("{}: {e}", c.config.display()))?;
    if let Ok(over) = std::env::var(TOL_ENV) {
        let t = &mut cfg.plan.eval.tolerances;
        *t = t.with_overrides(&over).map_err(|e| format!("{TOL_ENV}: {e}"))?;
    }
    if let Some(seed) = c.seed {
        cfg.plan.seed = seed;
    }
    if c.out_csv.is_some() {
        cfg.out_csv.clone_from(&c.out_csv);
    }
    if c.out_json.is_some() {
        cfg.out_json.clone_from(&c.out_json);
    }
    Ok(cfg)
}

fn check_identity(cfg: &Config, out: &mut dyn Write) -> CliResult {
    let generated = cfg.plan.generate().map_err(|e| e.to_string())?;
    let opts = &cfg.plan.eval;
    let mut max = 0f64;
    let mut errors = 0usize;
    for spec in &generated.scenarios {
        let r = match spec.resolved_arithmetic() {
            Arithmetic::Exact => {
                spec.build::<Rational>().and_then(|s| montgomery_residual(&s, opts)).map(|v| v.to_f64())
            }
            _ => spec.build::<f64>().and_then(|s| montgomery_residual(&s, opts)),
        };
        match r {
            Ok(v) => max = max.max(v),
            Err(e) => {
                errors += 1;
                let _ = writeln!(out, "skipped {}: {e}", spec.describe());
            }
        }
    }
    let tol = opts.tolerances.tol_quad;
    let ok = max < tol;
    let _ = writeln!(
        out,
        "identity: scenarios={} errors={} max_residual={} {}",
        generated.scenarios.len(),
        errors,
        format_sig12(max),
        if ok { "OK" } else { "FAILED" }
    );
    Ok(if ok { EXIT_OK } else { EXIT_VIOLATION })
}

fn write_outputs(cfg: &Config, set: &ReportSet) -> std::result::Result<(), String> {
    if let Some(p) = &cfg.out_csv {
        set.write_csv(p).map_err(|e| e.to_string())?;
    }
    if let Some(p) = &cfg.out_json {
        set.write_json(p).map_err(|e| e.to_string())?;
    }
    Ok(())
}

fn sweep(cfg: &Config, jobs: usize, out: &mut dyn Write, per_report: bool) -> CliResult {
    let jobs = if jobs == 0 { std::thread::available_parallelism().map_or(1, |n| n.get()) } else { jobs };
    let set = run_sweep_with_jobs(&cfg.plan, jobs).map_err(|e| e.to_string())?;
    if per_report {
        for e in &set.reports {
            let c = &e.report.context;
            let _ = writeln!(
                out,
                "{} {} x={} λ={}: {}",
                e.report.theorem_id,
                c.scale,
                format_sig12(c.x),
                format_sig12(c.lambda),
                e.report.summary_line()
            );
        }
    }
    for f in &set.failures {
        let _ = writeln!(out, "error in scenario {} ({}): {}", f.scenario_id, f.theorem, f.error);
    }
    write_outputs(cfg, &set)?;
    let _ = writeln!(out, "{}", set.summary_json());
    Ok(if set.n_violations() > 0 { EXIT_VIOLATION } else { EXIT_OK })
}

fn sharpness(cfg: &Config, out: &mut dyn Write) -> CliResult {
    let tol = cfg.plan.eval.tolerances.tol_ineq;
    let mut code = EXIT_OK;
    for &th in &cfg.plan.theorems {
        match sharpness_search(&cfg.plan, th) {
            Ok(res) => {
                let _ = writeln!(
                    out,
                    "{th}: best_ratio={} at x={} λ={} ({})",
                    format_sig12(res.best_ratio),
                    format_sig12(res.argmax.x),
                    format_sig12(res.argmax.lambda),
                    res.argmax.scenario
                );
                if res.is_violation(tol) {
                    code = EXIT_VIOLATION;
                }
            }
            Err(Error::AllDegenerate) => {
                let _ = writeln!(out, "{th}: every rhs is zero, ratio undefined");
            }
            Err(e) => return Err(e.to_string()),
        }
    }
    Ok(code)
}
