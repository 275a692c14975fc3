//! Command-line front end: `solve`, `simulate`, `occupation`, `probe` and
//! `validate`.
//!
//! Exit codes: 0 success, 1 configuration or runtime error, 2 failed
//! mathematical precondition, 3 failed validation check.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod boundary;
pub mod config;
pub mod error;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use dunkl_core::dirichlet::{regularity_probe, solve_dirichlet};
use dunkl_core::kernels::occupation_time_ball;
use dunkl_core::linalg::norm;
use dunkl_core::process::{occupation_time_mc, simulate_to_time, simulate_with_trace, write_trace_csv};
use dunkl_core::stats::{par_map_indexed, MeanEstimate};
use dunkl_core::validation::{run_suite, suite_csv, Scale, ALL_CRITERIA};
use serde_json::json;

use crate::boundary::boundary_field;
use crate::config::{check_point, Format, RunConfig};
use crate::error::{CliError, CliResult};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Parser)]
#[command(name = "dunkl", version, about = "Monte Carlo Dirichlet solver for the Dunkl Laplacian")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Estimate the Dirichlet solution at the configured points.
    Solve(TaskArgs),
    /// Moment statistics of the free process at a fixed time.
    Simulate(TaskArgs),
    /// Occupation time of a centered ball, against its closed form.
    Occupation(TaskArgs),
    /// Exit probabilities from a boundary point.
    Probe(TaskArgs),
    /// Run the acceptance suite and print one line per criterion.
    Validate(ValidateArgs),
}

#[derive(Debug, Args)]
pub struct TaskArgs {
    /// TOML run configuration.
    #[arg(short, long)]
    pub config: PathBuf,
    /// Overrides `sim.seed`.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Overrides `output.path`.
    #[arg(short, long)]
    pub output: Option<String>,
    /// Overrides `output.format`.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[arg(long, default_value = "quick")]
    pub suite: Scale,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Also write the per-check table here.
    #[arg(short, long)]
    pub output: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

/// Parses `argv` (including the program name), runs the command and
/// returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        // keep piped data clean
        Ok(summary) if summary.ends_with("-> stdout") => {
            eprintln!("{summary}");
            0
        }
        Ok(summary) => {
            println!("{summary}");
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cmd: Command) -> CliResult<String> {
    match cmd {
        Command::Solve(a) => solve(&prepare(&a)?),
        Command::Simulate(a) => simulate(&prepare(&a)?),
        Command::Occupation(a) => occupation(&prepare(&a)?),
        Command::Probe(a) => probe(&prepare(&a)?),
        Command::Validate(a) => validate(&a),
    }
}

/// Loads the config and applies command-line overrides.
fn prepare(a: &TaskArgs) -> CliResult<RunConfig> {
    let mut cfg = RunConfig::load(&a.config)?;
    if let Some(seed) = a.seed {
        cfg.sim.seed = seed;
    }
    if let Some(out) = &a.output {
        cfg.output.path = Some(out.clone());
    }
    if let Some(f) = a.format {
        cfg.output.format = f;
    }
    cfg.sim.validate()?;
    Ok(cfg)
}

fn echo(cfg: &RunConfig) -> serde_json::Value {
    serde_json::to_value(cfg).expect("config serializes")
}

fn emit(cfg: &RunConfig, csv: &str, json: &serde_json::Value) -> CliResult<String> {
    let body = match cfg.output.format {
        Format::Csv => csv.to_string(),
        Format::Json => format!("{}\n", serde_json::to_string_pretty(json).expect("json serializes")),
    };
    write_output(cfg.output.path.as_deref(), &body)
}

/// Writes to `path`, or to standard output when there is none. Returns
/// where the data went, for the summary line.
fn write_output(path: Option<&str>, body: &str) -> CliResult<String> {
    match path {
        Some(p) => {
            std::fs::write(p, body).map_err(|e| CliError::io(p, e))?;
            Ok(p.to_string())
        }
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(body.as_bytes()).map_err(|e| CliError::io("stdout", e))?;
            Ok("stdout".into())
        }
    }
}

fn provenance(cfg: &RunConfig) -> serde_json::Value {
    json!({
        "seed": cfg.sim.seed,
        "dt_base": cfg.sim.dt_base,
        "paths": cfg.sim.paths,
        "version": VERSION,
        "config": echo(cfg),
    })
}

fn solve(cfg: &RunConfig) -> CliResult<String> {
    let task = cfg
        .solve
        .as_ref()
        .ok_or_else(|| CliError::Config("`solve` needs a [solve] section".into()))?;
    let sys = cfg.root_system()?;
    let domain = cfg.domain(sys.dim())?;
    for p in &task.points {
        check_point("evaluation point", p, sys.dim())?;
        if !domain.contains(p) {
            return Err(CliError::Precondition(format!("evaluation point {p:?} is not inside the domain")));
        }
    }
    if task.points.is_empty() {
        return Err(CliError::Config("`solve.points` is empty".into()));
    }
    let f = boundary_field(&task.boundary, &sys)?;
    let mut report = solve_dirichlet(&sys, &domain, &f, &task.points, &cfg.sim)?;
    report.version = VERSION.to_string();
    report.config_echo = Some(echo(cfg));
    let dest = emit(cfg, &report.to_csv(), &report.to_json())?;
    if let Some(trace) = &cfg.output.trace {
        let mut rows = Vec::new();
        for j in 0..cfg.output.trace_paths.min(cfg.sim.paths) {
            rows.extend(simulate_with_trace(&sys, &domain, &task.points[0], &cfg.sim, j)?.1);
        }
        let mut buf = Vec::new();
        write_trace_csv(&rows, sys.dim(), &mut buf).map_err(|e| CliError::io(trace, e))?;
        std::fs::write(trace, buf).map_err(|e| CliError::io(trace, e))?;
    }
    if !report.w_invariant {
        eprintln!("warning: the domain is not W-invariant, so the estimate need not be the unique Dirichlet solution");
    }
    Ok(format!(
        "solve: {} point(s), {} paths each, seed {} -> {dest}",
        report.points.len(),
        cfg.sim.paths,
        cfg.sim.seed
    ))
}

fn simulate(cfg: &RunConfig) -> CliResult<String> {
    let task = cfg
        .simulate
        .as_ref()
        .ok_or_else(|| CliError::Config("`simulate` needs a [simulate] section".into()))?;
    let sys = cfg.root_system()?;
    let d = sys.dim();
    check_point("x0", &task.x0, d)?;
    if !(task.t_end > 0.0) {
        return Err(CliError::Config(format!("t_end must be positive, got {}", task.t_end)));
    }
    let states = par_map_indexed(cfg.sim.paths, |j| simulate_to_time(&sys, &task.x0, task.t_end, &cfg.sim, j))?;
    let x0_sq: f64 = task.x0.iter().map(|v| v * v).sum();
    let mut rows: Vec<(String, MeanEstimate, Option<f64>)> = Vec::new();
    let norm_sq: Vec<f64> = states.iter().map(|s| s.position.iter().map(|v| v * v).sum()).collect();
    rows.push((
        "norm_sq".into(),
        MeanEstimate::from_samples(&norm_sq),
        Some(x0_sq + (d as f64 + 2.0 * sys.gamma()) * task.t_end),
    ));
    for i in 0..d {
        let xi: Vec<f64> = states.iter().map(|s| s.position[i]).collect();
        rows.push((format!("x{}", i + 1), MeanEstimate::from_samples(&xi), None));
    }
    let jumps: Vec<f64> = states.iter().map(|s| s.total_jumps() as f64).collect();
    rows.push(("jumps".into(), MeanEstimate::from_samples(&jumps), None));

    let mut csv = String::from("statistic,t_end,estimate,std_error,closed_form,n_paths\n");
    for (name, est, exact) in &rows {
        let exact = exact.map_or(String::new(), |v| format!("{v:.12e}"));
        csv.push_str(&format!(
            "{name},{},{:.12e},{:.6e},{exact},{}\n",
            task.t_end, est.mean, est.std_error, est.n
        ));
    }
    let json_rows: Vec<_> = rows
        .iter()
        .map(|(name, est, exact)| {
            json!({"statistic": name, "t_end": task.t_end, "estimate": est.mean,
                   "std_error": est.std_error, "closed_form": exact, "n_paths": est.n})
        })
        .collect();
    let mut doc = provenance(cfg);
    doc["rows"] = json!(json_rows);
    let dest = emit(cfg, &csv, &doc)?;
    Ok(format!(
        "simulate: {} paths to t = {}, seed {} -> {dest}",
        cfg.sim.paths, task.t_end, cfg.sim.seed
    ))
}

fn occupation(cfg: &RunConfig) -> CliResult<String> {
    let task = cfg
        .occupation
        .as_ref()
        .ok_or_else(|| CliError::Config("`occupation` needs an [occupation] section".into()))?;
    let sys = cfg.root_system()?;
    check_point("x", &task.x, sys.dim())?;
    let x_norm = norm(&task.x);
    if !(task.r > 0.0) || x_norm > task.r {
        return Err(CliError::Precondition(format!(
            "start point with |x| = {x_norm} is not in the closed ball of radius {}",
            task.r
        )));
    }
    let exact = occupation_time_ball(&sys, task.r, &task.x)?;
    let samples = par_map_indexed(cfg.sim.paths, |j| {
        occupation_time_mc(&sys, task.r, &task.x, task.escape, &cfg.sim, j)
    })?;
    let est = MeanEstimate::from_samples(&samples);
    let csv = format!(
        "r,x_norm,mc_estimate,closed_form,std_error\n{},{},{:.12e},{:.12e},{:.6e}\n",
        task.r, x_norm, est.mean, exact, est.std_error
    );
    let mut doc = provenance(cfg);
    doc["rows"] = json!([{"r": task.r, "x_norm": x_norm, "mc_estimate": est.mean,
                           "closed_form": exact, "std_error": est.std_error}]);
    let dest = emit(cfg, &csv, &doc)?;
    Ok(format!(
        "occupation: {:.6} ± {:.6} (closed form {exact:.6}), {} paths, seed {} -> {dest}",
        est.mean, est.std_error, cfg.sim.paths, cfg.sim.seed
    ))
}

fn probe(cfg: &RunConfig) -> CliResult<String> {
    let task = cfg
        .probe
        .as_ref()
        .ok_or_else(|| CliError::Config("`probe` needs a [probe] section".into()))?;
    let sys = cfg.root_system()?;
    let domain = cfg.domain(sys.dim())?;
    check_point("probe point", &task.z, sys.dim())?;
    if domain.contains(&task.z) || !domain.in_closure(&task.z, 1e-9) {
        return Err(CliError::Precondition(format!("probe point {:?} is not on the boundary", task.z)));
    }
    let rows = regularity_probe(&sys, &domain, &task.z, &task.t_list, &cfg.sim)?;
    let mut csv = String::from("t,prob_exit_le_t,std_error\n");
    for (t, est) in &rows {
        csv.push_str(&format!("{t},{:.12e},{:.6e}\n", est.mean, est.std_error));
    }
    let mut doc = provenance(cfg);
    doc["rows"] = json!(rows
        .iter()
        .map(|(t, e)| json!({"t": t, "prob_exit_le_t": e.mean, "std_error": e.std_error}))
        .collect::<Vec<_>>());
    let dest = emit(cfg, &csv, &doc)?;
    Ok(format!(
        "probe: {} time(s), {} paths, seed {} -> {dest}",
        rows.len(),
        cfg.sim.paths,
        cfg.sim.seed
    ))
}

fn validate(a: &ValidateArgs) -> CliResult<String> {
    let outcomes = run_suite(a.suite, a.seed, &ALL_CRITERIA)?;
    for o in &outcomes {
        println!("{}", o.summary_line());
    }
    if let Some(path) = &a.output {
        let body = match a.format {
            Format::Csv => suite_csv(&outcomes),
            Format::Json => format!(
                "{}\n",
                serde_json::to_string_pretty(&json!({"suite": a.suite, "seed": a.seed, "version": VERSION, "criteria": outcomes}))
                    .expect("json serializes")
            ),
        };
        write_output(Some(path), &body)?;
    }
    let failed: Vec<String> = outcomes
        .iter()
        .filter(|o| !o.passed)
        .flat_map(|o| {
            o.checks
                .iter()
                .filter(|c| !c.passed)
                .map(move |c| format!("criterion {} check `{}`", o.id, c.label))
        })
        .collect();
    if !failed.is_empty() {
        return Err(CliError::Validation(failed.join("; ")));
    }
    Ok(format!("validate: {} criteria passed", outcomes.len()))
}
