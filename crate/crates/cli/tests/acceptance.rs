//! One line per acceptance criterion; exits nonzero if any fails.

use std::process::Command;
use std::time::Instant;

use dunkl_core::validation::{run_criterion, Check, CriterionOutcome, Scale};

const SEED: u64 = 1;

/// `validate --suite quick` run as a separate process under two worker
/// counts must produce identical bytes.
fn determinism() -> CriterionOutcome {
    let run = |workers: &str| {
        Command::new(env!("CARGO_BIN_EXE_dunkl"))
            .args(["validate", "--suite", "quick", "--seed", &SEED.to_string()])
            .env("DUNKL_WORKERS", workers)
            .output()
            .expect("dunkl runs")
    };
    let a = run("1");
    let b = run("4");
    let in_process = run_criterion(14, Scale::Quick, SEED);
    let mut checks = vec![
        Check::at_most("quick suite exit status", if a.status.success() { 0.0 } else { 1.0 }, 0.0),
        Check::at_most(
            "stdout differs between 1 and 4 workers",
            if a.stdout == b.stdout && !a.stdout.is_empty() { 0.0 } else { 1.0 },
            0.0,
        ),
    ];
    match in_process {
        Ok(o) => checks.extend(o.checks),
        Err(e) => checks.push(Check::at_most(format!("in-process rerun: {e}"), 1.0, 0.0)),
    }
    CriterionOutcome::new(14, "determinism", checks)
}

fn main() {
    let mut failed = 0;
    for id in 1..=14u32 {
        let start = Instant::now();
        let outcome = if id == 14 {
            determinism()
        } else {
            run_criterion(id, Scale::Full, SEED).unwrap_or_else(|e| {
                CriterionOutcome::new(id, "error", vec![Check::at_most(e.to_string(), 1.0, 0.0)])
            })
        };
        if !outcome.passed {
            failed += 1;
        }
        println!("{} [{:.1} s]", outcome.summary_line(), start.elapsed().as_secs_f64());
    }
    println!("acceptance: {} of 14 criteria passed", 14 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
