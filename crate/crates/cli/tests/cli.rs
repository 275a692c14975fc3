use std::path::PathBuf;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_dunkl");

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("dunkl-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn write_config(name: &str, body: &str) -> PathBuf {
    let p = scratch(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn dunkl(args: &[&str], workers: Option<&str>) -> Output {
    let mut cmd = Command::new(BIN);
    cmd.args(args);
    match workers {
        Some(w) => cmd.env("DUNKL_WORKERS", w),
        None => cmd.env_remove("DUNKL_WORKERS"),
    };
    cmd.output().unwrap()
}

const DISC: &str = r#"
[roots]
family = "z2"
dim = 2
multiplicities = [0.5, 0.5]

[domain]
kind = "ball"
center = [0.0, 0.0]
radius = 1.0

[sim]
paths = 400
seed = 9

[solve]
points = [[0.3, 0.2], [-0.2, -0.4]]
boundary = { kind = "coord", index = 1 }
"#;

#[test]
fn solve_writes_the_documented_header() {
    let cfg = write_config("header.toml", DISC);
    let out = dunkl(&["solve", "-c", cfg.to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x1,x2,estimate,std_error,n_paths"));
    assert!(lines.next().unwrap().starts_with("0.3,0.2,"));
    assert_eq!(text.lines().count(), 3);
    assert!(String::from_utf8(out.stderr).unwrap().starts_with("solve: 2 point(s)"));
}

#[test]
fn output_does_not_depend_on_worker_count() {
    let cfg = write_config("workers.toml", DISC);
    let mut files = Vec::new();
    for w in ["1", "3", "8"] {
        let path = scratch(&format!("workers-{w}.csv"));
        let out = dunkl(&["solve", "-c", cfg.to_str().unwrap(), "-o", path.to_str().unwrap()], Some(w));
        assert_eq!(out.status.code(), Some(0));
        files.push(std::fs::read(&path).unwrap());
    }
    assert_eq!(files[0], files[1]);
    assert_eq!(files[0], files[2]);
}

#[test]
fn seed_flag_overrides_the_config() {
    let cfg = write_config("seed.toml", DISC);
    let run = |seed: &str| dunkl(&["solve", "-c", cfg.to_str().unwrap(), "--seed", seed], None).stdout;
    assert_eq!(run("9"), dunkl(&["solve", "-c", cfg.to_str().unwrap()], None).stdout);
    assert_ne!(run("9"), run("10"));
}

#[test]
fn json_output_embeds_provenance() {
    let cfg = write_config("json.toml", DISC);
    let path = scratch("report.json");
    let out = dunkl(
        &["solve", "-c", cfg.to_str().unwrap(), "--format", "json", "-o", path.to_str().unwrap(), "--seed", "4"],
        None,
    );
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    assert_eq!(doc["seed"], 4);
    assert_eq!(doc["n_paths"], 400);
    assert_eq!(doc["dt_base"], 1e-3);
    assert_eq!(doc["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(doc["config_echo"]["sim"]["seed"], 4);
    assert_eq!(doc["estimates"].as_array().unwrap().len(), 2);
}

#[test]
fn non_positive_lambda_exits_with_code_two() {
    let cfg = write_config(
        "lambda.toml",
        &DISC
            .replace("dim = 2\nmultiplicities = [0.5, 0.5]", "dim = 1\nmultiplicities = [0.3]")
            .replace("center = [0.0, 0.0]", "center = [0.0]")
            .replace("[[0.3, 0.2], [-0.2, -0.4]]", "[[0.5]]"),
    );
    let out = dunkl(&["solve", "-c", cfg.to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains('λ') && err.contains("-0.2"), "{err}");
    assert!(out.stdout.is_empty());
}

#[test]
fn points_outside_the_domain_exit_with_code_two() {
    let cfg = write_config("outside.toml", &DISC.replace("[-0.2, -0.4]", "[1.2, 0.0]"));
    let out = dunkl(&["solve", "-c", cfg.to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn malformed_input_exits_with_code_one() {
    let cfg = write_config("typo.toml", &DISC.replace("radius", "radus"));
    assert_eq!(dunkl(&["solve", "-c", cfg.to_str().unwrap()], None).status.code(), Some(1));
    assert_eq!(dunkl(&["solve"], None).status.code(), Some(1));
    assert_eq!(dunkl(&["validate", "--suite", "huge"], None).status.code(), Some(1));
    let missing = scratch("does-not-exist.toml");
    assert_eq!(dunkl(&["solve", "-c", missing.to_str().unwrap()], None).status.code(), Some(1));
    assert_eq!(dunkl(&["--help"], None).status.code(), Some(0));
}

#[test]
fn trace_and_other_subcommands() {
    let trace = scratch("trace.csv");
    let body = format!(
        "{DISC}\n[output]\ntrace = {:?}\ntrace_paths = 2\n",
        trace.to_str().unwrap()
    )
    .replace("[solve]", "[probe]\nz = [0.6, 0.8]\nt_list = [0.01, 0.1]\n\n[simulate]\nx0 = [0.3, 0.2]\nt_end = 0.1\n\n[occupation]\nr = 1.0\nx = [0.3, 0.2]\n\n[solve]");
    let cfg = write_config("all.toml", &body);
    let c = cfg.to_str().unwrap();
    let out = dunkl(&["solve", "-c", c], None);
    assert_eq!(out.status.code(), Some(0));
    let t = std::fs::read_to_string(&trace).unwrap();
    assert!(t.starts_with("path_index,t,x1,x2,jumped_root_or_none\n"));
    assert!(t.lines().any(|l| l.starts_with("1,")));

    let sim = String::from_utf8(dunkl(&["simulate", "-c", c], None).stdout).unwrap();
    assert!(sim.starts_with("statistic,t_end,estimate,std_error,closed_form,n_paths\nnorm_sq,"));
    let occ = String::from_utf8(dunkl(&["occupation", "-c", c], None).stdout).unwrap();
    assert!(occ.starts_with("r,x_norm,mc_estimate,closed_form,std_error\n"));
    let probe = String::from_utf8(dunkl(&["probe", "-c", c], None).stdout).unwrap();
    assert!(probe.starts_with("t,prob_exit_le_t,std_error\n0.01,"));
}
