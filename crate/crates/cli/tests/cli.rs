use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn lpsnn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lpsnn"))
        .args(args)
        .env("RUST_LOG", "warn")
        .output()
        .unwrap()
}

fn write_config(dir: &Path, body: &str) -> String {
    let path = dir.join("cfg.toml");
    fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn train_eval_trace_audit_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "task = \"xor\"\n[ga]\npopulation_size = 20\nmax_generations = 5\n",
    );
    let out = dir.path().join("run");
    let out_s = out.to_str().unwrap();

    let o = lpsnn(&["train-xor", "--config", &cfg, "--seed", "4", "--out", out_s]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(String::from_utf8_lossy(&o.stdout).contains("3-5-1"));
    let genome = out.join("seed-4/genome.txt");
    assert!(genome.is_file());

    let o = lpsnn(&[
        "eval",
        "--config",
        &cfg,
        "--genome",
        genome.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let stdout = String::from_utf8_lossy(&o.stdout).to_string();
    let runs = fs::read_to_string(out.join("runs.csv")).unwrap();
    let stored_mse = runs.lines().nth(1).unwrap().split(',').nth(2).unwrap();
    assert!(stdout.contains(&format!("mse {stored_mse}\n")), "{stdout}");

    let trace = dir.path().join("trace.csv");
    let svg = dir.path().join("trace.svg");
    let o = lpsnn(&[
        "trace",
        "--config",
        &cfg,
        "--genome",
        genome.to_str().unwrap(),
        "--pattern",
        "2",
        "--out",
        trace.to_str().unwrap(),
        "--svg",
        svg.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(trace.is_file() && svg.is_file());

    let o = lpsnn(&["audit", "--out", out_s]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stdout));
}

#[test]
fn invalid_config_fails_with_all_problems_listed() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "task = \"xor\"\narchitecture = [4, 2, 1]\n[sim]\nthreshold = 2.0\n[ga]\nmutation_rate = 2.0\n",
    );
    let o = lpsnn(&[
        "train-xor",
        "--config",
        &cfg,
        "--out",
        dir.path().join("x").to_str().unwrap(),
    ]);
    assert!(!o.status.success());
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(
        err.contains("inputs") && err.contains("threshold") && err.contains("mutation_rate"),
        "{err}"
    );
    assert!(!dir.path().join("x").exists());
}

#[test]
fn missing_files_fail_with_their_paths() {
    let o = lpsnn(&["train-xor", "--config", "/no/such/config.toml"]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("/no/such/config.toml"));

    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "task = \"xor\"\n");
    let o = lpsnn(&["eval", "--config", &cfg, "--genome", "/no/such/genome.txt"]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("/no/such/genome.txt"));
}

#[test]
fn oracle_subcommand_writes_the_optimum() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "task = \"xor\"\narchitecture = [3, 1]\n");
    let best = dir.path().join("best.txt");
    let o = lpsnn(&["oracle", "--config", &cfg, "--out", best.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(String::from_utf8_lossy(&o.stdout).contains("global optimum over 18 bits"));
    let o = lpsnn(&[
        "oracle",
        "--config",
        &cfg,
        "--compare",
        best.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stdout).contains("== optimum"));
}
