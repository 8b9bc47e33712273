use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_chartheta"));
    c.env_remove("CHARTHETA_WORKERS").env("SOURCE_DATE_EPOCH", "0");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn data_rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split(',').map(str::to_owned).collect())
        .collect()
}

#[test]
fn help_exits_zero() {
    let o = run(&["--help"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("theta-moment"));
}

#[test]
fn bad_modulus_is_a_usage_error() {
    let o = run(&["theta-moment", "--q", "0", "--k", "1", "--parity", "even"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("q must be >= 3"), "{}", stderr(&o));
    let o = run(&["bound-eval", "--q", "16", "--k", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains(">= 17"));
}

#[test]
fn unknown_flag_prints_usage() {
    let o = run(&["theta-moment", "--q", "5", "--k", "1", "--colour"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("Usage"));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
}

#[test]
fn runtime_failure_exits_one() {
    // the output directory cannot be created below a regular file
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("plain");
    std::fs::write(&file, "x").unwrap();
    let target = file.join("reports");
    let o = run(&["--output-dir", target.to_str().unwrap(), "char-table", "--q", "7"]);
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
}

#[test]
fn theta_moment_is_byte_identical_and_correct() {
    let args = ["theta-moment", "--q", "5", "--k", "1", "--parity", "even"];
    let a = run(&args);
    let b = bin().args(args).env("CHARTHETA_WORKERS", "3").output().unwrap();
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let rows = data_rows(&stdout(&a));
    assert_eq!(rows[0].join(","), "q,k,parity,raw,normalization,ratio,eps,family_size");
    let raw: f64 = rows[1][3].parse().unwrap();
    // theta of the quadratic character mod 5, squared
    assert!((raw - 0.201_626_245_292_795_65).abs() < 1e-10);
}

fn golden(name: &str, args: &[&str]) {
    let o = run(args);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, &o.stdout).unwrap();
    }
    let expected = std::fs::read_to_string(&path).unwrap();
    assert_eq!(stdout(&o), expected, "{name} drifted");
}

#[test]
fn csv_schemas_match_golden_files() {
    golden("char_table.csv", &["char-table", "--q", "12"]);
    golden("theta_moment.csv", &["theta-moment", "--q", "5", "--k", "1", "--parity", "even"]);
    golden("theta_scan.csv", &["theta-scan", "--prime-range", "20:40", "--k", "2", "--parity", "odd"]);
    golden("l_moment.csv", &["l-moment", "--q", "11", "--k", "1"]);
    golden("shifted_moment.csv", &["shifted-moment", "--q", "17", "--shifts", "-0.5,0.5"]);
    golden(
        "large_values.csv",
        &["large-values", "--q", "17", "--shifts", "0,0", "--vmin", "-3", "--vmax", "3", "--vsteps", "7"],
    );
    golden("mellin_check.csv", &["mellin-check", "--q", "5", "--height", "8", "--step", "0.015625"]);
    golden("bound_eval.csv", &["bound-eval", "--q", "1009", "--shifts", "0,0.005,1,3", "--V", "12"]);
    golden("lemma_cos.csv", &["lemma-cos", "--z", "10000", "--a", "0,0.01,2"]);
    golden("rand_model.csv", &["rand-model", "--q", "11", "--k", "1", "--samples", "200", "--seed", "4"]);
}

#[test]
fn config_file_layers() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");

    std::fs::write(&cfg, "").unwrap();
    let o = run(&["--config", cfg.to_str().unwrap(), "--format", "json", "l-moment", "--q", "11", "--k", "1"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["config"]["tol"], 1e-10);

    std::fs::write(&cfg, "tol=1e-12\nformat=json\n").unwrap();
    let o = run(&["--config", cfg.to_str().unwrap(), "l-moment", "--q", "11", "--k", "1"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["config"]["tol"], 1e-12);

    // flags beat the file
    let o = run(&["--config", cfg.to_str().unwrap(), "--tol", "1e-9", "l-moment", "--q", "11", "--k", "1"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["config"]["tol"], 1e-9);
    assert_eq!(v["timestamp"], 0);

    std::fs::write(&cfg, "workers=0\n").unwrap();
    let o = run(&["--config", cfg.to_str().unwrap(), "l-moment", "--q", "11", "--k", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("workers"));

    std::fs::write(&cfg, "seed=1\nnot a pair\n").unwrap();
    let o = run(&["--config", cfg.to_str().unwrap(), "l-moment", "--q", "11", "--k", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 2"), "{}", stderr(&o));

    std::fs::write(&cfg, "colour=blue\n").unwrap();
    let o = run(&["--config", cfg.to_str().unwrap(), "l-moment", "--q", "11", "--k", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn worker_flag_beats_environment() {
    let o = bin()
        .args(["--workers", "2", "--format", "json", "l-moment", "--q", "11", "--k", "1"])
        .env("CHARTHETA_WORKERS", "5")
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["config"]["workers"], 2);
    let o = bin()
        .args(["--format", "json", "l-moment", "--q", "11", "--k", "1"])
        .env("CHARTHETA_WORKERS", "5")
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["config"]["workers"], 5);
}

#[test]
fn rand_model_replays_across_worker_counts() {
    let args = ["rand-model", "--q", "101", "--k", "2", "--samples", "500", "--seed", "9"];
    let one = bin().args(args).env("CHARTHETA_WORKERS", "1").output().unwrap();
    let four = bin().args(args).env("CHARTHETA_WORKERS", "4").output().unwrap();
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn output_dir_receives_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["--output-dir", dir.path().to_str().unwrap(), "char-table", "--q", "7"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(dir.path().join("char-table.csv")).unwrap();
    assert_eq!(data_rows(&text).len(), 7);
}
