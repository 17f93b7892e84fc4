use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn qkmi(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qkmi"))
        .args(args)
        .output()
        .expect("spawn qkmi")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write_columns(dir: &Path) -> String {
    let path = dir.join("data.csv");
    fs::write(
        &path,
        "x,y,z\n0.1,0.2,5\n0.5,0.6,1\n0.9,1.1,-2\n1.3,1.2,0.3\n-0.4,-0.5,2\n2.0,2.1,0.0\n",
    )
    .unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn estimate_prints_one_value() {
    let dir = tempfile::tempdir().unwrap();
    let csv = write_columns(dir.path());
    for extra in [
        &[][..],
        &["--criterion", "smi"],
        &["--kernel", "quantum", "--activation", "none"],
    ] {
        let mut args = vec!["estimate", csv.as_str()];
        args.extend_from_slice(extra);
        let out = qkmi(&args);
        assert_eq!(out.status.code(), Some(0), "{extra:?}");
        let v: f64 = stdout(&out).trim().parse().unwrap();
        assert!(v >= 0.0 && v.is_finite());
    }
}

#[test]
fn estimate_selects_columns_by_name_and_index() {
    let dir = tempfile::tempdir().unwrap();
    let csv = write_columns(dir.path());
    let by_name = stdout(&qkmi(&["estimate", &csv, "--x", "y", "--y", "z"]));
    let by_index = stdout(&qkmi(&["estimate", &csv, "--x", "1", "--y", "2"]));
    assert_eq!(by_name, by_index);
    let missing = qkmi(&["estimate", &csv, "--y", "nope"]);
    assert_eq!(missing.status.code(), Some(1));
}

#[test]
fn test_subcommand_emits_verdict_json() {
    let out = qkmi(&["test", "--samples", "20", "--seed", "3", "--model", "poly"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let verdict = &v["verdict"];
    let slack = verdict["slack"].as_f64().unwrap();
    assert_eq!(verdict["success"].as_bool().unwrap(), slack > 0.0);
    assert_eq!(v["cell"]["scenario"]["samples"], 20);
    assert_eq!(v["cell"]["scenario"]["model"]["form"], "poly");
    assert_eq!(v["base_seed"], 3);

    // Same inputs, same verdict.
    let again = qkmi(&["test", "--samples", "20", "--seed", "3", "--model", "poly"]);
    assert_eq!(out.stdout, again.stdout);
}

#[test]
fn test_subcommand_rejects_grids() {
    let out = qkmi(&["test", "--samples", "10,20"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("single value"));
}

#[test]
fn sweep_writes_reports() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("reports");
    let out = qkmi(&[
        "sweep",
        "--model",
        "linear,periodic",
        "--samples",
        "10",
        "--kernel",
        "gaussian,quantum",
        "--trials",
        "5",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let csv = fs::read_to_string(out_dir.join("report.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 4);
    assert_eq!(stdout(&out), csv);
    assert!(out_dir.join("report.json").exists());
    assert!(out_dir.join("plot.csv").exists());
}

#[test]
fn experiment_flags_override_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(
        &cfg,
        "# small run\nmodel = linear\nsamples = 10, 30\ntrials = 4\nkappa = 0.05\nseed = 9\n",
    )
    .unwrap();
    let out = qkmi(&["experiment", cfg.to_str().unwrap(), "--samples", "10"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = stdout(&out);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 1);
    assert!(rows[0].starts_with("gaussian,1,linear,100,10,"));
    assert!(rows[0].ends_with(",4,9"));

    let matching = qkmi(&[
        "sweep",
        "--model",
        "linear",
        "--samples",
        "10",
        "--trials",
        "4",
        "--kappa",
        "0.05",
        "--seed",
        "9",
    ]);
    assert_eq!(matching.stdout, out.stdout);
}

#[test]
fn exit_codes() {
    assert_eq!(qkmi(&["--help"]).status.code(), Some(0));
    assert_eq!(qkmi(&["--version"]).status.code(), Some(0));
    assert_eq!(qkmi(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(qkmi(&["sweep", "--kappa", "-1"]).status.code(), Some(1));
    assert_eq!(qkmi(&["sweep", "--kernel", "svm"]).status.code(), Some(1));
    assert_eq!(
        qkmi(&["estimate", "/no/such/file.csv"]).status.code(),
        Some(1)
    );
    assert_eq!(
        qkmi(&["experiment", "/no/such/run.cfg"]).status.code(),
        Some(1)
    );
    assert_eq!(
        qkmi(&["test", "--kernel", "quantum", "--qubits", "40"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn numerical_failure_exits_with_two() {
    // A regularizer this large overflows the squared diagonal blocks.
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("same.csv");
    fs::write(&path, "a,b\n1,1\n1,1\n1,1\n").unwrap();
    let out = qkmi(&["estimate", path.to_str().unwrap(), "--kappa", "1e200"]);
    assert_eq!(
        out.status.code(),
        Some(2),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}
