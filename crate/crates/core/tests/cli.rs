use std::process::Command;

use rcga::harness::{cli, parse_csv};

fn call(args: &[&str]) -> (i32, String, String) {
    let mut argv = vec!["rcga"];
    argv.extend_from_slice(args);
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = cli(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

#[test]
fn run_prints_summary() {
    let (code, out, _) = call(&[
        "run",
        "--n",
        "50",
        "--r",
        "3",
        "--k",
        "300",
        "--fitness",
        "r-onemax",
        "--seed",
        "7",
    ]);
    assert_eq!(code, 0);
    let get = |key: &str| {
        out.lines()
            .find_map(|l| l.strip_prefix(&format!("{key}: ")))
            .unwrap_or_else(|| panic!("missing {key} in {out}"))
            .to_string()
    };
    assert_eq!(get("status"), "optimum-sampled");
    let its: u64 = get("iterations").parse().unwrap();
    assert_eq!(get("evaluations").parse::<u64>().unwrap(), 2 * its);
}

#[test]
fn run_writes_trace() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("trace.csv");
    let p = path.to_str().unwrap();
    let (code, out, _) = call(&[
        "run",
        "--n",
        "6",
        "--r",
        "3",
        "--k",
        "12",
        "--seed",
        "2",
        "--trace",
        p,
        "--full-trace",
    ]);
    assert_eq!(code, 0, "{out}");
    let text = std::fs::read_to_string(&path).unwrap();
    let its: usize = out
        .lines()
        .find_map(|l| l.strip_prefix("iterations: "))
        .unwrap()
        .parse()
        .unwrap();
    assert_eq!(
        text.lines().filter(|l| !l.starts_with("d,")).count(),
        its + 1
    );
}

#[test]
fn usage_errors_exit_nonzero() {
    let (code, _, err) = call(&["sweep", "--n", "5", "--bogus"]);
    assert_eq!(code, 2);
    assert!(err.contains("--bogus"));
    assert_eq!(call(&["run", "--n", "5", "--r", "3", "--k", "10"]).0, 1);
    assert_eq!(call(&["frobnicate"]).0, 2);
    assert_eq!(
        call(&[
            "run",
            "--n",
            "5",
            "--r",
            "3",
            "--k",
            "9",
            "--fitness",
            "leading-ones"
        ])
        .0,
        2
    );
    assert_eq!(call(&["conjecture", "--reps", "0"]).0, 1);
    assert_eq!(call(&["--help"]).0, 0);
}

#[test]
fn sweep_reports_skipped_cells_and_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let (code, out, _) = call(&[
        "sweep", "--n", "10", "--r", "3,4", "--k", "12:24:4", "--reps", "4", "--seed", "1",
        "--out", d, "--quiet",
    ]);
    assert_eq!(code, 0);
    assert!(out.contains("skipped: r=3 K=16"));
    assert!(out.contains("skipped: r=3 K=20"));
    assert!(!out.contains("skipped: r=4"));
    let r3 = std::fs::read_to_string(dir.path().join("r-onemax-n10-r3.csv")).unwrap();
    let rows = parse_csv(&r3).unwrap();
    assert_eq!(rows.iter().map(|r| r.k).collect::<Vec<_>>(), vec![12, 24]);
    let r4 = parse_csv(&std::fs::read_to_string(dir.path().join("r-onemax-n10-r4.csv")).unwrap())
        .unwrap();
    assert_eq!(
        r4.iter().map(|r| r.k).collect::<Vec<_>>(),
        vec![12, 16, 20, 24]
    );
}

#[test]
fn verify_quick_passes() {
    let dir = tempfile::tempdir().unwrap();
    let (code, out, _) = call(&[
        "verify",
        "--preset",
        "quick",
        "--report-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{out}");
    assert_eq!(out.lines().filter(|l| l.starts_with("PASS")).count(), 7);
    let reports = std::fs::read_dir(dir.path()).unwrap().count();
    assert_eq!(reports, 7);
}

#[test]
fn bounds_table_prints_grid() {
    let (code, out, _) = call(&[
        "bounds", "--n", "10,20", "--r", "2", "--k", "400", "--t", "100",
    ]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 3);
    assert!(out.contains("3.8575e-22"));
}

#[test]
fn binary_honours_out_dir_env() {
    let dir = tempfile::tempdir().unwrap();
    let status = Command::new(env!("CARGO_BIN_EXE_rcga"))
        .args([
            "sweep", "--n", "4", "--r", "2", "--k", "4", "--reps", "2", "--quiet",
        ])
        .env("RCGA_OUT_DIR", dir.path())
        .env("RCGA_WORKERS", "2")
        .output()
        .unwrap();
    assert!(status.status.success());
    assert!(dir.path().join("r-onemax-n4-r2.csv").exists());

    let bad = Command::new(env!("CARGO_BIN_EXE_rcga"))
        .args([
            "sweep", "--n", "4", "--r", "2", "--k", "4", "--reps", "2", "--quiet",
        ])
        .env("RCGA_OUT_DIR", dir.path())
        .env("RCGA_WORKERS", "zero")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(1));
}
