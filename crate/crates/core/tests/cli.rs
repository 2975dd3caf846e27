use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn evrp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_evrp"))
        .args(args)
        .env_remove("EVRP_DATASET_DIR")
        .output()
        .expect("binary runs")
}

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
        .display()
        .to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn solve_then_validate() {
    let dir = tempfile::tempdir().unwrap();
    let sol = dir.path().join("sol.txt");
    let stats = dir.path().join("stats.csv");
    let inst = fixture("tiny-c6-s2.evrp");
    let out = evrp(&[
        "solve",
        &inst,
        "--evals",
        "3000",
        "--seed",
        "4",
        "-o",
        path_str(&sol),
        "--stats",
        path_str(&stats),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = fs::read_to_string(&sol).unwrap();
    assert_eq!(text.lines().nth(1), Some("292.69"));

    let out = evrp(&["validate", &inst, path_str(&sol)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "VALID, weight 292.69");

    let csv = fs::read_to_string(&stats).unwrap();
    assert_eq!(csv.lines().next(), Some("elapsed_s,evals,best_weight"));
    assert!(csv.lines().count() >= 2);
}

#[test]
fn solve_options() {
    let inst = fixture("medium-c30-s4.evrp");
    let cases: [&[&str]; 5] = [
        &["--setup", "VNS_zga_c:0_ls:000_p:3_r:0.5", "--evals", "500"],
        &[
            "--construction",
            "nn-fixed",
            "--ls",
            "111",
            "-p",
            "1",
            "-r",
            "0.2",
            "--evals",
            "500",
        ],
        &[
            "--construction",
            "c12",
            "--per-customer",
            "--evals-per-node",
            "20",
        ],
        &["--time-limit", "0.3"],
        &[
            "--time-budget-eq10",
            "--nu",
            "0.0001",
            "--cpu-ratio",
            "0.9305",
        ],
    ];
    for extra in cases {
        let args: Vec<&str> = ["solve", inst.as_str()]
            .iter()
            .copied()
            .chain(extra.iter().copied())
            .collect();
        let out = evrp(&args);
        assert!(
            out.status.success(),
            "{extra:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        assert_eq!(stdout(&out).lines().count(), 2);
    }
}

#[test]
fn identical_runs_give_identical_files() {
    let dir = tempfile::tempdir().unwrap();
    let inst = fixture("medium-c30-s4.evrp");
    let files: Vec<PathBuf> = (0..2)
        .map(|k| dir.path().join(format!("run{k}.txt")))
        .collect();
    for f in &files {
        let out = evrp(&[
            "solve",
            &inst,
            "--evals",
            "2000",
            "--seed",
            "9",
            "-o",
            path_str(f),
        ]);
        assert!(out.status.success());
    }
    assert_eq!(fs::read(&files[0]).unwrap(), fs::read(&files[1]).unwrap());
}

#[test]
fn validate_reports_problems() {
    let dir = tempfile::tempdir().unwrap();
    let inst = fixture("tiny-c4-s1.evrp");
    let write = |name: &str, body: &str| {
        let p = dir.path().join(name);
        fs::write(&p, body).unwrap();
        p
    };

    let missing = write("missing.txt", "0 1 2 3 0\n");
    let out = evrp(&["validate", &inst, path_str(&missing)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).starts_with("INVALID"));
    assert!(stdout(&out).contains("CustomerCoverage"));

    let solved = dir.path().join("ok.txt");
    assert!(
        evrp(&["solve", &inst, "--evals", "1000", "-o", path_str(&solved)])
            .status
            .success()
    );
    let tour = fs::read_to_string(&solved)
        .unwrap()
        .lines()
        .next()
        .unwrap()
        .to_string();
    let wrong = write("wrong.txt", &format!("{tour}\n1.00\n"));
    let out = evrp(&["validate", &inst, path_str(&wrong)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("weight mismatch"));

    let bad = write("bad.txt", "0 99 0\n");
    assert_eq!(
        evrp(&["validate", &inst, path_str(&bad)]).status.code(),
        Some(2)
    );
    assert_eq!(
        evrp(&["validate", "/no/such/file.evrp", path_str(&bad)])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn bench_over_directory() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["tiny-c4-s1.evrp", "tiny-c5-s2.evrp"] {
        fs::copy(fixture(name), dir.path().join(name)).unwrap();
    }
    let bks = dir.path().join("bks.csv");
    fs::write(&bks, "instance,bks,origin\ntiny-c4-s1,312.62,exact\n").unwrap();
    let csv = dir.path().join("report.csv");
    let out = evrp(&[
        "bench",
        path_str(dir.path()),
        "--runs",
        "2",
        "--evals",
        "2000",
        "--bks",
        path_str(&bks),
        "--csv",
        path_str(&csv),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report = fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = report.lines().collect();
    assert_eq!(
        lines[0],
        "instance,runs,min,mean,stdev,bks,gap_min,gap_mean,failures"
    );
    assert_eq!(
        lines[1],
        "tiny-c4-s1,2,312.62,312.62,0.00,312.62,0.00,0.00,0"
    );
    assert!(lines[2].starts_with("tiny-c5-s2,2,470.89,"));

    // no directory argument and no environment variable
    assert_eq!(evrp(&["bench"]).status.code(), Some(2));
}

#[test]
fn bad_arguments_exit_with_two() {
    let inst = fixture("minimal.evrp");
    assert_eq!(evrp(&["solve", &inst, "--ls", "12"]).status.code(), Some(2));
    assert_eq!(
        evrp(&["solve", &inst, "--construction", "c3"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        evrp(&["solve", &inst, "--evals", "5", "--time-limit", "1"])
            .status
            .code(),
        Some(2)
    );
}
