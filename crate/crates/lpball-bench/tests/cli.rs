use std::fs;
use std::path::Path;
use std::process::Command;

fn lpball(args: &[&str]) -> std::process::Output {
    let out = Command::new(env!("CARGO_BIN_EXE_lpball"))
        .args(args)
        .output()
        .expect("binary runs");
    assert!(
        out.status.success(),
        "lpball {args:?} failed:\n{}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn records(file: &Path) -> Vec<csv::StringRecord> {
    csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_path(file)
        .unwrap()
        .records()
        .map(Result::unwrap)
        .collect()
}

#[test]
fn solve_projection_from_json() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("y.json");
    let out = dir.path().join("x.json");
    fs::write(&input, r#"{"y": [2.0, 0.0, 0.0]}"#).unwrap();
    lpball(&[
        "solve",
        "--objective",
        "proj",
        "--p",
        "0.5",
        "--gamma",
        "1",
        "--input",
        path(&input),
        "--out",
        path(&out),
        "--trace",
    ]);
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    let x: Vec<f64> = serde_json::from_value(v["x"].clone()).unwrap();
    assert!(
        (x[0] - 1.0).abs() < 1e-6 && x[1] == 0.0 && x[2] == 0.0,
        "{x:?}"
    );
    assert_eq!(v["gamma"], 1.0);
    assert_eq!(v["beta"], 0.5);
    assert_eq!(
        v["trace"].as_array().unwrap().len(),
        v["iterations"].as_u64().unwrap() as usize
    );
}

#[test]
fn solve_least_squares_with_auto_gamma() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("ls.json");
    let out = dir.path().join("x.json");
    fs::write(
        &input,
        r#"{"a": [[1,0,0,0],[0,1,0,0],[0,0,1,0],[0,0,0,1],[1,1,0,0]], "b": [0,2,0,0,2], "s": 2}"#,
    )
    .unwrap();
    lpball(&[
        "solve",
        "--objective",
        "ls",
        "--p",
        "0.5",
        "--input",
        path(&input),
        "--out",
        path(&out),
    ]);
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["gamma"], 2.0);
    assert!(v["trace"].is_null());
    assert!(v["f_final"].as_f64().unwrap() < v["f_initial"].as_f64().unwrap());
}

#[test]
fn solve_rejects_bad_input() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("bad.json");
    fs::write(&input, r#"{"b": [1.0]}"#).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_lpball"))
        .args([
            "solve",
            "--objective",
            "ls",
            "--p",
            "0.5",
            "--input",
            path(&input),
            "--out",
            "x.json",
        ])
        .output()
        .unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("needs `a`"));
}

#[test]
fn projection_bench_is_byte_identical_and_means_recompute() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    for out in [&a, &b] {
        lpball(&[
            "bench",
            "projection",
            "--n",
            "30,60",
            "--p",
            "0.4,0.8",
            "--trials",
            "4",
            "--seed",
            "3",
            "--out",
            path(out),
            "--omit-timing",
        ]);
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    assert_eq!(
        fs::read(dir.path().join("a_summary.csv")).unwrap(),
        fs::read(dir.path().join("b_summary.csv")).unwrap()
    );

    let rows = records(&a);
    assert_eq!(rows.len(), 16);
    for summary in records(&dir.path().join("a_summary.csv")) {
        let (n, p) = (&summary[1], &summary[2]);
        let objectives: Vec<f64> = rows
            .iter()
            .filter(|r| &r[1] == n && &r[2] == p)
            .map(|r| r[4].parse().unwrap())
            .collect();
        let mean = objectives.iter().sum::<f64>() / objectives.len() as f64;
        let reported: f64 = summary[5].parse().unwrap();
        assert!(
            (mean - reported).abs() <= 1e-12 * mean.abs(),
            "{mean} vs {reported}"
        );
    }
}

#[test]
fn recovery_bench_writes_three_tables() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("curve.csv");
    lpball(&[
        "bench",
        "recovery",
        "--n",
        "60",
        "--s",
        "3",
        "--m",
        "10,400",
        "--solvers",
        "hybrid,iht",
        "--trials",
        "2",
        "--seed",
        "1",
        "--out",
        path(&out),
    ]);
    let text = fs::read_to_string(&out).unwrap();
    assert!(text.contains("solver,m,trial,rel_error,success,time_s,iterations,status"));
    assert!(text.contains("# solvers: hybrid,iht"));
    assert_eq!(records(&out).len(), 8);
    let rates = records(&dir.path().join("curve_rates.csv"));
    assert_eq!(rates.len(), 4);
    for r in &rates {
        let rate: f64 = r[5].parse().unwrap();
        assert!((0.0..=1.0).contains(&rate));
    }
    let fnz = fs::read_to_string(dir.path().join("curve_false_nonzeros.csv")).unwrap();
    assert!(fnz.contains("solver,threshold,trial,count"));
}

#[test]
fn config_file_drives_an_experiment() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("spec.toml");
    let out = dir.path().join("res.csv");
    fs::write(
        &cfg,
        r#"
kind = "lp_projection"
n = [40]
p_values = [0.5]
gamma_rule = { fraction_of_norm = 0.01 }
trials = 3
seed = 12
"#,
    )
    .unwrap();
    let run = lpball(&["bench", "config", "--file", path(&cfg), "--out", path(&out)]);
    assert!(String::from_utf8_lossy(&run.stdout).contains("n=40 p=0.5 trials=3"));
    let text = fs::read_to_string(&out).unwrap();
    assert!(text.contains("# seed: 12\n"));
    assert_eq!(records(&out).len(), 3);
}
