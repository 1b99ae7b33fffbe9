use std::process::{Command, Output};

fn cesaro(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cesaro"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = cesaro(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> serde_json::Value {
    serde_json::from_str(&stdout(args)).unwrap()
}

#[test]
fn zeta_minus_one() {
    let v = json(&["zeta", "--alpha", "1"]);
    assert_eq!(v["target"], "-1/12");
    let value = v["value"].as_f64().unwrap();
    assert!((value + 1.0 / 12.0).abs() < 1e-4, "{value}");
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(
        keys,
        ["alpha", "order", "cutoff", "value", "target", "error", "spread"]
    );
}

#[test]
fn zeta_prime_at_zero() {
    let v = json(&["zeta", "--prime"]);
    let expected = -0.5 * (2.0 * std::f64::consts::PI).ln();
    assert!((v["value"].as_f64().unwrap() - expected).abs() < 1e-4);
}

#[test]
fn grandi_by_every_method() {
    for method in ["cesaro", "holder", "riesz"] {
        let v = json(&["sum", "--pattern", "1,-1", "--method", method]);
        assert!(
            (v["value"].as_f64().unwrap() - 0.5).abs() < 1e-4,
            "{method}"
        );
    }
}

#[test]
fn torus_spectrum_table() {
    let text = stdout(&[
        "spectrum", "--model", "torus", "--dim", "2", "--max", "25", "--format", "table",
    ]);
    let rows: Vec<Vec<&str>> = text
        .lines()
        .skip(2)
        .map(|l| l.split_whitespace().collect())
        .collect();
    assert_eq!(rows[0], ["0", "1", "1"]);
    assert_eq!(rows[1], ["1", "4", "5"]);
    assert_eq!(rows[4], ["5", "8", "21"]);
    assert_eq!(rows.last().unwrap(), &["25", "12", "81"]);
    // 3, 6, 7, 11, 12, … are not sums of two squares.
    assert!(rows
        .iter()
        .all(|r| !["3", "6", "7", "11", "12"].contains(&r[0])));
}

#[test]
fn spectrum_files_round_trip() {
    let tsv = stdout(&[
        "spectrum", "--model", "sphere2", "--max", "6", "--format", "tsv",
    ]);
    assert!(tsv.lines().all(|l| l.split('\t').count() == 2));
    let dir = std::env::temp_dir().join(format!("cesaro-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("s2.tsv");
    std::fs::write(&path, &tsv).unwrap();
    let p = path.to_str().unwrap();
    let again = stdout(&[
        "spectrum", "--model", "file", "--dim", "2", "--input", p, "--format", "tsv",
    ]);
    std::fs::remove_dir_all(&dir).unwrap();
    assert_eq!(tsv, again);
}

#[test]
fn counting_sides_differ_on_eigenvalues() {
    let text = stdout(&[
        "count", "--model", "torus", "--dim", "2", "--lambda", "4,4.5", "--format", "csv",
    ]);
    assert_eq!(text, "lambda,left,right\n4,9,13\n4.5,13,13\n");
}

#[test]
fn sphere2_moments_are_exact() {
    let v = json(&["moments", "--preset", "sphere2"]);
    let exact: Vec<&str> = v
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["moment"].as_str().unwrap())
        .collect();
    assert_eq!(exact, ["-2/3", "-1/15", "8/315", "-2/105"]);
}

#[test]
fn mulholland_csv_row() {
    let text = stdout(&[
        "heat",
        "--model",
        "sphere2",
        "--t",
        "0.1",
        "--compare",
        "mulholland",
    ]);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,exact,expansion,error"));
    let row: Vec<f64> = lines
        .next()
        .unwrap()
        .split(',')
        .map(|x| x.parse().unwrap())
        .collect();
    let exact: f64 = (0..200)
        .map(|l| (2 * l + 1) as f64 * (-0.1 * (l * (l + 1)) as f64).exp())
        .sum();
    let series = 10.0 + 1.0 / 3.0 + 0.1 / 15.0 + 4.0 * 0.01 / 315.0;
    assert!((row[1] - exact).abs() < 1e-12);
    assert!((row[2] - series).abs() < 1e-12);
    assert!(row[3] > 0.0 && row[3] < 1e-5);
}

#[test]
fn spectral_action_on_the_torus() {
    let v = json(&["cc", "--lambda", "20"]);
    assert!((v["normalized"].as_f64().unwrap() - std::f64::consts::PI.powi(2)).abs() < 1e-3);
}

#[test]
fn revert_free_symbol() {
    let text = stdout(&[
        "revert", "--symbol", "1", "--dim", "3", "--j-max", "1", "--format", "csv",
    ]);
    assert!(text.starts_with("j,c,c_value,a,exponent\n0,1,1,"));
}

#[test]
fn output_is_reproducible() {
    let runs = [
        vec!["zeta", "--alpha", "2", "--order", "4", "--cutoff", "1e4"],
        vec![
            "heat", "--model", "torus", "--dim", "3", "--t", "0.05,0.5", "--format", "csv",
        ],
        vec![
            "--threads",
            "3",
            "count",
            "--model",
            "sphere3",
            "--lambda",
            "50",
            "--riesz",
            "2",
        ],
    ];
    for args in &runs {
        let first = cesaro(args);
        assert!(first.status.success());
        for _ in 0..2 {
            assert_eq!(cesaro(args).stdout, first.stdout, "{args:?}");
        }
    }
}

#[test]
fn exit_codes() {
    assert_eq!(cesaro(&["zeta"]).status.code(), Some(2));
    assert_eq!(
        cesaro(&["zeta", "--alpha", "1", "--format", "tsv"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        cesaro(&["spectrum", "--model", "torus"]).status.code(),
        Some(2)
    );
    assert_eq!(
        cesaro(&["revert", "--symbol", "-1", "--dim", "2"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        cesaro(&["--threads", "0", "zeta", "--alpha", "1"])
            .status
            .code(),
        Some(2)
    );
    let stuck = cesaro(&["zeta", "--alpha", "5", "--cutoff", "1e3", "--tol", "1e-9"]);
    assert_eq!(stuck.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&stuck.stderr).contains("estimates"));
}
