use std::process::{Command, Output};

use gluedwalk::walk::{position_distribution, step};
use gluedwalk::{ArcIndex, Chirality, WalkParams, WalkState};

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_gluedwalk"));
    cmd.env_remove("GLUEDWALK_SEED");
    cmd
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

/// Header and rows of a CSV document.
fn csv(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines.map(|l| l.split(',').map(String::from).collect()).collect();
    (header, rows)
}

fn column(header: &[String], name: &str) -> usize {
    header.iter().position(|h| h == name).unwrap()
}

#[test]
fn spectrum_balanced_n2() {
    let (header, rows) = csv(&stdout(&run(&["spectrum", "--n", "2", "--p", "0.5", "--format", "csv"])));
    let section = column(&header, "section");
    let jacobi: Vec<_> = rows.iter().filter(|r| r[section] == "jacobi").collect();
    let unitary: Vec<_> = rows.iter().filter(|r| r[section] == "unitary").collect();
    assert_eq!(jacobi.len(), 4);
    assert_eq!(unitary.len(), 6);
    let (lambda, norm) = (column(&header, "lambda"), column(&header, "norm_sq"));
    for r in [jacobi[0], jacobi[3]] {
        assert_eq!(r[lambda].parse::<f64>().unwrap().abs(), 1.0);
        assert_eq!(r[norm].parse::<f64>().unwrap(), 6.0);
    }
    let lambdas: Vec<f64> = jacobi.iter().map(|r| r[lambda].parse().unwrap()).collect();
    assert!(lambdas.windows(2).all(|w| w[0] > w[1]));
}

#[test]
fn spectrum_with_arity() {
    let (header, rows) = csv(&stdout(&run(&["spectrum", "--n", "4", "--k", "2"])));
    assert_eq!(rows.len(), 8 + 14);
    let p = column(&header, "p");
    for r in &rows {
        assert_eq!(r[p].parse::<f64>().unwrap(), 1.0 / 3.0);
    }
}

#[test]
fn p_and_k_are_exclusive() {
    let out = run(&["spectrum", "--n", "4", "--k", "2", "--p", "0.3"]);
    assert!(!out.status.success());
    let out = run(&["spectrum", "--n", "4"]);
    assert!(!out.status.success());
}

#[test]
fn spectrum_fails_when_lift_is_unresolvable() {
    let out = run(&["spectrum", "--n", "20", "--p", "0.9"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("lift"));
    stdout(&run(&["spectrum", "--n", "20", "--p", "0.9", "--jacobi-only"]));
}

#[test]
fn evolve_matches_library() {
    let text = stdout(&run(&["evolve", "--n", "3", "--p", "0.3", "--start", "2", "--chirality", "r", "--steps", "40"]));
    let (header, rows) = csv(&text);
    assert_eq!(header, ["t", "x", "probability"]);
    assert_eq!(rows.len(), 41 * 6);

    let params = WalkParams::new(3, 0.3).unwrap();
    let mut state = WalkState::basis(3, ArcIndex::new(2, Chirality::R)).unwrap();
    for t in 0..=40 {
        let dist = position_distribution(&state).unwrap();
        for x in 0..6 {
            let row = &rows[t * 6 + x];
            assert_eq!(row[0].parse::<usize>().unwrap(), t);
            assert_eq!(row[1].parse::<usize>().unwrap(), x + 1);
            assert_eq!(row[2].parse::<f64>().unwrap(), dist[x]);
        }
        state = step(&state, &params);
    }
}

#[test]
fn evolve_balanced_conserves_probability() {
    let (_, rows) = csv(&stdout(&run(&["evolve", "--n", "4", "--p", "0.5", "--start", "1", "--steps", "200"])));
    assert_eq!(rows[0][2].parse::<f64>().unwrap(), 1.0);
    assert!(rows[1..8].iter().all(|r| r[2].parse::<f64>().unwrap() == 0.0));
    for t in 0..=200 {
        let total: f64 = rows[t * 8..(t + 1) * 8].iter().map(|r| r[2].parse::<f64>().unwrap()).sum();
        assert!((total - 1.0).abs() <= 1e-10);
    }
}

#[test]
fn evolve_rejects_bad_start() {
    assert!(!run(&["evolve", "--n", "3", "--p", "0.3", "--start", "7"]).status.success());
    assert!(!run(&["evolve", "--n", "3", "--p", "0.3", "--start", "0"]).status.success());
    assert!(!run(&["evolve", "--n", "3", "--p", "0.3", "--start", "1", "--chirality", "l"]).status.success());
}

#[test]
fn timeavg_rows_sum_to_one() {
    for method in ["spectral", "empirical"] {
        let text = stdout(&run(&[
            "timeavg", "--n", "3", "--p", "0.333333", "--method", method, "--horizon", "2000",
        ]));
        let (_, rows) = csv(&text);
        assert_eq!(rows.len(), 36);
        for chunk in rows.chunks(6) {
            let total: f64 = chunk.iter().map(|r| r[2].parse::<f64>().unwrap()).sum();
            assert!((total - 1.0).abs() <= 1e-10, "{method}");
        }
    }
}

#[test]
fn bound_reports_hand_value() {
    let (header, rows) = csv(&stdout(&run(&["bound", "--n", "2", "--p", "0.666667"])));
    let b = column(&header, "bound");
    assert!((rows[0][b].parse::<f64>().unwrap() - 0.08).abs() < 1e-6);
    let (_, rows) = csv(&stdout(&run(&["bound", "--n", "2", "--p", "2/3"])));
    assert!((rows[0][b].parse::<f64>().unwrap() - 0.08).abs() <= 1e-15);
}

#[test]
fn certify_default_grid_passes() {
    let (header, rows) = csv(&stdout(&run(&["certify", "--grid", "default"])));
    assert_eq!(rows.len(), 28);
    let (status, margin) = (column(&header, "status"), column(&header, "min_margin"));
    for r in &rows {
        assert_eq!(r[status], "pass");
        assert!(r[margin].parse::<f64>().unwrap() >= -1e-12);
    }
}

#[test]
fn certify_reports_failures() {
    assert!(!run(&["certify", "--grid", "n=2..3"]).status.success());
    let out = run(&["certify", "--grid", "n=3,20;p=0.9"]);
    assert!(!out.status.success());
    let (header, rows) = csv(&String::from_utf8(out.stdout).unwrap());
    let status = column(&header, "status");
    assert_eq!(rows[0][status], "pass");
    assert_eq!(rows[1][status], "fail");
}

#[test]
fn gluedtree_report_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let edges = dir.path().join("edges.txt");
    let args = ["gluedtree", "--k", "2", "--n", "3", "--seed", "7", "--edges", edges.to_str().unwrap()];
    let first = stdout(&run(&args));
    let first_edges = std::fs::read_to_string(&edges).unwrap();
    let second = stdout(&run(&args));
    assert_eq!(first, second);
    assert_eq!(first_edges, std::fs::read_to_string(&edges).unwrap());
    assert_eq!(first_edges.lines().count(), 20);

    let (header, rows) = csv(&first);
    assert_eq!(rows[0][column(&header, "vertices")], "14");
    assert_eq!(rows[0][column(&header, "edges")], "20");
    assert!(rows[0][column(&header, "lumping_error")].parse::<f64>().unwrap() <= 1e-12);

    let from_env = bin()
        .args(["gluedtree", "--k", "2", "--n", "3"])
        .env("GLUEDWALK_SEED", "7")
        .output()
        .unwrap();
    let no_edges = stdout(&run(&["gluedtree", "--k", "2", "--n", "3", "--seed", "7"]));
    assert_eq!(stdout(&from_env), no_edges);
}

#[test]
fn json_and_csv_carry_identical_numbers() {
    let args = ["spectrum", "--n", "3", "--p", "0.7"];
    let (header, rows) = csv(&stdout(&run(&args)));
    let json: serde_json::Value =
        serde_json::from_str(&stdout(&run(&[&args[..], &["--format", "json"]].concat()))).unwrap();
    assert_eq!(json["meta"]["command"], "spectrum");
    let json_rows = json["rows"].as_array().unwrap();
    assert_eq!(json_rows.len(), rows.len());
    for (row, obj) in rows.iter().zip(json_rows) {
        for (name, cell) in header.iter().zip(row) {
            let value = &obj[name.as_str()];
            match cell.parse::<f64>() {
                Ok(x) => assert_eq!(value.as_f64().unwrap(), x, "{name}"),
                Err(_) if cell.is_empty() => assert!(value.is_null(), "{name}"),
                Err(_) => assert_eq!(value.as_str().unwrap(), cell, "{name}"),
            }
        }
    }
}

#[test]
fn output_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.csv");
    let out = run(&["timeavg", "--n", "2", "--k", "3", "--output", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    assert!(std::fs::read_to_string(path).unwrap().starts_with("i,x,probability\n"));
}
