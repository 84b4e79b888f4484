mod common;

use common::{column, read_csv, stdout_of, trapezoid, wishmean, write_file};
use serde_json::Value;

#[test]
fn density_curve_normalizes() {
    let out = stdout_of(&[
        "density", "--gamma", "0.5", "--nmats", "2", "--min", "0.01", "--max", "2.2", "--points",
        "400",
    ]);
    let (header, rows) = read_csv(&out);
    assert_eq!(header, ["x", "harm_density", "mp_density"]);
    assert_eq!(rows.len(), 400);
    assert!((trapezoid(&column(&rows, 0), &column(&rows, 1)) - 1.0).abs() < 2e-3);
    // 17 significant digits in scientific notation.
    assert!(rows[1][0].contains('e') && rows[1][0].split('e').next().unwrap().len() == 18);
}

#[test]
fn density_outside_support_is_zero() {
    let out = stdout_of(&[
        "density", "--gamma", "0.5", "--min", "4", "--max", "6", "--points", "20",
    ]);
    let (_, rows) = read_csv(&out);
    assert!(column(&rows, 1)
        .iter()
        .chain(&column(&rows, 2))
        .all(|&d| d == 0.0));
}

#[test]
fn single_matrix_density_is_marcenko_pastur() {
    let out = stdout_of(&[
        "density", "--gamma", "0.3", "--nmats", "1", "--min", "0", "--max", "3", "--points", "300",
    ]);
    let (_, rows) = read_csv(&out);
    for (h, m) in column(&rows, 1).iter().zip(column(&rows, 2)) {
        assert!((h - m).abs() < 1e-12);
    }
}

fn threshold(gamma: &str) -> Value {
    serde_json::from_str(&stdout_of(&["threshold", "--gamma", gamma])).unwrap()
}

#[test]
fn threshold_values() {
    assert_eq!(threshold("0.5")["n_star_int"], 4);
    assert_eq!(threshold("0.9")["n_star_int"], 5);
    for g in ["0.05", "0.3", "0.5", "0.7", "0.95"] {
        let t = threshold(g);
        assert!(
            t["harm_at_2"].as_f64().unwrap() < t["arith_at_2"].as_f64().unwrap(),
            "gamma {g}"
        );
    }
    let raw = stdout_of(&["threshold", "--gamma", "0.5"]);
    let at = |k: &str| raw.find(&format!("\"{k}\"")).unwrap();
    let keys = [
        "gamma",
        "n_star_real",
        "n_star_int",
        "harm_at_2",
        "arith_at_2",
    ];
    assert!(keys.windows(2).all(|w| at(w[0]) < at(w[1])));
}

#[test]
fn fixedpoint_single_atom_matches_density() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_file(dir.path(), "one.json", r#"[{"x": 1.0, "w": 1.0}]"#);
    let grid = [
        "--gamma", "0.5", "--nmats", "2", "--min", "0.05", "--max", "2.5", "--points", "80",
    ];
    // One grid point sits 0.009 from the lower edge, where smoothing at the
    // default eta = 1e-4 alone moves the density by 5e-6.
    let fp = stdout_of(
        &[
            &[
                "fixedpoint",
                "--spectrum",
                &spec,
                "--which",
                "sh",
                "--eta",
                "1e-6",
            ],
            &grid[..],
        ]
        .concat(),
    );
    let dens = stdout_of(&[&["density"], &grid[..]].concat());
    let (header, fp_rows) = read_csv(&fp);
    assert_eq!(header, ["x", "density", "status"]);
    let (_, d_rows) = read_csv(&dens);
    for (a, b) in fp_rows.iter().zip(&d_rows) {
        assert_eq!(a[2], "ok");
        assert!((a[1].parse::<f64>().unwrap() - b[1].parse::<f64>().unwrap()).abs() < 1e-6);
    }
}

#[test]
fn fixedpoint_two_atoms_integrate_to_one() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_file(
        dir.path(),
        "two.json",
        r#"[{"x": 1, "w": 0.5}, {"x": 2, "w": 0.5}]"#,
    );
    for (which, lo, hi) in [("sh", "0.005", "4.5"), ("e", "-2.5", "2.5")] {
        let out = stdout_of(&[
            "fixedpoint",
            "--spectrum",
            &spec,
            "--which",
            which,
            "--gamma",
            "0.5",
            "--nmats",
            "2",
            "--min",
            lo,
            "--max",
            hi,
            "--points",
            "800",
        ]);
        let (_, rows) = read_csv(&out);
        assert!(rows.iter().all(|r| r[2] == "ok"));
        assert!(
            (trapezoid(&column(&rows, 0), &column(&rows, 1)) - 1.0).abs() < 1e-2,
            "{which}"
        );
    }
}

#[test]
fn fixedpoint_flags_failed_points() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_file(
        dir.path(),
        "two.json",
        r#"[{"x": 1, "w": 0.5}, {"x": 2, "w": 0.5}]"#,
    );
    let out = wishmean(&[
        "fixedpoint",
        "--spectrum",
        &spec,
        "--gamma",
        "0.5",
        "--min",
        "0.5",
        "--max",
        "1.5",
        "--points",
        "5",
        "--max-iter",
        "1",
    ]);
    assert!(!out.status.success());
    let (_, rows) = read_csv(&String::from_utf8(out.stdout).unwrap());
    assert_eq!(rows.len(), 5);
    assert!(rows
        .iter()
        .all(|r| r[1] == "NaN" && r[2] == "non-convergence"));
}

#[test]
fn spectrum_validation() {
    let dir = tempfile::tempdir().unwrap();
    let base = [
        "fixedpoint",
        "--gamma",
        "0.5",
        "--min",
        "0",
        "--max",
        "2",
        "--spectrum",
    ];
    let negative = write_file(dir.path(), "neg.json", r#"[{"x": -1, "w": 1}]"#);
    let out = wishmean(&[&base[..], &[negative.as_str()]].concat());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("strictly positive"));

    let off = write_file(
        dir.path(),
        "off.json",
        r#"[{"x": 1, "w": 0.5}, {"x": 2, "w": 0.4}]"#,
    );
    assert_eq!(
        wishmean(&[&base[..], &[off.as_str()]].concat())
            .status
            .code(),
        Some(2)
    );

    let close = write_file(
        dir.path(),
        "close.json",
        r#"[{"x": 1, "w": 0.5}, {"x": 2, "w": 0.5000000000001}]"#,
    );
    assert!(wishmean(&[&base[..], &[close.as_str()]].concat())
        .status
        .success());
}

#[test]
fn simulate_report_shape() {
    let out = stdout_of(&[
        "simulate", "--gamma", "0.5", "--p", "40", "--n", "2", "--trials", "2", "--model",
        "uniform",
    ]);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["N"], 80);
    assert_eq!(v["entry_model"], "uniform");
    assert_eq!(v["trials"].as_array().unwrap().len(), 2);
    assert_eq!(v["trials"][1]["trial"], 1);
    for k in [
        "opnorm_A_error",
        "opnorm_H_error",
        "lambda_min_H",
        "lambda_max_H",
        "ks_H",
        "ks_A",
    ] {
        assert!(v["trials"][0][k].is_f64(), "{k}");
    }
    assert_eq!(v["analytic"]["n_star_int"], 4);
    assert!(
        (v["analytic"]["harm_limit"].as_f64().unwrap() - 0.866_025_403_784_438_6).abs() < 1e-12
    );
}

#[test]
fn simulate_echoes_realized_gamma() {
    let out = stdout_of(&["simulate", "--p", "30", "--bign", "90", "--trials", "0"]);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert!((v["gamma"].as_f64().unwrap() - 1.0 / 3.0).abs() < 1e-15);
    assert!(v["trials"].as_array().unwrap().is_empty());
    assert!(v["analytic"]["e_plus"].is_f64());
}

#[test]
fn simulate_dumps_eigenvalues() {
    let dir = tempfile::tempdir().unwrap();
    let eigs = dir.path().join("eigs.csv");
    let report = dir.path().join("report.json");
    let out = wishmean(&[
        "simulate",
        "--gamma",
        "0.5",
        "--p",
        "20",
        "--trials",
        "3",
        "--model",
        "real-gaussian",
        "--dump-eigs",
        eigs.to_str().unwrap(),
        "--out",
        report.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let (header, rows) = read_csv(&std::fs::read_to_string(&eigs).unwrap());
    assert_eq!(header, ["trial", "index", "eigenvalue"]);
    assert_eq!(rows.len(), 60);
    assert_eq!(rows[20][..2], ["1", "0"]);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    let lo = v["trials"][2]["lambda_min_H"].as_f64().unwrap();
    assert_eq!(rows[40][2].parse::<f64>().unwrap(), lo);
}

#[test]
fn compare_zero_trials_is_neutral() {
    let out = stdout_of(&["compare", "--gamma", "0.5", "--p", "50", "--trials", "0"]);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert!(v["pass"].is_null());
    assert!(v["opnorm_H_error"]["mean"].is_null());
    assert!(v["analytic"]["harm_limit"].is_f64());
}

#[test]
fn compare_small_run() {
    let out = stdout_of(&[
        "compare",
        "--gamma",
        "0.5",
        "--p",
        "150",
        "--nmats",
        "2",
        "--trials",
        "3",
        "--tolerance",
        "0.1",
    ]);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["trials"], 3);
    assert_eq!(v["pass"], true);
    assert!(
        v["opnorm_H_error"]["mean"].as_f64().unwrap()
            < v["opnorm_A_error"]["mean"].as_f64().unwrap()
    );
}

#[test]
fn usage_errors_exit_nonzero() {
    let cases: [&[&str]; 8] = [
        &["density", "--min", "0", "--max", "1"],
        &[
            "density", "--gamma", "0.5", "--min", "0", "--max", "1", "--points", "1",
        ],
        &["density", "--gamma", "0.5", "--min", "2", "--max", "1"],
        &["threshold", "--gamma", "1.0"],
        &[
            "simulate", "--gamma", "0.5", "--p", "10", "--model", "cauchy",
        ],
        &["simulate", "--p", "10"],
        &["simulate", "--p", "10", "--bign", "10"],
        &[
            "compare",
            "--gamma",
            "0.5",
            "--p",
            "10",
            "--tolerance",
            "-1",
        ],
    ];
    for args in cases {
        let out = wishmean(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty());
    }
    assert!(!wishmean(&["frobnicate"]).status.success());
}
