#![allow(dead_code)]

use std::f64::consts::PI;
use std::path::Path;
use std::process::{Command, Output};

pub const GAMMAS: [f64; 3] = [0.1, 0.5, 0.9];
pub const NS: [f64; 3] = [2.0, 3.0, 10.0];

/// Gauss-Legendre nodes and weights on [-1, 1], by Newton iteration on P_n.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 1..=n {
        let mut x = (PI * (i as f64 - 0.25) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out
}

/// `integral_lo^hi f(x) dx` for `f` with square-root behaviour at both ends,
/// through `x = lo + (hi - lo) sin^2(t / 2)`.
pub fn gl_over_support(f: impl Fn(f64) -> f64, lo: f64, hi: f64, rule: &[(f64, f64)]) -> f64 {
    let w = hi - lo;
    let r = 0.5 * PI;
    rule.iter()
        .map(|&(x, wt)| {
            let t = r * (1.0 + x);
            let s = (0.5 * t).sin();
            wt * f(lo + w * s * s) * 0.5 * w * t.sin()
        })
        .sum::<f64>()
        * r
}

/// Support edges straight from the closed formulas.
pub fn edges(g: f64, n: f64) -> (f64, f64) {
    let hi = ((1.0 - g + g / n).sqrt() + (g / n).sqrt()).powi(2);
    ((1.0 - g).powi(2) / hi, hi)
}

pub fn harm_limit(g: f64, n: f64) -> f64 {
    g - 2.0 * g / n + 2.0 * (g / n).sqrt() * (1.0 - g + g / n).sqrt()
}

pub fn arith_limit(g: f64, n: f64) -> f64 {
    g / n + 2.0 * (g / n).sqrt()
}

pub fn linspace(a: f64, b: f64, k: usize) -> Vec<f64> {
    (0..k)
        .map(|i| a + (b - a) * i as f64 / (k - 1) as f64)
        .collect()
}

pub fn trapezoid(xs: &[f64], ys: &[f64]) -> f64 {
    xs.windows(2)
        .zip(ys.windows(2))
        .map(|(x, y)| 0.5 * (x[1] - x[0]) * (y[0] + y[1]))
        .sum()
}

pub fn wishmean(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wishmean"))
        .args(args)
        .output()
        .expect("failed to launch wishmean")
}

pub fn stdout_of(args: &[&str]) -> String {
    let out = wishmean(args);
    assert!(
        out.status.success(),
        "wishmean {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

/// Header and rows of a CSV file with a header line.
pub fn read_csv(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = text.lines();
    let header = lines
        .next()
        .unwrap()
        .split(',')
        .map(str::to_owned)
        .collect();
    let rows = lines
        .map(|l| l.split(',').map(str::to_owned).collect())
        .collect();
    (header, rows)
}

pub fn column(rows: &[Vec<String>], k: usize) -> Vec<f64> {
    rows.iter().map(|r| r[k].parse().unwrap()).collect()
}

pub fn write_file(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_owned()
}
