#![allow(dead_code)]

use std::f64::consts::PI;

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

/// `integral_a^b f` with an `n`-point rule.
pub fn gl_integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, rule: &[(f64, f64)]) -> f64 {
    let (c, r) = (0.5 * (a + b), 0.5 * (b - a));
    rule.iter().map(|&(x, w)| w * f(c + r * x)).sum::<f64>() * r
}

/// `integral_lo^hi f(x) dx` for `f` with square-root behaviour at both ends,
/// through `x = lo + (hi - lo) sin^2(t / 2)`.
pub fn gl_over_support(f: impl Fn(f64) -> f64, lo: f64, hi: f64, rule: &[(f64, f64)]) -> f64 {
    let w = hi - lo;
    gl_integrate(
        |t| {
            let s = (0.5 * t).sin();
            f(lo + w * s * s) * 0.5 * w * t.sin()
        },
        0.0,
        PI,
        rule,
    )
}

/// Root of `f` in `[a, b]` with a sign change, by bisection then secant.
pub fn bracketed_root(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let (mut fa, mut fb) = (f(a), f(b));
    assert!(fa * fb <= 0.0, "no sign change on [{a}, {b}]");
    for _ in 0..60 {
        let m = 0.5 * (a + b);
        let fm = f(m);
        if fa * fm <= 0.0 {
            b = m;
            fb = fm;
        } else {
            a = m;
            fa = fm;
        }
    }
    let mut x = b - fb * (b - a) / (fb - fa);
    let mut prev = a;
    for _ in 0..20 {
        let (fx, fp) = (f(x), f(prev));
        if fx == 0.0 || fx == fp {
            break;
        }
        let next = x - fx * (x - prev) / (fx - fp);
        prev = x;
        x = next;
    }
    x
}

pub const GAMMAS: [f64; 3] = [0.1, 0.5, 0.9];
pub const NS: [f64; 3] = [2.0, 3.0, 10.0];

pub fn linspace(a: f64, b: f64, k: usize) -> Vec<f64> {
    (0..k)
        .map(|i| a + (b - a) * i as f64 / (k - 1) as f64)
        .collect()
}

pub fn trapezoid(curve: &[(f64, f64)]) -> f64 {
    curve
        .windows(2)
        .map(|w| 0.5 * (w[1].0 - w[0].0) * (w[1].1 + w[0].1))
        .sum()
}
