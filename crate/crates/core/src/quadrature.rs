//! Globally adaptive 7/15-point Gauss-Kronrod quadrature.

use crate::scalar::Real;

// Kronrod abscissae on [0, 1); odd indices are the embedded Gauss nodes.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature<T> {
    pub value: T,
    pub error: T,
    pub intervals: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, Copy)]
struct Panel<T> {
    a: T,
    b: T,
    value: T,
    error: T,
}

fn kronrod<T: Real, F: Fn(T) -> T>(f: &F, a: T, b: T) -> Panel<T> {
    let half = T::lit(0.5);
    let center = (a + b) * half;
    let radius = (b - a) * half;
    let fc = f(center);
    let mut gauss = fc * T::lit(WG[3]);
    let mut kron = fc * T::lit(WGK[7]);
    for j in 0..7 {
        let dx = radius * T::lit(XGK[j]);
        let pair = f(center - dx) + f(center + dx);
        kron = kron + pair * T::lit(WGK[j]);
        if j % 2 == 1 {
            gauss = gauss + pair * T::lit(WG[j / 2]);
        }
    }
    Panel {
        a,
        b,
        value: kron * radius,
        error: ((kron - gauss) * radius).abs(),
    }
}

/// Integrates `f` over `[a, b]`, bisecting the panel with the largest error
/// estimate until the total estimate drops below `max(abs_tol, rel_tol |I|)`
/// or `max_panels` panels are in use.
pub fn integrate<T: Real, F: Fn(T) -> T>(
    f: F,
    a: T,
    b: T,
    abs_tol: T,
    rel_tol: T,
    max_panels: usize,
) -> Quadrature<T> {
    if a == b {
        return Quadrature {
            value: T::zero(),
            error: T::zero(),
            intervals: 0,
            converged: true,
        };
    }
    let mut panels = vec![kronrod(&f, a, b)];
    loop {
        let value = panels.iter().fold(T::zero(), |s, p| s + p.value);
        let error = panels.iter().fold(T::zero(), |s, p| s + p.error);
        let target = abs_tol.max(rel_tol * value.abs());
        if error <= target || panels.len() >= max_panels {
            return Quadrature {
                value,
                error,
                intervals: panels.len(),
                converged: error <= target,
            };
        }
        let (worst, _) = panels
            .iter()
            .enumerate()
            .fold((0, T::neg_infinity()), |best, (k, p)| {
                if p.error > best.1 {
                    (k, p.error)
                } else {
                    best
                }
            });
        let p = panels.swap_remove(worst);
        let mid = (p.a + p.b) * T::lit(0.5);
        if mid <= p.a || mid >= p.b {
            // Panel cannot be split further in this precision.
            panels.push(Panel {
                error: T::zero(),
                ..p
            });
            continue;
        }
        panels.push(kronrod(&f, p.a, mid));
        panels.push(kronrod(&f, mid, p.b));
    }
}
