use num_complex::Complex;

use crate::error::{Error, Result};
use crate::freelaw::HarmLawParams;
use crate::scalar::Real;

use super::{ComplexPoint, FixedPointConfig};

/// Values in `[-CLAMP, 0)` returned by the Plemelj inversion are set to zero.
const CLAMP: f64 = 1e-8;
/// Denominators smaller than this are treated as poles of the S-transform.
const POLE_TOL: f64 = 1e-14;

fn reject_origin<T: Real>(z: Complex<T>) -> Result<()> {
    if z.re == T::zero() && z.im == T::zero() {
        return Err(Error::invalid(
            "z",
            "the transforms are not evaluated at z = 0",
        ));
    }
    Ok(())
}

/// Stieltjes transform of the law with density proportional to
/// `sqrt((hi - x)(x - lo)) / x` whose transform solves
/// `c z m^2 + (shift - z) m + 1 = 0` with `(z - lo)(z - hi) = (z - shift)^2 - 4 c z`.
///
/// Written as `2 / (z - shift + sqrt(z - lo) sqrt(z - hi))`: the product of
/// principal roots has its cut exactly on `[lo, hi]` and grows like `z`, which
/// selects the root with `m ~ 1/z` at infinity and `Im m < 0` above the axis.
fn edge_form<T: Real>(lo: T, hi: T, shift: T, z: Complex<T>) -> Result<Complex<T>> {
    reject_origin(z)?;
    if z.im < T::zero() {
        return edge_form(lo, hi, shift, z.conj()).map(|m| m.conj());
    }
    let s = if z.im == T::zero() {
        let x = z.re;
        if x >= lo && x <= hi {
            return Err(Error::OnSupport {
                re: x.to_f64_lossy(),
                im: 0.0,
            });
        }
        let mag = ((x - lo) * (x - hi)).sqrt();
        Complex::new(if x > hi { mag } else { -mag }, T::zero())
    } else {
        let one = Complex::new(lo, T::zero());
        let two = Complex::new(hi, T::zero());
        (z - one).sqrt() * (z - two).sqrt()
    };
    let two = Complex::new(T::lit(2.0), T::zero());
    Ok(two / (z - Complex::new(shift, T::zero()) + s))
}

/// Marcenko-Pastur Stieltjes transform, the root of
/// `gamma z m^2 + (1 - z - gamma) m + 1 = 0` with the Herglotz property.
pub fn stieltjes_mp<T: Real>(gamma: T, z: ComplexPoint<T>) -> Result<ComplexPoint<T>> {
    if !(gamma > T::zero() && gamma < T::one()) {
        return Err(Error::invalid("gamma", "must lie in (0, 1)"));
    }
    let r = gamma.sqrt();
    let lo = (T::one() - r) * (T::one() - r);
    let hi = (T::one() + r) * (T::one() + r);
    edge_form(lo, hi, T::one() - gamma, z)
}

/// Stieltjes transform of the limiting harmonic-mean law, the root of
/// `(gamma z / n) m^2 + (1 - gamma - z) m + 1 = 0` with the Herglotz property.
pub fn stieltjes_harm<T: Real>(
    params: &HarmLawParams<T>,
    z: ComplexPoint<T>,
) -> Result<ComplexPoint<T>> {
    edge_form(
        params.e_minus(),
        params.e_plus(),
        T::one() - params.gamma(),
        z,
    )
}

/// Density at `x` from the boundary values of a Stieltjes transform:
/// `2 d(eta / 2) - d(eta)` with `d(y) = -Im m(x + i y) / pi`.
pub fn plemelj_density<T: Real, F>(mut m_eval: F, x: T, cfg: &FixedPointConfig<T>) -> Result<T>
where
    F: FnMut(ComplexPoint<T>) -> Result<ComplexPoint<T>>,
{
    if !(cfg.eta > T::zero()) {
        return Err(Error::invalid("eta", "must be positive"));
    }
    let coarse = -m_eval(Complex::new(x, cfg.eta))?.im / T::PI();
    let fine = -m_eval(Complex::new(x, cfg.eta * T::lit(0.5)))?.im / T::PI();
    Ok(clamp_density(T::lit(2.0) * fine - coarse))
}

pub(super) fn clamp_density<T: Real>(d: T) -> T {
    if d < T::zero() && d >= -T::lit(CLAMP) {
        T::zero()
    } else {
        d
    }
}

/// S-transform of the harmonic-mean law,
/// `1 / (gamma z / n + 1 - gamma (1 - 1/n))`.
pub fn s_transform_harm<T: Real>(
    params: &HarmLawParams<T>,
    z: ComplexPoint<T>,
) -> Result<ComplexPoint<T>> {
    let (g, n) = (params.gamma(), params.n());
    let den = z * (g / n) + Complex::new(T::one() - g * (T::one() - T::one() / n), T::zero());
    if den.norm() <= T::lit(POLE_TOL) {
        return Err(Error::Pole {
            re: z.re.to_f64_lossy(),
            im: z.im.to_f64_lossy(),
        });
    }
    Ok(den.inv())
}

/// Both roots of `(gamma w / n) S^2 + gamma ((1 + w)/n - 1) S - 1 = 0`, the
/// one continuous at `w = 0` first when `w` is small. A root that is infinite
/// (leading coefficient zero) is omitted.
pub fn shifted_harm_s_roots<T: Real>(
    params: &HarmLawParams<T>,
    w: ComplexPoint<T>,
) -> Vec<ComplexPoint<T>> {
    let (g, n) = (params.gamma(), params.n());
    let a = w * (g / n);
    let b = (w + T::one()) * (g / n) - Complex::new(g, T::zero());
    let disc = (b * b + a * T::lit(4.0)).sqrt();
    let two = Complex::new(T::lit(2.0), T::zero());
    // 2 / (b + s) stays finite as a -> 0 when s is the root of the discriminant
    // closest to b.
    let (near, far) = if (b + disc).norm() >= (b - disc).norm() {
        (b + disc, b - disc)
    } else {
        (b - disc, b + disc)
    };
    let mut roots = Vec::with_capacity(2);
    if near.norm() > T::zero() {
        roots.push(two / near);
    }
    if far.norm() > T::lit(POLE_TOL) * near.norm().max(T::one()) {
        roots.push(two / far);
    }
    roots
}

fn linear_root<T: Real>(params: &HarmLawParams<T>) -> ComplexPoint<T> {
    let (g, n) = (params.gamma(), params.n());
    Complex::new(T::one() / (g * (T::one() / n - T::one())), T::zero())
}

/// Largest and smallest continuation step along `[0, w]`, as fractions of `|w|`.
const MAX_STEP: f64 = 1.0 / 16.0;
const MIN_STEP: f64 = 1e-12;
/// A continuation step is accepted when the nearest root is at most this
/// fraction of the distance to the other root.
const SEPARATION: f64 = 0.25;

/// S-transform of the shifted harmonic-mean law `h - 1`, the root of
/// `(gamma w / n) S^2 + gamma ((1 + w)/n - 1) S - 1 = 0` that continues the
/// value `S(0) = 1 / (gamma (1/n - 1))` along the segment from 0 to `w`.
///
/// The roots are followed with adaptive steps; when the two roots come too
/// close to be told apart (a branch point on or next to the segment) the
/// branch is reported as ambiguous.
pub fn s_transform_shifted_harm<T: Real>(
    params: &HarmLawParams<T>,
    w: ComplexPoint<T>,
) -> Result<ComplexPoint<T>> {
    if params.n() <= T::one() {
        // h - 1 has mean gamma (1/n - 1) = 0 for n = 1; no S-transform.
        return Err(Error::invalid("n", "the shifted law needs n > 1"));
    }
    if !w.re.is_finite() || !w.im.is_finite() {
        return Err(Error::invalid("w", "must be finite"));
    }
    let mut s = linear_root(params);
    let (mut t, mut h) = (T::zero(), T::lit(MAX_STEP));
    while t < T::one() {
        let next = (t + h).min(T::one());
        let roots = shifted_harm_s_roots(params, w * next);
        let mut d: Vec<(T, ComplexPoint<T>)> = roots.iter().map(|&r| ((r - s).norm(), r)).collect();
        d.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(std::cmp::Ordering::Equal));
        let separated = match d.as_slice() {
            [] => false,
            [_] => true,
            [near, far, ..] => near.0 <= T::lit(SEPARATION) * far.0,
        };
        if separated {
            s = d[0].1;
            t = next;
            h = (h * T::lit(2.0)).min(T::lit(MAX_STEP));
        } else {
            h = h * T::lit(0.5);
            if h < T::lit(MIN_STEP) {
                return Err(Error::BranchAmbiguity {
                    re: w.re.to_f64_lossy(),
                    im: w.im.to_f64_lossy(),
                    detail: format!(
                        "roots {:?} cannot be separated at t = {} on the segment from 0",
                        roots
                            .iter()
                            .map(|r| (r.re.to_f64_lossy(), r.im.to_f64_lossy()))
                            .collect::<Vec<_>>(),
                        t.to_f64_lossy()
                    ),
                });
            }
        }
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freelaw::{harm_density, harm_mean_value, mp_density};
    use crate::quadrature::integrate;

    type C = Complex<f64>;

    fn p(g: f64, n: f64) -> HarmLawParams<f64> {
        HarmLawParams::new(g, n).unwrap()
    }

    fn harm_residual(q: &HarmLawParams<f64>, z: C, m: C) -> f64 {
        (z * m * m * (q.gamma() / q.n()) + (C::new(1.0 - q.gamma(), 0.0) - z) * m + 1.0).norm()
    }

    #[test]
    fn mp_decay_and_residual() {
        let z = C::new(0.0, 1e6);
        let m = stieltjes_mp(0.5, z).unwrap();
        assert!((z * m - 1.0).norm() < 1e-6);
        let z = C::new(1.0, 1.0);
        let m = stieltjes_mp(0.5, z).unwrap();
        let res = (z * m * m * 0.5 + (C::new(0.5, 0.0) - z) * m + 1.0).norm();
        assert!(res < 1e-12);
        assert!(m.im < 0.0);
    }

    #[test]
    fn mp_plemelj_limit() {
        let m = stieltjes_mp(0.5, C::new(1.0, 1e-6)).unwrap();
        assert!((-m.im / std::f64::consts::PI - mp_density(0.5, 1.0).unwrap()).abs() < 1e-4);
    }

    #[test]
    fn mp_on_support_is_an_error() {
        assert!(matches!(
            stieltjes_mp(0.5, C::new(1.0, 0.0)),
            Err(Error::OnSupport { .. })
        ));
        assert!(stieltjes_mp(0.5, C::new(0.0, 0.0)).is_err());
    }

    #[test]
    fn harm_decay() {
        for (g, n) in [(0.1, 2.0), (0.5, 2.0), (0.9, 10.0)] {
            let z = C::new(0.0, 1e6);
            let m = stieltjes_harm(&p(g, n), z).unwrap();
            assert!((z * m - 1.0).norm() < 1e-5);
        }
    }

    #[test]
    fn harm_plemelj_limit() {
        let q = p(0.5, 2.0);
        let m = stieltjes_harm(&q, C::new(1.0, 1e-6)).unwrap();
        assert!((-m.im / std::f64::consts::PI - 0.551329).abs() < 1e-4);
    }

    #[test]
    fn harm_on_real_axis_outside_support() {
        let q = p(0.5, 2.0);
        let m = stieltjes_harm(&q, C::new(3.0, 0.0)).unwrap();
        assert_eq!(m.im, 0.0);
        assert!(m.re > 0.0);
        assert!(harm_residual(&q, C::new(3.0, 0.0), m) < 1e-12);
        // Quadrature oracle with the sin^2 substitution.
        let (lo, hi) = q.support();
        let w = hi - lo;
        let oracle = integrate(
            |t: f64| {
                let s = (t / 2.0).sin();
                let x = lo + w * s * s;
                harm_density(&q, x) * w * 0.5 * t.sin() / (3.0 - x)
            },
            0.0,
            std::f64::consts::PI,
            1e-13,
            0.0,
            200,
        );
        assert!((m.re - oracle.value).abs() < 1e-8);
        // Left of the support the transform is negative.
        assert!(stieltjes_harm(&q, C::new(0.05, 0.0)).unwrap().re < 0.0);
        assert!(matches!(
            stieltjes_harm(&q, C::new(1.0, 0.0)),
            Err(Error::OnSupport { .. })
        ));
    }

    #[test]
    fn plemelj_examples() {
        let q = p(0.5, 2.0);
        let cfg = FixedPointConfig::default();
        let d = plemelj_density(|z| stieltjes_harm(&q, z), 1.0, &cfg).unwrap();
        assert!((d - harm_density(&q, 1.0)).abs() < 1e-6);
        let d = plemelj_density(|z| stieltjes_harm(&q, z), 10.0, &cfg).unwrap();
        assert!(d.abs() < 1e-8);
        let d = plemelj_density(|z| stieltjes_mp(0.5, z), 1.0, &cfg).unwrap();
        assert!((d - mp_density(0.5, 1.0).unwrap()).abs() < 1e-6);
        let bad = FixedPointConfig { eta: 0.0, ..cfg };
        assert!(plemelj_density(|z| stieltjes_mp(0.5, z), 1.0, &bad).is_err());
    }

    #[test]
    fn s_harm_examples() {
        let q = p(0.5, 2.0);
        let s0 = s_transform_harm(&q, C::new(0.0, 0.0)).unwrap();
        assert!((s0.re - 4.0 / 3.0).abs() < 1e-15);
        for g in [0.1, 0.5, 0.9] {
            for n in [2.0, 3.0, 10.0] {
                let q = p(g, n);
                let s0 = s_transform_harm(&q, C::new(0.0, 0.0)).unwrap();
                assert!((s0.re * harm_mean_value(&q) - 1.0).abs() < 1e-12);
            }
        }
        assert!(matches!(
            s_transform_harm(&q, C::new(-3.0, 0.0)),
            Err(Error::Pole { .. })
        ));
    }

    #[test]
    fn s_shifted_at_origin_is_linear_root() {
        let q = p(0.5, 2.0);
        let s = s_transform_shifted_harm(&q, C::new(0.0, 0.0)).unwrap();
        assert!((s.re + 4.0).abs() < 1e-15);
        // Continuity from the origin along the real axis.
        let s = s_transform_shifted_harm(&q, C::new(1e-7, 0.0)).unwrap();
        assert!((s.re + 4.0).abs() < 1e-5);
    }

    #[test]
    fn s_shifted_residual() {
        let q = p(0.5, 2.0);
        let w = C::new(0.1, 0.1);
        let s = s_transform_shifted_harm(&q, w).unwrap();
        let res = w * s * s * 0.25 + s * ((w + 1.0) * 0.25 - 0.5) - 1.0;
        assert!(res.norm() <= 1e-12);
    }

    #[test]
    fn s_shifted_requires_n_above_one() {
        assert!(s_transform_shifted_harm(&p(0.5, 1.0), C::new(0.1, 0.0)).is_err());
    }

    #[test]
    fn roots_cover_both_solutions() {
        let q = p(0.5, 2.0);
        let w = C::new(0.3, -0.2);
        let roots = shifted_harm_s_roots(&q, w);
        assert_eq!(roots.len(), 2);
        for s in roots {
            let res = w * s * s * 0.25 + s * ((w + 1.0) * 0.25 - 0.5) - 1.0;
            assert!(res.norm() < 1e-12);
        }
    }
}
