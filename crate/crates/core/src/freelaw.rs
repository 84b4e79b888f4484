//! Closed-form limiting laws: the Marcenko-Pastur density, the limiting law
//! of the harmonic mean of `n` Wishart matrices, the operator-norm limits of
//! both means and the crossover between them.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::quadrature::integrate;
use crate::scalar::Real;
use crate::spectral::CdfFunction;

/// Absolute accuracy of [`harm_cdf`].
pub const CDF_ABS_TOL: f64 = 1e-10;
/// Upper limit of the crossover search.
pub const CROSSOVER_N_MAX: f64 = 1e6;
/// Bracket width at which the crossover bisection stops.
pub const CROSSOVER_TOL: f64 = 1e-10;

fn check_gamma<T: Real>(gamma: T) -> Result<()> {
    if gamma > T::zero() && gamma < T::one() {
        Ok(())
    } else {
        Err(Error::invalid(
            "gamma",
            format!("must lie in (0, 1), got {gamma}"),
        ))
    }
}

/// Aspect ratio `gamma` and number of matrices `n`, with the support edges
/// of the limiting harmonic-mean law.
///
/// `n` may be any real `>= 1` so that the crossover in `n` is a root of a
/// continuous function; sampling code uses integer `n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HarmLawParams<T> {
    gamma: T,
    n: T,
    e_minus: T,
    e_plus: T,
}

impl<T: Real> HarmLawParams<T> {
    pub fn new(gamma: T, n: T) -> Result<Self> {
        check_gamma(gamma)?;
        if !(n >= T::one()) || !n.is_finite() {
            return Err(Error::invalid(
                "n",
                format!("must be a finite number >= 1, got {n}"),
            ));
        }
        let ratio = gamma / n;
        let a = (T::one() - gamma + ratio).sqrt();
        let b = ratio.sqrt();
        let e_plus = (a + b) * (a + b);
        // (a - b)(a + b) = 1 - gamma, so this avoids the cancellation in a - b.
        let one_minus = T::one() - gamma;
        let e_minus = one_minus * one_minus / e_plus;
        Ok(Self {
            gamma,
            n,
            e_minus,
            e_plus,
        })
    }

    pub fn gamma(&self) -> T {
        self.gamma
    }

    pub fn n(&self) -> T {
        self.n
    }

    /// Left edge of the support.
    pub fn e_minus(&self) -> T {
        self.e_minus
    }

    /// Right edge of the support.
    pub fn e_plus(&self) -> T {
        self.e_plus
    }

    pub fn support(&self) -> (T, T) {
        (self.e_minus, self.e_plus)
    }
}

/// Marcenko-Pastur density with ratio `gamma`.
pub fn mp_density<T: Real>(gamma: T, x: T) -> Result<T> {
    check_gamma(gamma)?;
    let r = gamma.sqrt();
    let lo = (T::one() - r) * (T::one() - r);
    let hi = (T::one() + r) * (T::one() + r);
    if x <= lo || x >= hi {
        return Ok(T::zero());
    }
    let two_pi = T::lit(2.0) * T::PI();
    Ok(((hi - x) * (x - lo)).sqrt() / (two_pi * gamma * x))
}

/// Limiting spectral density of the harmonic mean,
/// `n sqrt((e+ - x)(x - e-)) / (2 pi gamma x)` on `[e-, e+]`.
pub fn harm_density<T: Real>(params: &HarmLawParams<T>, x: T) -> T {
    let (lo, hi) = params.support();
    if x <= lo || x >= hi {
        return T::zero();
    }
    let two_pi = T::lit(2.0) * T::PI();
    params.n * ((hi - x) * (x - lo)).sqrt() / (two_pi * params.gamma * x)
}

/// Cumulative distribution of the harmonic-mean law.
///
/// Integrates the density after the change of variables
/// `x = e- + (e+ - e-) sin^2(theta / 2)`, which removes both square-root
/// endpoint singularities.
pub fn harm_cdf<T: Real>(params: &HarmLawParams<T>, x: T) -> T {
    let (lo, hi) = params.support();
    if x <= lo {
        return T::zero();
    }
    if x >= hi {
        return T::one();
    }
    let width = hi - lo;
    let theta_x = T::lit(2.0) * ((x - lo) / width).sqrt().min(T::one()).asin();
    let scale = params.n * width * width / (T::lit(8.0) * T::PI() * params.gamma);
    let integrand = |theta: T| {
        let s = (theta * T::lit(0.5)).sin();
        let xt = lo + width * s * s;
        let st = theta.sin();
        scale * st * st / xt
    };
    let q = integrate(
        integrand,
        T::zero(),
        theta_x,
        T::lit(CDF_ABS_TOL) * T::lit(0.1),
        T::zero(),
        200,
    );
    q.value.max(T::zero()).min(T::one())
}

/// [`harm_cdf`] as a [`CdfFunction`].
#[derive(Debug, Clone, Copy)]
pub struct HarmCdf<T>(pub HarmLawParams<T>);

impl<T: Real> CdfFunction<T> for HarmCdf<T> {
    fn cdf(&self, x: T) -> T {
        harm_cdf(&self.0, x)
    }

    fn support(&self) -> (T, T) {
        self.0.support()
    }
}

/// Limit of `||H - I||`: `gamma - 2 gamma / n + 2 sqrt(gamma / n) sqrt(1 - gamma + gamma / n)`.
pub fn harm_norm_limit<T: Real>(params: &HarmLawParams<T>) -> T {
    let (g, n) = (params.gamma, params.n);
    let two = T::lit(2.0);
    g - two * g / n + two * (g / n).sqrt() * (T::one() - g + g / n).sqrt()
}

/// Limit of `||A - I||`: `gamma / n + 2 sqrt(gamma / n)`.
pub fn arith_norm_limit<T: Real>(gamma: T, n: T) -> T {
    let r = gamma / n;
    r + T::lit(2.0) * r.sqrt()
}

/// Outcome of the crossover search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Crossover<T> {
    /// `n_star_real` is the root of `harm - arith`; `n_star_int` is the largest
    /// integer `n` at which the harmonic mean still wins.
    Crossing {
        n_star_real: T,
        n_star_int: u64,
    },
    NoCrossing,
}

/// `harm_norm_limit - arith_norm_limit` as a function of real `n`.
pub fn crossover_gap<T: Real>(gamma: T, n: T) -> Result<T> {
    let params = HarmLawParams::new(gamma, n)?;
    Ok(harm_norm_limit(&params) - arith_norm_limit(gamma, n))
}

/// Threshold `n*(gamma)` beyond which the arithmetic mean has the smaller
/// limiting operator-norm error.
pub fn critical_n<T: Real>(gamma: T) -> Result<Crossover<T>> {
    check_gamma(gamma)?;
    let f = |n: T| crossover_gap(gamma, n);
    let mut lo = T::lit(2.0);
    let mut hi = T::lit(4.0);
    let n_max = T::lit(CROSSOVER_N_MAX);
    if f(lo)? >= T::zero() {
        return Ok(Crossover::NoCrossing);
    }
    while f(hi)? < T::zero() {
        if hi >= n_max {
            return Ok(Crossover::NoCrossing);
        }
        lo = hi;
        hi = (hi * T::lit(2.0)).min(n_max);
    }
    let tol = T::lit(CROSSOVER_TOL);
    while hi - lo > tol {
        let mid = (lo + hi) * T::lit(0.5);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid)? < T::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let root = (lo + hi) * T::lit(0.5);
    let mut n_int = root.floor().to_u64().unwrap_or(2).max(2);
    while n_int > 2 && f(T::lit(n_int as f64))? >= T::zero() {
        n_int -= 1;
    }
    while f(T::lit((n_int + 1) as f64))? < T::zero() {
        n_int += 1;
    }
    Ok(Crossover::Crossing {
        n_star_real: root,
        n_star_int: n_int,
    })
}

/// Largest limiting condition number of the covariance for which the
/// harmonic mean keeps its operator-norm advantage:
/// `arith_norm_limit / harm_norm_limit`.
pub fn condition_number_bound<T: Real>(gamma: T, n: T) -> Result<T> {
    let params = HarmLawParams::new(gamma, n)?;
    let harm = harm_norm_limit(&params);
    let arith = arith_norm_limit(gamma, n);
    if harm >= arith {
        return Err(Error::VacuousBound {
            harm: harm.to_f64_lossy(),
            arith: arith.to_f64_lossy(),
        });
    }
    Ok(arith / harm)
}

/// First moment of the harmonic-mean law, `n (e+ - e-)^2 / (16 gamma)`.
pub fn harm_mean_value<T: Real>(params: &HarmLawParams<T>) -> T {
    let d = params.e_plus - params.e_minus;
    params.n * d * d / (T::lit(16.0) * params.gamma)
}
