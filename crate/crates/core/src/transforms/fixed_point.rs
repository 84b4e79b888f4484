use num_complex::Complex;

use crate::error::{Error, Result};
use crate::freelaw::HarmLawParams;
use crate::scalar::Real;

use super::closed_form::stieltjes_harm;
use super::{ComplexPoint, FixedPointConfig, PopulationSpectrum};

/// Smallest damping reached by repeated halving.
const MIN_DAMPING: f64 = 1.0 / 64.0;
/// Consecutive residual increases that trigger a halving of the damping.
const OSCILLATION_RUN: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedPointSolution<T> {
    pub m: ComplexPoint<T>,
    pub iterations: usize,
    /// `|Phi(m) - m|` at the returned `m`.
    pub residual: T,
}

fn check_upper<T: Real>(z: ComplexPoint<T>) -> Result<()> {
    if z.im > T::zero() && z.re.is_finite() && z.im.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid("z", "fixed-point solvers need Im z > 0"))
    }
}

fn finite<T: Real>(m: ComplexPoint<T>) -> bool {
    m.re.is_finite() && m.im.is_finite()
}

/// Right-hand side of `m = integral dF(x) / (z - x (gamma z m / n + 1 - gamma))`.
fn phi_sh<T: Real>(
    params: &HarmLawParams<T>,
    f: &PopulationSpectrum<T>,
    z: ComplexPoint<T>,
    m: ComplexPoint<T>,
) -> ComplexPoint<T> {
    let factor = z * m * (params.gamma() / params.n()) + (T::one() - params.gamma());
    f.atoms()
        .iter()
        .fold(Complex::new(T::zero(), T::zero()), |acc, &(x, w)| {
            acc + (z - factor * x).inv() * w
        })
}

/// Residual `|Phi(m) - m|` of the equation solved by [`fixed_point_msh`].
pub fn msh_residual<T: Real>(
    params: &HarmLawParams<T>,
    f: &PopulationSpectrum<T>,
    z: ComplexPoint<T>,
    m: ComplexPoint<T>,
) -> T {
    (phi_sh(params, f, z, m) - m).norm()
}

/// Damped iteration `m <- m + alpha (Phi(m) - m)` with `alpha` halved after
/// repeated residual growth, interleaved with secant steps on `Phi(m) - m`
/// that are kept only when they lower the residual.
///
fn iterate<T: Real>(
    z: ComplexPoint<T>,
    m0: ComplexPoint<T>,
    cfg: &FixedPointConfig<T>,
    phi: impl Fn(ComplexPoint<T>) -> ComplexPoint<T>,
) -> Result<FixedPointSolution<T>> {
    cfg.validate()?;
    check_upper(z)?;
    let min_alpha = T::lit(MIN_DAMPING);
    let mut alpha = cfg.damping;
    let mut m = m0;
    let mut g = phi(m) - m;
    let mut r = g.norm();
    let mut prev: Option<(ComplexPoint<T>, ComplexPoint<T>)> = None;
    let mut rising = 0;
    for iterations in 0..cfg.max_iter {
        if !r.is_finite() {
            break;
        }
        if r < cfg.tol {
            if !(m.im < T::zero()) {
                return Err(Error::BranchAmbiguity {
                    re: z.re.to_f64_lossy(),
                    im: z.im.to_f64_lossy(),
                    detail: format!("fixed point {m} is not in the lower half-plane"),
                });
            }
            return Ok(FixedPointSolution {
                m,
                iterations,
                residual: r,
            });
        }
        let mut next = None;
        if let Some((mp, gp)) = prev {
            let dg = g - gp;
            if dg.norm() > T::zero() {
                let cand = m - g * (m - mp) / dg;
                if finite(cand) && cand.im < T::zero() {
                    let gc = phi(cand) - cand;
                    if gc.norm() < r {
                        next = Some((cand, gc));
                    }
                }
            }
        }
        let (mn, gn) = match next {
            Some(step) => {
                rising = 0;
                step
            }
            None => {
                let md = m + g * alpha;
                let gd = phi(md) - md;
                if gd.norm() > r {
                    rising += 1;
                    if rising >= OSCILLATION_RUN {
                        alpha = (alpha * T::lit(0.5)).max(min_alpha);
                        rising = 0;
                    }
                } else {
                    rising = 0;
                }
                (md, gd)
            }
        };
        prev = Some((m, g));
        m = mn;
        g = gn;
        r = g.norm();
    }
    Err(Error::NonConvergence {
        iterations: cfg.max_iter,
        residual: r.to_f64_lossy(),
    })
}

/// Stieltjes transform of `Sigma^{1/2} H Sigma^{1/2}` for population
/// spectrum `f`, from `m = integral dF(x) / (z - x (gamma z m / n + 1 - gamma))`.
pub fn fixed_point_msh<T: Real>(
    params: &HarmLawParams<T>,
    f: &PopulationSpectrum<T>,
    z: ComplexPoint<T>,
    cfg: &FixedPointConfig<T>,
) -> Result<FixedPointSolution<T>> {
    fixed_point_msh_from(params, f, z, z.inv(), cfg)
}

/// [`fixed_point_msh`] started from `m0`.
pub fn fixed_point_msh_from<T: Real>(
    params: &HarmLawParams<T>,
    f: &PopulationSpectrum<T>,
    z: ComplexPoint<T>,
    m0: ComplexPoint<T>,
    cfg: &FixedPointConfig<T>,
) -> Result<FixedPointSolution<T>> {
    iterate(z, m0, cfg, |m| phi_sh(params, f, z, m))
}

/// Stieltjes transform of `Sigma^{1/2} H Sigma^{1/2} - Sigma` for population
/// spectrum `f`, from `m = integral dF(x) / (z - x / S(z m - 1))` with `S` the
/// S-transform of `h - 1`.
///
/// `S(w) = (1 + w) / (w zeta)` where `zeta m_h(zeta + 1) = 1 + w`, so the
/// equation is solved for the preimage `zeta` in the upper half-plane, where
/// the closed form of `m_h` fixes the branch. With `u = zeta - 1 / m_h(zeta + 1)`
/// it reads `zeta m_h(zeta + 1) = z integral dF(x) / (z - x u)`. Every `zeta`
/// with `zeta m_h(zeta + 1) = 1` solves this too and gives the spurious
/// `m = 1/z`; that factor is divided out before the secant iteration.
pub fn fixed_point_me<T: Real>(
    params: &HarmLawParams<T>,
    f: &PopulationSpectrum<T>,
    z: ComplexPoint<T>,
    cfg: &FixedPointConfig<T>,
) -> Result<FixedPointSolution<T>> {
    solve_me(params, f, z, None, cfg).map(|(sol, _)| sol)
}

/// Relative size of the first secant offset.
const SECANT_OFFSET: f64 = 1e-6;
/// Backtracking gives up once the step fraction falls below this.
const MIN_STEP: f64 = 1e-10;

struct Subordination<'a, T> {
    params: &'a HarmLawParams<T>,
    f: &'a PopulationSpectrum<T>,
    z: ComplexPoint<T>,
}

/// Values of the subordination equation at one `zeta`.
#[derive(Clone, Copy)]
struct Eval<T> {
    zeta: ComplexPoint<T>,
    /// Deflated equation.
    deflated: ComplexPoint<T>,
    m: ComplexPoint<T>,
    /// `|Phi(m) - m|` of the original equation.
    residual: T,
}

impl<T: Real> Subordination<'_, T> {
    fn eval(&self, zeta: ComplexPoint<T>) -> Option<Eval<T>> {
        if !(zeta.im > T::zero()) || !finite(zeta) {
            return None;
        }
        let mh = stieltjes_harm(self.params, zeta + T::one()).ok()?;
        let u = zeta - mh.inv();
        let one_plus_w = zeta * mh;
        let phi = self
            .f
            .atoms()
            .iter()
            .fold(Complex::new(T::zero(), T::zero()), |acc, &(x, w)| {
                acc + (self.z - u * x).inv() * w
            });
        let full = one_plus_w - self.z * phi;
        let deflated = full / (one_plus_w - T::one());
        let m = one_plus_w / self.z;
        let residual = (phi - m).norm();
        (finite(deflated) && residual.is_finite()).then_some(Eval {
            zeta,
            deflated,
            m,
            residual,
        })
    }

    /// Secant iteration with backtracking on `|deflated|`. Returns the final
    /// evaluation and the number of steps, or the steps spent on failure.
    fn secant(
        &self,
        zeta0: ComplexPoint<T>,
        tol: T,
        budget: usize,
    ) -> std::result::Result<(Eval<T>, usize), (usize, T)> {
        let Some(mut cur) = self.eval(zeta0) else {
            return Err((0, T::infinity()));
        };
        let offset = Complex::new(T::zero(), T::lit(SECANT_OFFSET) * (T::one() + zeta0.norm()));
        let Some(mut prev) = self.eval(zeta0 + offset) else {
            return Err((0, cur.residual));
        };
        for steps in 0..budget {
            if cur.residual < tol {
                return Ok((cur, steps));
            }
            let slope = (cur.deflated - prev.deflated) / (cur.zeta - prev.zeta);
            let step = -cur.deflated / slope;
            if !finite(step) {
                return Err((steps, cur.residual));
            }
            let mut t = T::one();
            let next = loop {
                if let Some(e) = self.eval(cur.zeta + step * t) {
                    if e.deflated.norm() < cur.deflated.norm() {
                        break e;
                    }
                }
                t = t * T::lit(0.5);
                if t < T::lit(MIN_STEP) {
                    return Err((steps, cur.residual));
                }
            };
            prev = cur;
            cur = next;
        }
        Err((budget, cur.residual))
    }
}

/// [`fixed_point_me`] from an optional starting preimage; also returns the
/// preimage of the solution for warm starts.
pub(super) fn solve_me<T: Real>(
    params: &HarmLawParams<T>,
    f: &PopulationSpectrum<T>,
    z: ComplexPoint<T>,
    zeta0: Option<ComplexPoint<T>>,
    cfg: &FixedPointConfig<T>,
) -> Result<(FixedPointSolution<T>, ComplexPoint<T>)> {
    cfg.validate()?;
    check_upper(z)?;
    if params.n() <= T::one() {
        return Err(Error::invalid("n", "the shifted law needs n > 1"));
    }
    let problem = Subordination { params, f, z };
    // For dF = delta_c the preimage is exactly z / c.
    let mean = f.atoms().iter().fold(T::zero(), |s, &(x, w)| s + x * w);
    let cold = z / mean;
    let lifted = cold + Complex::new(T::zero(), T::one() + cold.norm());
    let starts = zeta0.into_iter().chain([cold, lifted]);
    let mut spent = 0;
    let mut residual = T::infinity();
    for start in starts {
        if spent >= cfg.max_iter {
            break;
        }
        match problem.secant(start, cfg.tol, cfg.max_iter - spent) {
            Ok((e, steps)) => {
                if !(e.m.im < T::zero()) {
                    return Err(Error::BranchAmbiguity {
                        re: z.re.to_f64_lossy(),
                        im: z.im.to_f64_lossy(),
                        detail: format!("fixed point {} is not in the lower half-plane", e.m),
                    });
                }
                let sol = FixedPointSolution {
                    m: e.m,
                    iterations: spent + steps,
                    residual: e.residual,
                };
                return Ok((sol, e.zeta));
            }
            Err((steps, r)) => {
                spent += steps.max(1);
                residual = r;
            }
        }
    }
    Err(Error::NonConvergence {
        iterations: spent,
        residual: residual.to_f64_lossy(),
    })
}
