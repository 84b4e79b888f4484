use num_complex::Complex;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::freelaw::HarmLawParams;
use crate::scalar::Real;

use super::closed_form::{clamp_density, plemelj_density, stieltjes_harm};
use super::fixed_point::{fixed_point_msh_from, solve_me};
use super::{ComplexPoint, FixedPointConfig, PopulationSpectrum};

/// Source of the Stieltjes transform behind a density curve.
#[derive(Debug, Clone, PartialEq)]
pub enum DensitySolver<T> {
    /// Closed-form harmonic-mean law.
    ClosedForm(HarmLawParams<T>),
    /// `Sigma^{1/2} H Sigma^{1/2}` via [`super::fixed_point_msh`].
    Sh {
        params: HarmLawParams<T>,
        spectrum: PopulationSpectrum<T>,
    },
    /// `Sigma^{1/2} H Sigma^{1/2} - Sigma` via [`super::fixed_point_me`].
    E {
        params: HarmLawParams<T>,
        spectrum: PopulationSpectrum<T>,
    },
}

/// One grid point of a density curve. `density` is NaN when `error` is set.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityPoint<T> {
    pub x: T,
    pub density: T,
    pub error: Option<Error>,
}

impl<T> DensityPoint<T> {
    pub fn is_ok(&self) -> bool {
        self.error.is_none()
    }
}

/// Warm-start state of the two fixed-point chains at heights `eta` and `eta/2`.
#[derive(Clone, Copy)]
struct Chain<T> {
    m: ComplexPoint<T>,
    zeta: Option<ComplexPoint<T>>,
}

struct Sweep<'a, T> {
    solver: &'a DensitySolver<T>,
    cfg: &'a FixedPointConfig<T>,
    chains: Option<[Chain<T>; 2]>,
}

impl<'a, T: Real> Sweep<'a, T> {
    fn new(solver: &'a DensitySolver<T>, cfg: &'a FixedPointConfig<T>) -> Self {
        Self {
            solver,
            cfg,
            chains: None,
        }
    }

    fn solve(&self, z: ComplexPoint<T>, warm: Option<Chain<T>>) -> Result<Chain<T>> {
        let m0 = warm.map_or_else(|| z.inv(), |c| c.m);
        match self.solver {
            DensitySolver::ClosedForm(params) => Ok(Chain {
                m: stieltjes_harm(params, z)?,
                zeta: None,
            }),
            DensitySolver::Sh { params, spectrum } => Ok(Chain {
                m: fixed_point_msh_from(params, spectrum, z, m0, self.cfg)?.m,
                zeta: None,
            }),
            DensitySolver::E { params, spectrum } => {
                let (sol, zeta) =
                    solve_me(params, spectrum, z, warm.and_then(|c| c.zeta), self.cfg)?;
                Ok(Chain {
                    m: sol.m,
                    zeta: Some(zeta),
                })
            }
        }
    }

    fn density(&mut self, x: T) -> Result<T> {
        if let DensitySolver::ClosedForm(params) = self.solver {
            return plemelj_density(|z| stieltjes_harm(params, z), x, self.cfg);
        }
        let eta = self.cfg.eta;
        let warm = self.chains;
        let coarse = self.solve(Complex::new(x, eta), warm.map(|c| c[0]));
        let fine = coarse.and_then(|c| {
            Ok((
                c,
                self.solve(Complex::new(x, eta * T::lit(0.5)), warm.map(|w| w[1]))?,
            ))
        });
        match fine {
            Ok((c, f)) => {
                self.chains = Some([c, f]);
                let d = |m: ComplexPoint<T>| -m.im / T::PI();
                Ok(clamp_density(T::lit(2.0) * d(f.m) - d(c.m)))
            }
            Err(e) => {
                self.chains = None;
                Err(e)
            }
        }
    }
}

fn check_grid<T: Real>(grid: &[T]) -> Result<()> {
    if let Some(k) = grid.iter().position(|x| !x.is_finite()) {
        return Err(Error::invalid("grid", format!("entry {k} is not finite")));
    }
    if grid.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::invalid("grid", "must be sorted ascending"));
    }
    Ok(())
}

/// Density on `grid` by Plemelj inversion of the chosen transform. Fixed-point
/// solves at each point start from the solution at the previous point.
pub fn density_curve<T: Real>(
    solver: &DensitySolver<T>,
    grid: &[T],
    cfg: &FixedPointConfig<T>,
) -> Result<Vec<(T, T)>> {
    cfg.validate()?;
    check_grid(grid)?;
    let mut sweep = Sweep::new(solver, cfg);
    grid.iter()
        .enumerate()
        .map(|(index, &x)| {
            sweep
                .density(x)
                .map(|d| (x, d))
                .map_err(|e| Error::GridPoint {
                    index,
                    source: Box::new(e),
                })
        })
        .collect()
}

/// Like [`density_curve`], but a failing point is recorded and the sweep
/// continues with a cold start at the next point.
pub fn density_curve_with_status<T: Real>(
    solver: &DensitySolver<T>,
    grid: &[T],
    cfg: &FixedPointConfig<T>,
) -> Result<Vec<DensityPoint<T>>> {
    cfg.validate()?;
    check_grid(grid)?;
    let mut sweep = Sweep::new(solver, cfg);
    Ok(grid.iter().map(|&x| point(&mut sweep, x)).collect())
}

fn point<T: Real>(sweep: &mut Sweep<'_, T>, x: T) -> DensityPoint<T> {
    match sweep.density(x) {
        Ok(density) => DensityPoint {
            x,
            density,
            error: None,
        },
        Err(e) => DensityPoint {
            x,
            density: T::nan(),
            error: Some(e),
        },
    }
}

/// [`density_curve_with_status`] split into contiguous chunks of `chunk_len`
/// points that are swept in parallel, each from a cold start.
pub fn density_curve_chunked<T: Real>(
    solver: &DensitySolver<T>,
    grid: &[T],
    cfg: &FixedPointConfig<T>,
    chunk_len: usize,
) -> Result<Vec<DensityPoint<T>>> {
    cfg.validate()?;
    check_grid(grid)?;
    if chunk_len == 0 {
        return Err(Error::invalid("chunk_len", "must be positive"));
    }
    let chunks: Vec<Vec<DensityPoint<T>>> = grid
        .par_chunks(chunk_len)
        .map(|chunk| {
            let mut sweep = Sweep::new(solver, cfg);
            chunk.iter().map(|&x| point(&mut sweep, x)).collect()
        })
        .collect();
    Ok(chunks.into_iter().flatten().collect())
}
