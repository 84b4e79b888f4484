//! Stieltjes, R- and S-transform algebra of the harmonic-mean law, and the
//! fixed-point equations for the harmonic mean conjugated by a general
//! population covariance.
//!
//! The Stieltjes transform convention is `m(z) = integral dmu(x) / (z - x)`,
//! so `Im m(z) < 0` in the upper half-plane and the density is recovered as
//! `-(1/pi) Im m(x + i0)`.

mod closed_form;
mod curve;
mod fixed_point;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

pub use closed_form::{
    plemelj_density, s_transform_harm, s_transform_shifted_harm, shifted_harm_s_roots,
    stieltjes_harm, stieltjes_mp,
};
pub use curve::{
    density_curve, density_curve_chunked, density_curve_with_status, DensityPoint, DensitySolver,
};
pub use fixed_point::{
    fixed_point_me, fixed_point_msh, fixed_point_msh_from, msh_residual, FixedPointSolution,
};

/// Point of the complex plane at which transforms are evaluated.
pub type ComplexPoint<T> = Complex<T>;

/// Discrete limiting spectrum `dF` of the population covariance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PopulationSpectrum<T> {
    atoms: Vec<(T, T)>,
}

/// Tolerance on the total weight of a [`PopulationSpectrum`].
pub const WEIGHT_SUM_TOL: f64 = 1e-12;

impl<T: Real> PopulationSpectrum<T> {
    /// `atoms` holds `(location, weight)` pairs; locations and weights must be
    /// positive and the weights must sum to one.
    pub fn new(atoms: Vec<(T, T)>) -> Result<Self> {
        Self::validate(&atoms)?;
        let total = atoms.iter().fold(T::zero(), |s, a| s + a.1);
        if (total - T::one()).abs() > T::lit(WEIGHT_SUM_TOL) {
            return Err(Error::InvalidSpectrum(format!(
                "weights sum to {total}, not 1"
            )));
        }
        Ok(Self { atoms })
    }

    /// Like [`PopulationSpectrum::new`], but rescales the weights when their
    /// sum is within `tol` of one.
    pub fn normalized(mut atoms: Vec<(T, T)>, tol: T) -> Result<Self> {
        Self::validate(&atoms)?;
        let total = atoms.iter().fold(T::zero(), |s, a| s + a.1);
        if (total - T::one()).abs() > tol {
            return Err(Error::InvalidSpectrum(format!(
                "weights sum to {total}, which is not within {tol} of 1"
            )));
        }
        atoms.iter_mut().for_each(|a| a.1 = a.1 / total);
        Ok(Self { atoms })
    }

    fn validate(atoms: &[(T, T)]) -> Result<()> {
        if atoms.is_empty() {
            return Err(Error::InvalidSpectrum("no atoms".into()));
        }
        for (k, &(x, w)) in atoms.iter().enumerate() {
            if !(x > T::zero()) || !x.is_finite() {
                return Err(Error::InvalidSpectrum(format!(
                    "atom {k} has location {x}; locations must be strictly positive"
                )));
            }
            if !(w > T::zero()) || !w.is_finite() {
                return Err(Error::InvalidSpectrum(format!(
                    "atom {k} has weight {w}; weights must be strictly positive"
                )));
            }
        }
        Ok(())
    }

    /// `dF = delta_c`.
    pub fn point_mass(c: T) -> Result<Self> {
        Self::new(vec![(c, T::one())])
    }

    pub fn atoms(&self) -> &[(T, T)] {
        &self.atoms
    }

    /// Largest atom location.
    pub fn max_location(&self) -> T {
        self.atoms.iter().fold(T::zero(), |m, a| m.max(a.0))
    }
}

/// Controls of the damped fixed-point iteration and of the Plemelj inversion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FixedPointConfig<T> {
    /// Distance above the real axis for density recovery.
    pub eta: T,
    /// Convergence threshold on `|Phi(m) - m|`.
    pub tol: T,
    pub max_iter: usize,
    /// Initial damping `alpha` in `m <- (1 - alpha) m + alpha Phi(m)`.
    pub damping: T,
}

impl<T: Real> Default for FixedPointConfig<T> {
    fn default() -> Self {
        Self {
            eta: T::lit(1e-4),
            tol: T::lit(1e-12),
            max_iter: 10_000,
            damping: T::lit(0.5),
        }
    }
}

impl<T: Real> FixedPointConfig<T> {
    pub fn validate(&self) -> Result<()> {
        if !(self.eta > T::zero()) {
            return Err(Error::invalid("eta", "must be positive"));
        }
        if !(self.tol > T::zero()) {
            return Err(Error::invalid("tol", "must be positive"));
        }
        if self.max_iter == 0 {
            return Err(Error::invalid("max_iter", "must be positive"));
        }
        if !(self.damping > T::zero() && self.damping <= T::one()) {
            return Err(Error::invalid("damping", "must lie in (0, 1]"));
        }
        Ok(())
    }
}
