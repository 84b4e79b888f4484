//! Eigenvalues, empirical spectral distributions and goodness-of-fit against
//! the analytic laws.

use nalgebra::{DMatrix, SymmetricEigen};
use num_traits::Float;

use crate::error::{Error, Result};
use crate::hermitian::{with_inner, Entry, HermitianMatrix};
use crate::scalar::{LinalgScalar, Real};

/// Sorted, finite eigenvalues of one matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumSample<T> {
    values: Vec<T>,
}

impl<T: Real> SpectrumSample<T> {
    /// Sorts `values` ascending. Rejects empty or non-finite input.
    pub fn new(mut values: Vec<T>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyInput);
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid(
                "values",
                "spectrum contains non-finite entries",
            ));
        }
        values.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
        Ok(Self { values })
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    /// The same spectrum shifted by `c`.
    pub fn shifted(&self, c: T) -> Self {
        Self {
            values: self.values.iter().map(|&v| v + c).collect(),
        }
    }

    pub fn sum(&self) -> T {
        self.values.iter().fold(T::zero(), |a, &b| a + b)
    }
}

/// A cumulative distribution function with compact support `[lo, hi]`.
pub trait CdfFunction<T> {
    fn cdf(&self, x: T) -> T;
    fn support(&self) -> (T, T);

    /// Left limit `F(x-)`; differs from [`CdfFunction::cdf`] only at atoms.
    fn cdf_left(&self, x: T) -> T {
        self.cdf(x)
    }
}

/// Distribution concentrated at one point.
#[derive(Debug, Clone, Copy)]
pub struct PointMassCdf<T>(pub T);

impl<T: Real> CdfFunction<T> for PointMassCdf<T> {
    fn cdf(&self, x: T) -> T {
        if x < self.0 {
            T::zero()
        } else {
            T::one()
        }
    }

    fn support(&self) -> (T, T) {
        (self.0, self.0)
    }

    fn cdf_left(&self, x: T) -> T {
        if x <= self.0 {
            T::zero()
        } else {
            T::one()
        }
    }
}

/// A closure with a declared support; values are clamped to `[0, 1]`.
pub struct FnCdf<T, F> {
    f: F,
    lo: T,
    hi: T,
}

impl<T: Real, F: Fn(T) -> T> FnCdf<T, F> {
    pub fn new(lo: T, hi: T, f: F) -> Self {
        Self { f, lo, hi }
    }
}

impl<T: Real, F: Fn(T) -> T> CdfFunction<T> for FnCdf<T, F> {
    fn cdf(&self, x: T) -> T {
        if x < self.lo {
            T::zero()
        } else if x >= self.hi {
            T::one()
        } else {
            (self.f)(x).max(T::zero()).min(T::one())
        }
    }

    fn support(&self) -> (T, T) {
        (self.lo, self.hi)
    }
}

/// Piecewise-linear CDF obtained by integrating a tabulated density with the
/// trapezoid rule. The total mass is renormalized to one.
#[derive(Debug, Clone)]
pub struct TabulatedCdf<T> {
    xs: Vec<T>,
    cumulative: Vec<T>,
}

impl<T: Real> TabulatedCdf<T> {
    /// `curve` holds `(x, density)` pairs with `x` strictly increasing.
    pub fn from_density(curve: &[(T, T)]) -> Result<Self> {
        if curve.len() < 2 {
            return Err(Error::invalid("curve", "need at least two points"));
        }
        if curve.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(Error::invalid("curve", "grid must be strictly increasing"));
        }
        let mut cumulative = Vec::with_capacity(curve.len());
        let mut acc = T::zero();
        cumulative.push(acc);
        let half = T::lit(0.5);
        for w in curve.windows(2) {
            acc = acc + (w[1].0 - w[0].0) * (w[0].1 + w[1].1) * half;
            cumulative.push(acc);
        }
        if acc <= T::zero() {
            return Err(Error::invalid("curve", "density has no mass"));
        }
        for c in cumulative.iter_mut() {
            *c = *c / acc;
        }
        Ok(Self {
            xs: curve.iter().map(|p| p.0).collect(),
            cumulative,
        })
    }
}

impl<T: Real> CdfFunction<T> for TabulatedCdf<T> {
    fn cdf(&self, x: T) -> T {
        let n = self.xs.len();
        if x <= self.xs[0] {
            return T::zero();
        }
        if x >= self.xs[n - 1] {
            return T::one();
        }
        let k = self.xs.partition_point(|&v| v <= x);
        let (x0, x1) = (self.xs[k - 1], self.xs[k]);
        let (c0, c1) = (self.cumulative[k - 1], self.cumulative[k]);
        c0 + (c1 - c0) * (x - x0) / (x1 - x0)
    }

    fn support(&self) -> (T, T) {
        (self.xs[0], self.xs[self.xs.len() - 1])
    }
}

const SELF_ADJOINT_TOL: f64 = 1e-12;

fn check_self_adjoint<T: LinalgScalar>(m: &HermitianMatrix<T>) -> Result<()> {
    let dev = m.self_adjoint_deviation();
    if dev > T::lit(SELF_ADJOINT_TOL) {
        return Err(Error::NotSelfAdjoint {
            deviation: dev.to_f64_lossy(),
        });
    }
    Ok(())
}

fn eigenvalues_of<T: LinalgScalar, E: Entry<T>>(m: &DMatrix<E>) -> Vec<T> {
    m.clone().symmetric_eigenvalues().iter().copied().collect()
}

/// All eigenvalues of a self-adjoint matrix, ascending.
pub fn eigvalsh<T: LinalgScalar>(m: &HermitianMatrix<T>) -> Result<SpectrumSample<T>> {
    check_self_adjoint(m)?;
    SpectrumSample::new(with_inner!(m, |x| eigenvalues_of(x)))
}

fn reconstruction<T: LinalgScalar, E: Entry<T>>(m: &DMatrix<E>) -> (Vec<T>, T) {
    let eig = SymmetricEigen::new(m.clone());
    let lambda = DMatrix::from_diagonal(&eig.eigenvalues.map(E::from_real));
    let rebuilt = &eig.eigenvectors * lambda * eig.eigenvectors.adjoint();
    let err = (m - rebuilt)
        .iter()
        .fold(T::zero(), |a, v| Float::max(a, v.modulus()));
    (eig.eigenvalues.iter().copied().collect(), err)
}

/// Eigenvalues together with the entrywise reconstruction error
/// `max |M - V diag(lambda) V*|` of the full decomposition.
pub fn eigh_with_residual<T: LinalgScalar>(
    m: &HermitianMatrix<T>,
) -> Result<(SpectrumSample<T>, T)> {
    check_self_adjoint(m)?;
    let (values, err) = with_inner!(m, |x| reconstruction(x));
    Ok((SpectrumSample::new(values)?, err))
}

/// Smallest and largest eigenvalue.
pub fn edge_statistics<T: Real>(sample: &SpectrumSample<T>) -> (T, T) {
    (sample.values[0], sample.values[sample.values.len() - 1])
}

/// Operator norm of a self-adjoint matrix: largest absolute eigenvalue.
pub fn operator_norm<T: LinalgScalar>(m: &HermitianMatrix<T>) -> Result<T> {
    let (lo, hi) = edge_statistics(&eigvalsh(m)?);
    Ok(Float::max(Float::abs(lo), Float::abs(hi)))
}

/// `|| M - Ref ||`, the largest absolute eigenvalue of the difference.
pub fn operator_norm_error<T: LinalgScalar>(
    m: &HermitianMatrix<T>,
    reference: &HermitianMatrix<T>,
) -> Result<T> {
    operator_norm(&m.try_sub(reference)?)
}

/// Two-sided Kolmogorov-Smirnov distance between the empirical distribution
/// of `sample` and `cdf`: the maximum over sorted `x_k` of
/// `max(k/P - F(x_k), F(x_k-) - (k-1)/P)`.
pub fn ks_distance<T: Real, C: CdfFunction<T> + ?Sized>(sample: &SpectrumSample<T>, cdf: &C) -> T {
    let p = T::from_usize_lossy(sample.len());
    let mut worst = T::zero();
    let mut k = 0;
    while k < sample.len() {
        let x = sample.values[k];
        // Ties form a single jump of the empirical CDF.
        let mut last = k;
        while last + 1 < sample.len() && sample.values[last + 1] == x {
            last += 1;
        }
        let below = T::from_usize_lossy(k) / p;
        let above = T::from_usize_lossy(last + 1) / p;
        worst = worst.max(above - cdf.cdf(x)).max(cdf.cdf_left(x) - below);
        k = last + 1;
    }
    worst
}
