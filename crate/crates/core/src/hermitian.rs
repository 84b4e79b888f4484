//! Dense self-adjoint matrices over real or complex entries.

use nalgebra::{ComplexField, DMatrix};
use num_complex::Complex;
use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::LinalgScalar;

/// Field of the matrix entries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ScalarKind {
    Real,
    Complex,
}

/// Entry type of a dense matrix: `T` or `Complex<T>`.
pub(crate) trait Entry<T: LinalgScalar>: ComplexField<RealField = T> + Copy {}

impl<T: LinalgScalar> Entry<T> for T {}
impl<T: LinalgScalar> Entry<T> for Complex<T> {}

/// Applies a kind-agnostic expression to the inner matrix, keeping the kind.
macro_rules! map_inner {
    ($m:expr, |$x:ident| $body:expr) => {
        match $m {
            HermitianMatrix::Real($x) => HermitianMatrix::Real($body),
            HermitianMatrix::Complex($x) => HermitianMatrix::Complex($body),
        }
    };
}

/// Applies a kind-agnostic expression to the inner matrix.
macro_rules! with_inner {
    ($m:expr, |$x:ident| $body:expr) => {
        match $m {
            HermitianMatrix::Real($x) => $body,
            HermitianMatrix::Complex($x) => $body,
        }
    };
}

/// Pairs two matrices of the same kind, or fails with `ScalarKindMismatch`.
macro_rules! zip_inner {
    ($a:expr, $b:expr, |$x:ident, $y:ident| $body:expr) => {
        match ($a, $b) {
            (HermitianMatrix::Real($x), HermitianMatrix::Real($y)) => {
                Ok(HermitianMatrix::Real($body))
            }
            (HermitianMatrix::Complex($x), HermitianMatrix::Complex($y)) => {
                Ok(HermitianMatrix::Complex($body))
            }
            _ => Err(Error::ScalarKindMismatch),
        }
    };
}

pub(crate) use with_inner;

fn scale<T: LinalgScalar, E: Entry<T>>(m: &DMatrix<E>, c: T) -> DMatrix<E> {
    m * E::from_real(c)
}

/// A `P x P` self-adjoint matrix. Carries Wishart samples, their means and
/// population covariances.
#[derive(Debug, Clone, PartialEq)]
pub enum HermitianMatrix<T: LinalgScalar> {
    Real(DMatrix<T>),
    Complex(DMatrix<Complex<T>>),
}

/// Dense `P x N` data matrix as drawn from an entry model.
#[derive(Debug, Clone, PartialEq)]
pub enum DataMatrix<T: LinalgScalar> {
    Real(DMatrix<T>),
    Complex(DMatrix<Complex<T>>),
}

impl<T: LinalgScalar> DataMatrix<T> {
    pub fn nrows(&self) -> usize {
        match self {
            DataMatrix::Real(x) => x.nrows(),
            DataMatrix::Complex(x) => x.nrows(),
        }
    }

    pub fn ncols(&self) -> usize {
        match self {
            DataMatrix::Real(x) => x.ncols(),
            DataMatrix::Complex(x) => x.ncols(),
        }
    }

    pub fn scalar_kind(&self) -> ScalarKind {
        match self {
            DataMatrix::Real(_) => ScalarKind::Real,
            DataMatrix::Complex(_) => ScalarKind::Complex,
        }
    }

    /// Entry `(i, j)` promoted to a complex number.
    pub fn get(&self, i: usize, j: usize) -> Complex<T> {
        match self {
            DataMatrix::Real(x) => Complex::new(x[(i, j)], T::zero()),
            DataMatrix::Complex(x) => x[(i, j)],
        }
    }

    /// Iterator over all entries promoted to complex numbers.
    pub fn entries(&self) -> Box<dyn Iterator<Item = Complex<T>> + '_> {
        match self {
            DataMatrix::Real(x) => Box::new(x.iter().map(|&v| Complex::new(v, T::zero()))),
            DataMatrix::Complex(x) => Box::new(x.iter().copied()),
        }
    }
}

pub(crate) fn max_abs_entry<T: LinalgScalar, E: Entry<T>>(m: &DMatrix<E>) -> T {
    m.iter()
        .fold(T::zero(), |acc, v| Float::max(acc, v.modulus()))
}

/// `max |M - M*| / max |M|`, zero for the zero matrix.
pub(crate) fn relative_asymmetry<T: LinalgScalar, E: Entry<T>>(m: &DMatrix<E>) -> T {
    let scale = max_abs_entry(m);
    if scale == T::zero() {
        return T::zero();
    }
    let p = m.nrows();
    let mut worst = T::zero();
    for j in 0..p {
        for i in 0..j {
            let d = (m[(i, j)] - m[(j, i)].conjugate()).modulus();
            worst = Float::max(worst, d);
        }
        worst = Float::max(worst, Float::abs(m[(j, j)].imaginary()));
    }
    worst / scale
}

pub(crate) fn symmetrize<T: LinalgScalar, E: Entry<T>>(m: DMatrix<E>) -> DMatrix<E> {
    let half = E::from_real(T::lit(0.5));
    (&m + m.adjoint()) * half
}

const SELF_ADJOINT_TOL: f64 = 1e-12;

impl<T: LinalgScalar> HermitianMatrix<T> {
    /// Wraps a real symmetric matrix, checking squareness and symmetry.
    pub fn from_real(m: DMatrix<T>) -> Result<Self> {
        Self::Real(m).validated()
    }

    /// Wraps a complex Hermitian matrix, checking squareness and self-adjointness.
    pub fn from_complex(m: DMatrix<Complex<T>>) -> Result<Self> {
        Self::Complex(m).validated()
    }

    fn validated(self) -> Result<Self> {
        let (r, c) = with_inner!(&self, |m| m.shape());
        if r != c {
            return Err(Error::DimensionMismatch {
                expected: r,
                found: c,
            });
        }
        let dev = self.self_adjoint_deviation();
        if dev > T::lit(SELF_ADJOINT_TOL) {
            return Err(Error::NotSelfAdjoint {
                deviation: dev.to_f64_lossy(),
            });
        }
        Ok(self)
    }

    pub fn identity(kind: ScalarKind, dim: usize) -> Self {
        match kind {
            ScalarKind::Real => Self::Real(DMatrix::identity(dim, dim)),
            ScalarKind::Complex => Self::Complex(DMatrix::identity(dim, dim)),
        }
    }

    /// Diagonal matrix with the given real diagonal.
    pub fn from_diagonal(kind: ScalarKind, diag: &[T]) -> Self {
        let p = diag.len();
        match kind {
            ScalarKind::Real => Self::Real(DMatrix::from_fn(p, p, |i, j| {
                if i == j {
                    diag[i]
                } else {
                    T::zero()
                }
            })),
            ScalarKind::Complex => Self::Complex(DMatrix::from_fn(p, p, |i, j| {
                if i == j {
                    Complex::new(diag[i], T::zero())
                } else {
                    Complex::new(T::zero(), T::zero())
                }
            })),
        }
    }

    pub fn dim(&self) -> usize {
        with_inner!(self, |m| m.nrows())
    }

    pub fn scalar_kind(&self) -> ScalarKind {
        match self {
            Self::Real(_) => ScalarKind::Real,
            Self::Complex(_) => ScalarKind::Complex,
        }
    }

    /// Entry `(i, j)` promoted to a complex number.
    pub fn get(&self, i: usize, j: usize) -> Complex<T> {
        match self {
            Self::Real(m) => Complex::new(m[(i, j)], T::zero()),
            Self::Complex(m) => m[(i, j)],
        }
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> T {
        with_inner!(self, |m| max_abs_entry(m))
    }

    /// `max |M - M*| / max |M|`.
    pub fn self_adjoint_deviation(&self) -> T {
        with_inner!(self, |m| relative_asymmetry(m))
    }

    pub fn trace(&self) -> T {
        with_inner!(self, |m| m.trace().real())
    }

    /// Frobenius norm, an upper bound on the operator norm.
    pub fn frobenius_norm(&self) -> T {
        with_inner!(self, |m| m.norm())
    }

    pub fn scaled(&self, c: T) -> Self {
        map_inner!(self, |m| scale(m, c))
    }

    /// `(M + M*) / 2`.
    pub fn symmetrized(self) -> Self {
        map_inner!(self, |m| symmetrize(m))
    }

    pub(crate) fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        if self.scalar_kind() != other.scalar_kind() {
            return Err(Error::ScalarKindMismatch);
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        zip_inner!(self, other, |a, b| a + b)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        zip_inner!(self, other, |a, b| a - b)
    }

    /// Entrywise maximum of `|self - other| / max(|self|, |other|)`, used by
    /// tests and consistency checks.
    pub fn relative_distance(&self, other: &Self) -> Result<T> {
        let diff = self.try_sub(other)?;
        let scale = Float::max(self.max_abs(), other.max_abs());
        if scale == T::zero() {
            return Ok(T::zero());
        }
        Ok(diff.max_abs() / scale)
    }
}
