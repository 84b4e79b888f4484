//! Arithmetic and harmonic means of positive definite matrices.

use nalgebra::{Cholesky, DMatrix, Dyn, SymmetricEigen};
use num_traits::Float;

use crate::error::{Error, Result};
use crate::hermitian::{symmetrize, Entry, HermitianMatrix};
use crate::scalar::LinalgScalar;
use crate::spectral::{edge_statistics, eigvalsh};

/// Relative threshold below which an input counts as singular.
pub const PD_TOL: f64 = 1e-10;
/// Largest acceptable condition estimate of the summed inverses.
pub const MAX_CONDITION: f64 = 1e14;

fn check_shapes<T: LinalgScalar>(ws: &[HermitianMatrix<T>]) -> Result<()> {
    let first = ws.first().ok_or(Error::EmptyInput)?;
    ws.iter()
        .skip(1)
        .try_for_each(|w| first.check_same_shape(w))
}

/// `(W_1 + ... + W_n) / n`.
pub fn arithmetic_mean<T: LinalgScalar>(ws: &[HermitianMatrix<T>]) -> Result<HermitianMatrix<T>> {
    check_shapes(ws)?;
    let mut acc = ws[0].clone();
    for w in &ws[1..] {
        acc = acc.try_add(w)?;
    }
    let inv_n = T::one() / T::from_usize_lossy(ws.len());
    Ok(acc.scaled(inv_n).symmetrized())
}

fn cholesky<T: LinalgScalar, E: Entry<T>>(m: &DMatrix<E>) -> Option<Cholesky<E, Dyn>> {
    Cholesky::new(m.clone())
}

/// Cholesky factor of `m`, provided `m - tol I` is positive definite with
/// `tol = PD_TOL * ||m||_F`.
fn pd_cholesky<T: LinalgScalar, E: Entry<T>>(m: &DMatrix<E>) -> Option<Cholesky<E, Dyn>> {
    let tol = T::lit(PD_TOL) * m.norm();
    let shifted = m - DMatrix::<E>::identity(m.nrows(), m.ncols()) * E::from_real(tol);
    Cholesky::new(shifted)?;
    cholesky(m)
}

/// Lower bound on the 2-norm condition number from a Cholesky factor:
/// `(max L_ii / min L_ii)^2`.
fn condition_estimate<T: LinalgScalar, E: Entry<T>>(chol: &Cholesky<E, Dyn>) -> T {
    let l = chol.l_dirty();
    let (mut lo, mut hi) = (T::infinity(), T::zero());
    for i in 0..l.nrows() {
        let d = l[(i, i)].modulus();
        lo = Float::min(lo, d);
        hi = Float::max(hi, d);
    }
    let r = hi / lo;
    r * r
}

fn inverse_pd<T: LinalgScalar, E: Entry<T>>(m: &DMatrix<E>, index: usize) -> Result<DMatrix<E>> {
    let chol = pd_cholesky(m).ok_or(Error::SingularInput { index })?;
    Ok(symmetrize(chol.inverse()))
}

fn harmonic_mean_inner<T: LinalgScalar, E: Entry<T>>(ws: &[&DMatrix<E>]) -> Result<DMatrix<E>> {
    let p = ws[0].nrows();
    let mut sum = DMatrix::<E>::zeros(p, p);
    for (index, w) in ws.iter().enumerate() {
        sum += inverse_pd(w, index)?;
    }
    let chol = cholesky(&sum).ok_or(Error::IllConditioned {
        condition: f64::INFINITY,
    })?;
    let condition = condition_estimate(&chol);
    if !(condition <= T::lit(MAX_CONDITION)) {
        return Err(Error::IllConditioned {
            condition: condition.to_f64_lossy(),
        });
    }
    let n = E::from_real(T::from_usize_lossy(ws.len()));
    Ok(symmetrize(chol.inverse() * n))
}

/// `n (W_1^{-1} + ... + W_n^{-1})^{-1}`.
///
/// Every input must be positive definite (smallest eigenvalue above
/// `PD_TOL * ||W||`); the offending index is reported otherwise.
pub fn harmonic_mean<T: LinalgScalar>(ws: &[HermitianMatrix<T>]) -> Result<HermitianMatrix<T>> {
    check_shapes(ws)?;
    match &ws[0] {
        HermitianMatrix::Real(_) => {
            let inner: Vec<_> = ws
                .iter()
                .map(|w| match w {
                    HermitianMatrix::Real(m) => m,
                    HermitianMatrix::Complex(_) => unreachable!("shapes checked"),
                })
                .collect();
            harmonic_mean_inner(&inner).map(HermitianMatrix::Real)
        }
        HermitianMatrix::Complex(_) => {
            let inner: Vec<_> = ws
                .iter()
                .map(|w| match w {
                    HermitianMatrix::Complex(m) => m,
                    HermitianMatrix::Real(_) => unreachable!("shapes checked"),
                })
                .collect();
            harmonic_mean_inner(&inner).map(HermitianMatrix::Complex)
        }
    }
}

/// Inverse of a positive definite matrix through its Cholesky factor.
pub fn spd_inverse<T: LinalgScalar>(m: &HermitianMatrix<T>) -> Result<HermitianMatrix<T>> {
    Ok(match m {
        HermitianMatrix::Real(x) => {
            HermitianMatrix::Real(inverse_pd(x, 0).map_err(|_| Error::NotPositiveDefinite)?)
        }
        HermitianMatrix::Complex(x) => {
            HermitianMatrix::Complex(inverse_pd(x, 0).map_err(|_| Error::NotPositiveDefinite)?)
        }
    })
}

fn sqrt_conjugate<T: LinalgScalar, E: Entry<T>>(
    sigma: &DMatrix<E>,
    m: &DMatrix<E>,
) -> Result<DMatrix<E>> {
    let eig = SymmetricEigen::new(sigma.clone());
    let top = eig
        .eigenvalues
        .iter()
        .fold(T::zero(), |a, &v| Float::max(a, Float::abs(v)));
    let floor = T::lit(PD_TOL) * top;
    if eig.eigenvalues.iter().any(|&v| !(v > floor)) || top == T::zero() {
        return Err(Error::NotPositiveDefinite);
    }
    let roots = eig.eigenvalues.map(|v| E::from_real(Float::sqrt(v)));
    let v = &eig.eigenvectors;
    let root = v * DMatrix::from_diagonal(&roots) * v.adjoint();
    Ok(symmetrize(&root * m * &root))
}

/// `Sigma^{1/2} M Sigma^{1/2}` with the positive square root of `Sigma`.
pub fn conjugate_by_sqrt<T: LinalgScalar>(
    sigma: &HermitianMatrix<T>,
    m: &HermitianMatrix<T>,
) -> Result<HermitianMatrix<T>> {
    sigma.check_same_shape(m)?;
    match (sigma, m) {
        (HermitianMatrix::Real(s), HermitianMatrix::Real(x)) => {
            sqrt_conjugate(s, x).map(HermitianMatrix::Real)
        }
        (HermitianMatrix::Complex(s), HermitianMatrix::Complex(x)) => {
            sqrt_conjugate(s, x).map(HermitianMatrix::Complex)
        }
        _ => Err(Error::ScalarKindMismatch),
    }
}

/// Smallest eigenvalue of `A - H`; non-negative exactly when `H <= A` in the
/// Loewner order.
pub fn amhm_gap<T: LinalgScalar>(a: &HermitianMatrix<T>, h: &HermitianMatrix<T>) -> Result<T> {
    let diff = a.try_sub(h)?.symmetrized();
    Ok(edge_statistics(&eigvalsh(&diff)?).0)
}
