//! Sampling of the i.i.d. data matrices and the Wishart matrices built from them.
//!
//! Every matrix is drawn from its own ChaCha stream keyed by
//! `(seed, trial, index)`, so trials and matrices can be generated in any
//! order, on any thread, with identical results.

use nalgebra::DMatrix;
use num_complex::Complex;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hermitian::{symmetrize, DataMatrix, HermitianMatrix, ScalarKind};
use crate::scalar::LinalgScalar;

/// Standardized entry distribution (mean 0, variance 1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EntryModel {
    /// `(Z1 + i Z2) / sqrt(2)` with `Z1, Z2` standard normal.
    ComplexGaussian,
    RealGaussian,
    /// Uniform on `{-1, +1}`.
    Rademacher,
    /// Uniform on `[-sqrt(3), sqrt(3)]`.
    #[serde(rename = "uniform")]
    UniformSym,
}

impl EntryModel {
    pub const ALL: [EntryModel; 4] = [
        EntryModel::ComplexGaussian,
        EntryModel::RealGaussian,
        EntryModel::Rademacher,
        EntryModel::UniformSym,
    ];

    pub fn scalar_kind(self) -> ScalarKind {
        match self {
            EntryModel::ComplexGaussian => ScalarKind::Complex,
            _ => ScalarKind::Real,
        }
    }

    fn draw_real(self, rng: &mut ChaCha8Rng) -> f64 {
        match self {
            EntryModel::ComplexGaussian | EntryModel::RealGaussian => StandardNormal.sample(rng),
            EntryModel::Rademacher => {
                if rng.random::<bool>() {
                    1.0
                } else {
                    -1.0
                }
            }
            EntryModel::UniformSym => {
                let s = 3f64.sqrt();
                rng.random_range(-s..=s)
            }
        }
    }
}

/// Dimensions and randomness of one ensemble of `n` independent `P x N`
/// data matrices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnsembleSpec {
    rows: usize,
    cols: usize,
    matrices: usize,
    model: EntryModel,
    seed: u64,
}

impl EnsembleSpec {
    /// `rows = P`, `cols = N`, `matrices = n`. Requires `1 <= P < N` and `n >= 1`.
    pub fn new(
        rows: usize,
        cols: usize,
        matrices: usize,
        model: EntryModel,
        seed: u64,
    ) -> Result<Self> {
        if rows == 0 {
            return Err(Error::invalid("P", "must be positive"));
        }
        if cols <= rows {
            return Err(Error::invalid(
                "N",
                format!("need P < N for invertible Wishart matrices, got P = {rows}, N = {cols}"),
            ));
        }
        if matrices == 0 {
            return Err(Error::invalid("n", "need at least one matrix"));
        }
        Ok(Self {
            rows,
            cols,
            matrices,
            model,
            seed,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn matrices(&self) -> usize {
        self.matrices
    }

    pub fn model(&self) -> EntryModel {
        self.model
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Realized aspect ratio `P / N`.
    pub fn gamma(&self) -> f64 {
        self.rows as f64 / self.cols as f64
    }

    pub fn with_seed(self, seed: u64) -> Self {
        Self { seed, ..self }
    }

    pub fn with_model(self, model: EntryModel) -> Self {
        Self { model, ..self }
    }
}

fn stream_rng(seed: u64, trial: u32, index: u32) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((u64::from(trial) << 32) | u64::from(index));
    rng
}

/// Data matrix `index` of trial 0.
pub fn sample_data_matrix<T: LinalgScalar>(spec: &EnsembleSpec, index: usize) -> DataMatrix<T> {
    sample_data_matrix_in_trial(spec, 0, index)
}

/// Data matrix `index` of Monte Carlo trial `trial`.
///
/// # Panics
/// If `index >= spec.matrices()`.
pub fn sample_data_matrix_in_trial<T: LinalgScalar>(
    spec: &EnsembleSpec,
    trial: u32,
    index: usize,
) -> DataMatrix<T> {
    assert!(
        index < spec.matrices,
        "matrix index {index} out of range for n = {}",
        spec.matrices
    );
    let mut rng = stream_rng(spec.seed, trial, index as u32);
    let (p, n) = (spec.rows, spec.cols);
    match spec.model {
        EntryModel::ComplexGaussian => {
            let scale = std::f64::consts::FRAC_1_SQRT_2;
            DataMatrix::Complex(DMatrix::from_fn(p, n, |_, _| {
                let re = spec.model.draw_real(&mut rng) * scale;
                let im = spec.model.draw_real(&mut rng) * scale;
                Complex::new(T::lit(re), T::lit(im))
            }))
        }
        model => DataMatrix::Real(DMatrix::from_fn(p, n, |_, _| {
            T::lit(model.draw_real(&mut rng))
        })),
    }
}

/// `X X* / N`.
pub fn build_wishart<T: LinalgScalar>(x: &DataMatrix<T>) -> HermitianMatrix<T> {
    let inv_n = T::one() / T::from_usize_lossy(x.ncols());
    match x {
        DataMatrix::Real(x) => HermitianMatrix::Real(symmetrize(x * x.transpose() * inv_n)),
        DataMatrix::Complex(x) => {
            // Four real products are much faster than one complex product.
            let xr = x.map(|c| c.re);
            let xi = x.map(|c| c.im);
            let re = (&xr * xr.transpose() + &xi * xi.transpose()) * inv_n;
            let im = (&xi * xr.transpose() - &xr * xi.transpose()) * inv_n;
            let w = re.zip_map(&im, Complex::new);
            HermitianMatrix::Complex(symmetrize(w))
        }
    }
}

/// The `n` Wishart matrices of trial 0.
pub fn sample_wishart_set<T: LinalgScalar>(spec: &EnsembleSpec) -> Vec<HermitianMatrix<T>> {
    sample_wishart_set_in_trial(spec, 0)
}

pub fn sample_wishart_set_in_trial<T: LinalgScalar>(
    spec: &EnsembleSpec,
    trial: u32,
) -> Vec<HermitianMatrix<T>> {
    (0..spec.matrices)
        .map(|i| build_wishart(&sample_data_matrix_in_trial(spec, trial, i)))
        .collect()
}
