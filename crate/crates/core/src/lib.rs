//! Spectral theory of the harmonic mean of Wishart matrices.
//!
//! The harmonic mean `H = n (W_1^{-1} + ... + W_n^{-1})^{-1}` of `n`
//! independent `P x P` Wishart matrices with aspect ratio `gamma = P / N`
//! has a limiting spectral law in closed form. This crate provides
//!
//! - samplers for the data matrices and Wishart matrices ([`ensemble`]),
//! - the arithmetic and harmonic means ([`matmeans`]),
//! - spectra, operator norms and Kolmogorov-Smirnov distances ([`spectral`]),
//! - the limiting laws, their operator-norm limits and the crossover `n*`
//!   beyond which the arithmetic mean wins ([`freelaw`]),
//! - Stieltjes and S-transforms and the fixed-point equations for a general
//!   population covariance ([`transforms`]),
//! - a reproducible Monte Carlo driver ([`experiment`]).
//!
//! The analytic code is generic over `f32` and `f64`; the matrix code over
//! real scalars with complex entries where the model asks for them.

// `!(x > 0)` is how NaN gets rejected alongside non-positive values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod ensemble;
pub mod error;
pub mod experiment;
pub mod freelaw;
pub mod hermitian;
pub mod matmeans;
pub mod quadrature;
pub mod scalar;
pub mod spectral;
pub mod transforms;

pub use ensemble::{
    build_wishart, sample_data_matrix, sample_data_matrix_in_trial, sample_wishart_set,
    sample_wishart_set_in_trial, EnsembleSpec, EntryModel,
};
pub use error::{Error, Result};
pub use freelaw::{
    arith_norm_limit, condition_number_bound, critical_n, crossover_gap, harm_cdf, harm_density,
    harm_mean_value, harm_norm_limit, mp_density, Crossover, HarmCdf, HarmLawParams,
};
pub use hermitian::{DataMatrix, HermitianMatrix, ScalarKind};
pub use matmeans::{amhm_gap, arithmetic_mean, conjugate_by_sqrt, harmonic_mean, spd_inverse};
pub use scalar::{LinalgScalar, Real};
pub use spectral::{
    edge_statistics, eigh_with_residual, eigvalsh, ks_distance, operator_norm, operator_norm_error,
    CdfFunction, FnCdf, PointMassCdf, SpectrumSample, TabulatedCdf,
};
pub use transforms::{ComplexPoint, FixedPointConfig, PopulationSpectrum};

pub type HermitianMatrixF64 = HermitianMatrix<f64>;
pub type HermitianMatrixF32 = HermitianMatrix<f32>;
pub type HarmLawParamsF64 = HarmLawParams<f64>;
pub type HarmLawParamsF32 = HarmLawParams<f32>;
pub type SpectrumSampleF64 = SpectrumSample<f64>;
pub type PopulationSpectrumF64 = PopulationSpectrum<f64>;
pub type FixedPointConfigF64 = FixedPointConfig<f64>;
pub type Complex64 = num_complex::Complex<f64>;
