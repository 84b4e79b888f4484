//! Monte Carlo trials of both means against their analytic limits.

use rayon::prelude::*;
use serde::Serialize;

use crate::ensemble::{sample_wishart_set_in_trial, EnsembleSpec, EntryModel};
use crate::error::Result;
use crate::freelaw::{
    arith_norm_limit, critical_n, harm_norm_limit, Crossover, HarmCdf, HarmLawParams,
};
use crate::hermitian::HermitianMatrix;
use crate::matmeans::{arithmetic_mean, harmonic_mean};
use crate::spectral::{
    edge_statistics, eigvalsh, ks_distance, operator_norm_error, SpectrumSample,
};

/// Metrics of one trial. Metric fields are NaN (serialized as `null`) when
/// `error` is set.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialRecord {
    pub trial: u32,
    #[serde(rename = "opnorm_A_error")]
    pub opnorm_a_error: f64,
    #[serde(rename = "opnorm_H_error")]
    pub opnorm_h_error: f64,
    #[serde(rename = "lambda_min_H")]
    pub lambda_min_h: f64,
    #[serde(rename = "lambda_max_H")]
    pub lambda_max_h: f64,
    #[serde(rename = "ks_H")]
    pub ks_h: f64,
    #[serde(rename = "ks_A")]
    pub ks_a: f64,
    pub error: Option<String>,
}

impl TrialRecord {
    fn failed(trial: u32, error: String) -> Self {
        Self {
            trial,
            opnorm_a_error: f64::NAN,
            opnorm_h_error: f64::NAN,
            lambda_min_h: f64::NAN,
            lambda_max_h: f64::NAN,
            ks_h: f64::NAN,
            ks_a: f64::NAN,
            error: Some(error),
        }
    }
}

/// Analytic predictions at the realized `gamma = P / N` and `n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AnalyticBlock {
    pub harm_limit: f64,
    pub arith_limit: f64,
    pub e_minus: f64,
    pub e_plus: f64,
    /// `None` when the harmonic mean wins for every `n`.
    pub n_star_int: Option<u64>,
}

impl AnalyticBlock {
    pub fn new(gamma: f64, n: usize) -> Result<Self> {
        let params = HarmLawParams::new(gamma, n as f64)?;
        let n_star_int = match critical_n(gamma)? {
            Crossover::Crossing { n_star_int, .. } => Some(n_star_int),
            Crossover::NoCrossing => None,
        };
        Ok(Self {
            harm_limit: harm_norm_limit(&params),
            arith_limit: arith_norm_limit(gamma, n as f64),
            e_minus: params.e_minus(),
            e_plus: params.e_plus(),
            n_star_int,
        })
    }
}

/// Echo of the ensemble that produced a report.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpecEcho {
    #[serde(rename = "P")]
    pub p: usize,
    #[serde(rename = "N")]
    pub big_n: usize,
    pub n: usize,
    /// Realized `P / N`.
    pub gamma: f64,
    pub entry_model: EntryModel,
    pub seed: u64,
}

impl From<&EnsembleSpec> for SpecEcho {
    fn from(spec: &EnsembleSpec) -> Self {
        Self {
            p: spec.rows(),
            big_n: spec.cols(),
            n: spec.matrices(),
            gamma: spec.gamma(),
            entry_model: spec.model(),
            seed: spec.seed(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulationReport {
    #[serde(flatten)]
    pub spec: SpecEcho,
    pub trials: Vec<TrialRecord>,
    pub analytic: AnalyticBlock,
}

/// A finished trial: its record and, on success, the spectrum of `H`.
#[derive(Debug, Clone)]
pub struct TrialOutcome {
    pub record: TrialRecord,
    pub harm_spectrum: Option<SpectrumSample<f64>>,
}

struct Means {
    a: HermitianMatrix<f64>,
    h: HermitianMatrix<f64>,
}

fn means(spec: &EnsembleSpec, trial: u32) -> Result<Means> {
    let ws = sample_wishart_set_in_trial::<f64>(spec, trial);
    Ok(Means {
        a: arithmetic_mean(&ws)?,
        h: harmonic_mean(&ws)?,
    })
}

fn measure(spec: &EnsembleSpec, trial: u32) -> Result<(TrialRecord, SpectrumSample<f64>)> {
    let Means { a, h } = means(spec, trial)?;
    let gamma = spec.gamma();
    let n = spec.matrices() as f64;
    let id = HermitianMatrix::identity(a.scalar_kind(), a.dim());
    let harm_spec = eigvalsh(&h)?;
    let arith_spec = eigvalsh(&a)?;
    let (lo, hi) = edge_statistics(&harm_spec);
    // A is a Wishart matrix with nN columns, so its law is MP(gamma / n).
    let mp = HarmCdf(HarmLawParams::new(gamma / n, 1.0)?);
    let record = TrialRecord {
        trial,
        opnorm_a_error: operator_norm_error(&a, &id)?,
        opnorm_h_error: operator_norm_error(&h, &id)?,
        lambda_min_h: lo,
        lambda_max_h: hi,
        ks_h: ks_distance(&harm_spec, &HarmCdf(HarmLawParams::new(gamma, n)?)),
        ks_a: ks_distance(&arith_spec, &mp),
        error: None,
    };
    Ok((record, harm_spec))
}

/// Samples trial `trial` of `spec` and measures both means. Numerical
/// failures are recorded in the returned record.
pub fn run_trial(spec: &EnsembleSpec, trial: u32) -> TrialOutcome {
    match measure(spec, trial) {
        Ok((record, s)) => TrialOutcome {
            record,
            harm_spectrum: Some(s),
        },
        Err(e) => TrialOutcome {
            record: TrialRecord::failed(trial, e.to_string()),
            harm_spectrum: None,
        },
    }
}

/// Runs trials `0..trials` in parallel; outcomes are in trial order.
pub fn run_trials(spec: &EnsembleSpec, trials: u32) -> Vec<TrialOutcome> {
    (0..trials)
        .into_par_iter()
        .map(|t| run_trial(spec, t))
        .collect()
}

pub fn simulate(spec: &EnsembleSpec, trials: u32) -> Result<(SimulationReport, Vec<TrialOutcome>)> {
    let analytic = AnalyticBlock::new(spec.gamma(), spec.matrices())?;
    let outcomes = run_trials(spec, trials);
    let report = SimulationReport {
        spec: spec.into(),
        trials: outcomes.iter().map(|o| o.record.clone()).collect(),
        analytic,
    };
    Ok((report, outcomes))
}

/// Empirical mean and sample standard deviation of one error metric against
/// its limit. All statistics are `None` when no trial succeeded.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MetricSummary {
    pub analytic: f64,
    pub mean: Option<f64>,
    pub stdev: Option<f64>,
    pub pass: Option<bool>,
}

impl MetricSummary {
    fn new(analytic: f64, values: &[f64], tolerance: f64) -> Self {
        if values.is_empty() {
            return Self {
                analytic,
                mean: None,
                stdev: None,
                pass: None,
            };
        }
        let k = values.len() as f64;
        let mean = values.iter().sum::<f64>() / k;
        let stdev = if values.len() > 1 {
            (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (k - 1.0)).sqrt()
        } else {
            0.0
        };
        Self {
            analytic,
            mean: Some(mean),
            stdev: Some(stdev),
            pass: Some((mean - analytic).abs() < tolerance),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonReport {
    #[serde(flatten)]
    pub spec: SpecEcho,
    pub trials: u32,
    pub failed_trials: usize,
    pub tolerance: f64,
    #[serde(rename = "opnorm_A_error")]
    pub arith: MetricSummary,
    #[serde(rename = "opnorm_H_error")]
    pub harm: MetricSummary,
    /// Both metrics within tolerance; `None` when there is nothing to judge.
    pub pass: Option<bool>,
    pub analytic: AnalyticBlock,
}

/// Aggregates the records of a simulation against the analytic limits.
pub fn compare(report: &SimulationReport, tolerance: f64) -> ComparisonReport {
    let ok: Vec<&TrialRecord> = report.trials.iter().filter(|r| r.error.is_none()).collect();
    let a: Vec<f64> = ok.iter().map(|r| r.opnorm_a_error).collect();
    let h: Vec<f64> = ok.iter().map(|r| r.opnorm_h_error).collect();
    let arith = MetricSummary::new(report.analytic.arith_limit, &a, tolerance);
    let harm = MetricSummary::new(report.analytic.harm_limit, &h, tolerance);
    let pass = match (arith.pass, harm.pass) {
        (Some(x), Some(y)) => Some(x && y),
        _ => None,
    };
    ComparisonReport {
        spec: report.spec,
        trials: report.trials.len() as u32,
        failed_trials: report.trials.len() - ok.len(),
        tolerance,
        arith,
        harm,
        pass,
        analytic: report.analytic,
    }
}
