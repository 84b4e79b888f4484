//! `wishmean` command-line front end.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use wishmean::experiment::{compare, simulate, TrialOutcome};
use wishmean::transforms::{density_curve_with_status, DensitySolver};
use wishmean::{
    arith_norm_limit, critical_n, harm_density, harm_norm_limit, mp_density, Crossover,
    EnsembleSpec, EntryModel, Error, FixedPointConfig, HarmLawParams, PopulationSpectrum,
};

/// Spectra of harmonic and arithmetic means of Wishart matrices.
#[derive(Parser, Debug)]
#[command(name = "wishmean", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Monte Carlo trials of both means, written as a JSON report.
    Simulate(SimulateArgs),
    /// Limiting densities of the harmonic mean and of Marcenko-Pastur as CSV.
    Density(DensityArgs),
    /// Crossover threshold and the operator-norm limits at n = 2.
    Threshold(ThresholdArgs),
    /// Density for a general population covariance by fixed-point iteration.
    Fixedpoint(FixedPointArgs),
    /// Monte Carlo operator-norm errors against their limits.
    Compare(CompareArgs),
}

#[derive(Args, Debug)]
struct Common {
    /// Aspect ratio P / N, in (0, 1).
    #[arg(long)]
    gamma: Option<f64>,
    /// Number of Wishart matrices.
    #[arg(long, visible_alias = "n", default_value_t = 2)]
    nmats: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Model {
    ComplexGaussian,
    RealGaussian,
    Rademacher,
    Uniform,
}

impl From<Model> for EntryModel {
    fn from(m: Model) -> Self {
        match m {
            Model::ComplexGaussian => EntryModel::ComplexGaussian,
            Model::RealGaussian => EntryModel::RealGaussian,
            Model::Rademacher => EntryModel::Rademacher,
            Model::Uniform => EntryModel::UniformSym,
        }
    }
}

#[derive(Args, Debug)]
struct SimulateArgs {
    #[command(flatten)]
    common: Common,
    /// Matrix dimension P.
    #[arg(long)]
    p: usize,
    /// Sample count N; defaults to round(P / gamma).
    #[arg(long)]
    bign: Option<usize>,
    #[arg(long, default_value_t = 1)]
    trials: u32,
    #[arg(long, value_enum, default_value_t = Model::ComplexGaussian)]
    model: Model,
    /// Also write the eigenvalues of H as CSV (trial, index, eigenvalue).
    #[arg(long)]
    dump_eigs: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CompareArgs {
    #[command(flatten)]
    sim: SimulateArgs,
    #[arg(long, default_value_t = 0.05)]
    tolerance: f64,
}

#[derive(Args, Debug)]
struct Grid {
    #[arg(long, allow_negative_numbers = true)]
    min: f64,
    #[arg(long, allow_negative_numbers = true)]
    max: f64,
    #[arg(long, default_value_t = 400, value_parser = clap::value_parser!(u32).range(2..))]
    points: u32,
}

#[derive(Args, Debug)]
struct DensityArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    grid: Grid,
}

#[derive(Args, Debug)]
struct ThresholdArgs {
    #[command(flatten)]
    common: Common,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Which {
    /// `Sigma^{1/2} H Sigma^{1/2}`
    Sh,
    /// `Sigma^{1/2} H Sigma^{1/2} - Sigma`
    E,
}

#[derive(Args, Debug)]
struct FixedPointArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    grid: Grid,
    /// JSON array of {"x": location, "w": weight}.
    #[arg(long)]
    spectrum: PathBuf,
    #[arg(long, value_enum, default_value_t = Which::Sh)]
    which: Which,
    #[arg(long)]
    eta: Option<f64>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    max_iter: Option<usize>,
    #[arg(long)]
    damping: Option<f64>,
}

/// Bad input from the user, as opposed to a failure while computing.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    Usage(msg.into()).into()
}

/// Parameter and spectrum errors from the library are the user's input.
fn classify(e: Error) -> anyhow::Error {
    match e {
        Error::InvalidParameter { .. } | Error::InvalidSpectrum(_) => usage(e.to_string()),
        other => other.into(),
    }
}

fn gamma(common: &Common) -> anyhow::Result<f64> {
    let g = common.gamma.ok_or_else(|| usage("--gamma is required"))?;
    if !(g > 0.0 && g < 1.0) {
        return Err(usage(format!("--gamma must lie in (0, 1), got {g}")));
    }
    Ok(g)
}

fn law(common: &Common) -> anyhow::Result<HarmLawParams<f64>> {
    HarmLawParams::new(gamma(common)?, common.nmats as f64).map_err(classify)
}

fn grid(g: &Grid) -> anyhow::Result<Vec<f64>> {
    if !g.min.is_finite() || !g.max.is_finite() || g.min >= g.max {
        return Err(usage(format!(
            "need finite --min < --max, got [{}, {}]",
            g.min, g.max
        )));
    }
    let k = g.points as usize;
    let step = (g.max - g.min) / (k - 1) as f64;
    Ok((0..k)
        .map(|i| {
            if i + 1 == k {
                g.max
            } else {
                g.min + step * i as f64
            }
        })
        .collect())
}

fn open(out: Option<&Path>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("cannot create {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_json<S: Serialize>(out: Option<&Path>, value: &S) -> anyhow::Result<()> {
    let mut w = open(out)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

/// 17 significant digits, enough to round-trip an f64.
fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn ensemble(args: &SimulateArgs) -> anyhow::Result<EnsembleSpec> {
    let c = &args.common;
    let big_n = match (args.bign, c.gamma) {
        (Some(n), _) => n,
        (None, Some(_)) => (args.p as f64 / gamma(c)?).round() as usize,
        (None, None) => return Err(usage("one of --gamma or --bign is required")),
    };
    EnsembleSpec::new(args.p, big_n, c.nmats, args.model.into(), c.seed).map_err(classify)
}

fn dump_eigs(path: &Path, outcomes: &[TrialOutcome]) -> anyhow::Result<()> {
    let mut w = open(Some(path))?;
    writeln!(w, "trial,index,eigenvalue")?;
    for o in outcomes {
        if let Some(s) = &o.harm_spectrum {
            for (i, &v) in s.values().iter().enumerate() {
                writeln!(w, "{},{},{}", o.record.trial, i, num(v))?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

fn run_simulation(args: &SimulateArgs) -> anyhow::Result<wishmean::experiment::SimulationReport> {
    let spec = ensemble(args)?;
    let (report, outcomes) = simulate(&spec, args.trials).map_err(classify)?;
    if let Some(path) = &args.dump_eigs {
        dump_eigs(path, &outcomes)?;
    }
    Ok(report)
}

fn cmd_simulate(args: &SimulateArgs) -> anyhow::Result<()> {
    let report = run_simulation(args)?;
    write_json(args.common.out.as_deref(), &report)
}

fn cmd_compare(args: &CompareArgs) -> anyhow::Result<()> {
    if args.tolerance.is_nan() || args.tolerance <= 0.0 {
        return Err(usage(format!(
            "--tolerance must be positive, got {}",
            args.tolerance
        )));
    }
    let report = run_simulation(&args.sim)?;
    write_json(
        args.sim.common.out.as_deref(),
        &compare(&report, args.tolerance),
    )
}

fn cmd_density(args: &DensityArgs) -> anyhow::Result<()> {
    let params = law(&args.common)?;
    let xs = grid(&args.grid)?;
    let mut w = open(args.common.out.as_deref())?;
    writeln!(w, "x,harm_density,mp_density")?;
    for x in xs {
        let mp = mp_density(params.gamma(), x)?;
        writeln!(
            w,
            "{},{},{}",
            num(x),
            num(harm_density(&params, x)),
            num(mp)
        )?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct Threshold {
    gamma: f64,
    n_star_real: Option<f64>,
    n_star_int: Option<u64>,
    harm_at_2: f64,
    arith_at_2: f64,
}

fn cmd_threshold(args: &ThresholdArgs) -> anyhow::Result<()> {
    let g = gamma(&args.common)?;
    let (n_star_real, n_star_int) = match critical_n(g)? {
        Crossover::Crossing {
            n_star_real,
            n_star_int,
        } => (Some(n_star_real), Some(n_star_int)),
        Crossover::NoCrossing => (None, None),
    };
    let report = Threshold {
        gamma: g,
        n_star_real,
        n_star_int,
        harm_at_2: harm_norm_limit(&HarmLawParams::new(g, 2.0)?),
        arith_at_2: arith_norm_limit(g, 2.0),
    };
    write_json(args.common.out.as_deref(), &report)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Atom {
    x: f64,
    w: f64,
}

fn load_spectrum(path: &Path) -> anyhow::Result<PopulationSpectrum<f64>> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let atoms: Vec<Atom> = serde_json::from_str(&text)
        .map_err(|e| usage(format!("{}: malformed spectrum: {e}", path.display())))?;
    PopulationSpectrum::normalized(atoms.into_iter().map(|a| (a.x, a.w)).collect(), 1e-9)
        .map_err(classify)
}

fn status(e: &Error) -> &'static str {
    match e {
        Error::NonConvergence { .. } => "non-convergence",
        Error::BranchAmbiguity { .. } => "branch-ambiguity",
        Error::Pole { .. } => "pole",
        Error::OnSupport { .. } => "on-support",
        _ => "error",
    }
}

fn cmd_fixedpoint(args: &FixedPointArgs) -> anyhow::Result<()> {
    let params = law(&args.common)?;
    let xs = grid(&args.grid)?;
    let spectrum = load_spectrum(&args.spectrum)?;
    let d = FixedPointConfig::default();
    let cfg = FixedPointConfig {
        eta: args.eta.unwrap_or(d.eta),
        tol: args.tol.unwrap_or(d.tol),
        max_iter: args.max_iter.unwrap_or(d.max_iter),
        damping: args.damping.unwrap_or(d.damping),
    };
    cfg.validate().map_err(classify)?;
    let solver = match args.which {
        Which::Sh => DensitySolver::Sh { params, spectrum },
        Which::E => DensitySolver::E { params, spectrum },
    };
    let curve = density_curve_with_status(&solver, &xs, &cfg).map_err(classify)?;
    let mut w = open(args.common.out.as_deref())?;
    writeln!(w, "x,density,status")?;
    for p in &curve {
        let s = p.error.as_ref().map_or("ok", status);
        writeln!(w, "{},{},{}", num(p.x), num(p.density), s)?;
    }
    w.flush()?;
    if curve.iter().all(|p| !p.is_ok()) {
        bail!("no grid point converged");
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Simulate(a) => cmd_simulate(a),
        Command::Density(a) => cmd_density(a),
        Command::Threshold(a) => cmd_threshold(a),
        Command::Fixedpoint(a) => cmd_fixedpoint(a),
        Command::Compare(a) => cmd_compare(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.is::<Usage>() {
                ExitCode::from(2)
            } else {
                ExitCode::FAILURE
            }
        }
    }
}
