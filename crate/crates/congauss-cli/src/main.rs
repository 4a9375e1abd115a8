//! Command-line front end: reproducible sampling from constrained Gaussian
//! priors, verification suites, and the conjugate-regression demo.
//!
//! Exit codes are a stable contract: 0 on success (and all checks passing),
//! 1 on numerical failure or any failed check, 2 on configuration or
//! validation errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use congauss::constraint::{ConstraintSystem, DiagonalScales};
use congauss::diagnostics::{conjugate_regression_demo, family_suite, system_suite};
use congauss::families::{sample_batch, Family, FamilySpec, RhsParams};
use congauss::rng::{RngStream, Sample};
use congauss::sampler::{batch_to_csv, ConstrainedGaussian};
use congauss::Error as CoreError;
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

#[derive(Parser)]
#[command(name = "congauss", version, about = "Sample and verify multivariate normal priors under exact linear constraints")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Draw samples from a shrinkage family or an explicit constraint system
    Sample(SampleArgs),
    /// Run the verification suite and write a JSON report
    Check(CheckArgs),
    /// Conjugate-regression demo on synthetic or file-based data
    Demo(DemoArgs),
}

#[derive(Args)]
struct SampleArgs {
    /// Shrinkage family: ridge, hier-ridge, horseshoe, rhs
    #[arg(long)]
    family: Option<String>,

    /// CSV file with the constraint matrix A (rows = constraints, no header)
    #[arg(long)]
    constraint: Option<PathBuf>,

    /// CSV file with the constraint vector b (defaults to zeros)
    #[arg(long = "b")]
    b_file: Option<PathBuf>,

    /// CSV file with the diagonal scales lambda_k^2 (defaults to ones)
    #[arg(long = "D")]
    d_file: Option<PathBuf>,

    /// Coefficient count (families only)
    #[arg(long = "K")]
    k: Option<usize>,

    /// Number of draws
    #[arg(long)]
    n: Option<usize>,

    #[arg(long)]
    seed: Option<u64>,

    /// Stream id; distinct streams give independent reproducible batches
    #[arg(long)]
    stream: Option<u64>,

    /// Output file for the draws
    #[arg(long)]
    out: Option<PathBuf>,

    /// Output format: csv or json
    #[arg(long)]
    format: Option<String>,

    /// Disable the K/(K-1) marginal-variance compensation
    #[arg(long)]
    no_compensate: bool,

    #[command(flatten)]
    rhs: RhsArgs,

    /// Optional JSON config file; command-line flags take precedence
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct RhsArgs {
    /// RHS: prior belief on the number of non-zero coefficients
    #[arg(long)]
    p0: Option<usize>,

    /// RHS: pseudo standard deviation implied by the likelihood
    #[arg(long)]
    sigma_tilde: Option<f64>,

    /// RHS: sample size entering the global-scale reference tau0
    #[arg(long)]
    n_obs: Option<usize>,

    /// RHS: degrees of freedom of the local-scale prior
    #[arg(long)]
    nu1: Option<f64>,

    /// RHS: degrees of freedom of the slab prior
    #[arg(long)]
    nu2: Option<f64>,

    /// RHS: slab scale s^2
    #[arg(long)]
    s_sq: Option<f64>,

    /// RHS: degrees of freedom of the global-scale prior
    #[arg(long)]
    nu3: Option<f64>,
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long)]
    family: Option<String>,

    #[arg(long)]
    constraint: Option<PathBuf>,

    #[arg(long = "b")]
    b_file: Option<PathBuf>,

    #[arg(long = "D")]
    d_file: Option<PathBuf>,

    #[arg(long = "K")]
    k: Option<usize>,

    /// Number of Monte-Carlo samples for the moment checks
    #[arg(long)]
    n: Option<usize>,

    #[arg(long)]
    seed: Option<u64>,

    #[arg(long)]
    stream: Option<u64>,

    /// Report file; the JSON report goes to stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,

    #[arg(long)]
    no_compensate: bool,

    #[command(flatten)]
    rhs: RhsArgs,

    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct DemoArgs {
    /// Number of factor levels for the synthetic balanced one-hot design
    #[arg(long = "K")]
    k: Option<usize>,

    /// Comma-separated group effects (must sum to zero); default is a
    /// centered ramp
    #[arg(long)]
    effects: Option<String>,

    /// Observation noise standard deviation
    #[arg(long)]
    noise: Option<f64>,

    /// Number of synthetic observations
    #[arg(long)]
    n_obs: Option<usize>,

    /// Number of posterior draws
    #[arg(long)]
    n_draws: Option<usize>,

    /// CSV design matrix (use together with --y instead of synthetic data)
    #[arg(long)]
    design: Option<PathBuf>,

    /// CSV observation vector for --design
    #[arg(long)]
    y: Option<PathBuf>,

    #[arg(long)]
    seed: Option<u64>,

    #[arg(long)]
    stream: Option<u64>,

    /// Report file; JSON goes to stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,

    #[arg(long)]
    config: Option<PathBuf>,
}

/// Optional JSON config file; every field can be overridden by a flag.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    family: Option<String>,
    constraint: Option<PathBuf>,
    b: Option<PathBuf>,
    #[serde(rename = "D")]
    d: Option<PathBuf>,
    #[serde(rename = "K")]
    k: Option<usize>,
    n: Option<usize>,
    seed: Option<u64>,
    stream: Option<u64>,
    out: Option<PathBuf>,
    format: Option<String>,
    compensate: Option<bool>,
    p0: Option<usize>,
    sigma_tilde: Option<f64>,
    n_obs: Option<usize>,
    nu1: Option<f64>,
    nu2: Option<f64>,
    s_sq: Option<f64>,
    nu3: Option<f64>,
    effects: Option<String>,
    noise: Option<f64>,
    n_draws: Option<usize>,
    design: Option<PathBuf>,
    y: Option<PathBuf>,
}

enum CliError {
    /// Configuration or validation problem: exit 2.
    Usage(String),
    /// Numerical failure: exit 1.
    Numerical(String),
}

impl CliError {
    fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::CholeskyFailure(_) | CoreError::SingularSystem(_) | CoreError::SvdFailure => {
                CliError::Numerical(e.to_string())
            }
            _ => CliError::Usage(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Sample(args) => run_sample(args),
        Command::Check(args) => run_check(args),
        Command::Demo(args) => run_demo(args),
    };
    match result {
        Ok(code) => code,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Numerical(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn load_config(path: &Option<PathBuf>) -> Result<FileConfig, CliError> {
    match path {
        None => Ok(FileConfig::default()),
        Some(p) => {
            let text = fs::read_to_string(p)
                .map_err(|e| CliError::usage(format!("config file {}: {e}", p.display())))?;
            serde_json::from_str(&text)
                .map_err(|e| CliError::usage(format!("config file {}: {e}", p.display())))
        }
    }
}

/// Everything a sample/check run resolved to; echoed into the JSON sidecar.
#[derive(Debug, Serialize)]
struct EffectiveConfig {
    command: String,
    version: String,
    seed: u64,
    stream: u64,
    n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    family: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    constraint_file: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    b_file: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    d_file: Option<String>,
    compensate: bool,
    format: String,
    out: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    rhs: Option<RhsEcho>,
}

#[derive(Debug, Serialize)]
struct RhsEcho {
    nu1: f64,
    nu2: f64,
    s_sq: f64,
    nu3: f64,
    p0: usize,
    sigma_tilde: f64,
    n_obs: usize,
}

fn resolve_family(
    name: &str,
    k: Option<usize>,
    compensate: bool,
    rhs: &RhsArgs,
    cfg: &FileConfig,
) -> Result<FamilySpec<f64>, CliError> {
    let family = Family::from_str(name).map_err(|e| CliError::usage(e.to_string()))?;
    let k = k.ok_or_else(|| CliError::usage("--K is required with --family"))?;
    let mut spec = match family {
        Family::Ridge => FamilySpec::ridge(k),
        Family::HierRidge => FamilySpec::hier_ridge(k),
        Family::Horseshoe => FamilySpec::horseshoe(k),
        Family::Rhs => {
            let p0 = rhs.p0.or(cfg.p0).unwrap_or(1);
            let sigma_tilde = rhs.sigma_tilde.or(cfg.sigma_tilde).unwrap_or(1.0);
            let n_obs = rhs.n_obs.or(cfg.n_obs).unwrap_or(100);
            let mut params = RhsParams::new(p0, sigma_tilde, n_obs);
            if let Some(v) = rhs.nu1.or(cfg.nu1) {
                params.nu1 = v;
            }
            if let Some(v) = rhs.nu2.or(cfg.nu2) {
                params.nu2 = v;
            }
            if let Some(v) = rhs.s_sq.or(cfg.s_sq) {
                params.s_sq = v;
            }
            if let Some(v) = rhs.nu3.or(cfg.nu3) {
                params.nu3 = v;
            }
            FamilySpec::rhs(k, params)
        }
    };
    spec.compensate = compensate;
    spec.validate().map_err(|e| CliError::usage(e.to_string()))?;
    Ok(spec)
}

fn rhs_echo(spec: &FamilySpec<f64>) -> Option<RhsEcho> {
    spec.rhs.as_ref().map(|p| RhsEcho {
        nu1: p.nu1,
        nu2: p.nu2,
        s_sq: p.s_sq,
        nu3: p.nu3,
        p0: p.p0,
        sigma_tilde: p.sigma_tilde,
        n_obs: p.n_obs,
    })
}

fn read_matrix(path: &Path) -> Result<DMatrix<f64>, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
        let row: Result<Vec<f64>, _> = record
            .iter()
            .map(|field| field.parse::<f64>())
            .collect();
        let row = row.map_err(|e| {
            CliError::usage(format!("{} row {}: {e}", path.display(), i + 1))
        })?;
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(CliError::usage(format!("{}: file is empty", path.display())));
    }
    let ncols = rows[0].len();
    if rows.iter().any(|r| r.len() != ncols) {
        return Err(CliError::usage(format!(
            "{}: rows have inconsistent lengths",
            path.display()
        )));
    }
    Ok(DMatrix::from_fn(rows.len(), ncols, |i, j| rows[i][j]))
}

fn read_vector(path: &Path) -> Result<DVector<f64>, CliError> {
    let m = read_matrix(path)?;
    if m.nrows() == 1 {
        Ok(m.row(0).transpose())
    } else if m.ncols() == 1 {
        Ok(m.column(0).into_owned())
    } else {
        Err(CliError::usage(format!(
            "{}: expected a single row or column, got {}x{}",
            path.display(),
            m.nrows(),
            m.ncols()
        )))
    }
}

fn build_system(
    constraint: &Path,
    b_file: &Option<PathBuf>,
    d_file: &Option<PathBuf>,
) -> Result<(ConstraintSystem<f64>, DiagonalScales<f64>), CliError> {
    let a = read_matrix(constraint)?;
    let b = match b_file {
        Some(p) => read_vector(p)?,
        None => DVector::zeros(a.nrows()),
    };
    let k = a.ncols();
    let c = ConstraintSystem::new(a, b)?;
    let d = match d_file {
        Some(p) => {
            let v = read_vector(p)?;
            if v.len() != k {
                return Err(CliError::usage(format!(
                    "--D has {} entries, constraint matrix has K={k} columns",
                    v.len()
                )));
            }
            DiagonalScales::new(v)?
        }
        None => DiagonalScales::unit(k),
    };
    Ok((c, d))
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents)
        .map_err(|e| CliError::usage(format!("cannot write {}: {e}", path.display())))
}

fn run_sample(args: SampleArgs) -> Result<ExitCode, CliError> {
    let cfg = load_config(&args.config)?;
    let family = args.family.or(cfg.family.clone());
    let constraint = args.constraint.or(cfg.constraint.clone());
    let n = args.n.or(cfg.n).unwrap_or(1000);
    let seed = args.seed.or(cfg.seed).unwrap_or(0);
    let stream_id = args.stream.or(cfg.stream).unwrap_or(0);
    let out = args
        .out
        .or(cfg.out.clone())
        .ok_or_else(|| CliError::usage("--out is required for sample"))?;
    let format = args.format.or(cfg.format.clone()).unwrap_or_else(|| "csv".into());
    if format != "csv" && format != "json" {
        return Err(CliError::usage(format!(
            "--format must be csv or json, got '{format}'"
        )));
    }
    let compensate = if args.no_compensate {
        false
    } else {
        cfg.compensate.unwrap_or(true)
    };
    let stream = RngStream::new(seed, stream_id);

    let (samples, effective) = match (family, constraint) {
        (Some(name), None) => {
            let spec = resolve_family(&name, args.k.or(cfg.k), compensate, &args.rhs, &cfg)?;
            let samples = sample_batch(&spec, &stream, n)?;
            let effective = EffectiveConfig {
                command: "sample".into(),
                version: env!("CARGO_PKG_VERSION").into(),
                seed,
                stream: stream_id,
                n,
                k: Some(spec.k),
                family: Some(spec.family.to_string()),
                constraint_file: None,
                b_file: None,
                d_file: None,
                compensate: spec.compensate,
                format: format.clone(),
                out: out.display().to_string(),
                rhs: rhs_echo(&spec),
            };
            (samples, effective)
        }
        (None, Some(path)) => {
            let (c, d) = build_system(&path, &args.b_file.clone().or(cfg.b.clone()), &args.d_file.clone().or(cfg.d.clone()))?;
            let g = ConstrainedGaussian::build(c, &d)?;
            let samples = g.draw_batch(&stream, n);
            let effective = EffectiveConfig {
                command: "sample".into(),
                version: env!("CARGO_PKG_VERSION").into(),
                seed,
                stream: stream_id,
                n,
                k: Some(g.k()),
                family: None,
                constraint_file: Some(path.display().to_string()),
                b_file: args.b_file.clone().or(cfg.b.clone()).map(|p| p.display().to_string()),
                d_file: args.d_file.clone().or(cfg.d.clone()).map(|p| p.display().to_string()),
                compensate,
                format: format.clone(),
                out: out.display().to_string(),
                rhs: None,
            };
            (samples, effective)
        }
        (Some(_), Some(_)) => {
            return Err(CliError::usage(
                "give either --family or --constraint, not both",
            ))
        }
        (None, None) => {
            return Err(CliError::usage(
                "one of --family or --constraint is required",
            ))
        }
    };

    match format.as_str() {
        "csv" => write_file(&out, &batch_to_csv(&samples))?,
        _ => {
            let rows: Vec<Vec<f64>> = (0..samples.nrows())
                .map(|i| samples.row(i).iter().copied().collect())
                .collect();
            let body = serde_json::json!({ "samples": rows });
            write_file(&out, &serde_json::to_string_pretty(&body).expect("serializable"))?;
        }
    }

    let sidecar = out.with_file_name(format!(
        "{}.meta.json",
        out.file_name().unwrap_or_default().to_string_lossy()
    ));
    write_file(
        &sidecar,
        &serde_json::to_string_pretty(&effective).expect("serializable"),
    )?;

    eprintln!(
        "wrote {} draws of dimension {} to {} (sidecar {})",
        samples.nrows(),
        samples.ncols(),
        out.display(),
        sidecar.display()
    );
    Ok(ExitCode::SUCCESS)
}

fn run_check(args: CheckArgs) -> Result<ExitCode, CliError> {
    let cfg = load_config(&args.config)?;
    let family = args.family.or(cfg.family.clone());
    let constraint = args.constraint.or(cfg.constraint.clone());
    let n = args.n.or(cfg.n).unwrap_or(100_000);
    let seed = args.seed.or(cfg.seed).unwrap_or(0);
    let stream_id = args.stream.or(cfg.stream).unwrap_or(0);
    let out = args.out.or(cfg.out.clone());
    let compensate = if args.no_compensate {
        false
    } else {
        cfg.compensate.unwrap_or(true)
    };
    let stream = RngStream::new(seed, stream_id);

    let report = match (family, constraint) {
        (Some(name), None) => {
            let spec = resolve_family(&name, args.k.or(cfg.k), compensate, &args.rhs, &cfg)?;
            family_suite(&spec, n, &stream)?
        }
        (None, Some(path)) => {
            let (c, d) = build_system(&path, &args.b_file.clone().or(cfg.b.clone()), &args.d_file.clone().or(cfg.d.clone()))?;
            system_suite(&c, &d, n, &stream)?
        }
        (Some(_), Some(_)) => {
            return Err(CliError::usage(
                "give either --family or --constraint, not both",
            ))
        }
        (None, None) => {
            return Err(CliError::usage(
                "one of --family or --constraint is required",
            ))
        }
    };

    for check in &report.checks {
        eprintln!(
            "{} {} statistic={:.6e} threshold={:.6e}",
            if check.passed() { "PASS" } else { "FAIL" },
            check.name,
            check.statistic,
            check.threshold
        );
    }

    let json = report.to_json();
    match &out {
        Some(path) => write_file(path, &json)?,
        None => println!("{json}"),
    }

    if report.all_passed() {
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("error: {} of {} checks failed", report.checks.iter().filter(|c| !c.passed()).count(), report.checks.len());
        Ok(ExitCode::from(1))
    }
}

#[derive(Debug, Serialize)]
struct DemoReport {
    command: String,
    version: String,
    seed: u64,
    stream: u64,
    k: usize,
    n_obs: usize,
    n_draws: usize,
    noise_sd: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    true_effects: Option<Vec<f64>>,
    posterior_mean: Vec<f64>,
    posterior_sd: Vec<f64>,
    posterior_mean_constraint_residual: f64,
    max_draw_constraint_residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    max_recovery_error: Option<f64>,
    checks: Vec<congauss::diagnostics::Check>,
}

fn run_demo(args: DemoArgs) -> Result<ExitCode, CliError> {
    let cfg = load_config(&args.config)?;
    let seed = args.seed.or(cfg.seed).unwrap_or(0);
    let stream_id = args.stream.or(cfg.stream).unwrap_or(0);
    let noise_sd = args.noise.or(cfg.noise).unwrap_or(0.1);
    let n_draws = args.n_draws.or(cfg.n_draws).unwrap_or(1000);
    let out = args.out.or(cfg.out.clone());
    let stream = RngStream::new(seed, stream_id);

    let design = args.design.or(cfg.design.clone());
    let y_file = args.y.or(cfg.y.clone());

    let (x, y, truth) = match (design, y_file) {
        (Some(xp), Some(yp)) => {
            let x = read_matrix(&xp)?;
            let y = read_vector(&yp)?;
            (x, y, None)
        }
        (Some(_), None) | (None, Some(_)) => {
            return Err(CliError::usage("--design and --y must be given together"));
        }
        (None, None) => {
            let k = args.k.or(cfg.k).unwrap_or(3);
            if k < 2 {
                return Err(CliError::usage("--K must be at least 2"));
            }
            let n_obs = args.n_obs.or(cfg.n_obs).unwrap_or(300);
            if n_obs < k {
                return Err(CliError::usage("--n-obs must be at least K"));
            }
            let effects = match args.effects.or(cfg.effects.clone()) {
                Some(list) => {
                    let parsed: Result<Vec<f64>, _> =
                        list.split(',').map(|s| s.trim().parse::<f64>()).collect();
                    let v = parsed
                        .map_err(|e| CliError::usage(format!("--effects: {e}")))?;
                    if v.len() != k {
                        return Err(CliError::usage(format!(
                            "--effects has {} entries, expected K={k}",
                            v.len()
                        )));
                    }
                    let total: f64 = v.iter().sum();
                    let scale = 1.0 + v.iter().fold(0.0_f64, |a, &x| a.max(x.abs()));
                    if total.abs() > 1e-9 * scale {
                        return Err(CliError::usage(format!(
                            "--effects must sum to zero, got {total}"
                        )));
                    }
                    v
                }
                // centered ramp: 0 - (K-1)/2, ..., (K-1) - (K-1)/2
                None => (0..k).map(|i| i as f64 - (k as f64 - 1.0) / 2.0).collect(),
            };
            if noise_sd.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater) {
                return Err(CliError::usage("--noise must be strictly positive"));
            }
            let x = DMatrix::from_fn(n_obs, k, |i, j| if i % k == j { 1.0 } else { 0.0 });
            let mut noise_rng = stream.split(1).substream(0);
            let y = DVector::from_fn(n_obs, |i, _| {
                effects[i % k] + noise_sd * f64::standard_normal(&mut noise_rng)
            });
            (x, y, Some(effects))
        }
    };

    let k = x.ncols();
    let g = congauss::families::ridge_gaussian::<f64>(k)?;
    let demo = conjugate_regression_demo(&x, &y, noise_sd, &g, &stream, n_draws)?;

    let mut max_draw_residual = 0.0_f64;
    for i in 0..demo.draws.nrows() {
        let beta = demo.draws.row(i).transpose();
        max_draw_residual = max_draw_residual.max(g.constraint().residual_inf(&beta));
    }
    let max_recovery_error = truth.as_ref().map(|t| {
        (0..k)
            .map(|i| (demo.posterior_mean[i] - t[i]).abs())
            .fold(0.0_f64, f64::max)
    });

    let report = DemoReport {
        command: "demo".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        seed,
        stream: stream_id,
        k,
        n_obs: x.nrows(),
        n_draws,
        noise_sd,
        true_effects: truth,
        posterior_mean: demo.posterior_mean.iter().copied().collect(),
        posterior_sd: demo.posterior_sd.iter().copied().collect(),
        posterior_mean_constraint_residual: g.constraint().residual_inf(&demo.posterior_mean),
        max_draw_constraint_residual: max_draw_residual,
        max_recovery_error,
        checks: demo.report.checks.clone(),
    };

    for check in &report.checks {
        eprintln!(
            "{} {} statistic={:.6e} threshold={:.6e}",
            if check.passed() { "PASS" } else { "FAIL" },
            check.name,
            check.statistic,
            check.threshold
        );
    }

    let json = serde_json::to_string_pretty(&report).expect("serializable");
    match &out {
        Some(path) => write_file(path, &json)?,
        None => println!("{json}"),
    }

    if demo.report.all_passed() {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(1))
    }
}
