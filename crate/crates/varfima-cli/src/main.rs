//! Command-line front end: simulate VARFIMA(0,d,0) paths, emit spectral
//! estimates, estimate memory parameters, and run Monte Carlo grids.
//!
//! Exit codes: 0 ok, 1 I/O, 2 flags/config, 3 data, 4 non-convergence under
//! `--strict`. Every failure prints a single `error: ...` line to stderr.

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use varfima::{
    bandwidth_from_exponent, equicorrelation, halfwidth_from_exponent, io as vio, montecarlo,
    periodogram, simulate_with_filter, smoothed_periodogram, tapered_periodogram, FilterKind,
    FourierGrid, MemoryParams, Method, SmoothingWeights, ThetaBounds, Varfima0Spec,
};

#[derive(Parser)]
#[command(
    name = "varfima",
    version,
    about = "Multivariate long-memory toolkit: simulation and semiparametric estimation of the fractional differencing vector"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Simulate a Gaussian VARFIMA(0,d,0) path and write it as CSV.
    Simulate(SimulateArgs),
    /// Write a spectral-density estimate of an input series as CSV.
    Spectrum(SpectrumArgs),
    /// Estimate the memory vector of an input series; prints a JSON record.
    Estimate(EstimateArgs),
    /// Run a Monte Carlo experiment grid from a JSON config.
    Mc(McArgs),
}

#[derive(Args)]
struct SimulateArgs {
    /// Comma-separated memory parameters, e.g. 0.1,0.4 (each in (-1/2,1/2)).
    #[arg(long)]
    d: String,
    /// Innovation correlation in (-1, 1); applied to every off-diagonal pair.
    #[arg(long, default_value_t = 0.0)]
    rho: f64,
    /// Sample size.
    #[arg(long)]
    n: usize,
    /// Moving-average truncation point.
    #[arg(long, default_value_t = 50_000)]
    truncation: usize,
    /// Simulation kernel: causal (one-sided textbook representation) or
    /// zero-phase (symmetric kernel; the Monte Carlo harness default).
    #[arg(long, default_value = "causal")]
    filter: String,
    /// Stream seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output CSV path.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SpectrumArgs {
    /// Input series CSV.
    #[arg(long)]
    input: PathBuf,
    /// Spectral estimator: periodogram, tapered or smoothed.
    #[arg(long)]
    method: String,
    /// Bandwidth exponent: m = floor(n^alpha).
    #[arg(long)]
    alpha: Option<f64>,
    /// Explicit bandwidth; overrides --alpha.
    #[arg(long)]
    m: Option<usize>,
    /// Smoothing exponent: ell = floor(n^beta) (smoothed only).
    #[arg(long)]
    beta: Option<f64>,
    /// Explicit window half-width; overrides --beta. 0 means no smoothing.
    #[arg(long)]
    ell: Option<usize>,
    /// Drop the k = -j term of the smoothing window and renormalize.
    #[arg(long)]
    exclude_minus_j: bool,
    /// Output CSV path (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EstimateArgs {
    /// Input series CSV.
    #[arg(long)]
    input: PathBuf,
    /// Estimator: sh, tsh, ssh or ssh-star.
    #[arg(long)]
    method: String,
    /// Bandwidth exponent: m = floor(n^alpha).
    #[arg(long)]
    alpha: Option<f64>,
    /// Explicit bandwidth; overrides --alpha.
    #[arg(long)]
    m: Option<usize>,
    /// Smoothing exponent for ssh/ssh-star: ell = floor(n^beta).
    #[arg(long)]
    beta: Option<f64>,
    /// Lower admissible-box margin: Theta = [-1/2+eps1, 1/2-eps2]^q.
    #[arg(long, default_value_t = ThetaBounds::DEFAULT_EPS)]
    eps1: f64,
    /// Upper admissible-box margin.
    #[arg(long, default_value_t = ThetaBounds::DEFAULT_EPS)]
    eps2: f64,
    /// Fail (exit 4) when the optimizer hits its iteration cap.
    #[arg(long)]
    strict: bool,
    /// Output JSON path (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct McArgs {
    /// Experiment grid description (JSON).
    #[arg(long)]
    config: PathBuf,
    /// Directory for the summary table and per-cell raw estimates.
    #[arg(long)]
    out_dir: PathBuf,
    /// Override the replication count of the config.
    #[arg(long)]
    replications: Option<usize>,
    /// Worker thread count (defaults to the number of cores).
    #[arg(long)]
    threads: Option<usize>,
}

enum AppError {
    Io(String),
    Flags(String),
    Data(String),
    NonConvergence(String),
}

impl AppError {
    fn code(&self) -> u8 {
        match self {
            AppError::Io(_) => 1,
            AppError::Flags(_) => 2,
            AppError::Data(_) => 3,
            AppError::NonConvergence(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            AppError::Io(m) | AppError::Flags(m) | AppError::Data(m) | AppError::NonConvergence(m) => m,
        }
    }
}

/// Core errors raised while reading input data map to I/O or data codes.
fn input_error(e: varfima::Error) -> AppError {
    use varfima::Error as E;
    match e {
        E::Io(err) => AppError::Io(err.to_string()),
        other => AppError::Data(other.to_string()),
    }
}

fn flags_error(e: impl std::fmt::Display) -> AppError {
    AppError::Flags(e.to_string())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            let first_line = e.to_string().lines().next().unwrap_or("invalid arguments").to_string();
            let msg = first_line.strip_prefix("error: ").unwrap_or(&first_line);
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    let result = match cli.cmd {
        Cmd::Simulate(args) => cmd_simulate(&args),
        Cmd::Spectrum(args) => cmd_spectrum(&args),
        Cmd::Estimate(args) => cmd_estimate(&args),
        Cmd::Mc(args) => cmd_mc(&args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}

fn parse_d_list(text: &str) -> Result<MemoryParams, AppError> {
    let values: Result<Vec<f64>, _> = text.split(',').map(|s| s.trim().parse::<f64>()).collect();
    let values = values.map_err(|_| {
        AppError::Flags(format!("--d expects comma-separated numbers, got '{text}'"))
    })?;
    MemoryParams::new(values)
        .map_err(|e| AppError::Flags(format!("--d invalid: {e}; every entry must lie in (-1/2, 1/2)")))
}

fn check_rho(rho: f64) -> Result<(), AppError> {
    if !(rho.is_finite() && rho.abs() < 1.0) {
        return Err(AppError::Flags(format!("--rho = {rho} must lie in (-1, 1)")));
    }
    Ok(())
}

fn cmd_simulate(args: &SimulateArgs) -> Result<(), AppError> {
    let d = parse_d_list(&args.d)?;
    check_rho(args.rho)?;
    if args.n < 2 {
        return Err(AppError::Flags(format!("--n = {} must be at least 2", args.n)));
    }
    if args.truncation < 1 {
        return Err(AppError::Flags("--truncation must be at least 1".into()));
    }
    let filter = match args.filter.as_str() {
        "causal" => FilterKind::Causal,
        "zero-phase" => FilterKind::ZeroPhase,
        other => {
            return Err(AppError::Flags(format!(
                "--filter must be causal or zero-phase, got '{other}'"
            )))
        }
    };
    let spec = Varfima0Spec {
        innovation_corr: equicorrelation(d.q(), args.rho),
        d,
        n: args.n,
        truncation: args.truncation,
        seed: args.seed,
    };
    let series = simulate_with_filter(&spec, filter).map_err(|e| AppError::Flags(e.to_string()))?;
    vio::write_series_csv(&series, &args.out).map_err(input_error)?;
    eprintln!(
        "simulate: n={} q={} d=[{}] rho={} truncation={} filter={} seed={} -> {}",
        spec.n,
        spec.d.q(),
        spec.d
            .values()
            .iter()
            .map(f64::to_string)
            .collect::<Vec<_>>()
            .join(","),
        args.rho,
        spec.truncation,
        filter.token(),
        spec.seed,
        args.out.display()
    );
    Ok(())
}

/// Resolve the effective bandwidth from `--m` / `--alpha` (m wins).
fn effective_bandwidth(
    n: usize,
    m: Option<usize>,
    alpha: Option<f64>,
) -> Result<usize, AppError> {
    match (m, alpha) {
        (Some(m), _) => Ok(m),
        (None, Some(alpha)) => bandwidth_from_exponent(n, alpha).map_err(flags_error),
        (None, None) => Err(AppError::Flags("provide --alpha or --m".into())),
    }
}

fn write_text(out: Option<&Path>, text: &str) -> Result<(), AppError> {
    match out {
        Some(path) => {
            fs::write(path, text).map_err(|e| AppError::Io(e.to_string()))?;
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .map_err(|e| AppError::Io(e.to_string()))?;
        }
    }
    Ok(())
}

fn cmd_spectrum(args: &SpectrumArgs) -> Result<(), AppError> {
    let series = vio::read_series_csv(&args.input).map_err(input_error)?;
    let n = series.n();
    let m = effective_bandwidth(n, args.m, args.alpha)?;
    let grid = FourierGrid::new(n, m).map_err(flags_error)?;
    let demeaned = series.demean();
    let seq = match args.method.as_str() {
        "periodogram" => periodogram(&demeaned, &grid).map_err(flags_error)?,
        "tapered" => {
            let taper = varfima::cosine_bell_taper(n, demeaned.q()).map_err(flags_error)?;
            tapered_periodogram(&demeaned, &grid, &taper).map_err(flags_error)?
        }
        "smoothed" => {
            let weights = match (args.ell, args.beta) {
                (Some(0), _) => SmoothingWeights::point_mass(),
                (Some(ell), _) => varfima::bartlett_weights(n, ell).map_err(flags_error)?,
                (None, Some(beta)) => {
                    let ell = halfwidth_from_exponent(n, beta).map_err(flags_error)?;
                    varfima::bartlett_weights(n, ell).map_err(flags_error)?
                }
                (None, None) => {
                    return Err(AppError::Flags(
                        "smoothed spectrum needs --beta or --ell".into(),
                    ))
                }
            }
            .with_exclude_minus_j(args.exclude_minus_j);
            smoothed_periodogram(&demeaned, &grid, &weights).map_err(flags_error)?
        }
        other => {
            return Err(AppError::Flags(format!(
                "--method must be periodogram, tapered or smoothed, got '{other}'"
            )))
        }
    };
    write_text(args.out.as_deref(), &vio::spectrum_to_csv(&seq))
}

#[derive(Serialize)]
struct EstimateRecord<'a> {
    method: &'a str,
    n: usize,
    m: usize,
    alpha: Option<f64>,
    beta: Option<f64>,
    eps1: f64,
    eps2: f64,
    d_hat: &'a [f64],
    se: Option<&'a [f64]>,
    g_hat: Vec<Vec<f64>>,
    objective_value: f64,
    converged: bool,
    iterations: usize,
}

fn cmd_estimate(args: &EstimateArgs) -> Result<(), AppError> {
    let method = Method::parse_token(&args.method).ok_or_else(|| {
        AppError::Flags(format!(
            "--method must be sh, tsh, ssh or ssh-star, got '{}'",
            args.method
        ))
    })?;
    if method.uses_smoothing() && args.beta.is_none() {
        return Err(AppError::Flags(format!(
            "--method {} needs --beta",
            method.cli_token()
        )));
    }
    let bounds = ThetaBounds::new(args.eps1, args.eps2).map_err(flags_error)?;
    let series = vio::read_series_csv(&args.input).map_err(input_error)?;
    let m = effective_bandwidth(series.n(), args.m, args.alpha)?;
    let result = varfima::estimate_with_method(&series, method, m, args.beta, &bounds)
        .map_err(flags_error)?;
    if args.strict && !result.converged {
        return Err(AppError::NonConvergence(format!(
            "optimizer did not converge within the iteration cap ({} iterations)",
            result.iterations
        )));
    }
    if !result.objective_value.is_finite() {
        return Err(AppError::Data(
            "estimation produced a non-finite objective value".into(),
        ));
    }
    let q = result.d_hat.q();
    let g_hat: Vec<Vec<f64>> = (0..q)
        .map(|r| (0..q).map(|s| result.g_hat[(r, s)]).collect())
        .collect();
    let record = EstimateRecord {
        method: method.cli_token(),
        n: series.n(),
        m,
        alpha: if args.m.is_some() { None } else { args.alpha },
        beta: args.beta.filter(|_| method.uses_smoothing()),
        eps1: args.eps1,
        eps2: args.eps2,
        d_hat: result.d_hat.values(),
        se: result.asymptotic_sd.as_deref(),
        g_hat,
        objective_value: result.objective_value,
        converged: result.converged,
        iterations: result.iterations,
    };
    let mut text = serde_json::to_string(&record).map_err(|e| AppError::Data(e.to_string()))?;
    text.push('\n');
    write_text(args.out.as_deref(), &text)
}

fn cmd_mc(args: &McArgs) -> Result<(), AppError> {
    let text = fs::read_to_string(&args.config).map_err(|e| AppError::Io(e.to_string()))?;
    let mut grid: montecarlo::ExperimentGrid = serde_json::from_str(&text)
        .map_err(|e| AppError::Flags(format!("malformed config: {e}")))?;
    if let Some(r) = args.replications {
        grid.replications = r;
    }
    grid.validate().map_err(flags_error)?;
    fs::create_dir_all(&args.out_dir).map_err(|e| AppError::Io(e.to_string()))?;

    let run = || montecarlo::run_grid(&grid);
    let results = match args.threads {
        Some(threads) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .map_err(|e| AppError::Flags(e.to_string()))?;
            pool.install(run)
        }
        None => run(),
    }
    .map_err(|e| AppError::Io(e.to_string()))?;

    let summaries: Vec<_> = results.iter().map(|r| r.summary.clone()).collect();
    let table = montecarlo::emit_table(&summaries).map_err(|e| AppError::Data(e.to_string()))?;
    let table_path = args.out_dir.join("table.csv");
    fs::write(&table_path, table).map_err(|e| AppError::Io(e.to_string()))?;
    for cell in &results {
        let raw = montecarlo::emit_raw_estimates(cell).map_err(|e| AppError::Data(e.to_string()))?;
        let path = args.out_dir.join(format!("raw_{}.csv", cell.summary.key.slug()));
        fs::write(path, raw).map_err(|e| AppError::Io(e.to_string()))?;
    }
    eprintln!(
        "mc: {} cells x {} replications (n={}) -> {}",
        results.len(),
        grid.replications,
        grid.n,
        args.out_dir.display()
    );
    Ok(())
}
