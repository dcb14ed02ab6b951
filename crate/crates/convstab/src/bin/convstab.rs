//! Command-line front end: convolution, inequality campaigns, support
//! compression, Toeplitz inspection and α(s,f) estimation with JSON output.

use std::fs;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use convstab::{
    alpha_lower_detbound, alpha_upper_alternating, compress_support, convolve,
    monotonicity_table, random_instance, verify_inequality, AutocorrToeplitz, Error,
    SparseSequence, SupportSet,
};

const EXIT_VIOLATION: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_OVERFLOW: u8 = 3;
const EXIT_BUDGET: u8 = 4;

#[derive(Parser)]
#[command(name = "convstab", about = "Sparse convolution stability toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct OutputOpts {
    /// Write output here instead of stdout.
    #[arg(long)]
    out: Option<String>,
    /// Output format.
    #[arg(long, default_value = "json")]
    format: String,
}

#[derive(Subcommand)]
enum Command {
    /// Convolve two sparse sequences.
    Conv {
        /// First sequence: inline JSON or a file path.
        #[arg(long)]
        x: String,
        /// Second sequence: inline JSON or a file path.
        #[arg(long)]
        y: String,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Run a randomized campaign checking the norm inequality.
    Verify {
        #[arg(long, default_value_t = 2)]
        s: usize,
        #[arg(long, default_value_t = 2)]
        f: usize,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        /// Supports are drawn uniformly from [-window, window].
        #[arg(long, default_value_t = 1_000_000)]
        window: i64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Compress a support pair to minimal diameter.
    Compress {
        /// Support I as a JSON integer array (inline or path).
        #[arg(long)]
        x: String,
        /// Support J as a JSON integer array (inline or path).
        #[arg(long)]
        y: String,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Build the autocorrelation Toeplitz matrix of a dense generator and
    /// report its spectrum data; csv format dumps the symbol samples.
    Toeplitz {
        /// Dense generator as JSON [[re,im],...] (inline or path).
        #[arg(long)]
        x: String,
        #[arg(long, default_value_t = 4096)]
        grid: usize,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Estimate the stability constant α(s,f) at a working dimension.
    Alpha {
        #[arg(long, default_value_t = 2)]
        s: usize,
        #[arg(long, default_value_t = 2)]
        f: usize,
        #[arg(long = "n-eff", default_value_t = 4)]
        n_eff: usize,
        #[arg(long, default_value_t = 32)]
        restarts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Tabulate α upper bounds over an (s, f) grid and check monotonicity.
    Table {
        #[arg(long, default_value_t = 3)]
        s: usize,
        #[arg(long, default_value_t = 3)]
        f: usize,
        #[arg(long = "n-eff", default_value_t = 6)]
        n_eff: usize,
        #[arg(long, default_value_t = 8)]
        restarts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: OutputOpts,
    },
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::IndexOverflow(_) => EXIT_OVERFLOW,
        Error::BudgetExceeded(_) => EXIT_BUDGET,
        _ => EXIT_USAGE,
    }
}

/// Inline JSON if it looks like JSON, otherwise a file path.
fn load_input(arg: &str) -> Result<String, Error> {
    let trimmed = arg.trim_start();
    if trimmed.starts_with('{') || trimmed.starts_with('[') {
        Ok(arg.to_string())
    } else {
        fs::read_to_string(arg)
            .map_err(|e| Error::InvalidInput(format!("cannot read {arg}: {e}")))
    }
}

fn parse_sequence(arg: &str) -> Result<SparseSequence, Error> {
    SparseSequence::from_json(&load_input(arg)?)
}

fn parse_support(arg: &str) -> Result<SupportSet, Error> {
    let elements: Vec<i64> = serde_json::from_str(&load_input(arg)?)?;
    SupportSet::new(elements)
}

fn parse_dense(arg: &str) -> Result<Vec<Complex64>, Error> {
    let pairs: Vec<(f64, f64)> = serde_json::from_str(&load_input(arg)?)?;
    let v: Vec<Complex64> = pairs
        .into_iter()
        .map(|(re, im)| Complex64::new(re, im))
        .collect();
    for c in &v {
        if !c.re.is_finite() || !c.im.is_finite() {
            return Err(Error::InvalidInput("non-finite value".into()));
        }
    }
    Ok(v)
}

fn emit(output: &OutputOpts, text: &str) -> Result<(), Error> {
    match &output.out {
        Some(path) => fs::write(path, text)
            .map_err(|e| Error::InvalidInput(format!("cannot write {path}: {e}"))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

/// Optional cap on internal parallelism; the current pipeline is
/// sequential, so only validation happens here.
fn validate_thread_cap() -> Result<(), Error> {
    if let Ok(v) = std::env::var("CONVSTAB_THREADS") {
        v.parse::<usize>()
            .map_err(|_| Error::InvalidInput(format!("CONVSTAB_THREADS={v} is not a number")))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<u8, Error> {
    validate_thread_cap()?;
    match cli.command {
        Command::Conv { x, y, output } => {
            let x = parse_sequence(&x)?;
            let y = parse_sequence(&y)?;
            let conv = convolve(&x, &y)?;
            let text = json!({
                "convolution": serde_json::from_str::<serde_json::Value>(&conv.to_json())?,
                "norm_x": x.norm(),
                "norm_y": y.norm(),
                "norm_convolution": conv.norm(),
            })
            .to_string();
            emit(&output, &text)?;
            Ok(0)
        }
        Command::Verify {
            s,
            f,
            trials,
            window,
            seed,
            output,
        } => {
            if trials == 0 || s == 0 || f == 0 {
                return Err(Error::InvalidInput(
                    "trials, s and f must be at least 1".into(),
                ));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut ratios = Vec::with_capacity(trials);
            let mut violations = 0usize;
            for _ in 0..trials {
                let (x, y) = random_instance(s, f, window, &mut rng)?;
                let report = verify_inequality(&x, &y, None)?;
                if !report.upper_ok {
                    violations += 1;
                }
                ratios.push(report.ratio);
            }
            ratios.sort_by(|a, b| a.total_cmp(b));
            let text = json!({
                "s": s,
                "f": f,
                "trials": trials,
                "window": window,
                "seed": seed,
                "violations": violations,
                "min_ratio": ratios[0],
                "median_ratio": ratios[trials / 2],
            })
            .to_string();
            emit(&output, &text)?;
            Ok(if violations == 0 { 0 } else { EXIT_VIOLATION })
        }
        Command::Compress { x, y, output } => {
            let i = parse_support(&x)?;
            let j = parse_support(&y)?;
            let result = compress_support(&i, &j)?;
            emit(&output, &result.to_json())?;
            Ok(0)
        }
        Command::Toeplitz { x, grid, output } => {
            let a = parse_dense(&x)?;
            let b = AutocorrToeplitz::from_generator(&a)?;
            if output.format == "csv" {
                let step = 2.0 * std::f64::consts::PI / grid as f64;
                let mut text = String::from("omega,symbol\n");
                for i in 0..grid {
                    let w = i as f64 * step;
                    text.push_str(&format!("{},{}\n", w, b.symbol_eval(w)));
                }
                emit(&output, &text)?;
                return Ok(0);
            }
            let (lambda, _) = b.smallest_eigenvalue()?;
            let text = json!({
                "matrix": serde_json::from_str::<serde_json::Value>(&b.to_json())?,
                "smallest_eigenvalue": lambda,
                "det_eigen_lower_bound": b.det_eigen_lower_bound(),
                "symbol_min": b.symbol_min(grid.max(2 * b.dim()))?,
            })
            .to_string();
            emit(&output, &text)?;
            Ok(0)
        }
        Command::Alpha {
            s,
            f,
            n_eff,
            restarts,
            seed,
            output,
        } => {
            let upper = alpha_upper_alternating(s, f, n_eff, restarts, seed)?;
            let lower = if (2..=6).contains(&n_eff) {
                Some(alpha_lower_detbound(n_eff, 8)?)
            } else {
                None
            };
            let text = json!({
                "s": s,
                "f": f,
                "beta": convstab::beta(s, f),
                "alpha_upper": upper.alpha_upper,
                "witness": {
                    "x": serde_json::from_str::<serde_json::Value>(&upper.witness_x.to_json())?,
                    "y": serde_json::from_str::<serde_json::Value>(&upper.witness_y.to_json())?,
                },
                "alpha_lower": lower.as_ref().map(|l| l.alpha_lower),
                "alpha_lower_is_estimate": lower.is_some(),
                "n_eff": n_eff,
                "iterations": upper.iterations,
                "restarts": restarts,
                "seed": seed,
            })
            .to_string();
            emit(&output, &text)?;
            Ok(0)
        }
        Command::Table {
            s,
            f,
            n_eff,
            restarts,
            seed,
            output,
        } => {
            let table = monotonicity_table(s, f, n_eff, restarts, seed)?;
            let text = json!({
                "s_max": s,
                "f_max": f,
                "n_eff": n_eff,
                "restarts": restarts,
                "seed": seed,
                "values": table.values,
                "monotone": table.monotone,
                "symmetric": table.symmetric,
            })
            .to_string();
            emit(&output, &text)?;
            Ok(if table.monotone { 0 } else { EXIT_VIOLATION })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}
