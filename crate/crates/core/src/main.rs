use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use lowlying::characters::WeightKind;
use lowlying::cli::{error_record, run, write_outputs, ExperimentConfig, FamilyKind, Mode, CACHE_ENV};
use lowlying::curve::{CurveInput, EllipticCurve};
use lowlying::Error;

/// One-level densities, character and cubic-field censuses, and analytic
/// rank estimates for twists of an elliptic curve.
#[derive(Parser)]
#[command(name = "lowlying", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Local data a_p for all primes up to --prime-cap.
    Ap(Overrides),
    /// Primitive order-l characters with conductor up to the weight support.
    Chars(Overrides),
    /// Family-averaged one-level density over order-l twists.
    DensityCyclic(Overrides),
    /// Averaged one-level density over S3 cubic fields.
    DensityCubic(Overrides),
    /// Analytic ranks of all twists in an order-l family.
    Ranks(Overrides),
    /// Cubic field census with local splitting densities.
    Fields(Overrides),
    /// Average rank bound for a Fejer test function.
    Bound(Overrides),
    /// theta_f(X) = sum over p <= X of a_f(p^2) log p.
    Theta(Overrides),
    /// Run whatever mode the config file names.
    Run(Overrides),
}

#[derive(Args, Default)]
struct Overrides {
    /// JSON config; flags below override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Built-in curve label (11a1, 37a1, 389a1).
    #[arg(long, conflicts_with = "coeffs")]
    curve: Option<String>,
    /// Weierstrass coefficients a1,a2,a3,a4,a6.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, requires = "conductor")]
    coeffs: Option<Vec<i64>>,
    #[arg(long)]
    conductor: Option<u64>,
    #[arg(long)]
    rank: Option<u32>,
    #[arg(long)]
    l: Option<u32>,
    #[arg(long = "x", short = 'X')]
    x: Option<f64>,
    #[arg(long)]
    sigma: Option<f64>,
    #[arg(long, value_parser = parse_weight)]
    weight: Option<WeightKind>,
    #[arg(long, value_parser = parse_family)]
    family: Option<FamilyKind>,
    #[arg(long)]
    prime_cap: Option<u64>,
    #[arg(long)]
    coefficient_cap: Option<usize>,
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long, env = CACHE_ENV)]
    cache_dir: Option<PathBuf>,
    /// Directory for CSV/JSON artifacts and the run manifest.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long)]
    threshold: Option<f64>,
    #[arg(long, value_delimiter = ',')]
    primes: Option<Vec<u64>>,
}

fn parse_weight(s: &str) -> Result<WeightKind, String> {
    match s {
        "smooth" | "smooth_bump" => Ok(WeightKind::SmoothBump),
        "sharp" => Ok(WeightKind::Sharp),
        _ => Err(format!("unknown weight {s:?} (smooth_bump or sharp)")),
    }
}

fn parse_family(s: &str) -> Result<FamilyKind, String> {
    match s {
        "cyclic" => Ok(FamilyKind::Cyclic),
        "s3" => Ok(FamilyKind::S3),
        _ => Err(format!("unknown family {s:?} (cyclic or s3)")),
    }
}

fn build(mode: Option<Mode>, o: Overrides) -> Result<ExperimentConfig, Error> {
    let mut c = match &o.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    if mode.is_some() {
        c.mode = mode;
    }
    if let Some(label) = &o.curve {
        let e = EllipticCurve::builtin(label).ok_or_else(|| Error::Config(format!("unknown curve label {label}")))?;
        c.curve = Some(e.to_input());
    }
    if let Some(v) = &o.coeffs {
        if v.len() != 5 {
            return Err(Error::Config(format!("--coeffs takes 5 integers, got {}", v.len())));
        }
        c.curve = Some(CurveInput {
            a1: v[0],
            a2: v[1],
            a3: v[2],
            a4: v[3],
            a6: v[4],
            conductor: o.conductor.unwrap_or_default(),
            rank: o.rank,
        });
    } else if let Some(curve) = c.curve.as_mut() {
        if let Some(n) = o.conductor {
            curve.conductor = n;
        }
        if o.rank.is_some() {
            curve.rank = o.rank;
        }
    }
    c.l = o.l.or(c.l);
    c.x = o.x.or(c.x);
    c.sigma = o.sigma.or(c.sigma);
    c.weight = o.weight.unwrap_or(c.weight);
    c.family = o.family.unwrap_or(c.family);
    c.prime_cap = o.prime_cap.or(c.prime_cap);
    c.coefficient_cap = o.coefficient_cap.or(c.coefficient_cap);
    c.thread_count = o.threads.or(c.thread_count);
    c.cache_dir = o.cache_dir.or(c.cache_dir);
    c.output_path = o.output.or(c.output_path);
    c.threshold = o.threshold.or(c.threshold);
    c.primes = o.primes.or(c.primes);
    Ok(c)
}

fn fail(e: &Error) -> ExitCode {
    eprintln!("{}", error_record(e));
    ExitCode::from(if matches!(e, Error::Config(_)) { 2 } else { 1 })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (mode, overrides) = match cli.command {
        Command::Ap(o) => (Some(Mode::Ap), o),
        Command::Chars(o) => (Some(Mode::Chars), o),
        Command::DensityCyclic(o) => (Some(Mode::DensityCyclic), o),
        Command::DensityCubic(o) => (Some(Mode::DensityCubic), o),
        Command::Ranks(o) => (Some(Mode::Ranks), o),
        Command::Fields(o) => (Some(Mode::Fields), o),
        Command::Bound(o) => (Some(Mode::Bound), o),
        Command::Theta(o) => (Some(Mode::Theta), o),
        Command::Run(o) => (None, o),
    };
    let config = match build(mode, overrides) {
        Ok(c) => c,
        Err(e) => return fail(&e),
    };
    let out = match run(&config) {
        Ok(out) => out,
        Err(e) => return fail(&e),
    };
    for w in &out.warnings {
        eprintln!("{w}");
    }
    if let Some(dir) = &config.output_path {
        if let Err(e) = write_outputs(dir, &config, &out) {
            return fail(&e);
        }
    }
    println!("{}", out.summary);
    ExitCode::SUCCESS
}
