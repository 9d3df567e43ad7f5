use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;

/// Exact analysis of Stern's and Northshield's sequences.
#[derive(Debug, Parser)]
#[command(name = "northshield", version)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Write output to PATH instead of standard output.
    #[arg(long, value_name = "PATH", global = true)]
    out: Option<PathBuf>,
    /// Worker threads for scans (default: number of processors).
    #[arg(long, value_name = "N", global = true)]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Text,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print one term exactly and as a float.
    Eval {
        /// `stern`, `northshield`, or a representation file.
        sequence: String,
        n: u64,
    },
    /// Ratio scan: 2b(m)/(2m)^α for Northshield, a(m)/m^(log₂φ) for Stern.
    Scan(ScanArgs),
    /// Run one of the exact verification harnesses.
    Verify(VerifyArgs),
    /// Maxima of b over [3^(n-1), 3^n].
    Max(MaxArgs),
    /// Joint spectral radius bounds.
    Jsr(JsrArgs),
    /// Load a representation file and check it.
    Rep(RepArgs),
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    /// `stern` or `northshield`.
    pub sequence: String,
    pub lo: u64,
    pub hi: u64,
    /// Keep every N-th sample in the output (the maximum uses every index).
    #[arg(long, default_value_t = 1)]
    pub decimation: u64,
    /// Largest allowed `hi` (default 3^9 for Northshield, 2^20 for Stern).
    #[arg(long)]
    pub cap: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Check {
    /// b(m) ≤ h(m) + c·⌊log₃ m⌋ over a range of m.
    #[value(name = "2.2", alias = "log-bound")]
    LogBound,
    /// b/h at the peak indices increases toward 1.
    #[value(name = "2.3", alias = "envelope-ratio")]
    EnvelopeRatio,
    /// 2h(x) ≤ (2x)^α on a grid and at the breakpoints.
    #[value(name = "2.4", alias = "power-bound")]
    PowerBound,
    /// h at the peak index and the strict exceedance.
    #[value(name = "eq2.3", alias = "peak")]
    Peak,
    /// h(3k+1) - (1+√2)h(k+1) on its strip.
    #[value(name = "eq2.4", alias = "gap")]
    Gap,
    /// Values of b and h for m = 2..9.
    #[value(name = "table1", alias = "table")]
    Table,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Coefficient {
    Silver,
    One,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Spacing {
    Linear,
    Geometric,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub check: Check,
    /// Lower end of the m range (log bound).
    #[arg(long, default_value_t = 2)]
    pub lo: u64,
    /// Upper end of the m range (log bound).
    #[arg(long, default_value_t = 19_683)]
    pub hi: u64,
    /// Largest allowed `--hi`.
    #[arg(long, default_value_t = 19_683)]
    pub cap: u64,
    /// Coefficient of ⌊log₃ m⌋ (log bound).
    #[arg(long, value_enum, default_value_t = Coefficient::Silver)]
    pub coefficient: Coefficient,
    /// Smallest exponent n (peak, envelope ratio, gap).
    #[arg(long, default_value_t = 1)]
    pub n_lo: u32,
    /// Largest exponent n (default 12 for peak, 20 for envelope ratio, 10 for gap).
    #[arg(long)]
    pub n_hi: Option<u32>,
    /// Random k per n (gap).
    #[arg(long, default_value_t = 20)]
    pub samples: usize,
    /// Seed for the k samples (gap).
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Grid points (power bound).
    #[arg(long, default_value_t = 10_000)]
    pub grid: usize,
    /// Grid start (power bound).
    #[arg(long, default_value_t = 1.6)]
    pub x_lo: f64,
    /// Grid end (power bound), default 3^10/2.
    #[arg(long, default_value_t = 29_524.5)]
    pub x_hi: f64,
    #[arg(long, value_enum, default_value_t = Spacing::Linear)]
    pub spacing: Spacing,
    /// Largest value of H counted as ≤ 0 (power bound).
    #[arg(long, default_value_t = 1e-9)]
    pub tolerance: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MaxMode {
    Brute,
    Closed,
    Both,
}

#[derive(Debug, Args)]
pub struct MaxArgs {
    pub n_lo: u32,
    pub n_hi: u32,
    #[arg(value_enum, default_value_t = MaxMode::Both)]
    pub mode: MaxMode,
    /// Largest n for brute force.
    #[arg(long, default_value_t = 9)]
    pub cap: u32,
}

#[derive(Debug, Args)]
pub struct JsrArgs {
    /// `stern`, `northshield`, or a representation file.
    pub set: String,
    /// Longest word for the lower bound.
    pub lower_len: u32,
    /// Word length for the upper bound.
    pub upper_len: u32,
    /// Cap on k^len.
    #[arg(long, default_value_t = 1 << 20)]
    pub budget: u64,
    /// Also print the upper bound for every length up to `upper_len`.
    #[arg(long)]
    pub table: bool,
    /// Candidate word for the finiteness check, e.g. `0,1` (default: the
    /// lower-bound witness).
    #[arg(long, value_delimiter = ',')]
    pub word: Option<Vec<u32>>,
    #[arg(long, default_value_t = 1e-9)]
    pub tolerance: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Oracle {
    Northshield,
    Stern,
    /// JSON round trip and inert trailing zero digits.
    #[value(name = "self")]
    SelfCheck,
}

#[derive(Debug, Args)]
pub struct RepArgs {
    /// Representation file, or `stern` / `northshield` for a builtin.
    pub source: String,
    #[arg(long, value_enum, default_value_t = Oracle::SelfCheck)]
    pub oracle: Oracle,
    /// Number of terms compared with the oracle.
    #[arg(long, default_value_t = 1000)]
    pub limit: u64,
    /// Print the canonical representation JSON instead of a report.
    #[arg(long)]
    pub emit: bool,
}

/// Failure classes with their exit codes.
#[derive(Debug)]
pub enum Failure {
    /// Checks ran and found a violation; the report has been written.
    Verification,
    Usage(String),
    Budget(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Verification => 1,
            Failure::Usage(_) => 2,
            Failure::Budget(_) => 3,
        }
    }
}

/// Rendered output plus whether the checks it reports passed.
pub struct Report {
    pub body: String,
    pub passed: bool,
}

impl Report {
    pub fn ok(body: String) -> Self {
        Report { body, passed: true }
    }
}

fn emit(out: Option<&PathBuf>, body: &str) -> Result<(), Failure> {
    match out {
        Some(path) => {
            fs::write(path, body).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(body.as_bytes())
                .and_then(|()| stdout.flush())
                .map_err(|e| Failure::Usage(format!("cannot write output: {e}")))
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    if let Some(n) = cli.workers {
        if n == 0 {
            return Err(Failure::Usage("--workers must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Usage(e.to_string()))?;
    }
    let format = cli.format;
    let report = match cli.command {
        Command::Eval { sequence, n } => commands::eval(&sequence, n, format)?,
        Command::Scan(args) => commands::scan(&args, format)?,
        Command::Verify(args) => commands::verify(&args, format)?,
        Command::Max(args) => commands::max(&args, format)?,
        Command::Jsr(args) => commands::jsr(&args, format)?,
        Command::Rep(args) => commands::rep(&args, format)?,
    };
    emit(cli.out.as_ref(), &report.body)?;
    if report.passed {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            match &failure {
                Failure::Usage(msg) | Failure::Budget(msg) => eprintln!("error: {msg}"),
                Failure::Verification => eprintln!("verification failed"),
            }
            ExitCode::from(failure.code())
        }
    }
}
