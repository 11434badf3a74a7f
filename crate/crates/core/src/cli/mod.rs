//! Command-line front end. Data goes to stdout (or `--out`), diagnostics to
//! stderr. Exit status: 0 success, 1 runtime error, 2 usage error.

mod commands;
mod config;

pub use config::{parse_config, ConfigEntry, DEFAULT_CONFIG};

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{ArgMatches, Args, CommandFactory, FromArgMatches, Parser, Subcommand};

use crate::bench::{Domain, Output, ReportFormat};
use crate::costmodel::Design;
use crate::funcs::Function;
use crate::method::Method;
use crate::streams::GeneratorKind;

#[derive(Debug, Parser)]
#[command(name = "unaryflow", version, about = "Unary bit-stream arithmetic: generation, multiplication, benchmarks")]
pub struct Cli {
    /// Config file of `key = value` defaults (default: ./unaryflow.conf if present).
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone)]
pub struct OutputArgs {
    /// Destination file, or `-` for stdout.
    #[arg(long, default_value = "-", value_name = "PATH|-")]
    pub out: Output,

    #[arg(long, default_value = "csv", value_parser = ["csv", "text"])]
    pub format: String,

    /// Print the effective configuration and exit.
    #[arg(long)]
    pub show_config: bool,
}

impl OutputArgs {
    fn report_format(&self) -> ReportFormat {
        self.format.parse().expect("restricted by clap")
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Emit one generated stream as a 0/1 line.
    #[command(args_override_self = true)]
    Gen(GenArgs),
    /// Multiply two values once.
    #[command(args_override_self = true)]
    Mul(MulArgs),
    /// Exhaustive multiply error sweep.
    #[command(args_override_self = true)]
    Sweep(SweepArgs),
    /// Error when only a prefix of the output stream is observed.
    #[command(args_override_self = true)]
    Progressive(ProgressiveArgs),
    /// Series-based function error over every input.
    #[command(args_override_self = true)]
    Funcs(FuncsArgs),
    /// Random matrix-product trials, or one product of matrix files.
    #[command(args_override_self = true)]
    Matmul(MatmulArgs),
    /// Gate-cost model tables.
    #[command(args_override_self = true)]
    Cost(CostArgs),
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long, default_value = "counter")]
    pub kind: GeneratorKind,
    /// Stream length is 2^n.
    #[arg(long)]
    pub n: u32,
    /// Numerator of the value, 0..=2^n.
    #[arg(long)]
    pub value: u64,
    /// LFSR seed.
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// LFSR tap mask (bit e-1 for term x^e); default is the tabulated polynomial.
    #[arg(long, value_parser = parse_int)]
    pub poly: Option<u64>,
    /// Sobol dimension.
    #[arg(long, default_value_t = 0)]
    pub dimension: usize,
    /// Halton base.
    #[arg(long, default_value_t = 2)]
    pub base: u32,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct MulArgs {
    #[arg(long, default_value = "det")]
    pub method: Method,
    #[arg(long)]
    pub n: u32,
    /// Numerator of the first operand.
    #[arg(long)]
    pub a: u64,
    /// Numerator of the second operand.
    #[arg(long)]
    pub b: u64,
    /// Write the per-cycle trace CSV instead of the summary (det only).
    #[arg(long)]
    pub trace: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, num_args = 1.., default_values = ["det"])]
    pub method: Vec<Method>,
    #[arg(long, num_args = 1.., default_values_t = [4u32, 6, 8])]
    pub n: Vec<u32>,
    /// Operand range: register (0..2^n-1) or inclusive (0..=2^n).
    #[arg(long, default_value = "register")]
    pub domain: Domain,
    /// Worker threads (default: available parallelism). Results do not depend on it.
    #[arg(long)]
    pub workers: Option<usize>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ProgressiveArgs {
    #[arg(long, num_args = 1.., default_values = ["det", "lfsr", "sobol", "halton"])]
    pub method: Vec<Method>,
    #[arg(long, default_value_t = 4)]
    pub n: u32,
    /// Observed prefix lengths (default: 10..=16 scaled to 2^n).
    #[arg(long, num_args = 1..)]
    pub observe: Vec<u64>,
    #[arg(long, default_value = "register")]
    pub domain: Domain,
    #[arg(long)]
    pub workers: Option<usize>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct FuncsArgs {
    #[arg(long, num_args = 1.., default_values = ["expneg", "sin", "log1p", "sigmoid"])]
    pub function: Vec<Function>,
    #[arg(long, num_args = 1.., default_values = ["det"])]
    pub method: Vec<Method>,
    #[arg(long, default_value_t = 8)]
    pub n: u32,
    /// Series definitions (default: the shipped coefficient sets).
    #[arg(long, value_name = "PATH")]
    pub spec_file: Option<PathBuf>,
    #[arg(long)]
    pub workers: Option<usize>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct MatmulArgs {
    /// Seed of the operand generator (required for random trials).
    #[arg(long, required_unless_present_all = ["a", "b"])]
    pub seed: Option<u64>,
    #[arg(long, num_args = 1.., default_values = ["det", "lfsr", "sobol", "halton"])]
    pub method: Vec<Method>,
    #[arg(long, default_value_t = 4)]
    pub n: u32,
    #[arg(long, default_value_t = 256)]
    pub r1: usize,
    #[arg(long, default_value_t = 256)]
    pub c1: usize,
    #[arg(long, default_value_t = 32)]
    pub c2: usize,
    #[arg(long, default_value_t = 20)]
    pub trials: u32,
    #[arg(long, default_value = "register")]
    pub domain: Domain,
    /// Left operand matrix file; with --b, computes that single product.
    #[arg(long, requires = "b", value_name = "PATH")]
    pub a: Option<PathBuf>,
    /// Right operand (weight) matrix file, optionally signed.
    #[arg(long, requires = "a", value_name = "PATH")]
    pub b: Option<PathBuf>,
    #[arg(long)]
    pub workers: Option<usize>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct CostArgs {
    #[arg(long, num_args = 1.., default_values = ["lfsr", "sobol", "halton", "det"])]
    pub design: Vec<Design>,
    #[arg(long, num_args = 1.., default_values_t = [4u32, 6, 8])]
    pub n: Vec<u32>,
    /// Unit-cost file (default: the shipped costs).
    #[arg(long, value_name = "PATH")]
    pub costs: Option<PathBuf>,
    /// Fit the unit costs to the published percentages and report residuals.
    #[arg(long)]
    pub calibrate: bool,
    /// Price a series evaluator instead of a single multiplier.
    #[arg(long)]
    pub function: Option<Function>,
    #[command(flatten)]
    pub output: OutputArgs,
}

fn parse_int(s: &str) -> Result<u64, String> {
    let parsed = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => match s.strip_prefix("0b") {
            Some(bin) => u64::from_str_radix(bin, 2),
            None => s.parse(),
        },
    };
    parsed.map_err(|e| e.to_string())
}

/// `id=value` for every argument of the matched subcommand.
fn effective_config(matches: &ArgMatches) -> Vec<String> {
    let Some((name, sub)) = matches.subcommand() else {
        return Vec::new();
    };
    let mut lines = vec![format!("command={name}")];
    for id in sub.ids() {
        let id = id.as_str();
        // Flattened structs register a group named after the struct.
        let is_group = id.starts_with(|c: char| c.is_ascii_uppercase());
        if is_group || id == "show_config" || id == "config" {
            continue;
        }
        if let Ok(Some(values)) = sub.try_get_raw(id) {
            let v: Vec<String> = values.map(|v| v.to_string_lossy().into_owned()).collect();
            lines.push(format!("{id}={}", v.join(" ")));
        }
    }
    lines
}

/// Parses `argv` (including the program name), runs the subcommand and
/// returns the process exit status.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let command = Cli::command();
    let argv = match config::config_path(&argv) {
        None => argv,
        Some(path) => {
            let origin = path.display().to_string();
            let loaded = std::fs::read_to_string(&path)
                .map_err(|e| crate::Error::io(&path, e))
                .and_then(|text| parse_config(&text, &origin))
                .and_then(|entries| config::inject(argv, &entries, &command, &origin));
            match loaded {
                Ok(a) => a,
                Err(e) => {
                    eprintln!("unaryflow: {e}");
                    return 2;
                }
            }
        }
    };
    let matches = match command.try_get_matches_from(&argv) {
        Ok(m) => m,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let cli = match Cli::from_arg_matches(&matches) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    if commands::output_args(&cli.command).show_config {
        let stdout = std::io::stdout();
        let mut out = stdout.lock();
        for line in effective_config(&matches) {
            let _ = writeln!(out, "{line}");
        }
        return 0;
    }
    match commands::dispatch(&cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("unaryflow: {e}");
            1
        }
    }
}
