//! Command-line front end: argument parsing, configuration, batch handling
//! and output placement. Exit codes are a stable contract:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success |
//! | 2 | invalid input (curve, flags, config) |
//! | 3 | no admissible decomposition |
//! | 4 | constructed expression is not a polynomial |
//! | 5 | a verification oracle failed |
//! | 6 | I/O error |

pub mod commands;
pub mod config;
pub mod error;
pub mod family;
pub mod output;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::Value;

use crate::commands::Rendered;
use crate::config::{
    parse_curve, parse_list, parse_pin, parse_range, Format, Overrides, Pin, Policy, RunConfig,
    CONFIG_ENV,
};
use crate::error::CliError;
use crate::family::FamilySpec;

#[derive(Debug, Parser)]
#[command(
    name = "stci",
    version,
    about = "Explicit set-theoretic complete intersection equations for recursive monomial curves"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List every decomposition of each level with its condition flags.
    Decompose {
        #[command(flatten)]
        input: CurveInput,
        #[command(flatten)]
        common: Common,
    },
    /// Build F1,...,F(n-1) and print them.
    Build {
        #[command(flatten)]
        input: CurveInput,
        #[command(flatten)]
        pins: PinArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Build the system and run every verification oracle.
    Verify {
        #[command(flatten)]
        input: CurveInput,
        #[command(flatten)]
        pins: PinArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Process a one-parameter family such as 1,2,3,M.
    Scan {
        /// Exponent template with one single-letter slot, e.g. 1,2,3,M.
        template: String,
        /// Inclusive range for the slot, a..b.
        #[arg(long, value_parser = parse_range)]
        range: (u64, u64),
        #[arg(long, default_value_t = 1)]
        step: u64,
        /// Also run the verification oracles for every member.
        #[arg(long)]
        verify: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Write the system in an interchange format (text, json, latex, m2, singular).
    Emit {
        #[command(flatten)]
        input: CurveInput,
        #[command(flatten)]
        pins: PinArgs,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Debug, Args)]
struct CurveInput {
    /// Exponents m1,...,mn separated by commas.
    #[arg(required_unless_present = "batch", conflicts_with = "batch")]
    curve: Option<String>,
    /// File with one curve per line; `#` starts a comment.
    #[arg(long)]
    batch: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct PinArgs {
    /// Use the signed decomposition level:alpha,beta,gamma at that level.
    #[arg(long = "pin", value_parser = parse_pin)]
    pins: Vec<Pin>,
}

#[derive(Debug, Clone)]
struct PrimeList(Vec<u64>);

fn parse_primes(s: &str) -> Result<PrimeList, String> {
    parse_list(s).map(PrimeList)
}

#[derive(Debug, Args)]
struct Common {
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long, value_enum)]
    policy: Option<Policy>,
    /// Verification primes, e.g. 5,7,11.
    #[arg(long, value_parser = parse_primes)]
    primes: Option<PrimeList>,
    /// Parametrized evaluation trials per polynomial.
    #[arg(long)]
    trials: Option<usize>,
    /// Largest number of projective points a brute-force check may visit.
    #[arg(long)]
    budget: Option<u64>,
    /// Write the output here instead of standard output.
    #[arg(short = 'o', long)]
    output: Option<PathBuf>,
    /// TOML file with default settings.
    #[arg(long, env = CONFIG_ENV)]
    config: Option<PathBuf>,
}

impl Common {
    fn resolve(self, pins: Vec<Pin>) -> Result<RunConfig, CliError> {
        RunConfig::resolve(Overrides {
            config: self.config,
            format: self.format,
            policy: self.policy,
            primes: self.primes.map(|p| p.0),
            trials: self.trials,
            budget: self.budget,
            output: self.output,
            pins,
        })
    }
}

type CurveCommand = fn(&stci_core::CurveSpec, &RunConfig) -> Result<Rendered, CliError>;

/// Runs one curve or a whole batch file through `command`.
fn per_curve(
    input: CurveInput,
    cfg: &RunConfig,
    command: CurveCommand,
    stderr: &mut dyn Write,
) -> Result<Rendered, CliError> {
    let Some(path) = input.batch else {
        let curve = parse_curve(input.curve.as_deref().unwrap_or_default())?;
        return command(&curve, cfg);
    };
    let mut texts = Vec::new();
    let mut docs = Vec::new();
    let mut code = 0;
    for (line, entry) in config::read_batch(&path)? {
        let result = parse_curve(&entry).and_then(|c| command(&c, cfg));
        match result {
            Ok(r) => {
                code = code.max(r.code);
                texts.push(r.text);
                if let Some(v) = r.json {
                    docs.push(v);
                }
            }
            Err(e) => {
                let _ = writeln!(stderr, "error: {}:{line}: {entry}: {e}", path.display());
                code = code.max(e.exit_code());
                docs.push(serde_json::json!({"input": entry, "error": e.to_string()}));
            }
        }
    }
    let text = if cfg.format == Format::Json {
        let mut s = serde_json::to_string_pretty(&Value::Array(docs)).expect("json");
        s.push('\n');
        s
    } else {
        texts.join("\n")
    };
    Ok(Rendered {
        text,
        code,
        json: None,
    })
}

fn execute(
    command: Command,
    stderr: &mut dyn Write,
) -> Result<(Rendered, Option<PathBuf>), CliError> {
    let (rendered, cfg) = match command {
        Command::Decompose { input, common } => {
            let cfg = common.resolve(Vec::new())?;
            (
                per_curve(input, &cfg, commands::cmd_decompose, stderr)?,
                cfg,
            )
        }
        Command::Build {
            input,
            pins,
            common,
        } => {
            let cfg = common.resolve(pins.pins)?;
            (per_curve(input, &cfg, commands::cmd_build, stderr)?, cfg)
        }
        Command::Verify {
            input,
            pins,
            common,
        } => {
            let cfg = common.resolve(pins.pins)?;
            (per_curve(input, &cfg, commands::cmd_verify, stderr)?, cfg)
        }
        Command::Emit {
            input,
            pins,
            common,
        } => {
            let cfg = common.resolve(pins.pins)?;
            (per_curve(input, &cfg, commands::cmd_emit, stderr)?, cfg)
        }
        Command::Scan {
            template,
            range,
            step,
            verify,
            common,
        } => {
            let cfg = common.resolve(Vec::new())?;
            let family = FamilySpec::parse(&template, range, step).map_err(CliError::Input)?;
            (commands::cmd_scan(&family, &cfg, verify)?, cfg)
        }
    };
    Ok((rendered, cfg.output))
}

/// Parses `args` (including the program name), runs the command and returns
/// the exit code. Normal output goes to `stdout` unless `-o` is given.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let rendered = e.render().to_string();
            if code == 0 {
                let _ = write!(stdout, "{rendered}");
            } else {
                let _ = write!(stderr, "{rendered}");
            }
            return code;
        }
    };
    match execute(cli.command, stderr) {
        Ok((rendered, output)) => {
            let written = match output {
                Some(path) => std::fs::write(&path, &rendered.text)
                    .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display()))),
                None => stdout
                    .write_all(rendered.text.as_bytes())
                    .map_err(|e| CliError::Io(format!("cannot write output: {e}"))),
            };
            if let Err(e) = written {
                let _ = writeln!(stderr, "error: {e}");
                return e.exit_code();
            }
            if rendered.code == 5 {
                let _ = writeln!(stderr, "error: verification failed");
            }
            rendered.code
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
