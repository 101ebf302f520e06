use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use stci_core::{CurveSpec, FiniteFieldConfig, SelectionPolicy, SignedDecomposition};

use crate::error::CliError;

/// Environment variable naming a TOML file with default settings.
pub const CONFIG_ENV: &str = "STCI_CONFIG";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    #[default]
    Text,
    Json,
    Latex,
    M2,
    Singular,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Policy {
    #[default]
    Strict,
    AllowDirect,
}

impl From<Policy> for SelectionPolicy {
    fn from(p: Policy) -> Self {
        match p {
            Policy::Strict => SelectionPolicy::Strict,
            Policy::AllowDirect => SelectionPolicy::AllowDirectPolynomiality,
        }
    }
}

/// Settings read from the defaults file; every field is optional.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileDefaults {
    pub format: Option<Format>,
    pub policy: Option<Policy>,
    pub primes: Option<Vec<u64>>,
    pub trials: Option<usize>,
    pub budget: Option<u64>,
}

impl FileDefaults {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("cannot read config {}: {e}", path.display())))?;
        toml::from_str(&text)
            .map_err(|e| CliError::Input(format!("bad config {}: {e}", path.display())))
    }
}

/// Everything one command needs after merging flags, file and built-in
/// defaults (in that order of precedence).
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub format: Format,
    pub policy: Policy,
    pub field: FiniteFieldConfig,
    pub output: Option<PathBuf>,
    pub pins: BTreeMap<usize, SignedDecomposition>,
}

/// Flag values as given on the command line, before defaults apply.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub config: Option<PathBuf>,
    pub format: Option<Format>,
    pub policy: Option<Policy>,
    pub primes: Option<Vec<u64>>,
    pub trials: Option<usize>,
    pub budget: Option<u64>,
    pub output: Option<PathBuf>,
    pub pins: Vec<Pin>,
}

impl RunConfig {
    pub fn resolve(flags: Overrides) -> Result<Self, CliError> {
        let file = match &flags.config {
            Some(path) => FileDefaults::load(path)?,
            None => FileDefaults::default(),
        };
        let primes = flags
            .primes
            .or(file.primes)
            .unwrap_or_else(|| FiniteFieldConfig::DEFAULT_PRIMES.to_vec());
        let trials = flags
            .trials
            .or(file.trials)
            .unwrap_or(FiniteFieldConfig::DEFAULT_TRIALS);
        let budget = flags
            .budget
            .or(file.budget)
            .unwrap_or(FiniteFieldConfig::DEFAULT_BUDGET);
        let field = FiniteFieldConfig::new(&primes, trials, budget)
            .map_err(|e| CliError::Input(e.to_string()))?;
        let mut pins = BTreeMap::new();
        for pin in flags.pins {
            if pins.insert(pin.level, pin.signed).is_some() {
                return Err(CliError::Input(format!("level {} pinned twice", pin.level)));
            }
        }
        Ok(RunConfig {
            format: flags.format.or(file.format).unwrap_or_default(),
            policy: flags.policy.or(file.policy).unwrap_or_default(),
            field,
            output: flags.output,
            pins,
        })
    }

    pub fn selection_policy(&self) -> SelectionPolicy {
        self.policy.into()
    }
}

fn parse_u64(s: &str, what: &str) -> Result<u64, String> {
    s.trim()
        .parse::<u64>()
        .map_err(|_| format!("{what} {:?} is not a nonnegative integer", s.trim()))
}

/// Comma separated integers; whitespace around entries is ignored.
pub fn parse_list(s: &str) -> Result<Vec<u64>, String> {
    if s.trim().is_empty() {
        return Err("empty list".to_string());
    }
    s.split(',').map(|part| parse_u64(part, "entry")).collect()
}

/// A curve given as `m1,...,mn`.
pub fn parse_curve(s: &str) -> Result<CurveSpec, CliError> {
    let exps = parse_list(s).map_err(CliError::Input)?;
    Ok(CurveSpec::new(&exps)?)
}

/// `--pin level:alpha,beta,gamma`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pin {
    pub level: usize,
    pub signed: SignedDecomposition,
}

pub fn parse_pin(s: &str) -> Result<Pin, String> {
    let (level, rest) = s
        .split_once(':')
        .ok_or_else(|| format!("pin {s:?} is not of the form level:alpha,beta,gamma"))?;
    let level = parse_u64(level, "level")? as usize;
    let v = parse_list(rest)?;
    let [alpha, beta, gamma] = v[..] else {
        return Err(format!("pin {s:?} needs exactly three values"));
    };
    Ok(Pin {
        level,
        signed: SignedDecomposition::new(level, alpha, beta, gamma),
    })
}

/// `a..b`, inclusive on both ends.
pub fn parse_range(s: &str) -> Result<(u64, u64), String> {
    let (a, b) = s
        .split_once("..")
        .ok_or_else(|| format!("range {s:?} is not of the form a..b"))?;
    let (a, b) = (parse_u64(a, "range start")?, parse_u64(b, "range end")?);
    if a > b {
        return Err(format!("empty range {a}..{b}"));
    }
    Ok((a, b))
}

/// Curves listed one per line; `#` starts a comment, blank lines are skipped.
/// Returns `(line number, text)` for each entry.
pub fn read_batch(path: &Path) -> Result<Vec<(usize, String)>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read batch file {}: {e}", path.display())))?;
    Ok(text
        .lines()
        .enumerate()
        .filter_map(|(i, line)| {
            let body = line.split('#').next().unwrap_or("").trim();
            (!body.is_empty()).then(|| (i + 1, body.to_string()))
        })
        .collect())
}
