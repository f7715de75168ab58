//! Table and figure reproductions behind the `riskgene-sim` binary.
//!
//! Every command reads a flat [`Settings`] map (`key = value` lines from a
//! config file, overridden by command-line flags) and returns an [`Output`]
//! holding CSV text. Output bytes depend only on the settings and seed:
//! numbers go through [`fmt_num`], rows are emitted in a fixed order after
//! any parallel work, and the thread count is never written.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};

pub mod drift;
pub mod figure1;
pub mod simulate;
pub mod svg;
pub mod table3;
pub mod table5;

pub const TOOL: &str = "riskgene-sim";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Environment variable capping worker threads (0 = one per core).
pub const THREADS_ENV: &str = "RISKGENE_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Table3,
    Table5,
    Figure1,
    Drift,
    Simulate,
}

impl Command {
    pub const ALL: [Command; 5] = [
        Command::Table3,
        Command::Table5,
        Command::Figure1,
        Command::Drift,
        Command::Simulate,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Command::Table3 => "table3",
            Command::Table5 => "table5",
            Command::Figure1 => "figure1",
            Command::Drift => "drift",
            Command::Simulate => "simulate",
        }
    }

    /// Keys the command understands, besides `out` and `threads`.
    pub fn keys(&self) -> &'static [&'static str] {
        match self {
            Command::Table3 => table3::KEYS,
            Command::Table5 => table5::KEYS,
            Command::Figure1 => figure1::KEYS,
            Command::Drift => drift::KEYS,
            Command::Simulate => simulate::KEYS,
        }
    }
}

impl FromStr for Command {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Usage(format!("unknown command '{s}'")))
    }
}

/// Result of one command.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Output {
    pub csv: String,
    pub svg: Option<String>,
    /// Cells that could not be computed; a non-empty list means failure.
    pub failures: Vec<String>,
}

impl Output {
    pub fn succeeded(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn run(command: Command, settings: &Settings) -> Result<Output> {
    settings.check_keys(command)?;
    let threads = settings.threads()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Usage(format!("cannot start worker threads: {e}")))?;
    pool.install(|| match command {
        Command::Table3 => table3::run(settings),
        Command::Table5 => table5::run(settings),
        Command::Figure1 => figure1::run(settings),
        Command::Drift => drift::run(settings),
        Command::Simulate => simulate::run(settings),
    })
}

/// Flat key-value configuration.
///
/// Config files hold one `key = value` per line; `#` starts a comment.
/// Keys use underscores (`with_estimates`), matching the long flag names
/// with dashes replaced.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings {
    entries: BTreeMap<String, String>,
}

impl Settings {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut settings = Self::new();
        for (number, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Parse(format!("config line {}: expected 'key = value'", number + 1))
            })?;
            let key = key.trim().replace('-', "_");
            if key.is_empty() {
                return Err(Error::Parse(format!("config line {}: empty key", number + 1)));
            }
            if settings.entries.insert(key.clone(), value.trim().to_string()).is_some() {
                return Err(Error::Parse(format!("config line {}: duplicate key '{key}'", number + 1)));
            }
        }
        Ok(settings)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Set a key, replacing any value from the file.
    pub fn set(&mut self, key: &str, value: impl Into<String>) -> &mut Self {
        self.entries.insert(key.replace('-', "_"), value.into());
        self
    }

    pub fn with(mut self, key: &str, value: impl Into<String>) -> Self {
        self.set(key, value);
        self
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>> {
        self.raw(key)
            .map(|v| {
                v.parse()
                    .map_err(|_| Error::Usage(format!("invalid value '{v}' for '{key}'")))
            })
            .transpose()
    }

    pub fn get_or<T: FromStr>(&self, key: &str, default: T) -> Result<T> {
        Ok(self.get(key)?.unwrap_or(default))
    }

    pub fn flag(&self, key: &str) -> Result<bool> {
        match self.raw(key) {
            None => Ok(false),
            Some("true" | "yes" | "1") => Ok(true),
            Some("false" | "no" | "0") => Ok(false),
            Some(v) => Err(Error::Usage(format!("invalid value '{v}' for '{key}' (want true/false)"))),
        }
    }

    /// Comma-separated list.
    pub fn list_or<T: FromStr + Clone>(&self, key: &str, default: &[T]) -> Result<Vec<T>> {
        match self.raw(key) {
            None => Ok(default.to_vec()),
            Some(v) => v
                .split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(|s| {
                    s.parse()
                        .map_err(|_| Error::Usage(format!("invalid entry '{s}' in '{key}'")))
                })
                .collect(),
        }
    }

    /// The master seed; stochastic commands refuse to run without one.
    pub fn seed(&self) -> Result<u64> {
        self.get("seed")?.ok_or_else(|| {
            Error::Usage("an explicit --seed is required for reproducible output".into())
        })
    }

    /// Worker count from `threads`, then `RISKGENE_THREADS`; 0 means auto.
    pub fn threads(&self) -> Result<usize> {
        if let Some(t) = self.get("threads")? {
            return Ok(t);
        }
        match std::env::var(THREADS_ENV) {
            Ok(v) => v
                .trim()
                .parse()
                .map_err(|_| Error::Usage(format!("invalid {THREADS_ENV}='{v}'"))),
            Err(_) => Ok(0),
        }
    }

    fn check_keys(&self, command: Command) -> Result<()> {
        let unknown: Vec<&str> = self
            .entries
            .keys()
            .map(String::as_str)
            .filter(|k| !matches!(*k, "out" | "threads") && !command.keys().contains(k))
            .collect();
        if unknown.is_empty() {
            Ok(())
        } else {
            Err(Error::Usage(format!(
                "unknown setting(s) for {}: {}",
                command.name(),
                unknown.join(", ")
            )))
        }
    }
}

/// Number in at most six significant digits, never in scientific notation.
/// Trailing zeros are dropped, so `1.5` prints as `1.5` and `2` as `2`.
pub fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.into();
    }
    if x == 0.0 {
        return "0".into();
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (5 - magnitude).max(0) as usize;
    let mut s = format!("{x:.decimals$}");
    if s.contains('.') {
        let trimmed = s.trim_end_matches('0').trim_end_matches('.').len();
        s.truncate(trimmed);
    }
    if s == "-0" {
        s = "0".into();
    }
    s
}

pub(crate) fn join<T: Display>(items: &[T]) -> String {
    items.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

pub(crate) fn join_num(items: &[f64]) -> String {
    items.iter().map(|&x| fmt_num(x)).collect::<Vec<_>>().join(",")
}

/// CSV writer that starts with a `#` comment block recording the tool
/// version, command and effective configuration.
#[derive(Debug)]
pub(crate) struct CsvReport {
    text: String,
}

impl CsvReport {
    pub fn new(command: Command, config: &[(&str, String)], columns: &[&str]) -> Self {
        let mut text = format!("# {TOOL} {VERSION}\n# command = {}\n", command.name());
        for (key, value) in config {
            text.push_str(&format!("# {key} = {value}\n"));
        }
        text.push_str(&columns.join(","));
        text.push('\n');
        Self { text }
    }

    pub fn comment(&mut self, line: &str) {
        self.text.push_str("# ");
        self.text.push_str(line);
        self.text.push('\n');
    }

    pub fn row<S: AsRef<str>>(&mut self, cells: &[S]) {
        let line: Vec<&str> = cells.iter().map(AsRef::as_ref).collect();
        self.text.push_str(&line.join(","));
        self.text.push('\n');
    }

    pub fn finish(self) -> String {
        self.text
    }
}

pub(crate) fn mean_sd(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

pub(crate) fn median(xs: &mut [f64]) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        (xs[n / 2 - 1] + xs[n / 2]) / 2.0
    }
}

/// Procedure selector for commands that can compare both simulators.
pub(crate) fn procedures(settings: &Settings, default: &str) -> Result<Vec<crate::population_sim::Procedure>> {
    use crate::population_sim::Procedure;
    let name = settings.raw("procedure").unwrap_or(default);
    match name {
        "both" => Ok(vec![Procedure::Janssens, Procedure::Revised]),
        "janssens" | "revised" => Ok(vec![name.parse()?]),
        other => Err(Error::Usage(format!(
            "procedure must be janssens, revised or both, got '{other}'"
        ))),
    }
}
