//! Key=value configuration files and the run record echoed into outputs.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::path::Path;
use std::str::FromStr;

use minkest::expansion::RadiusLaw;

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn parse(s: &str) -> Result<Self, CliError> {
        match s.trim() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(CliError::Config(format!("unknown format `{other}`"))),
        }
    }

    pub fn ext(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// Entries of a `key = value` file. Blank lines and `#` comments are skipped.
#[derive(Debug, Default)]
pub struct ConfigFile {
    entries: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut entries = BTreeMap::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("config line {}: expected key = value", n + 1)))?;
            let key = k.trim().to_string();
            if entries.insert(key.clone(), v.trim().to_string()).is_some() {
                return Err(CliError::Config(format!("config line {}: duplicate key `{key}`", n + 1)));
            }
        }
        Ok(ConfigFile { entries })
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>, CliError> {
        match self.entries.get(key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|_| CliError::Config(format!("config key `{key}`: cannot parse `{v}`"))),
        }
    }

    /// The flag when given, else the file entry.
    pub fn pick<T: FromStr>(&self, flag: Option<T>, key: &str) -> Result<Option<T>, CliError> {
        match flag {
            Some(v) => Ok(Some(v)),
            None => self.get(key),
        }
    }
}

pub fn parse_list<T: FromStr>(s: &str, what: &str) -> Result<Vec<T>, CliError> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse()
                .map_err(|_| CliError::Config(format!("{what}: cannot parse `{t}`")))
        })
        .collect()
}

pub fn parse_radius(s: &str) -> Result<RadiusLaw<f64>, CliError> {
    let bad = || CliError::Config(format!("radius `{s}`: expected const:R or uniform:MIN:MAX"));
    let num = |t: &str| t.trim().parse::<f64>().map_err(|_| bad());
    let parts: Vec<&str> = s.trim().split(':').collect();
    match parts.as_slice() {
        ["const", r] => Ok(RadiusLaw::Constant(num(r)?)),
        ["uniform", lo, hi] => Ok(RadiusLaw::Uniform {
            min: num(lo)?,
            max: num(hi)?,
        }),
        _ => Err(bad()),
    }
}

pub fn radius_text(law: &RadiusLaw<f64>) -> String {
    match *law {
        RadiusLaw::Constant(r) => format!("const:{r}"),
        RadiusLaw::Uniform { min, max } => format!("uniform:{min}:{max}"),
    }
}

/// Resolved settings of one invocation, written at the top of every output.
#[derive(Debug, Clone)]
pub struct RunConfig {
    command: &'static str,
    format: Format,
    settings: Vec<(String, String)>,
    notes: Vec<(String, String)>,
}

impl RunConfig {
    pub fn new(command: &'static str, format: Format) -> Self {
        RunConfig {
            command,
            format,
            settings: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn with(mut self, key: &str, value: impl Display) -> Self {
        self.settings.push((key.to_string(), value.to_string()));
        self
    }

    /// A derived result rather than an input, e.g. the fitted convergence order.
    pub fn note(mut self, key: &str, value: impl Display) -> Self {
        self.notes.push((key.to_string(), value.to_string()));
        self
    }

    pub fn format(&self) -> Format {
        self.format
    }

    pub fn command(&self) -> &str {
        self.command
    }

    pub fn settings(&self) -> &[(String, String)] {
        &self.settings
    }

    pub fn notes(&self) -> &[(String, String)] {
        &self.notes
    }
}
