//! Line-oriented `key = value` run configuration.
//!
//! ```text
//! # J sweep of the Ising chain
//! axis  = J
//! start = 0
//! stop  = 2
//! step  = 0.05
//! gamma = 1
//! D     = 0
//! r     = 1
//! output = ising.csv
//! ```

use std::collections::HashMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use thiserror::Error;

use crate::model::ModelParams;
use crate::quadrature::QuadratureSpec;
use crate::sweep::{Axis, SweepSpec};

pub const DEFAULT_PRECISION: usize = 12;
pub const MAX_PRECISION: usize = 17;
pub const DEFAULT_ED_SITES: usize = 12;
pub const DEFAULT_FF_SITES: usize = 2000;
pub const ALL_FIGURES: [u8; 5] = [1, 2, 3, 4, 5];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { key: String, line: usize },
    #[error("missing required key `{key}`")]
    MissingKey { key: String },
    #[error("line {line}: bad value for `{key}`: {reason}")]
    BadValue { key: String, line: usize, reason: String },
    #[error("line {line}: expected `key = value`, got `{text}`")]
    Syntax { line: usize, text: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Sweep,
    Point,
    Verify,
    Figures,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Sweep => "sweep",
            Mode::Point => "point",
            Mode::Verify => "verify",
            Mode::Figures => "figures",
        }
    }

    fn from_name(s: &str) -> Option<Self> {
        [Mode::Sweep, Mode::Point, Mode::Verify, Mode::Figures]
            .into_iter()
            .find(|m| m.name() == s)
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifySettings {
    pub ed_sites: usize,
    pub ff_sites: usize,
}

impl Default for VerifySettings {
    fn default() -> Self {
        Self {
            ed_sites: DEFAULT_ED_SITES,
            ff_sites: DEFAULT_FF_SITES,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Task {
    Sweep(SweepSpec),
    Point { params: ModelParams, r: usize, quadrature: QuadratureSpec },
    Verify(VerifySettings),
    Figures { ids: Vec<u8>, quadrature: QuadratureSpec },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub task: Task,
    /// File (sweep, point, verify) or directory (figures); `None` means
    /// stdout, or `./figures` for figure output.
    pub output: Option<PathBuf>,
    pub precision: usize,
}

impl RunConfig {
    pub fn mode(&self) -> Mode {
        match self.task {
            Task::Sweep(_) => Mode::Sweep,
            Task::Point { .. } => Mode::Point,
            Task::Verify(_) => Mode::Verify,
            Task::Figures { .. } => Mode::Figures,
        }
    }

    /// Settings used when no config file is given.
    pub fn defaults(mode: Mode) -> Option<Self> {
        parse_config("", mode).ok()
    }
}

const COMMON_KEYS: &[&str] = &["mode", "output", "precision"];
const QUADRATURE_KEYS: &[&str] = &["rel_tol", "abs_tol", "max_subdivisions"];

fn allowed_keys(mode: Mode) -> Vec<&'static str> {
    let mut keys = COMMON_KEYS.to_vec();
    match mode {
        Mode::Sweep => keys.extend(["axis", "start", "stop", "step", "J", "gamma", "D", "r"]),
        Mode::Point => keys.extend(["J", "gamma", "D", "r"]),
        Mode::Verify => keys.extend(["ed_sites", "ff_sites"]),
        Mode::Figures => keys.push("figures"),
    }
    if mode != Mode::Verify {
        keys.extend(QUADRATURE_KEYS);
    }
    keys
}

struct Entries {
    values: HashMap<String, (String, usize)>,
}

impl Entries {
    fn raw(&self, key: &str) -> Option<(&str, usize)> {
        self.values.get(key).map(|(v, l)| (v.as_str(), *l))
    }

    fn optional<T: FromStr>(&self, key: &str) -> Result<Option<T>, ConfigError>
    where
        T::Err: fmt::Display,
    {
        match self.raw(key) {
            None => Ok(None),
            Some((v, line)) => v.parse::<T>().map(Some).map_err(|e| ConfigError::BadValue {
                key: key.to_string(),
                line,
                reason: e.to_string(),
            }),
        }
    }

    fn required<T: FromStr>(&self, key: &str) -> Result<T, ConfigError>
    where
        T::Err: fmt::Display,
    {
        self.optional(key)?.ok_or_else(|| ConfigError::MissingKey { key: key.to_string() })
    }

    fn bad(&self, key: &str, reason: impl Into<String>) -> ConfigError {
        ConfigError::BadValue {
            key: key.to_string(),
            line: self.raw(key).map_or(0, |(_, l)| l),
            reason: reason.into(),
        }
    }

    fn quadrature(&self) -> Result<QuadratureSpec, ConfigError> {
        let mut spec = QuadratureSpec::default();
        if let Some(v) = self.optional("rel_tol")? {
            spec.rel_tol = v;
        }
        if let Some(v) = self.optional("abs_tol")? {
            spec.abs_tol = v;
        }
        if let Some(v) = self.optional("max_subdivisions")? {
            spec.max_subdivisions = v;
        }
        spec.validate().map_err(|e| {
            let key = QUADRATURE_KEYS.iter().find(|k| self.raw(k).is_some()).unwrap_or(&"rel_tol");
            self.bad(key, e.to_string())
        })?;
        Ok(spec)
    }

    fn params(&self, j: f64, gamma: f64, d: f64) -> Result<ModelParams, ConfigError> {
        ModelParams::new(j, gamma, d).map_err(|e| {
            let key = match e {
                crate::Error::InvalidParameter { name, .. } => name,
                _ => "J",
            };
            self.bad(key, e.to_string())
        })
    }
}

fn tokenize(text: &str, mode: Mode) -> Result<Entries, ConfigError> {
    let allowed = allowed_keys(mode);
    let mut values = HashMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            return Err(ConfigError::Syntax { line, text: content.to_string() });
        };
        let (key, value) = (key.trim(), value.trim());
        if !allowed.contains(&key) {
            return Err(ConfigError::UnknownKey { key: key.to_string(), line });
        }
        if value.is_empty() {
            return Err(ConfigError::BadValue {
                key: key.to_string(),
                line,
                reason: "empty value".into(),
            });
        }
        if values.insert(key.to_string(), (value.to_string(), line)).is_some() {
            return Err(ConfigError::BadValue {
                key: key.to_string(),
                line,
                reason: "duplicate key".into(),
            });
        }
    }
    Ok(Entries { values })
}

/// Parses a config for the subcommand `mode`. An explicit `mode` key must
/// agree with the subcommand.
pub fn parse_config(text: &str, mode: Mode) -> Result<RunConfig, ConfigError> {
    let entries = tokenize(text, mode)?;
    if let Some((declared, _)) = entries.raw("mode") {
        match Mode::from_name(declared) {
            Some(m) if m == mode => {}
            _ => return Err(entries.bad("mode", format!("`{declared}` does not match subcommand `{mode}`"))),
        }
    }
    let precision = entries.optional::<usize>("precision")?.unwrap_or(DEFAULT_PRECISION);
    if precision > MAX_PRECISION {
        return Err(entries.bad("precision", format!("at most {MAX_PRECISION} digits")));
    }
    let output = entries.raw("output").map(|(v, _)| PathBuf::from(v));

    let task = match mode {
        Mode::Sweep => {
            let axis_name: String = entries.required("axis")?;
            let axis = Axis::from_name(&axis_name)
                .ok_or_else(|| entries.bad("axis", format!("`{axis_name}` is not one of J, gamma, D")))?;
            if entries.raw(axis.name()).is_some() {
                return Err(entries.bad(axis.name(), "coupling is the sweep axis"));
            }
            let fixed_value = |key: &str| -> Result<f64, ConfigError> {
                if key == axis.name() {
                    Ok(0.0)
                } else {
                    entries.required(key)
                }
            };
            let (j, gamma, d) = (fixed_value("J")?, fixed_value("gamma")?, fixed_value("D")?);
            let fixed = entries.params(j, gamma, d)?;
            let mut spec = SweepSpec::new(
                axis,
                entries.required("start")?,
                entries.required("stop")?,
                entries.required("step")?,
                fixed,
                entries.required("r")?,
            );
            spec.quadrature = entries.quadrature()?;
            spec.validate().map_err(|e| {
                let key = match e {
                    crate::Error::InvalidSeparation { .. } | crate::Error::SeparationTooLarge { .. } => "r",
                    _ if spec.step <= 0.0 || !spec.step.is_finite() => "step",
                    _ => "stop",
                };
                entries.bad(key, e.to_string())
            })?;
            Task::Sweep(spec)
        }
        Mode::Point => {
            let params = entries.params(entries.required("J")?, entries.required("gamma")?, entries.required("D")?)?;
            let r: usize = entries.required("r")?;
            if r == 0 || r > crate::chain::MAX_SEPARATION {
                return Err(entries.bad("r", format!("must lie in 1..={}", crate::chain::MAX_SEPARATION)));
            }
            Task::Point { params, r, quadrature: entries.quadrature()? }
        }
        Mode::Verify => {
            let mut settings = VerifySettings::default();
            if let Some(n) = entries.optional::<usize>("ed_sites")? {
                if !(4..=crate::oracle::MAX_DENSE_SITES).contains(&n) {
                    return Err(entries.bad("ed_sites", format!("must lie in 4..={}", crate::oracle::MAX_DENSE_SITES)));
                }
                settings.ed_sites = n;
            }
            if let Some(n) = entries.optional::<usize>("ff_sites")? {
                if !(4..=crate::oracle::MAX_FREE_FERMION_SITES).contains(&n) {
                    return Err(entries.bad("ff_sites", format!("must lie in 4..={}", crate::oracle::MAX_FREE_FERMION_SITES)));
                }
                settings.ff_sites = n;
            }
            Task::Verify(settings)
        }
        Mode::Figures => {
            let ids = match entries.raw("figures") {
                None => ALL_FIGURES.to_vec(),
                Some((list, _)) => {
                    let mut ids = Vec::new();
                    for item in list.split(',') {
                        let id: u8 = item
                            .trim()
                            .parse()
                            .ok()
                            .filter(|id| ALL_FIGURES.contains(id))
                            .ok_or_else(|| entries.bad("figures", format!("`{}` is not a figure id 1-5", item.trim())))?;
                        if !ids.contains(&id) {
                            ids.push(id);
                        }
                    }
                    ids.sort_unstable();
                    ids
                }
            };
            Task::Figures { ids, quadrature: entries.quadrature()? }
        }
    };
    Ok(RunConfig { task, output, precision })
}
