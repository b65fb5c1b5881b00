//! Run and fuzz configuration: `key = value` files, flag overlay, defaults,
//! and validation. Every key is named exactly like its flag (minus the `--`).

use std::fmt;
use std::path::{Path, PathBuf};

use atanfd::models::ModelKind;
use atanfd::trialgen::Preset;

/// One-line config error; printed verbatim and mapped to exit code 1.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

fn err<T>(msg: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError(msg.into()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone)]
pub enum InitialData {
    Preset(Preset),
    File(PathBuf),
}

/// Fully resolved simulate configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub model: ModelKind,
    pub n: usize,
    pub cfl: f64,
    pub t_end: f64,
    pub record_every: f64,
    pub initial: InitialData,
    pub epsilon: f64,
    pub kappa: f64,
    pub delta: f64,
    pub hilbert_sign: f64,
    pub max_steps: u64,
    pub positivity_floor: f64,
    pub output: PathBuf,
    pub format: OutputFormat,
}

/// Unresolved simulate keys; `None` falls through to the file value, then to
/// the default.
#[derive(Debug, Clone, Default)]
pub struct RawRun {
    pub model: Option<String>,
    pub n: Option<usize>,
    pub cfl: Option<f64>,
    pub t_end: Option<f64>,
    pub record_every: Option<f64>,
    pub preset: Option<String>,
    pub initial_data: Option<PathBuf>,
    pub epsilon: Option<f64>,
    pub kappa: Option<f64>,
    pub delta: Option<f64>,
    pub hilbert_sign: Option<f64>,
    pub max_steps: Option<u64>,
    pub positivity_floor: Option<f64>,
    pub output: Option<PathBuf>,
    pub format: Option<String>,
}

/// Fully resolved fuzz configuration.
#[derive(Debug, Clone)]
pub struct FuzzConfig {
    pub trials: u64,
    pub seed0: u64,
    pub n: usize,
    pub max_mode: usize,
    pub min_floor: f64,
    pub amplitude_decay: f64,
    pub tolerance: f64,
    pub report: PathBuf,
}

#[derive(Debug, Clone, Default)]
pub struct RawFuzz {
    pub trials: Option<u64>,
    pub seed0: Option<u64>,
    pub n: Option<usize>,
    pub max_mode: Option<usize>,
    pub min_floor: Option<f64>,
    pub amplitude_decay: Option<f64>,
    pub tolerance: Option<f64>,
    pub report: Option<PathBuf>,
}

fn parse_kv_lines(path: &Path) -> Result<Vec<(String, String)>, ConfigError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ConfigError(format!("config: cannot read {}: {e}", path.display())))?;
    let mut pairs = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = match raw.find('#') {
            Some(i) => &raw[..i],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return err(format!(
                "config: line {} is not `key = value`: {raw:?}",
                lineno + 1
            ));
        };
        pairs.push((key.trim().to_string(), value.trim().to_string()));
    }
    Ok(pairs)
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, ConfigError> {
    value
        .parse()
        .map_err(|_| ConfigError(format!("{key}: cannot parse {value:?}")))
}

impl RawRun {
    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        let mut raw = RawRun::default();
        for (key, value) in parse_kv_lines(path)? {
            match key.as_str() {
                "model" => raw.model = Some(value),
                "n" => raw.n = Some(parse_num(&key, &value)?),
                "cfl" => raw.cfl = Some(parse_num(&key, &value)?),
                "t_end" => raw.t_end = Some(parse_num(&key, &value)?),
                "record_every" => raw.record_every = Some(parse_num(&key, &value)?),
                "preset" => raw.preset = Some(value),
                "initial_data" => raw.initial_data = Some(PathBuf::from(value)),
                "epsilon" => raw.epsilon = Some(parse_num(&key, &value)?),
                "kappa" => raw.kappa = Some(parse_num(&key, &value)?),
                "delta" => raw.delta = Some(parse_num(&key, &value)?),
                "hilbert_sign" => raw.hilbert_sign = Some(parse_num(&key, &value)?),
                "max_steps" => raw.max_steps = Some(parse_num(&key, &value)?),
                "positivity_floor" => raw.positivity_floor = Some(parse_num(&key, &value)?),
                "output" => raw.output = Some(PathBuf::from(value)),
                "format" => raw.format = Some(value),
                other => return err(format!("config: unknown key {other:?}")),
            }
        }
        Ok(raw)
    }

    /// Overlay `flags` on top of `self`: flags win wherever both are set.
    pub fn overlay(mut self, flags: RawRun) -> Self {
        macro_rules! take {
            ($($field:ident),*) => {
                $(if flags.$field.is_some() { self.$field = flags.$field; })*
            };
        }
        take!(
            model, n, cfl, t_end, record_every, preset, initial_data, epsilon, kappa, delta,
            hilbert_sign, max_steps, positivity_floor, output, format
        );
        self
    }

    pub fn resolve(self) -> Result<RunConfig, ConfigError> {
        let model = match self.model.as_deref().unwrap_or("arctan") {
            "arctan" => ModelKind::ArctanLocal,
            "log" => ModelKind::LogDiffusion,
            "nonlocal" => ModelKind::ArctanNonlocal,
            "regularized" => ModelKind::Regularized,
            other => {
                return err(format!(
                    "model: unknown model {other:?} (expected arctan|log|nonlocal|regularized)"
                ))
            }
        };
        let initial = match (self.preset, self.initial_data) {
            (Some(_), Some(_)) => {
                return err("preset: give either preset or initial_data, not both")
            }
            (None, Some(path)) => InitialData::File(path),
            (name, None) => {
                InitialData::Preset(parse_preset(name.as_deref().unwrap_or("constant"))?)
            }
        };
        let format = match self.format.as_deref().unwrap_or("csv") {
            "csv" => OutputFormat::Csv,
            "json" => OutputFormat::Json,
            other => return err(format!("format: expected csv or json, got {other:?}")),
        };
        let delta = self.delta.unwrap_or(0.0);
        if !(delta >= 0.0 && delta.is_finite()) {
            return err(format!("delta: must be finite and >= 0, got {delta}"));
        }
        let config = RunConfig {
            model,
            n: self.n.unwrap_or(256),
            cfl: self.cfl.unwrap_or(0.25),
            t_end: self.t_end.unwrap_or(1.0),
            record_every: self.record_every.unwrap_or(0.01),
            initial,
            epsilon: self.epsilon.unwrap_or(0.0),
            kappa: self.kappa.unwrap_or(0.0),
            delta,
            hilbert_sign: self.hilbert_sign.unwrap_or(1.0),
            max_steps: self.max_steps.unwrap_or(10_000_000),
            positivity_floor: self.positivity_floor.unwrap_or(1e-8),
            output: self.output.unwrap_or_else(|| PathBuf::from("diagnostics.csv")),
            format,
        };
        if config.model != ModelKind::Regularized && config.delta != 0.0 {
            return err(format!(
                "delta: only the regularized model lifts initial data, got {delta} for {}",
                config.model.name()
            ));
        }
        Ok(config)
    }
}

impl RawFuzz {
    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        let mut raw = RawFuzz::default();
        for (key, value) in parse_kv_lines(path)? {
            match key.as_str() {
                "trials" => raw.trials = Some(parse_num(&key, &value)?),
                "seed0" => raw.seed0 = Some(parse_num(&key, &value)?),
                "n" => raw.n = Some(parse_num(&key, &value)?),
                "max_mode" => raw.max_mode = Some(parse_num(&key, &value)?),
                "min_floor" => raw.min_floor = Some(parse_num(&key, &value)?),
                "amplitude_decay" => raw.amplitude_decay = Some(parse_num(&key, &value)?),
                "tolerance" => raw.tolerance = Some(parse_num(&key, &value)?),
                "report" => raw.report = Some(PathBuf::from(value)),
                other => return err(format!("config: unknown key {other:?}")),
            }
        }
        Ok(raw)
    }

    pub fn overlay(mut self, flags: RawFuzz) -> Self {
        macro_rules! take {
            ($($field:ident),*) => {
                $(if flags.$field.is_some() { self.$field = flags.$field; })*
            };
        }
        take!(trials, seed0, n, max_mode, min_floor, amplitude_decay, tolerance, report);
        self
    }

    pub fn resolve(self) -> Result<FuzzConfig, ConfigError> {
        let trials = self.trials.unwrap_or(1000);
        if trials == 0 {
            return err("trials: must be >= 1");
        }
        Ok(FuzzConfig {
            trials,
            seed0: self.seed0.unwrap_or(1),
            n: self.n.unwrap_or(512),
            max_mode: self.max_mode.unwrap_or(32),
            min_floor: self.min_floor.unwrap_or(0.2),
            amplitude_decay: self.amplitude_decay.unwrap_or(1.5),
            tolerance: self.tolerance.unwrap_or(1e-10),
            report: self.report.unwrap_or_else(|| PathBuf::from("fuzz_report.csv")),
        })
    }
}

/// Parse `name` or `name(args)` into a [`Preset`].
pub fn parse_preset(text: &str) -> Result<Preset, ConfigError> {
    let text = text.trim();
    let (name, args) = match text.split_once('(') {
        None => (text, vec![]),
        Some((name, rest)) => {
            let Some(inner) = rest.strip_suffix(')') else {
                return err(format!("preset: missing closing parenthesis in {text:?}"));
            };
            let args = inner
                .split(',')
                .map(|a| {
                    a.trim()
                        .parse::<f64>()
                        .map_err(|_| ConfigError(format!("preset: bad parameter {a:?} in {text:?}")))
                })
                .collect::<Result<Vec<f64>, _>>()?;
            (name.trim(), args)
        }
    };
    let arity = |want: usize| -> Result<(), ConfigError> {
        if args.len() == want {
            Ok(())
        } else {
            err(format!(
                "preset: {name} takes {want} parameter(s), got {}",
                args.len()
            ))
        }
    };
    match name {
        "constant" => {
            arity(0)?;
            Ok(Preset::Constant)
        }
        "cosine_bump" => {
            arity(1)?;
            Ok(Preset::CosineBump(args[0]))
        }
        "exp_sin" => {
            arity(1)?;
            Ok(Preset::ExpSin(args[0]))
        }
        "two_mode" => {
            arity(2)?;
            Ok(Preset::TwoMode(args[0], args[1]))
        }
        "wiener_small" => {
            arity(1)?;
            Ok(Preset::WienerSmall(args[0]))
        }
        other => err(format!("preset: unknown preset {other:?}")),
    }
}

/// Load an initial-data file: one sample per line, `#` comments and blank
/// lines ignored; must supply exactly `n` finite values.
pub fn load_initial_data(path: &Path, n: usize) -> Result<Vec<f64>, ConfigError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ConfigError(format!("initial_data: cannot read {}: {e}", path.display())))?;
    let mut values = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = match raw.find('#') {
            Some(i) => &raw[..i],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let v: f64 = line.parse().map_err(|_| {
            ConfigError(format!(
                "initial_data: line {} is not a number: {raw:?}",
                lineno + 1
            ))
        })?;
        values.push(v);
    }
    if values.len() != n {
        return err(format!(
            "initial_data: expected n = {n} samples, got {}",
            values.len()
        ));
    }
    Ok(values)
}
