//! Plain-text `key=value` experiment configuration.

use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use plasticoding_core::evolution::{EvolutionConfig, EvolutionConfigError};
use plasticoding_core::Encoding;

/// Keys under this prefix belong to run manifests and are skipped when a
/// manifest is read back as a configuration.
pub const MANIFEST_PREFIX: &str = "run.";

/// Every recognized key, in the order they are written.
pub const KEYS: &[&str] = &[
    "encoding",
    "seed",
    "repetitions",
    "population_size",
    "offspring_size",
    "generations",
    "mutation_probability",
    "crossover_probability",
    "rewriting_iterations",
    "max_symbol_groups",
    "weight_min",
    "weight_max",
    "oscillator_min",
    "oscillator_max",
    "max_modules",
    "clause_max_terms",
    "tuples_per_symbol",
    "dt",
    "season_duration",
    "tilt_angle",
    "thrust_gain",
    "backslip",
    "slope_drag",
    "rotation_gain",
    "sensor_contact_period",
];

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("line {line}: expected key=value, got {text:?}")]
    Malformed { line: usize, text: String },
    #[error("line {line}: unknown key {key:?}")]
    UnknownKey { line: usize, key: String },
    #[error("invalid value {value:?} for {key}: {reason}")]
    Value {
        key: String,
        value: String,
        reason: String,
    },
    #[error(transparent)]
    Invalid(#[from] EvolutionConfigError),
}

/// Parses `key=value` lines; blank lines and `#` comments are skipped.
pub fn parse_pairs(text: &str) -> Result<Vec<(usize, String, String)>, ConfigError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(ConfigError::Malformed {
                line: i + 1,
                text: raw.to_string(),
            });
        };
        out.push((i + 1, k.trim().to_string(), v.trim().to_string()));
    }
    Ok(out)
}

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T, ConfigError>
where
    T::Err: Display,
{
    value.parse().map_err(|e: T::Err| ConfigError::Value {
        key: key.to_string(),
        value: value.to_string(),
        reason: e.to_string(),
    })
}

/// Sets one key on `cfg`.
pub fn apply(cfg: &mut EvolutionConfig, key: &str, value: &str) -> Result<bool, ConfigError> {
    match key {
        "encoding" => cfg.encoding = parse::<Encoding>(key, value)?,
        "seed" => cfg.seed = parse(key, value)?,
        "repetitions" => cfg.repetitions = parse(key, value)?,
        "population_size" => cfg.mu = parse(key, value)?,
        "offspring_size" => cfg.lambda = parse(key, value)?,
        "generations" => cfg.generations = parse(key, value)?,
        "mutation_probability" => cfg.variation.mutation_probability = parse(key, value)?,
        "crossover_probability" => cfg.variation.crossover_probability = parse(key, value)?,
        "rewriting_iterations" => cfg.development.rewriting_iterations = parse(key, value)?,
        "max_symbol_groups" => cfg.variation.max_symbol_groups = parse(key, value)?,
        "weight_min" => {
            let v = parse(key, value)?;
            cfg.variation.ranges.weight.0 = v;
            cfg.development.ranges.weight.0 = v;
        }
        "weight_max" => {
            let v = parse(key, value)?;
            cfg.variation.ranges.weight.1 = v;
            cfg.development.ranges.weight.1 = v;
        }
        "oscillator_min" => {
            let v = parse(key, value)?;
            cfg.variation.ranges.oscillator.0 = v;
            cfg.development.ranges.oscillator.0 = v;
        }
        "oscillator_max" => {
            let v = parse(key, value)?;
            cfg.variation.ranges.oscillator.1 = v;
            cfg.development.ranges.oscillator.1 = v;
        }
        "max_modules" => cfg.development.max_modules = parse(key, value)?,
        "clause_max_terms" => cfg.variation.clause_max_terms = parse(key, value)?,
        "tuples_per_symbol" => cfg.variation.tuples_per_symbol = parse(key, value)?,
        "dt" => cfg.sim.dt = parse(key, value)?,
        "season_duration" => cfg.sim.season_duration = parse(key, value)?,
        "tilt_angle" => cfg.sim.tilt_angle = parse(key, value)?,
        "thrust_gain" => cfg.sim.thrust_gain = parse(key, value)?,
        "backslip" => cfg.sim.backslip = parse(key, value)?,
        "slope_drag" => cfg.sim.slope_drag = parse(key, value)?,
        "rotation_gain" => cfg.sim.rotation_gain = parse(key, value)?,
        "sensor_contact_period" => cfg.sim.sensor_contact_period = parse(key, value)?,
        _ => return Ok(false),
    }
    Ok(true)
}

/// Applies a configuration text on top of `cfg`.
pub fn apply_text(cfg: &mut EvolutionConfig, text: &str) -> Result<(), ConfigError> {
    for (line, key, value) in parse_pairs(text)? {
        if key.starts_with(MANIFEST_PREFIX) {
            continue;
        }
        if !apply(cfg, &key, &value)? {
            return Err(ConfigError::UnknownKey { line, key });
        }
    }
    Ok(())
}

/// Reads a configuration file on top of the defaults.
pub fn load(path: &Path) -> Result<EvolutionConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut cfg = EvolutionConfig::default();
    apply_text(&mut cfg, &text)?;
    Ok(cfg)
}

/// Every key with its current value, in [`KEYS`] order.
pub fn to_pairs(cfg: &EvolutionConfig) -> Vec<(&'static str, String)> {
    let v = &cfg.variation;
    let d = &cfg.development;
    let s = &cfg.sim;
    let values = [
        cfg.encoding.to_string(),
        cfg.seed.to_string(),
        cfg.repetitions.to_string(),
        cfg.mu.to_string(),
        cfg.lambda.to_string(),
        cfg.generations.to_string(),
        v.mutation_probability.to_string(),
        v.crossover_probability.to_string(),
        d.rewriting_iterations.to_string(),
        v.max_symbol_groups.to_string(),
        v.ranges.weight.0.to_string(),
        v.ranges.weight.1.to_string(),
        v.ranges.oscillator.0.to_string(),
        v.ranges.oscillator.1.to_string(),
        d.max_modules.to_string(),
        v.clause_max_terms.to_string(),
        v.tuples_per_symbol.to_string(),
        s.dt.to_string(),
        s.season_duration.to_string(),
        s.tilt_angle.to_string(),
        s.thrust_gain.to_string(),
        s.backslip.to_string(),
        s.slope_drag.to_string(),
        s.rotation_gain.to_string(),
        s.sensor_contact_period.to_string(),
    ];
    KEYS.iter().copied().zip(values).collect()
}

/// Renders `cfg` as a configuration file.
pub fn to_text(cfg: &EvolutionConfig) -> String {
    to_pairs(cfg).into_iter().map(|(k, v)| format!("{k}={v}\n")).collect()
}
