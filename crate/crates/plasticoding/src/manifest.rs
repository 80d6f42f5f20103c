//! Run manifests: the configuration snapshot plus run bookkeeping.

use std::path::{Path, PathBuf};

use plasticoding_core::evolution::EvolutionConfig;

use crate::config::{self, ConfigError, MANIFEST_PREFIX};

pub const FILE_NAME: &str = "manifest.txt";

#[derive(Debug, Clone, PartialEq)]
pub struct RepetitionEntry {
    pub index: usize,
    pub seed: u64,
    /// Directory relative to the run directory.
    pub path: PathBuf,
    pub seconds: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunManifest {
    pub config: EvolutionConfig,
    pub tool_version: String,
    pub repetitions: Vec<RepetitionEntry>,
}

impl RunManifest {
    pub fn new(config: EvolutionConfig) -> Self {
        Self {
            config,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            repetitions: Vec::new(),
        }
    }

    pub fn seeds(&self) -> Vec<u64> {
        self.repetitions.iter().map(|r| r.seed).collect()
    }

    /// `key=value` text; configuration keys first, then `run.*` entries.
    pub fn to_text(&self) -> String {
        let mut out = config::to_text(&self.config);
        out.push_str(&format!("{MANIFEST_PREFIX}tool_version={}\n", self.tool_version));
        let seeds: Vec<String> = self.seeds().iter().map(u64::to_string).collect();
        out.push_str(&format!("{MANIFEST_PREFIX}seeds={}\n", seeds.join(",")));
        for r in &self.repetitions {
            let key = format!("{MANIFEST_PREFIX}rep_{:03}", r.index);
            out.push_str(&format!("{key}.seed={}\n", r.seed));
            out.push_str(&format!("{key}.path={}\n", r.path.display()));
            out.push_str(&format!("{key}.seconds={:.3}\n", r.seconds));
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = EvolutionConfig::default();
        config::apply_text(&mut cfg, text)?;
        let mut manifest = Self::new(cfg);
        let value_err = |key: &str, value: &str, reason: &str| ConfigError::Value {
            key: key.to_string(),
            value: value.to_string(),
            reason: reason.to_string(),
        };
        for (_, key, value) in config::parse_pairs(text)? {
            let Some(rest) = key.strip_prefix(MANIFEST_PREFIX) else {
                continue;
            };
            if rest == "tool_version" {
                manifest.tool_version = value;
                continue;
            }
            let Some((rep, field)) = rest.strip_prefix("rep_").and_then(|r| r.split_once('.')) else {
                continue;
            };
            let index: usize = rep.parse().map_err(|_| value_err(&key, &value, "bad repetition index"))?;
            while manifest.repetitions.len() <= index {
                let i = manifest.repetitions.len();
                manifest.repetitions.push(RepetitionEntry {
                    index: i,
                    seed: 0,
                    path: PathBuf::new(),
                    seconds: 0.0,
                });
            }
            let entry = &mut manifest.repetitions[index];
            match field {
                "seed" => entry.seed = value.parse().map_err(|_| value_err(&key, &value, "not a seed"))?,
                "path" => entry.path = PathBuf::from(&value),
                "seconds" => entry.seconds = value.parse().map_err(|_| value_err(&key, &value, "not a number"))?,
                _ => {}
            }
        }
        Ok(manifest)
    }

    pub fn write(&self, dir: &Path) -> std::io::Result<()> {
        std::fs::write(dir.join(FILE_NAME), self.to_text())
    }

    pub fn read(dir: &Path) -> Result<Self, ConfigError> {
        let path = dir.join(FILE_NAME);
        let text = std::fs::read_to_string(&path).map_err(|source| ConfigError::Io { path, source })?;
        Self::parse(&text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use plasticoding_core::Encoding;

    #[test]
    fn manifest_round_trip() {
        let mut m = RunManifest::new(EvolutionConfig {
            encoding: Encoding::Baseline,
            seed: 7,
            repetitions: 2,
            ..Default::default()
        });
        for i in 0..2 {
            m.repetitions.push(RepetitionEntry {
                index: i,
                seed: 7 + i as u64,
                path: PathBuf::from(format!("rep_{i:03}")),
                seconds: 1.5,
            });
        }
        let text = m.to_text();
        assert!(text.contains("run.seeds=7,8\n"));
        assert_eq!(RunManifest::parse(&text).unwrap(), m);
        // a manifest doubles as a configuration file
        let mut cfg = EvolutionConfig::default();
        config::apply_text(&mut cfg, &text).unwrap();
        assert_eq!(cfg, m.config);
    }
}
