//! Genotype-to-phenotype mapping: regulation, parallel rewriting of the
//! axiom, then turtle interpretation of the resulting string.

mod rewrite;
mod turtle;

pub use rewrite::{early_develop, rewrite, rewrite_step, EarlyPhenotype, LSystem, LSystemError, LSYSTEM_HEADER};
pub use turtle::{late_develop, LateDevelopment, Outcome, TraceEntry, TurtleState, Unexpressed};

use alloc::vec::Vec;

use crate::clause::{ClauseError, EnvironmentState};
use crate::genotype::Genotype;
use crate::phenotype::Phenotype;
use crate::regulation::regulate;
use crate::symbol::{ParamRangeError, ParamRanges};

#[derive(Debug, Clone, PartialEq)]
pub struct DevelopmentConfig {
    /// Rewriting iterations `k`.
    pub rewriting_iterations: usize,
    /// Module cap `m`, core included.
    pub max_modules: usize,
    /// Clamping ranges for weights and oscillator parameters.
    pub ranges: ParamRanges,
}

impl Default for DevelopmentConfig {
    fn default() -> Self {
        Self {
            rewriting_iterations: 3,
            max_modules: 15,
            ranges: ParamRanges::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DevelopmentConfigError {
    #[error("max_modules must be at least 1")]
    MaxModules,
    #[error(transparent)]
    Range(#[from] ParamRangeError),
}

impl DevelopmentConfig {
    pub fn validate(&self) -> Result<(), DevelopmentConfigError> {
        if self.max_modules == 0 {
            return Err(DevelopmentConfigError::MaxModules);
        }
        self.ranges.validate()?;
        Ok(())
    }
}

/// Everything produced while developing one genotype in one environment.
#[derive(Debug, Clone, PartialEq)]
pub struct Development {
    pub early: EarlyPhenotype,
    pub phenotype: Phenotype,
    pub trace: Vec<TraceEntry>,
}

/// Regulates, rewrites and interprets `g` under `env`.
pub fn develop(g: &Genotype, env: &EnvironmentState, cfg: &DevelopmentConfig) -> Result<Development, ClauseError> {
    let rules = regulate(g, env)?;
    let early = early_develop(&rules, cfg.rewriting_iterations);
    let late = late_develop(&early.symbols, cfg);
    Ok(Development {
        early,
        phenotype: late.phenotype,
        trace: late.trace,
    })
}
