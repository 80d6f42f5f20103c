//! Inspection of single genotypes and free-form L-systems.

use std::fmt::Write;

use plasticoding_core::clause::EnvironmentState;
use plasticoding_core::development::{develop, DevelopmentConfig, LSystem, LSystemError, LSYSTEM_HEADER};
use plasticoding_core::phenotype::{
    descriptor_recurrence, descriptor_sensors, descriptor_sensors_reach, descriptor_size, Phenotype,
};
use plasticoding_core::sim::{simulate_season, BehaviorTrace, SimConfig};
use plasticoding_core::text::{parse_genotype, symbol_string, TextError};
use plasticoding_core::Genotype;

#[derive(Debug, thiserror::Error)]
pub enum InputError {
    #[error(transparent)]
    Genotype(#[from] TextError),
    #[error(transparent)]
    LSystem(#[from] LSystemError),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Input {
    Genotype(Genotype),
    LSystem(LSystem),
}

/// Parses a `.geno` file or, if its first line says so, an L-system file.
pub fn parse_input(text: &str) -> Result<Input, InputError> {
    let first = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'));
    if first == Some(LSYSTEM_HEADER) {
        Ok(Input::LSystem(LSystem::parse(text)?))
    } else {
        Ok(Input::Genotype(parse_genotype(text)?))
    }
}

/// One line per iteration, `0..=iterations`.
pub fn lsystem_listing(ls: &LSystem, iterations: usize) -> String {
    ls.iterate(iterations)
        .iter()
        .enumerate()
        .map(|(i, s)| format!("iteration {i}: {}\n", s.join(" ")))
        .collect()
}

/// Developed phenotype plus its textual report.
pub struct Inspection {
    pub phenotype: Phenotype,
    pub report: String,
}

/// Develops `g` in `env` and reports the early string, the interpretation
/// trace and the static descriptors.
pub fn inspect(g: &Genotype, env: &EnvironmentState, cfg: &DevelopmentConfig) -> Inspection {
    let dev = develop(g, env, cfg).expect("parsed genotypes only reference registered states");
    let mut report = String::new();
    let _ = writeln!(report, "encoding: {}", g.encoding());
    let _ = writeln!(report, "early: {}", symbol_string(&dev.early.symbols));
    let _ = writeln!(report, "trace:");
    for entry in &dev.trace {
        let _ = writeln!(report, "  {entry}");
    }
    let p = &dev.phenotype;
    let _ = writeln!(report, "size: {}", descriptor_size(&p.morphology));
    let _ = writeln!(report, "sensors: {}", descriptor_sensors(&p.morphology));
    let _ = writeln!(report, "sensors_reach: {}", descriptor_sensors_reach(&p.controller));
    let _ = writeln!(report, "recurrence: {}", descriptor_recurrence(&p.controller));
    Inspection {
        phenotype: dev.phenotype,
        report,
    }
}

/// Per-step CSV of a simulated season: `step,x,roll,pitch`.
///
/// Step 0 is the start position, whose head rotation is zero.
pub fn trace_csv(trace: &BehaviorTrace) -> String {
    let mut out = String::from("step,x,roll,pitch\n");
    for (step, x) in trace.x_positions.iter().enumerate() {
        let (roll, pitch) = match step.checked_sub(1) {
            Some(i) => (trace.rolls[i], trace.pitches[i]),
            None => (0.0, 0.0),
        };
        let _ = writeln!(out, "{step},{x},{roll},{pitch}");
    }
    out
}

/// Simulates one season of `p` and renders it as CSV.
pub fn simulate_csv(p: &Phenotype, env: &EnvironmentState, sim: &SimConfig) -> String {
    trace_csv(&simulate_season(p, env, sim))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lsystem_header_selects_the_free_form_reader() {
        let text = "lsystem 1\naxiom X\nX -> X Y\nY -> Z a\nZ -> X Z\n";
        let Input::LSystem(ls) = parse_input(text).unwrap() else {
            panic!("expected an L-system");
        };
        let listing = lsystem_listing(&ls, 3);
        assert_eq!(listing.lines().last(), Some("iteration 3: X Y Z a X Z a"));
    }

    #[test]
    fn genotype_errors_surface() {
        assert!(matches!(parse_input("garbage"), Err(InputError::Genotype(_))));
    }
}
