//! Environmentally regulated L-system encodings for modular robots.
//!
//! A [`Genotype`] holds production rules for the five replaceable module
//! symbols, each guarded by a Boolean clause over the environment. Rules
//! are selected by [`regulation`], rewritten from the core axiom and
//! interpreted by a turtle into a morphology plus oscillator network
//! ([`development`]). Robots are scored in a flat then a tilted season by
//! a surrogate locomotion model ([`sim`]) and evolved with dominance-count
//! selection ([`evolution`]).

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod clause;
pub mod development;
pub mod evolution;
pub mod genotype;
pub mod phenotype;
pub mod regulation;
pub mod rng;
pub mod sim;
pub mod symbol;
pub mod text;
pub mod variation;

pub use clause::{EnvironmentState, Operator, RegulationClause, Term};
pub use development::{develop, Development, DevelopmentConfig};
pub use evolution::{EvolutionConfig, Evaluator, Evolution, Individual, SeasonalEvaluator};
pub use genotype::{Encoding, Genotype, RuleTuple};
pub use phenotype::{ControllerNetwork, Morphology, Phenotype};
pub use rng::RandomStream;
pub use sim::{evaluate_seasonal, EvaluationRecord, SimConfig};
pub use symbol::{ParamRanges, SymbolInstance, SymbolKind};
pub use variation::VariationConfig;
