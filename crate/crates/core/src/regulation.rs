//! Environmental regulation: choosing which production rules are active.

use alloc::vec::Vec;

use crate::clause::{ClauseError, EnvironmentState, RegulationClause};
use crate::genotype::{Encoding, Genotype};
use crate::symbol::{SymbolInstance, SymbolKind};

/// Evaluates one clause against the environment.
pub fn eval_clause(c: &RegulationClause, env: &EnvironmentState) -> Result<bool, ClauseError> {
    c.eval(env)
}

/// The production rules selected for one environment.
///
/// Each replaceable symbol maps to the concatenation of all activated
/// bodies. A symbol none of whose clauses fired is *inactive*: it maps to
/// the empty sequence but is left in place by rewriting, unlike an active
/// symbol whose body happens to be empty.
#[derive(Debug, Clone, PartialEq)]
pub struct ActiveRules {
    bodies: [Vec<SymbolInstance>; 5],
    active: [bool; 5],
}

impl ActiveRules {
    /// Active rules built directly from bodies, all marked active.
    pub fn from_bodies(bodies: [Vec<SymbolInstance>; 5]) -> Self {
        Self {
            bodies,
            active: [true; 5],
        }
    }

    /// Marks `symbol` as inactive, clearing its body.
    pub fn with_inactive(mut self, symbol: SymbolKind) -> Self {
        if let Some(i) = symbol.replaceable_index() {
            self.active[i] = false;
            self.bodies[i].clear();
        }
        self
    }

    pub fn body(&self, symbol: SymbolKind) -> &[SymbolInstance] {
        symbol
            .replaceable_index()
            .map(|i| self.bodies[i].as_slice())
            .unwrap_or(&[])
    }

    /// Whether at least one clause of `symbol` fired.
    pub fn is_active(&self, symbol: SymbolKind) -> bool {
        symbol.replaceable_index().is_some_and(|i| self.active[i])
    }

    /// Replacement for `symbol`, or `None` if it stays as is.
    pub fn replacement(&self, symbol: SymbolKind) -> Option<&[SymbolInstance]> {
        let i = symbol.replaceable_index()?;
        self.active[i].then(|| self.bodies[i].as_slice())
    }
}

/// Selects and concatenates the active bodies of every rule group.
///
/// The non-regulated encoding skips evaluation entirely. When several
/// tuples of rule C fire, only the first keeps its leading core symbol, so
/// the concatenated rule still holds exactly one C.
pub fn regulate(g: &Genotype, env: &EnvironmentState) -> Result<ActiveRules, ClauseError> {
    let mut bodies: [Vec<SymbolInstance>; 5] = Default::default();
    let mut active = [false; 5];
    for (i, group) in g.rules().iter().enumerate() {
        for tuple in group {
            let fires = match g.encoding() {
                Encoding::Baseline => true,
                Encoding::Plasticoding => tuple.clause.eval(env)?,
            };
            if !fires {
                continue;
            }
            let skip = usize::from(i == 0 && active[i]);
            bodies[i].extend(tuple.body.iter().skip(skip).cloned());
            active[i] = true;
        }
    }
    Ok(ActiveRules { bodies, active })
}
