//! Genotypes: one grammar per robot, a group of regulated production rules
//! for each replaceable symbol.

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::clause::{ClauseError, RegulationClause};
use crate::symbol::{SymbolInstance, SymbolKind};

/// Which encoding a genotype belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Encoding {
    /// One always-active production rule per replaceable symbol.
    Baseline,
    /// Several production rules per symbol, each gated by a regulation clause.
    Plasticoding,
}

impl Encoding {
    pub fn as_str(self) -> &'static str {
        match self {
            Encoding::Baseline => "baseline",
            Encoding::Plasticoding => "plasticoding",
        }
    }
}

impl fmt::Display for Encoding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown encoding `{0}` (expected baseline or plasticoding)")]
pub struct UnknownEncoding(pub alloc::string::String);

impl FromStr for Encoding {
    type Err = UnknownEncoding;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "baseline" => Ok(Encoding::Baseline),
            "plasticoding" => Ok(Encoding::Plasticoding),
            other => Err(UnknownEncoding(other.into())),
        }
    }
}

/// A regulation clause paired with a production-rule body.
#[derive(Debug, Clone, PartialEq)]
pub struct RuleTuple {
    pub clause: RegulationClause,
    pub body: Vec<SymbolInstance>,
}

impl RuleTuple {
    pub fn new(clause: RegulationClause, body: Vec<SymbolInstance>) -> Self {
        Self { clause, body }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GenotypeError {
    #[error("rule {symbol} has no tuples")]
    EmptyGroup { symbol: SymbolKind },
    #[error("baseline rule {symbol} has {count} tuples, expected 1")]
    BaselineTupleCount { symbol: SymbolKind, count: usize },
    #[error("rule {symbol} has {count} tuples but rule C has {expected}")]
    UnevenTupleCount {
        symbol: SymbolKind,
        count: usize,
        expected: usize,
    },
    #[error("baseline rule {symbol} carries a regulation clause")]
    BaselineClause { symbol: SymbolKind },
    #[error("plasticoding rule {symbol} uses the reserved `always` clause")]
    ReservedClause { symbol: SymbolKind },
    #[error("rule {symbol} tuple {tuple}: {source}")]
    Clause {
        symbol: SymbolKind,
        tuple: usize,
        source: ClauseError,
    },
    #[error("rule C tuple {tuple} does not begin with C")]
    MissingCoreHead { tuple: usize },
    #[error("C appears in rule {symbol} tuple {tuple} at position {position}")]
    MisplacedCore {
        symbol: SymbolKind,
        tuple: usize,
        position: usize,
    },
    #[error("{kind} in rule {symbol} carries {found} parameters, expected {expected}")]
    ParamCount {
        symbol: SymbolKind,
        kind: SymbolKind,
        found: usize,
        expected: usize,
    },
}

/// A grammar over the shared alphabet.
///
/// `rules[i]` holds the tuples for `SymbolKind::REPLACEABLE[i]`, in order.
#[derive(Debug, Clone, PartialEq)]
pub struct Genotype {
    encoding: Encoding,
    rules: [Vec<RuleTuple>; 5],
}

impl Genotype {
    /// Builds and validates a genotype.
    pub fn new(encoding: Encoding, rules: [Vec<RuleTuple>; 5]) -> Result<Self, GenotypeError> {
        let g = Self { encoding, rules };
        g.validate()?;
        Ok(g)
    }

    pub(crate) fn new_unchecked(encoding: Encoding, rules: [Vec<RuleTuple>; 5]) -> Self {
        Self { encoding, rules }
    }

    pub fn encoding(&self) -> Encoding {
        self.encoding
    }

    /// Tuples of the rule group for a replaceable symbol.
    ///
    /// # Panics
    /// If `symbol` is not replaceable.
    pub fn rule(&self, symbol: SymbolKind) -> &[RuleTuple] {
        let i = symbol
            .replaceable_index()
            .unwrap_or_else(|| panic!("{symbol} is not replaceable"));
        &self.rules[i]
    }

    pub fn rules(&self) -> &[Vec<RuleTuple>; 5] {
        &self.rules
    }

    pub(crate) fn rules_mut(&mut self) -> &mut [Vec<RuleTuple>; 5] {
        &mut self.rules
    }

    /// Number of tuples in every rule group.
    pub fn tuples_per_symbol(&self) -> usize {
        self.rules[0].len()
    }

    /// Total number of tuples across the grammar.
    pub fn tuple_count(&self) -> usize {
        self.rules.iter().map(Vec::len).sum()
    }

    /// Drops all clauses and keeps the first tuple of every rule group.
    pub fn to_baseline(&self) -> Genotype {
        let rules = self.rules.clone().map(|group| {
            let body = group.into_iter().next().map(|t| t.body).unwrap_or_default();
            alloc::vec![RuleTuple::new(RegulationClause::Always, body)]
        });
        Genotype::new_unchecked(Encoding::Baseline, rules)
    }

    /// Checks every structural invariant of the grammar.
    pub fn validate(&self) -> Result<(), GenotypeError> {
        let expected = self.rules[0].len();
        for (i, group) in self.rules.iter().enumerate() {
            let symbol = SymbolKind::REPLACEABLE[i];
            if group.is_empty() {
                return Err(GenotypeError::EmptyGroup { symbol });
            }
            match self.encoding {
                Encoding::Baseline if group.len() != 1 => {
                    return Err(GenotypeError::BaselineTupleCount {
                        symbol,
                        count: group.len(),
                    })
                }
                Encoding::Plasticoding if group.len() != expected => {
                    return Err(GenotypeError::UnevenTupleCount {
                        symbol,
                        count: group.len(),
                        expected,
                    })
                }
                _ => {}
            }
            for (t, tuple) in group.iter().enumerate() {
                match (self.encoding, &tuple.clause) {
                    (Encoding::Baseline, RegulationClause::Always) => {}
                    (Encoding::Baseline, _) => return Err(GenotypeError::BaselineClause { symbol }),
                    (Encoding::Plasticoding, RegulationClause::Always) => {
                        return Err(GenotypeError::ReservedClause { symbol })
                    }
                    (Encoding::Plasticoding, c) => {
                        c.validate().map_err(|source| GenotypeError::Clause {
                            symbol,
                            tuple: t,
                            source,
                        })?
                    }
                }
                if symbol == SymbolKind::Core
                    && tuple.body.first().map(|s| s.kind) != Some(SymbolKind::Core)
                {
                    return Err(GenotypeError::MissingCoreHead { tuple: t });
                }
                for (p, s) in tuple.body.iter().enumerate() {
                    let head = symbol == SymbolKind::Core && p == 0;
                    if s.kind == SymbolKind::Core && !head {
                        return Err(GenotypeError::MisplacedCore {
                            symbol,
                            tuple: t,
                            position: p,
                        });
                    }
                    if s.params.len() != s.kind.param_count() {
                        return Err(GenotypeError::ParamCount {
                            symbol,
                            kind: s.kind,
                            found: s.params.len(),
                            expected: s.kind.param_count(),
                        });
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clause::INCLINED;
    use alloc::vec;

    fn core_body() -> Vec<SymbolInstance> {
        vec![SymbolInstance::bare(SymbolKind::Core)]
    }

    fn baseline_rules() -> [Vec<RuleTuple>; 5] {
        [
            vec![RuleTuple::new(RegulationClause::Always, core_body())],
            vec![RuleTuple::new(RegulationClause::Always, vec![])],
            vec![RuleTuple::new(RegulationClause::Always, vec![])],
            vec![RuleTuple::new(RegulationClause::Always, vec![])],
            vec![RuleTuple::new(RegulationClause::Always, vec![])],
        ]
    }

    #[test]
    fn minimal_baseline_is_valid() {
        let g = Genotype::new(Encoding::Baseline, baseline_rules()).unwrap();
        assert_eq!(g.tuples_per_symbol(), 1);
    }

    #[test]
    fn core_outside_rule_c_head_is_rejected() {
        let mut rules = baseline_rules();
        rules[1][0].body.push(SymbolInstance::bare(SymbolKind::Core));
        assert!(matches!(
            Genotype::new(Encoding::Baseline, rules),
            Err(GenotypeError::MisplacedCore { symbol: SymbolKind::Brick, .. })
        ));
        let mut rules = baseline_rules();
        rules[0][0].body.push(SymbolInstance::bare(SymbolKind::Core));
        assert!(matches!(
            Genotype::new(Encoding::Baseline, rules),
            Err(GenotypeError::MisplacedCore { position: 1, .. })
        ));
    }

    #[test]
    fn rule_c_needs_its_head() {
        let mut rules = baseline_rules();
        rules[0][0].body.clear();
        assert_eq!(
            Genotype::new(Encoding::Baseline, rules),
            Err(GenotypeError::MissingCoreHead { tuple: 0 })
        );
    }

    #[test]
    fn clause_vocabulary_matches_encoding() {
        let mut rules = baseline_rules();
        rules[2][0].clause = RegulationClause::single(INCLINED, true);
        assert!(Genotype::new(Encoding::Baseline, rules).is_err());
        assert!(matches!(
            Genotype::new(Encoding::Plasticoding, baseline_rules()),
            Err(GenotypeError::ReservedClause { .. })
        ));
    }

    #[test]
    fn to_baseline_keeps_first_tuple() {
        let rules = baseline_rules().map(|g| {
            let body = g[0].body.clone();
            vec![
                RuleTuple::new(RegulationClause::single(INCLINED, false), body.clone()),
                RuleTuple::new(RegulationClause::single(INCLINED, true), body),
            ]
        });
        let g = Genotype::new(Encoding::Plasticoding, rules).unwrap();
        let b = g.to_baseline();
        b.validate().unwrap();
        assert_eq!(b.encoding(), Encoding::Baseline);
        assert_eq!(b.tuple_count(), 5);
    }
}
