//! Parallel rewriting (early development).

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::regulation::ActiveRules;
use crate::symbol::{SymbolInstance, SymbolKind};

/// One step of parallel rewriting: every symbol with a replacement is
/// swapped for it simultaneously, everything else is copied through.
pub fn rewrite_step<'r, T: Clone + 'r>(
    current: &[T],
    mut replacement: impl FnMut(&T) -> Option<&'r [T]>,
) -> Vec<T> {
    let mut next = Vec::with_capacity(current.len());
    for s in current {
        match replacement(s) {
            Some(body) => next.extend_from_slice(body),
            None => next.push(s.clone()),
        }
    }
    next
}

/// `iterations` steps of parallel rewriting from `axiom`.
pub fn rewrite<'r, T: Clone + 'r>(
    axiom: &[T],
    iterations: usize,
    mut replacement: impl FnMut(&T) -> Option<&'r [T]>,
) -> Vec<T> {
    let mut s = axiom.to_vec();
    for _ in 0..iterations {
        s = rewrite_step(&s, &mut replacement);
    }
    s
}

/// The rewritten string of one robot; starts with its single core symbol.
#[derive(Debug, Clone, PartialEq)]
pub struct EarlyPhenotype {
    pub symbols: Vec<SymbolInstance>,
}

impl EarlyPhenotype {
    pub fn core_count(&self) -> usize {
        self.symbols
            .iter()
            .filter(|s| s.kind == SymbolKind::Core)
            .count()
    }
}

/// Rewrites the axiom `C` with the active rules for `iterations` steps.
///
/// Inactive symbols (no clause fired) are kept; active symbols with an
/// empty body are removed.
pub fn early_develop(rules: &ActiveRules, iterations: usize) -> EarlyPhenotype {
    let axiom = [SymbolInstance::bare(SymbolKind::Core)];
    let symbols = rewrite(&axiom, iterations, |s| rules.replacement(s.kind));
    EarlyPhenotype { symbols }
}

/// A free-form L-system over named symbols, used for didactic grammars
/// outside the robot alphabet.
///
/// Text format:
///
/// ```text
/// lsystem 1
/// axiom X
/// X -> X Y
/// Y -> Z a
/// ```
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LSystem {
    pub axiom: Vec<String>,
    pub rules: BTreeMap<String, Vec<String>>,
}

pub const LSYSTEM_HEADER: &str = "lsystem 1";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {reason}")]
pub struct LSystemError {
    pub line: usize,
    pub reason: &'static str,
}

impl LSystem {
    pub fn parse(text: &str) -> Result<Self, LSystemError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        match lines.next() {
            Some((_, l)) if l == LSYSTEM_HEADER => {}
            other => {
                return Err(LSystemError {
                    line: other.map_or(1, |(n, _)| n),
                    reason: "expected `lsystem 1` header",
                })
            }
        }
        let mut sys = LSystem::default();
        for (line, l) in lines {
            if let Some(rest) = l.strip_prefix("axiom") {
                sys.axiom = rest.split_whitespace().map(str::to_string).collect();
                continue;
            }
            let (lhs, rhs) = l.split_once("->").ok_or(LSystemError {
                line,
                reason: "expected `symbol -> body`",
            })?;
            let lhs = lhs.trim();
            if lhs.is_empty() || lhs.contains(char::is_whitespace) {
                return Err(LSystemError {
                    line,
                    reason: "rule head must be a single symbol",
                });
            }
            sys.rules.insert(
                lhs.to_string(),
                rhs.split_whitespace().map(str::to_string).collect(),
            );
        }
        if sys.axiom.is_empty() {
            return Err(LSystemError {
                line: 1,
                reason: "missing axiom",
            });
        }
        Ok(sys)
    }

    /// The strings for iterations `0..=iterations`.
    pub fn iterate(&self, iterations: usize) -> Vec<Vec<String>> {
        let mut out = Vec::with_capacity(iterations + 1);
        out.push(self.axiom.clone());
        for i in 0..iterations {
            let next = rewrite_step(&out[i], |s| self.rules.get(s).map(Vec::as_slice));
            out.push(next);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn didactic_grammar_iterations() {
        let sys = LSystem::parse("lsystem 1\naxiom X\nX -> X Y\nY -> Z a\nZ -> X Z\n").unwrap();
        let got: Vec<String> = sys.iterate(3).iter().map(|s| s.join(" ")).collect();
        assert_eq!(got, ["X", "X Y", "X Y Z a", "X Y Z a X Z a"]);
    }

    #[test]
    fn lsystem_parse_errors() {
        assert!(LSystem::parse("axiom X").is_err());
        assert!(LSystem::parse("lsystem 1\nX -> Y").is_err());
        assert!(LSystem::parse("lsystem 1\naxiom X\nX Y").is_err());
    }

    #[test]
    fn zero_iterations_is_the_axiom() {
        let rules = ActiveRules::from_bodies(Default::default());
        let ep = early_develop(&rules, 0);
        assert_eq!(ep.symbols, vec![SymbolInstance::bare(SymbolKind::Core)]);
    }

    #[test]
    fn empty_body_deletes_but_inactive_symbol_persists() {
        let bodies: [Vec<SymbolInstance>; 5] = [
            vec![
                SymbolInstance::bare(SymbolKind::Core),
                SymbolInstance::bare(SymbolKind::Brick),
            ],
            vec![],
            vec![],
            vec![],
            vec![],
        ];
        let deleted = early_develop(&ActiveRules::from_bodies(bodies.clone()), 2);
        // the B from step one is deleted in step two; only the fresh one remains
        assert_eq!(
            deleted.symbols,
            vec![
                SymbolInstance::bare(SymbolKind::Core),
                SymbolInstance::bare(SymbolKind::Brick),
            ]
        );
        let kept = early_develop(
            &ActiveRules::from_bodies(bodies).with_inactive(SymbolKind::Brick),
            2,
        );
        assert_eq!(
            kept.symbols,
            vec![
                SymbolInstance::bare(SymbolKind::Core),
                SymbolInstance::bare(SymbolKind::Brick),
                SymbolInstance::bare(SymbolKind::Brick),
            ]
        );
    }
}
