//! Regulation clauses and the environmental states they are evaluated against.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

/// Name of the only environmental state registered in this crate.
pub const INCLINED: &str = "inclined";

/// Environmental states a clause may reference.
pub const REGISTERED_STATES: &[&str] = &[INCLINED];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Operator {
    And,
    Or,
}

impl Operator {
    pub fn flipped(self) -> Self {
        match self {
            Operator::And => Operator::Or,
            Operator::Or => Operator::And,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Operator::And => "and",
            Operator::Or => "or",
        }
    }
}

/// Comparison of one environmental state against an expected value.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Term {
    pub state: String,
    pub expected: bool,
}

impl Term {
    pub fn new(state: &str, expected: bool) -> Self {
        Self {
            state: state.to_string(),
            expected,
        }
    }
}

/// Boolean expression gating a production rule.
///
/// `Always` is the reserved constant-true clause of the non-regulated
/// encoding and carries no environmental vocabulary.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RegulationClause {
    Always,
    Terms {
        terms: Vec<Term>,
        /// `terms.len() - 1` operators, applied left to right.
        operators: Vec<Operator>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ClauseError {
    #[error("unknown environmental state `{0}`")]
    UnknownState(String),
    #[error("clause has {terms} terms but {operators} operators")]
    Arity { terms: usize, operators: usize },
}

impl RegulationClause {
    /// Single-term clause `state=expected`.
    pub fn single(state: &str, expected: bool) -> Self {
        RegulationClause::Terms {
            terms: alloc::vec![Term::new(state, expected)],
            operators: Vec::new(),
        }
    }

    /// Two-term clause `a op b`.
    pub fn pair(a: Term, op: Operator, b: Term) -> Self {
        RegulationClause::Terms {
            terms: alloc::vec![a, b],
            operators: alloc::vec![op],
        }
    }

    pub fn term_count(&self) -> usize {
        match self {
            RegulationClause::Always => 0,
            RegulationClause::Terms { terms, .. } => terms.len(),
        }
    }

    /// Checks arity and that every state is registered.
    pub fn validate(&self) -> Result<(), ClauseError> {
        if let RegulationClause::Terms { terms, operators } = self {
            if terms.is_empty() || operators.len() + 1 != terms.len() {
                return Err(ClauseError::Arity {
                    terms: terms.len(),
                    operators: operators.len(),
                });
            }
            for t in terms {
                if !REGISTERED_STATES.contains(&t.state.as_str()) {
                    return Err(ClauseError::UnknownState(t.state.clone()));
                }
            }
        }
        Ok(())
    }

    /// Evaluates terms strictly left to right, without operator precedence.
    pub fn eval(&self, env: &EnvironmentState) -> Result<bool, ClauseError> {
        let (terms, operators) = match self {
            RegulationClause::Always => return Ok(true),
            RegulationClause::Terms { terms, operators } => (terms, operators),
        };
        if terms.is_empty() || operators.len() + 1 != terms.len() {
            return Err(ClauseError::Arity {
                terms: terms.len(),
                operators: operators.len(),
            });
        }
        let term = |t: &Term| -> Result<bool, ClauseError> {
            env.get(&t.state)
                .map(|v| v == t.expected)
                .ok_or_else(|| ClauseError::UnknownState(t.state.clone()))
        };
        let mut acc = term(&terms[0])?;
        for (op, t) in operators.iter().zip(&terms[1..]) {
            let v = term(t)?;
            acc = match op {
                Operator::And => acc && v,
                Operator::Or => acc || v,
            };
        }
        Ok(acc)
    }
}

impl fmt::Display for RegulationClause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RegulationClause::Always => f.write_str("always"),
            RegulationClause::Terms { terms, operators } => {
                for (i, t) in terms.iter().enumerate() {
                    if i > 0 {
                        write!(f, " {} ", operators[i - 1].as_str())?;
                    }
                    write!(f, "{}={}", t.state, t.expected)?;
                }
                Ok(())
            }
        }
    }
}

/// Boolean environmental states sensed by a robot.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EnvironmentState {
    values: BTreeMap<String, bool>,
}

impl EnvironmentState {
    pub fn new() -> Self {
        Self::default()
    }

    /// Flat floor: `inclined = false`.
    pub fn flat() -> Self {
        Self::new().with(INCLINED, false)
    }

    /// Tilted floor: `inclined = true`.
    pub fn tilted() -> Self {
        Self::new().with(INCLINED, true)
    }

    pub fn with(mut self, state: &str, value: bool) -> Self {
        self.values.insert(state.to_string(), value);
        self
    }

    pub fn get(&self, state: &str) -> Option<bool> {
        self.values.get(state).copied()
    }

    pub fn inclined(&self) -> bool {
        self.get(INCLINED).unwrap_or(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(v: bool) -> Term {
        Term::new(INCLINED, v)
    }

    #[test]
    fn single_term_against_flat_and_tilted() {
        let c = RegulationClause::single(INCLINED, true);
        assert!(!c.eval(&EnvironmentState::flat()).unwrap());
        assert!(c.eval(&EnvironmentState::tilted()).unwrap());
    }

    #[test]
    fn tautology_and_contradiction() {
        let taut = RegulationClause::pair(t(true), Operator::Or, t(false));
        let contra = RegulationClause::pair(t(true), Operator::And, t(false));
        for env in [EnvironmentState::flat(), EnvironmentState::tilted()] {
            assert!(taut.eval(&env).unwrap());
            assert!(!contra.eval(&env).unwrap());
        }
    }

    #[test]
    fn unknown_state_is_an_error() {
        let c = RegulationClause::single("hot", true);
        assert_eq!(
            c.eval(&EnvironmentState::flat()),
            Err(ClauseError::UnknownState("hot".into()))
        );
        assert!(c.validate().is_err());
        // registered in a richer environment, still not a valid genotype clause
        let env = EnvironmentState::flat().with("hot", true);
        assert!(c.eval(&env).unwrap());
    }

    #[test]
    fn left_to_right_without_precedence() {
        // (false or true) and false = false; precedence would give false or (true and false) = false,
        // so use (true or x) and y with y=false vs precedence true or (x and false) = true.
        let env = EnvironmentState::flat().with("a", true).with("b", false).with("c", false);
        let c = RegulationClause::Terms {
            terms: alloc::vec![Term::new("a", true), Term::new("b", true), Term::new("c", true)],
            operators: alloc::vec![Operator::Or, Operator::And],
        };
        assert!(!c.eval(&env).unwrap());
    }

    #[test]
    fn display() {
        let c = RegulationClause::pair(t(true), Operator::And, t(false));
        assert_eq!(c.to_string(), "inclined=true and inclined=false");
        assert_eq!(RegulationClause::Always.to_string(), "always");
    }
}
