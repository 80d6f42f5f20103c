//! Line-oriented text format for genotypes (`.geno`).
//!
//! ```text
//! plasticoding-genotype 1
//! encoding plasticoding
//! rule C when inclined=true or inclined=false
//! C
//! move_ref_N -4.0263157894736842e-1 1.2500000000000000e0
//! add_front
//! A1 5.0000000000000000e-1 2.0000000000000000e0 4.0000000000000000e0 1.0000000000000000e0
//! end
//! ...
//! ```
//!
//! One block per rule tuple, blocks of the same symbol in tuple order.
//! Parameters are written with 17 significant digits, which round-trips
//! every finite `f64` exactly.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt::Write;

use crate::clause::{Operator, RegulationClause, Term};
use crate::genotype::{Encoding, Genotype, GenotypeError, RuleTuple};
use crate::symbol::{SymbolInstance, SymbolKind};

pub const HEADER: &str = "plasticoding-genotype 1";

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TextError {
    #[error("line {line}: {reason} (at `{token}`)")]
    Malformed {
        line: usize,
        token: String,
        reason: &'static str,
    },
    #[error("invalid genotype: {0}")]
    Invalid(#[from] GenotypeError),
}

fn malformed(line: usize, token: &str, reason: &'static str) -> TextError {
    TextError::Malformed {
        line,
        token: token.to_string(),
        reason,
    }
}

/// Renders a genotype in the `.geno` text format.
pub fn serialize_genotype(g: &Genotype) -> String {
    let mut out = String::new();
    out.push_str(HEADER);
    out.push('\n');
    let _ = writeln!(out, "encoding {}", g.encoding());
    for (i, group) in g.rules().iter().enumerate() {
        let symbol = SymbolKind::REPLACEABLE[i];
        for tuple in group {
            let _ = writeln!(out, "rule {} when {}", symbol, tuple.clause);
            for s in &tuple.body {
                out.push_str(s.kind.name());
                for p in &s.params {
                    let _ = write!(out, " {p:.16e}");
                }
                out.push('\n');
            }
            out.push_str("end\n");
        }
    }
    out
}

fn parse_clause(line: usize, text: &str) -> Result<RegulationClause, TextError> {
    let tokens: Vec<&str> = text.split_whitespace().collect();
    if tokens == ["always"] {
        return Ok(RegulationClause::Always);
    }
    if tokens.is_empty() {
        return Err(malformed(line, text, "missing clause"));
    }
    let mut terms = Vec::new();
    let mut operators = Vec::new();
    for (i, tok) in tokens.iter().enumerate() {
        if i % 2 == 1 {
            operators.push(match *tok {
                "and" => Operator::And,
                "or" => Operator::Or,
                _ => return Err(malformed(line, tok, "expected `and` or `or`")),
            });
            continue;
        }
        let (state, value) = tok
            .split_once('=')
            .ok_or_else(|| malformed(line, tok, "expected `state=true|false`"))?;
        let expected = match value {
            "true" => true,
            "false" => false,
            _ => return Err(malformed(line, tok, "expected `true` or `false`")),
        };
        if state.is_empty() {
            return Err(malformed(line, tok, "empty state name"));
        }
        terms.push(Term::new(state, expected));
    }
    if operators.len() + 1 != terms.len() {
        return Err(malformed(line, text, "clause ends with an operator"));
    }
    Ok(RegulationClause::Terms { terms, operators })
}

fn parse_symbol(line: usize, text: &str) -> Result<SymbolInstance, TextError> {
    let mut tokens = text.split_whitespace();
    let name = tokens.next().unwrap_or_default();
    let kind: SymbolKind = name
        .parse()
        .map_err(|_| malformed(line, name, "unknown symbol"))?;
    let mut params = Vec::with_capacity(kind.param_count());
    for tok in tokens {
        let v: f64 = tok
            .parse()
            .map_err(|_| malformed(line, tok, "invalid number"))?;
        if !v.is_finite() {
            return Err(malformed(line, tok, "non-finite parameter"));
        }
        params.push(v);
    }
    SymbolInstance::new(kind, params)
        .ok_or_else(|| malformed(line, text, "wrong number of parameters"))
}

/// Parses the `.geno` text format and validates the resulting genotype.
pub fn parse_genotype(text: &str) -> Result<Genotype, TextError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    match lines.next() {
        Some((_, l)) if l == HEADER => {}
        Some((n, l)) => return Err(malformed(n, l, "expected header line")),
        None => return Err(malformed(1, "", "empty input")),
    }
    let encoding = match lines.next() {
        Some((n, l)) => {
            let value = l
                .strip_prefix("encoding ")
                .ok_or_else(|| malformed(n, l, "expected `encoding <mode>`"))?;
            value
                .trim()
                .parse::<Encoding>()
                .map_err(|_| malformed(n, value, "unknown encoding"))?
        }
        None => return Err(malformed(2, "", "missing encoding line")),
    };

    let mut rules: [Vec<RuleTuple>; 5] = Default::default();
    let mut current: Option<(usize, RuleTuple)> = None;
    let mut last_line = 2;
    for (n, l) in lines {
        last_line = n;
        match current.as_mut() {
            None => {
                let rest = l
                    .strip_prefix("rule ")
                    .ok_or_else(|| malformed(n, l, "expected `rule <symbol> when <clause>`"))?;
                let (sym, clause) = rest
                    .split_once(" when ")
                    .ok_or_else(|| malformed(n, rest, "missing `when`"))?;
                let sym = sym.trim();
                let kind: SymbolKind = sym
                    .parse()
                    .map_err(|_| malformed(n, sym, "unknown symbol"))?;
                let idx = kind
                    .replaceable_index()
                    .ok_or_else(|| malformed(n, sym, "symbol is not replaceable"))?;
                current = Some((idx, RuleTuple::new(parse_clause(n, clause)?, Vec::new())));
            }
            Some(_) if l == "end" => {
                let (idx, tuple) = current.take().expect("open block");
                rules[idx].push(tuple);
            }
            Some((_, tuple)) => tuple.body.push(parse_symbol(n, l)?),
        }
    }
    if current.is_some() {
        return Err(malformed(last_line, "", "unterminated rule block"));
    }
    Ok(Genotype::new(encoding, rules)?)
}

/// Space-separated symbol names, e.g. `C add_front B`.
pub fn symbol_string(symbols: &[SymbolInstance]) -> String {
    let names: Vec<&str> = symbols.iter().map(|s| s.kind.name()).collect();
    names.join(" ")
}

/// Number of `rule` blocks in a serialized genotype.
pub fn count_rule_blocks(text: &str) -> usize {
    text.lines().filter(|l| l.starts_with("rule ")).count()
}
