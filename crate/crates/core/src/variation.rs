//! Random initialization, crossover and mutation of genotypes.

use alloc::vec::Vec;

use crate::clause::{Operator, RegulationClause, Term, REGISTERED_STATES};
use crate::genotype::{Encoding, Genotype, RuleTuple};
use crate::rng::RandomStream;
use crate::symbol::{Category, ParamRangeError, ParamRanges, SymbolInstance, SymbolKind};

/// Parameters of the variation operators.
#[derive(Debug, Clone, PartialEq)]
pub struct VariationConfig {
    pub mutation_probability: f64,
    pub crossover_probability: f64,
    /// Maximum number of five-symbol groups per rule at initialization.
    pub max_symbol_groups: usize,
    /// Maximum number of terms in a regulation clause.
    pub clause_max_terms: usize,
    /// Tuples per replaceable symbol in the regulated encoding.
    pub tuples_per_symbol: usize,
    /// Sampling ranges of fresh symbol parameters.
    pub ranges: ParamRanges,
}

impl Default for VariationConfig {
    fn default() -> Self {
        Self {
            mutation_probability: 0.8,
            crossover_probability: 0.8,
            max_symbol_groups: 4,
            clause_max_terms: 2,
            tuples_per_symbol: 2,
            ranges: ParamRanges::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum VariationError {
    #[error("{name} = {value} is outside [0, 1]")]
    Probability { name: &'static str, value: f64 },
    #[error("{name} must be at least 1")]
    Zero { name: &'static str },
    #[error("parents use different encodings ({0} vs {1})")]
    EncodingMismatch(Encoding, Encoding),
    #[error(transparent)]
    Range(#[from] ParamRangeError),
}

impl VariationConfig {
    pub fn validate(&self) -> Result<(), VariationError> {
        for (name, value) in [
            ("mutation_probability", self.mutation_probability),
            ("crossover_probability", self.crossover_probability),
        ] {
            if !(0.0..=1.0).contains(&value) {
                return Err(VariationError::Probability { name, value });
            }
        }
        for (name, value) in [
            ("max_symbol_groups", self.max_symbol_groups),
            ("clause_max_terms", self.clause_max_terms),
            ("tuples_per_symbol", self.tuples_per_symbol),
        ] {
            if value == 0 {
                return Err(VariationError::Zero { name });
            }
        }
        self.ranges.validate()?;
        Ok(())
    }
}

fn random_symbol(category: Category, ranges: &ParamRanges, rng: &mut RandomStream) -> SymbolInstance {
    let kind = *rng.pick(category.drawable());
    SymbolInstance::random(kind, ranges, rng)
}

fn random_body(head: Option<SymbolKind>, cfg: &VariationConfig, rng: &mut RandomStream) -> Vec<SymbolInstance> {
    let groups = rng.between(1, cfg.max_symbol_groups);
    let mut body = Vec::with_capacity(groups * 5 + 1);
    if let Some(h) = head {
        body.push(SymbolInstance::bare(h));
    }
    for _ in 0..groups {
        for cat in Category::GROUP_ORDER {
            body.push(random_symbol(cat, &cfg.ranges, rng));
        }
    }
    body
}

fn random_term(rng: &mut RandomStream) -> Term {
    let state = *rng.pick(REGISTERED_STATES);
    Term::new(state, rng.coin())
}

fn random_operator(rng: &mut RandomStream) -> Operator {
    if rng.coin() {
        Operator::And
    } else {
        Operator::Or
    }
}

/// Random clause of 1..=`max_terms` terms.
pub fn random_clause(max_terms: usize, rng: &mut RandomStream) -> RegulationClause {
    let z = rng.between(1, max_terms);
    let mut terms = Vec::with_capacity(z);
    let mut operators = Vec::with_capacity(z - 1);
    for i in 0..z {
        terms.push(random_term(rng));
        if i > 0 {
            operators.push(random_operator(rng));
        }
    }
    RegulationClause::Terms { terms, operators }
}

/// Draws a fresh genotype.
///
/// Every rule body is 1..=e groups of five symbols, one per category in
/// the order ctrl-moving, ctrl-changing, mounting, module, moving. Rule C
/// is additionally headed by the core symbol.
pub fn init_genotype(encoding: Encoding, cfg: &VariationConfig, rng: &mut RandomStream) -> Genotype {
    let tuples = match encoding {
        Encoding::Baseline => 1,
        Encoding::Plasticoding => cfg.tuples_per_symbol,
    };
    let rules: [Vec<RuleTuple>; 5] = core::array::from_fn(|i| {
        let symbol = SymbolKind::REPLACEABLE[i];
        let head = (symbol == SymbolKind::Core).then_some(SymbolKind::Core);
        (0..tuples)
            .map(|_| {
                let body = random_body(head, cfg, rng);
                let clause = match encoding {
                    Encoding::Baseline => RegulationClause::Always,
                    Encoding::Plasticoding => random_clause(cfg.clause_max_terms, rng),
                };
                RuleTuple::new(clause, body)
            })
            .collect()
    });
    Genotype::new_unchecked(encoding, rules)
}

/// Uniform crossover over rule groups.
///
/// With probability `crossover_probability` each replaceable symbol's
/// whole group (clauses included) is copied from either parent with equal
/// chance; otherwise the child is a copy of `p1`.
pub fn crossover(
    p1: &Genotype,
    p2: &Genotype,
    cfg: &VariationConfig,
    rng: &mut RandomStream,
) -> Result<Genotype, VariationError> {
    let (child, _) = crossover_traced(p1, p2, cfg, rng)?;
    Ok(child)
}

/// Like [`crossover`], also reporting which parent (0 or 1) each group came from.
pub fn crossover_traced(
    p1: &Genotype,
    p2: &Genotype,
    cfg: &VariationConfig,
    rng: &mut RandomStream,
) -> Result<(Genotype, [u8; 5]), VariationError> {
    if p1.encoding() != p2.encoding() {
        return Err(VariationError::EncodingMismatch(p1.encoding(), p2.encoding()));
    }
    if !rng.chance(cfg.crossover_probability) {
        return Ok((p1.clone(), [0; 5]));
    }
    let mut origin = [0u8; 5];
    let rules = core::array::from_fn(|i| {
        if rng.coin() {
            p1.rules()[i].clone()
        } else {
            origin[i] = 1;
            p2.rules()[i].clone()
        }
    });
    Ok((Genotype::new_unchecked(p1.encoding(), rules), origin))
}

/// Which clause edit was applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClauseEdit {
    AddTerm,
    RemoveTerm,
    FlipTerm,
    FlipOperator,
}

/// Which edit a mutation applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mutation {
    AddSymbol,
    DeleteSymbol,
    SwapSymbols,
    Clause(ClauseEdit),
}

#[derive(Clone, Copy)]
enum Op {
    Add,
    Delete,
    Swap,
    Clause,
}

/// Position of a tuple in the grammar: (rule group, tuple index).
type TupleRef = (usize, usize);

fn tuple_refs(g: &Genotype) -> Vec<TupleRef> {
    g.rules()
        .iter()
        .enumerate()
        .flat_map(|(i, group)| (0..group.len()).map(move |t| (i, t)))
        .collect()
}

/// First body position an edit may touch; the head of rule C is fixed.
fn first_editable(group: usize) -> usize {
    usize::from(group == 0)
}

fn editable_len(g: &Genotype, (i, t): TupleRef) -> usize {
    g.rules()[i][t].body.len().saturating_sub(first_editable(i))
}

fn feasible_clause_edits(clause: &RegulationClause, max_terms: usize) -> Vec<ClauseEdit> {
    let n = clause.term_count();
    let mut edits = Vec::with_capacity(4);
    if n < max_terms {
        edits.push(ClauseEdit::AddTerm);
    }
    if n > 1 {
        edits.push(ClauseEdit::RemoveTerm);
    }
    if n >= 1 {
        edits.push(ClauseEdit::FlipTerm);
    }
    if n >= 2 {
        edits.push(ClauseEdit::FlipOperator);
    }
    edits
}

fn edit_clause(clause: &mut RegulationClause, edit: ClauseEdit, rng: &mut RandomStream) {
    let RegulationClause::Terms { terms, operators } = clause else {
        return;
    };
    match edit {
        ClauseEdit::AddTerm => {
            operators.push(random_operator(rng));
            terms.push(random_term(rng));
        }
        ClauseEdit::RemoveTerm => {
            let i = rng.below(terms.len());
            terms.remove(i);
            operators.remove(i.saturating_sub(1));
        }
        ClauseEdit::FlipTerm => {
            let i = rng.below(terms.len());
            terms[i].expected = !terms[i].expected;
        }
        ClauseEdit::FlipOperator => {
            let i = rng.below(operators.len());
            operators[i] = operators[i].flipped();
        }
    }
}

/// Mutates a genotype; see [`mutate_traced`].
pub fn mutate(g: &Genotype, cfg: &VariationConfig, rng: &mut RandomStream) -> Genotype {
    mutate_traced(g, cfg, rng).0
}

/// Applies at most one edit and reports it.
///
/// With probability `mutation_probability` a tuple is chosen uniformly,
/// then one of add / delete / swap (and, for the regulated encoding, a
/// clause edit) with equal chance among the feasible ones. The core
/// symbol at the head of rule C is never added, removed or moved.
pub fn mutate_traced(
    g: &Genotype,
    cfg: &VariationConfig,
    rng: &mut RandomStream,
) -> (Genotype, Option<Mutation>) {
    let mut out = g.clone();
    if !rng.chance(cfg.mutation_probability) {
        return (out, None);
    }
    let refs = tuple_refs(g);
    let chosen = *rng.pick(&refs);

    let clause_edits = match g.encoding() {
        Encoding::Baseline => Vec::new(),
        Encoding::Plasticoding => {
            feasible_clause_edits(&g.rules()[chosen.0][chosen.1].clause, cfg.clause_max_terms)
        }
    };
    let mut ops = Vec::with_capacity(4);
    ops.push(Op::Add);
    if editable_len(g, chosen) > 0 {
        ops.push(Op::Delete);
        ops.push(Op::Swap);
    }
    if !clause_edits.is_empty() {
        ops.push(Op::Clause);
    }
    let op = *rng.pick(&ops);

    let applied = match op {
        Op::Add => {
            let category = *rng.pick(&Category::ALL);
            let symbol = random_symbol(category, &cfg.ranges, rng);
            let (i, t) = chosen;
            let body = &mut out.rules_mut()[i][t].body;
            let pos = rng.between(first_editable(i), body.len());
            body.insert(pos, symbol);
            Mutation::AddSymbol
        }
        Op::Delete => {
            let (i, t) = chosen;
            let lo = first_editable(i);
            let body = &mut out.rules_mut()[i][t].body;
            let pos = rng.between(lo, body.len() - 1);
            body.remove(pos);
            Mutation::DeleteSymbol
        }
        Op::Swap => {
            let (i, t) = chosen;
            let a = rng.between(first_editable(i), g.rules()[i][t].body.len() - 1);
            let candidates: Vec<TupleRef> =
                refs.iter().copied().filter(|&r| editable_len(g, r) > 0).collect();
            let (j, u) = *rng.pick(&candidates);
            let b = rng.between(first_editable(j), g.rules()[j][u].body.len() - 1);
            let rules = out.rules_mut();
            if (i, t) == (j, u) {
                rules[i][t].body.swap(a, b);
            } else {
                let sa = rules[i][t].body[a].clone();
                let sb = core::mem::replace(&mut rules[j][u].body[b], sa);
                rules[i][t].body[a] = sb;
            }
            Mutation::SwapSymbols
        }
        Op::Clause => {
            let edit = *rng.pick(&clause_edits);
            let (i, t) = chosen;
            edit_clause(&mut out.rules_mut()[i][t].clause, edit, rng);
            Mutation::Clause(edit)
        }
    };
    (out, Some(applied))
}
