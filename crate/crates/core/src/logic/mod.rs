//! Propositional formulas, conditional events and possible worlds.
//!
//! Semantic questions (implication, equivalence, inclusion) are settled by
//! exhaustive truth tables; the atom sets involved are small.

mod formula;
pub mod parser;
mod table;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use formula::{Atom, Formula};
pub use parser::{parse_conditional, parse_formula, ParseError};
pub use table::{AtomUniverse, Constituent, TruthTable, DEFAULT_ATOM_LIMIT};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LogicError {
    #[error("invalid atom name `{0}`")]
    InvalidAtom(String),
    #[error("`{0}` is a reserved word")]
    ReservedWord(String),
    #[error("atom `{0}` is not assigned")]
    MissingAtom(Atom),
    #[error("{atoms} atoms exceed the limit of {limit}")]
    AtomLimit { atoms: usize, limit: usize },
    #[error("antecedent `{0}` is a contradiction")]
    ImpossibleAntecedent(Formula),
    #[error("family is empty")]
    EmptyFamily,
}

/// `E|H`: true when `E∧H`, false when `¬E∧H`, void when `¬H`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawConditional", into = "RawConditional")]
pub struct ConditionalEvent {
    consequent: Formula,
    antecedent: Formula,
}

#[derive(Serialize, Deserialize)]
struct RawConditional {
    consequent: Formula,
    antecedent: Formula,
}

impl TryFrom<RawConditional> for ConditionalEvent {
    type Error = LogicError;

    fn try_from(raw: RawConditional) -> Result<Self, Self::Error> {
        ConditionalEvent::new(raw.consequent, raw.antecedent)
    }
}

impl From<ConditionalEvent> for RawConditional {
    fn from(c: ConditionalEvent) -> Self {
        RawConditional {
            consequent: c.consequent,
            antecedent: c.antecedent,
        }
    }
}

impl ConditionalEvent {
    /// Fails when the antecedent is unsatisfiable.
    pub fn new(consequent: Formula, antecedent: Formula) -> Result<Self, LogicError> {
        if !satisfiable(&antecedent) {
            return Err(LogicError::ImpossibleAntecedent(antecedent));
        }
        Ok(ConditionalEvent { consequent, antecedent })
    }

    /// For callers that already know the antecedent is satisfiable.
    pub(crate) fn new_unchecked(consequent: Formula, antecedent: Formula) -> Self {
        ConditionalEvent { consequent, antecedent }
    }

    pub fn consequent(&self) -> &Formula {
        &self.consequent
    }

    pub fn antecedent(&self) -> &Formula {
        &self.antecedent
    }

    /// `¬E|H`.
    pub fn negated(&self) -> ConditionalEvent {
        ConditionalEvent {
            consequent: Formula::negate(self.consequent.clone()),
            antecedent: self.antecedent.clone(),
        }
    }

    /// `E∧H` as a formula.
    pub fn conjunction(&self) -> Formula {
        Formula::and(self.consequent.clone(), self.antecedent.clone())
    }

    pub fn atoms(&self) -> std::collections::BTreeSet<Atom> {
        let mut s = self.consequent.atoms();
        s.extend(self.antecedent.atoms());
        s
    }
}

impl fmt::Display for ConditionalEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} given {}", self.consequent, self.antecedent)
    }
}

impl std::str::FromStr for ConditionalEvent {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_conditional(s)
    }
}

fn local_universe<'a>(fs: impl IntoIterator<Item = &'a Formula>) -> AtomUniverse {
    // A formula tree holds at most a handful of atoms in practice; the limit
    // here only guards the 2^k table allocation.
    AtomUniverse::spanning(fs, usize::BITS as usize - 2).expect("atom count fits in a world index")
}

pub fn satisfiable(f: &Formula) -> bool {
    let u = local_universe([f]);
    !u.table(f).expect("universe spans formula").is_empty()
}

/// Every assignment satisfying `f` satisfies `g`.
pub fn implies(f: &Formula, g: &Formula) -> bool {
    let u = local_universe([f, g]);
    let tf = u.table(f).expect("universe spans formula");
    let tg = u.table(g).expect("universe spans formula");
    tf.is_subset(&tg)
}

pub fn equivalent(f: &Formula, g: &Formula) -> bool {
    let u = local_universe([f, g]);
    u.table(f).expect("universe spans formula") == u.table(g).expect("universe spans formula")
}

/// Goodman–Nguyen inclusion `c1 ⊆ c2`: `E1H1 ⊨ E2H2` and `¬E2H2 ⊨ ¬E1H1`.
pub fn gn_included(c1: &ConditionalEvent, c2: &ConditionalEvent) -> bool {
    let not_e1h1 = Formula::and(Formula::not(c1.consequent.clone()), c1.antecedent.clone());
    let not_e2h2 = Formula::and(Formula::not(c2.consequent.clone()), c2.antecedent.clone());
    implies(&c1.conjunction(), &c2.conjunction()) && implies(&not_e2h2, &not_e1h1)
}

/// Truth-table signature of a conditional event: equivalent events share it.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalKey {
    /// Worlds where `E∧H` holds.
    pub eh: TruthTable,
    /// Worlds where `H` holds.
    pub h: TruthTable,
}

pub fn canonical_key(c: &ConditionalEvent, universe: &AtomUniverse) -> Result<CanonicalKey, LogicError> {
    let h = universe.table(&c.antecedent)?;
    let eh = universe.table(&c.consequent)?.and(&h);
    Ok(CanonicalKey { eh, h })
}

/// One possible world of a family, labelled with the antecedents it satisfies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelledWorld {
    pub index: usize,
    pub constituent: Constituent,
    /// `satisfies[i]` is true when the world satisfies `H_i`.
    pub satisfies: Vec<bool>,
}

impl LabelledWorld {
    /// The world lies in the region where every antecedent is false.
    pub fn in_void_region(&self) -> bool {
        !self.satisfies.iter().any(|&s| s)
    }
}

/// All `2^k` assignments over the atoms of `family`.
pub fn enumerate_constituents(family: &[ConditionalEvent], limit: usize) -> Result<(AtomUniverse, Vec<LabelledWorld>), LogicError> {
    if family.is_empty() {
        return Err(LogicError::EmptyFamily);
    }
    let formulas = family.iter().flat_map(|c| [&c.consequent, &c.antecedent]);
    let universe = AtomUniverse::spanning(formulas, limit)?;
    let antecedents = family
        .iter()
        .map(|c| universe.table(&c.antecedent))
        .collect::<Result<Vec<_>, _>>()?;
    let worlds = (0..universe.world_count())
        .map(|w| LabelledWorld {
            index: w,
            constituent: universe.constituent(w),
            satisfies: antecedents.iter().map(|t| t.get(w)).collect(),
        })
        .collect();
    Ok((universe, worlds))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(s: &str) -> Formula {
        s.parse().unwrap()
    }

    fn c(s: &str) -> ConditionalEvent {
        s.parse().unwrap()
    }

    #[test]
    fn evaluation_examples() {
        let w = Constituent::new([(Atom::new("a").unwrap(), true), (Atom::new("b").unwrap(), false)]);
        assert!(Formula::Top.evaluate(&w).unwrap());
        assert!(!f("a & b").evaluate(&w).unwrap());
        assert!(f("a <-> a").evaluate(&w).unwrap());
        assert!(matches!(f("z").evaluate(&w), Err(LogicError::MissingAtom(_))));
    }

    #[test]
    fn implication_examples() {
        assert!(implies(&f("a & b"), &f("a")));
        assert!(implies(&f("a"), &f("a | b")));
        assert!(!implies(&f("a"), &f("b")));
        assert!(implies(&Formula::Bottom, &f("a")));
    }

    #[test]
    fn equivalence_examples() {
        assert!(equivalent(&f("a"), &f("!!a")));
        assert!(equivalent(&f("a -> b"), &f("!a | b")));
        assert!(!equivalent(&f("a"), &f("a | b")));
    }

    #[test]
    fn goodman_nguyen_inclusion() {
        assert!(gn_included(&c("c given a & b"), &c("!b | c given a")));
        assert!(!gn_included(&c("b given a"), &c("c given a")));
        assert!(gn_included(&c("b given a"), &c("b | c given a")));
    }

    #[test]
    fn constituents() {
        let (u, worlds) = enumerate_constituents(&[c("c given a"), c("!b given a"), c("c given a & b")], 20).unwrap();
        assert_eq!(u.len(), 3);
        assert_eq!(worlds.len(), 8);
        assert_eq!(worlds.iter().filter(|w| !w.in_void_region()).count(), 4);

        let (_, worlds) = enumerate_constituents(&[c("a given a")], 20).unwrap();
        assert_eq!(worlds.len(), 2);

        let (u, worlds) = enumerate_constituents(&[c("b given a"), c("c given a")], 20).unwrap();
        let a = Atom::new("a").unwrap();
        for w in &worlds {
            assert_eq!(!w.in_void_region(), w.constituent.value(&a).unwrap());
        }
        assert_eq!(u.world_count(), 8);

        assert_eq!(enumerate_constituents(&[], 20), Err(LogicError::EmptyFamily));
        assert!(matches!(enumerate_constituents(&[c("b given a"), c("c given d")], 3), Err(LogicError::AtomLimit { .. })));
    }

    #[test]
    fn canonical_keys() {
        let u = AtomUniverse::spanning([&f("a & b & c")], 20).unwrap();
        let key = |s: &str| canonical_key(&c(s), &u).unwrap();
        assert_eq!(key("c given a"), key("c given !!a"));
        assert_ne!(key("c given a"), key("c given b"));
        assert_eq!(key("b & c given a"), key("c & b given a"));
        // same conditional event, different consequent formula
        assert_eq!(key("c given a"), key("a -> c given a"));
    }

    #[test]
    fn negation_and_display() {
        let e = c("!noisy given linda");
        assert_eq!(e.negated().to_string(), "noisy given linda");
        assert_eq!(c("b | c given a & b").to_string(), "b | c given a & b");
    }
}
