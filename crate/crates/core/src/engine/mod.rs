//! Interval-annotated knowledge base with forward chaining.
//!
//! Entries are keyed by the truth tables of `E∧H` and `H`, so equivalent
//! conditionals share one entry and left logical equivalence never has to be
//! applied explicitly. Each saturation round instantiates And, CM, Or, Cut
//! and S on the entries of the previous round, with at least one premise new
//! or tightened in that round. RW and Reflexivity are applied only at query
//! time, toward the queried event.

mod derivation;
mod matching;
mod plan;

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coherence::{Coherence, CoherenceError, IntervalAssessment};
use crate::logic::{self, Atom, AtomUniverse, CanonicalKey, ConditionalEvent, LogicError, TruthTable, DEFAULT_ATOM_LIMIT};
use crate::rules::{ProbInterval, RuleId};

pub use derivation::{Derivation, Step};
pub use plan::{Plan, PlanError};

pub const DEFAULT_DEPTH: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("`{}` is asserted with disjoint intervals {} and {}", .0.event, .0.first, .0.second)]
    InconsistentDuplicate(Box<DuplicateAssertion>),
    #[error("derivations disagree on `{}`: {} by {} and {} by {}", .first.conclusion, .first.interval, .first.shape(), .second.interval, .second.shape())]
    Incoherent { first: Box<Derivation>, second: Box<Derivation> },
    #[error(transparent)]
    Logic(#[from] LogicError),
    #[error(transparent)]
    Coherence(#[from] CoherenceError),
    #[error(transparent)]
    Plan(#[from] PlanError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DuplicateAssertion {
    pub event: ConditionalEvent,
    pub first: ProbInterval,
    pub second: ProbInterval,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Asserted,
    Derived,
}

#[derive(Debug, Clone)]
pub(crate) struct Entry {
    pub event: ConditionalEvent,
    /// Worlds satisfying the consequent formula, also outside the antecedent.
    pub e: TruthTable,
    pub key: CanonicalKey,
    pub derivation: Arc<Derivation>,
}

impl Entry {
    pub fn interval(&self) -> &ProbInterval {
        &self.derivation.interval
    }
}

/// Knowledge base snapshot. Operations return new values.
#[derive(Debug, Clone)]
pub struct KnowledgeBase {
    universe: AtomUniverse,
    asserted: Vec<(ConditionalEvent, ProbInterval)>,
    entries: BTreeMap<CanonicalKey, Entry>,
    atom_limit: usize,
    rounds: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QueryOptions {
    pub depth: usize,
    pub compute_tight: bool,
}

impl Default for QueryOptions {
    fn default() -> Self {
        QueryOptions {
            depth: DEFAULT_DEPTH,
            compute_tight: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    /// The chained interval equals the LP-tight interval.
    Exact,
    /// The tight interval is strictly narrower, or was not computed.
    ChainedOnly,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueryAnswer {
    pub target: ConditionalEvent,
    pub chained: ProbInterval,
    pub tight: Option<ProbInterval>,
    pub trace: Option<Derivation>,
    pub status: Status,
}

fn merge(existing: &Arc<Derivation>, new: Derivation) -> Result<Option<Arc<Derivation>>, EngineError> {
    let Some(meet) = existing.interval.intersect(&new.interval) else {
        return Err(EngineError::Incoherent {
            first: Box::new((**existing).clone()),
            second: Box::new(new),
        });
    };
    if meet == existing.interval {
        return Ok(None);
    }
    if meet == new.interval {
        return Ok(Some(Arc::new(new)));
    }
    let new = Arc::new(Derivation {
        conclusion: existing.conclusion.clone(),
        ..new
    });
    let (lower_src, upper_src) = match &existing.step {
        Step::Meet { lower, upper } => (lower.clone(), upper.clone()),
        _ => (existing.clone(), existing.clone()),
    };
    let lower = if existing.interval.lo() >= new.interval.lo() { lower_src } else { new.clone() };
    let upper = if existing.interval.hi() <= new.interval.hi() { upper_src } else { new };
    Ok(Some(Arc::new(Derivation {
        conclusion: existing.conclusion.clone(),
        interval: meet,
        step: Step::Meet { lower, upper },
    })))
}

impl KnowledgeBase {
    /// Canonicalizes and stores the entries; duplicates are intersected.
    pub fn load(entries: Vec<(ConditionalEvent, ProbInterval)>) -> Result<Self, EngineError> {
        Self::load_with(entries, [], DEFAULT_ATOM_LIMIT)
    }

    /// Like [`KnowledgeBase::load`], with extra declared atoms and an atom limit.
    pub fn load_with(entries: Vec<(ConditionalEvent, ProbInterval)>, declared: impl IntoIterator<Item = Atom>, atom_limit: usize) -> Result<Self, EngineError> {
        let mut atoms: BTreeSet<Atom> = declared.into_iter().collect();
        for (c, _) in &entries {
            atoms.extend(c.atoms());
        }
        let universe = AtomUniverse::new(atoms, atom_limit)?;
        let mut map: BTreeMap<CanonicalKey, Entry> = BTreeMap::new();
        for (index, (event, interval)) in entries.iter().enumerate() {
            let key = logic::canonical_key(event, &universe)?;
            match map.get_mut(&key) {
                Some(entry) => {
                    let meet = entry.interval().intersect(interval).ok_or_else(|| {
                        EngineError::InconsistentDuplicate(Box::new(DuplicateAssertion {
                            event: event.clone(),
                            first: entry.interval().clone(),
                            second: interval.clone(),
                        }))
                    })?;
                    let Step::Asserted { index } = entry.derivation.step else {
                        unreachable!("only assertions at load")
                    };
                    entry.derivation = Arc::new(Derivation::asserted(index, entry.event.clone(), meet));
                }
                None => {
                    let e = universe.table(event.consequent())?;
                    let derivation = Arc::new(Derivation::asserted(index + 1, event.clone(), interval.clone()));
                    map.insert(
                        key.clone(),
                        Entry {
                            event: event.clone(),
                            e,
                            key,
                            derivation,
                        },
                    );
                }
            }
        }
        Ok(KnowledgeBase {
            universe,
            asserted: entries,
            entries: map,
            atom_limit,
            rounds: 0,
        })
    }

    pub fn universe(&self) -> &AtomUniverse {
        &self.universe
    }

    pub fn asserted(&self) -> &[(ConditionalEvent, ProbInterval)] {
        &self.asserted
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Saturation rounds that changed something.
    pub fn rounds(&self) -> usize {
        self.rounds
    }

    /// Entries in canonical key order.
    pub fn entries(&self) -> impl Iterator<Item = (&ConditionalEvent, &ProbInterval, Provenance)> {
        self.entries.values().map(|e| {
            let p = match e.derivation.step {
                Step::Asserted { .. } => Provenance::Asserted,
                _ => Provenance::Derived,
            };
            (&e.event, e.interval(), p)
        })
    }

    /// Stored derivation for an event equivalent to `event`.
    pub fn lookup(&self, event: &ConditionalEvent) -> Result<Option<&Derivation>, EngineError> {
        let key = logic::canonical_key(event, &self.universe)?;
        Ok(self.entries.get(&key).map(|e| e.derivation.as_ref()))
    }

    /// Closure under And, CM, Or, Cut and S for at most `max_depth` rounds.
    pub fn saturate(&self, max_depth: usize) -> Result<KnowledgeBase, EngineError> {
        let mut kb = self.clone();
        let mut changed: BTreeSet<CanonicalKey> = kb.entries.keys().cloned().collect();
        for _ in 0..max_depth {
            if changed.is_empty() {
                break;
            }
            let snapshot: Vec<&Entry> = kb.entries.values().collect();
            let fresh: Vec<bool> = snapshot.iter().map(|e| changed.contains(&e.key)).collect();
            // Skip candidates the current entry already matches or beats.
            let keep = |key: &CanonicalKey, interval: &ProbInterval| kb.entries.get(key).is_none_or(|e| !e.interval().is_subset(interval));
            let candidates = matching::instantiate(&snapshot, &fresh, &kb.universe, &matching::Context::new(&keep));
            changed.clear();
            for cand in candidates {
                match kb.entries.get_mut(&cand.key) {
                    Some(entry) => {
                        if let Some(d) = merge(&entry.derivation, cand.derivation)? {
                            entry.derivation = d;
                            changed.insert(cand.key);
                        }
                    }
                    None => {
                        changed.insert(cand.key.clone());
                        kb.entries.insert(
                            cand.key.clone(),
                            Entry {
                                event: cand.derivation.conclusion.clone(),
                                e: cand.e,
                                key: cand.key,
                                derivation: Arc::new(cand.derivation),
                            },
                        );
                    }
                }
            }
            if !changed.is_empty() {
                kb.rounds += 1;
            }
        }
        Ok(kb)
    }

    /// Best chained interval for `target` in this snapshot, without further
    /// saturation. Applies RW from entries with the same antecedent and a
    /// stronger consequent, and Reflexivity.
    pub fn answer(&self, target: &ConditionalEvent) -> Result<(ProbInterval, Option<Derivation>), EngineError> {
        let key = logic::canonical_key(target, &self.universe)?;
        let mut best: Option<Arc<Derivation>> = self.entries.get(&key).map(|e| e.derivation.clone());

        let mut consider = |d: Derivation| -> Result<(), EngineError> {
            best = match &best {
                None => Some(Arc::new(d)),
                Some(b) => merge(b, d)?.or_else(|| Some(b.clone())),
            };
            Ok(())
        };

        if key.eh == key.h {
            consider(Derivation::rule(RuleId::Reflexivity, target.clone(), vec![]))?;
        }
        let weakenable = self
            .entries
            .values()
            .filter(|e| e.key.h == key.h && e.key != key && e.key.eh.is_subset(&key.eh))
            .max_by(|a, b| a.interval().lo().cmp(b.interval().lo()).then_with(|| b.key.cmp(&a.key)));
        if let Some(e) = weakenable {
            if !e.interval().lo().eq(&crate::rational::zero()) {
                consider(Derivation::rule(RuleId::Rw, target.clone(), vec![e.derivation.clone()]))?;
            }
        }

        Ok(match best {
            Some(d) => (d.interval.clone(), Some(Derivation { conclusion: target.clone(), ..(*d).clone() })),
            None => (ProbInterval::unit(), None),
        })
    }

    /// LP-tight interval of `target` given the asserted entries alone.
    pub fn tight(&self, target: &ConditionalEvent) -> Result<ProbInterval, EngineError> {
        if !self.universe.contains_all(target.consequent()) || !self.universe.contains_all(target.antecedent()) {
            let missing = target.atoms().into_iter().find(|a| self.universe.index_of(a).is_none()).expect("some atom is missing");
            return Err(LogicError::MissingAtom(missing).into());
        }
        let assessment = IntervalAssessment::from_pairs(self.asserted.iter().cloned());
        Ok(Coherence::new(self.atom_limit).tight_extension(&assessment, target)?)
    }

    pub fn query(&self, target: &ConditionalEvent, opts: &QueryOptions) -> Result<QueryAnswer, EngineError> {
        // Validate the target against the universe before saturating.
        logic::canonical_key(target, &self.universe)?;
        let saturated = self.saturate(opts.depth)?;
        let (chained, trace) = saturated.answer(target)?;
        let tight = if opts.compute_tight { Some(self.tight(target)?) } else { None };
        let status = match &tight {
            Some(t) if *t == chained => Status::Exact,
            _ => Status::ChainedOnly,
        };
        Ok(QueryAnswer {
            target: target.clone(),
            chained,
            tight,
            trace,
            status,
        })
    }
}
