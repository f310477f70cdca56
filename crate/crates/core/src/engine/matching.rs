//! Rule instantiation on knowledge-base entries by truth-table matching.

use std::cell::RefCell;
use std::collections::HashMap;
use std::hash::{Hash, Hasher};

use super::{Derivation, Entry, Step};
use crate::logic::{AtomUniverse, CanonicalKey, ConditionalEvent, Formula, TruthTable};
use crate::rules::{ProbInterval, RuleId};

pub(crate) struct Candidate {
    pub key: CanonicalKey,
    pub e: TruthTable,
    pub derivation: Derivation,
}

/// Shared state for one batch of instantiations.
pub(crate) struct Context<'a> {
    /// Decides from key and interval alone whether a candidate is worth building.
    keep: &'a dyn Fn(&CanonicalKey, &ProbInterval) -> bool,
    /// Rule outputs by premise intervals; few distinct intervals recur often.
    memo: RefCell<HashMap<MemoKey, Option<ProbInterval>>>,
}

#[derive(PartialEq, Eq)]
struct MemoKey(RuleId, Vec<ProbInterval>);

// Ratios are kept normalized, so hashing numerator and denominator agrees
// with equality and avoids the generic (and slow) `Ratio` hash.
impl Hash for MemoKey {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.hash(state);
        for iv in &self.1 {
            for r in [iv.lo(), iv.hi()] {
                r.numer().hash(state);
                r.denom().hash(state);
            }
        }
    }
}

impl<'a> Context<'a> {
    pub fn new(keep: &'a dyn Fn(&CanonicalKey, &ProbInterval) -> bool) -> Self {
        Context { keep, memo: RefCell::default() }
    }

    fn propagate(&self, rule: RuleId, intervals: Vec<ProbInterval>) -> Option<ProbInterval> {
        let mut memo = self.memo.borrow_mut();
        memo.entry(MemoKey(rule, intervals)).or_insert_with_key(|k| k.0.propagate(&k.1).ok()).clone()
    }
}

fn candidate(
    cx: &Context,
    rule: RuleId,
    e: TruthTable,
    h: TruthTable,
    premises: &[&Entry],
    event: impl FnOnce() -> (Formula, Formula),
) -> Option<Candidate> {
    if h.is_empty() {
        return None;
    }
    let intervals: Vec<ProbInterval> = premises.iter().map(|p| p.interval().clone()).collect();
    let interval = cx.propagate(rule, intervals)?;
    let key = CanonicalKey { eh: e.and(&h), h };
    if interval.is_vacuous() || !(cx.keep)(&key, &interval) {
        return None;
    }
    let (consequent, antecedent) = event();
    let derivation = Derivation {
        conclusion: ConditionalEvent::new_unchecked(consequent, antecedent),
        interval,
        step: Step::Rule {
            rule,
            premises: premises.iter().map(|p| p.derivation.clone()).collect(),
        },
    };
    Some(Candidate { key, e, derivation })
}

/// And: `B|A, C|A ⟹ BC|A`.
fn and(cx: &Context, i: &Entry, j: &Entry) -> Option<Candidate> {
    (i.key.h == j.key.h).then_some(())?;
    candidate(cx, RuleId::And, i.e.and(&j.e), i.key.h.clone(), &[i, j], || {
        (
            Formula::and(i.event.consequent().clone(), j.event.consequent().clone()),
            i.event.antecedent().clone(),
        )
    })
}

/// CM: `C|A, B|A ⟹ C|AB` with `i = C|A`, `j = B|A`.
fn cm(cx: &Context, i: &Entry, j: &Entry) -> Option<Candidate> {
    (i.key.h == j.key.h && !j.key.eh.is_empty() && j.key.eh != j.key.h).then_some(())?;
    candidate(cx, RuleId::Cm, i.e.clone(), j.key.eh.clone(), &[i, j], || {
        (
            i.event.consequent().clone(),
            Formula::and(i.event.antecedent().clone(), j.event.consequent().clone()),
        )
    })
}

/// Or: `C|A, C|B ⟹ C|(A∨B)`. The two consequents only need to agree where
/// both antecedents hold.
fn or(cx: &Context, i: &Entry, j: &Entry) -> Option<Candidate> {
    (i.key.h != j.key.h && i.key.eh.agrees_within(&i.key.h, &j.key.eh, &j.key.h)).then_some(())?;
    let same = i.e == j.e;
    let e = if same { i.e.clone() } else { i.key.eh.or(&j.key.eh) };
    candidate(cx, RuleId::Or, e, i.key.h.or(&j.key.h), &[i, j], || {
        let consequent = if same {
            i.event.consequent().clone()
        } else {
            Formula::or(i.event.conjunction(), j.event.conjunction())
        };
        (consequent, Formula::or(i.event.antecedent().clone(), j.event.antecedent().clone()))
    })
}

/// Cut: `C|AB, B|A ⟹ C|A` with `i = C|AB`, `j = B|A`.
fn cut(cx: &Context, i: &Entry, j: &Entry) -> Option<Candidate> {
    (i.key.h == j.key.eh && j.key.eh != j.key.h).then_some(())?;
    candidate(cx, RuleId::Cut, i.e.clone(), j.key.h.clone(), &[i, j], || {
        (i.event.consequent().clone(), j.event.antecedent().clone())
    })
}

/// dWRM: `C|A, ¬B|A ⟹ C|AB` with `i = C|A`, `j = ¬B|A`.
fn dwrm(cx: &Context, i: &Entry, j: &Entry) -> Option<Candidate> {
    let h = i.key.h.and(&j.e.not());
    (i.key.h == j.key.h && h != i.key.h).then_some(())?;
    candidate(cx, RuleId::Dwrm, i.e.clone(), h, &[i, j], || {
        (
            i.event.consequent().clone(),
            Formula::and(i.event.antecedent().clone(), Formula::negate(j.event.consequent().clone())),
        )
    })
}

/// S: `C|AB ⟹ (¬B∨C)|A`, for `A = ⊤` and for both splits of a syntactic
/// conjunction `A ∧ B`.
fn s(cx: &Context, i: &Entry, universe: &AtomUniverse) -> Vec<Candidate> {
    let h = i.event.antecedent();
    let mut splits = vec![(Formula::Top, h.clone())];
    if let Formula::And(x, y) = h {
        splits.push(((**x).clone(), (**y).clone()));
        splits.push(((**y).clone(), (**x).clone()));
    }
    splits
        .into_iter()
        .filter_map(|(a, b)| {
            let ta = universe.table(&a).ok()?;
            if ta == i.key.h {
                return None;
            }
            let e = universe.table(&b).ok()?.not().or(&i.e);
            candidate(cx, RuleId::S, e, ta, &[i], || (Formula::or(Formula::negate(b), i.event.consequent().clone()), a))
        })
        .collect()
}

/// One instance of a premise-taking chaining rule, with S on its `⊤` split.
pub(crate) fn apply(rule: RuleId, premises: &[&Entry], universe: &AtomUniverse) -> Option<Candidate> {
    let cx = &Context::new(&|_, _| true);
    match (rule, premises) {
        (RuleId::And, [i, j]) => and(cx, i, j),
        (RuleId::Cm, [i, j]) => cm(cx, i, j),
        (RuleId::Or, [i, j]) => or(cx, i, j),
        (RuleId::Cut, [i, j]) => cut(cx, i, j),
        (RuleId::Dwrm, [i, j]) => dwrm(cx, i, j),
        (RuleId::S, [i]) => s(cx, i, universe).into_iter().next().filter(|c| c.key.h.is_full()),
        _ => None,
    }
}

/// All instances with at least one premise marked `fresh`, in a fixed order.
pub(crate) fn instantiate(entries: &[&Entry], fresh: &[bool], universe: &AtomUniverse, cx: &Context) -> Vec<Candidate> {
    let mut out = Vec::new();
    for (a, ea) in entries.iter().enumerate() {
        if fresh[a] {
            out.extend(s(cx, ea, universe));
        }
    }
    for (a, ea) in entries.iter().enumerate() {
        for (b, eb) in entries.iter().enumerate() {
            if a == b || !(fresh[a] || fresh[b]) {
                continue;
            }
            if a < b {
                out.extend(and(cx, ea, eb));
                out.extend(or(cx, ea, eb));
            }
            out.extend(cm(cx, ea, eb));
            out.extend(cut(cx, ea, eb));
        }
    }
    out
}
