//! Replaying a given derivation structure on the asserted entries.
//!
//! A plan uses the same syntax that [`Derivation::shape`] prints, e.g.
//! `RW(And(S(And(Cut(3, 2), 1)), S(5)))`. Numbers name assertions in file
//! order. S takes the `⊤` split of its premise's antecedent. RW, LLE and
//! Reflexivity may only appear at the root, where they move to the target.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use super::{matching, Derivation, EngineError, Entry, KnowledgeBase};
use crate::logic::{self, ConditionalEvent};
use crate::rules::RuleId;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Plan {
    Asserted(usize),
    Rule(RuleId, Vec<Plan>),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("plan: {0}")]
pub struct PlanError(pub String);

impl FromStr for Plan {
    type Err = PlanError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut rest = s.trim();
        let plan = parse(&mut rest)?;
        if !rest.trim().is_empty() {
            return Err(PlanError(format!("unexpected `{}`", rest.trim())));
        }
        Ok(plan)
    }
}

fn parse(rest: &mut &str) -> Result<Plan, PlanError> {
    *rest = rest.trim_start();
    let end = rest.find(|c: char| !c.is_ascii_alphanumeric()).unwrap_or(rest.len());
    let (word, tail) = rest.split_at(end);
    if word.is_empty() {
        return Err(PlanError(format!("expected a rule or an assertion number at `{rest}`")));
    }
    *rest = tail;
    if let Ok(n) = word.parse::<usize>() {
        return Ok(Plan::Asserted(n));
    }
    let rule: RuleId = word.parse().map_err(|_| PlanError(format!("unknown rule `{word}`")))?;
    let mut args = Vec::new();
    *rest = rest.trim_start();
    if let Some(t) = rest.strip_prefix('(') {
        *rest = t;
        loop {
            args.push(parse(rest)?);
            *rest = rest.trim_start();
            if let Some(t) = rest.strip_prefix(',') {
                *rest = t;
            } else if let Some(t) = rest.strip_prefix(')') {
                *rest = t;
                break;
            } else {
                return Err(PlanError(format!("expected `,` or `)` at `{rest}`")));
            }
        }
    }
    if args.len() != rule.arity() {
        return Err(PlanError(format!("{} takes {} premises, got {}", rule.title(), rule.arity(), args.len())));
    }
    Ok(Plan::Rule(rule, args))
}

impl fmt::Display for Plan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Plan::Asserted(n) => write!(f, "{n}"),
            Plan::Rule(rule, args) if args.is_empty() => write!(f, "{}", rule.title()),
            Plan::Rule(rule, args) => {
                write!(f, "{}(", rule.title())?;
                for (k, a) in args.iter().enumerate() {
                    if k > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
        }
    }
}

impl KnowledgeBase {
    /// Evaluates `plan` on the asserted intervals and returns the derivation
    /// of `target` it yields.
    pub fn replay(&self, plan: &Plan, target: &ConditionalEvent) -> Result<Derivation, EngineError> {
        let key = logic::canonical_key(target, &self.universe)?;
        let d = match plan {
            Plan::Rule(RuleId::Reflexivity, _) => {
                if key.eh != key.h {
                    return Err(PlanError(format!("Reflexivity does not conclude `{target}`")).into());
                }
                Derivation::rule(RuleId::Reflexivity, target.clone(), vec![])
            }
            Plan::Rule(rule @ (RuleId::Rw | RuleId::Lle), args) => {
                let inner = self.entry(&args[0])?;
                let fits = inner.key.h == key.h
                    && match rule {
                        RuleId::Rw => inner.key.eh.is_subset(&key.eh),
                        _ => inner.key.eh == key.eh,
                    };
                if !fits {
                    return Err(PlanError(format!("{} cannot move `{}` to `{target}`", rule.title(), inner.event)).into());
                }
                Derivation::rule(*rule, target.clone(), vec![inner.derivation])
            }
            _ => {
                let e = self.entry(plan)?;
                if e.key != key {
                    return Err(PlanError(format!("plan concludes `{}`, not `{target}`", e.event)).into());
                }
                Derivation {
                    conclusion: target.clone(),
                    ..(*e.derivation).clone()
                }
            }
        };
        Ok(d)
    }

    fn entry(&self, plan: &Plan) -> Result<Entry, EngineError> {
        let derivation = match plan {
            Plan::Asserted(n) => {
                let (event, interval) = n
                    .checked_sub(1)
                    .and_then(|k| self.asserted.get(k))
                    .ok_or_else(|| PlanError(format!("no assertion #{n}")))?;
                Derivation::asserted(*n, event.clone(), interval.clone())
            }
            Plan::Rule(rule, args) => {
                let premises = args.iter().map(|a| self.entry(a)).collect::<Result<Vec<_>, _>>()?;
                let refs: Vec<&Entry> = premises.iter().collect();
                let cand = matching::apply(*rule, &refs, &self.universe).ok_or_else(|| {
                    let shown: Vec<String> = premises.iter().map(|p| format!("`{}`", p.event)).collect();
                    PlanError(format!("{} does not apply to {}", rule.title(), shown.join(", ")))
                })?;
                cand.derivation
            }
        };
        let key = logic::canonical_key(&derivation.conclusion, &self.universe)?;
        let e = self.universe.table(derivation.conclusion.consequent())?;
        Ok(Entry {
            event: derivation.conclusion.clone(),
            e,
            key,
            derivation: Arc::new(derivation),
        })
    }
}
