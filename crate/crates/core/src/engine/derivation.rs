use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::logic::ConditionalEvent;
use crate::rules::{ProbInterval, RuleId};

/// Proof tree for one interval on one conditional event.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Derivation {
    pub conclusion: ConditionalEvent,
    pub interval: ProbInterval,
    pub step: Step,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Step {
    /// Knowledge-base assertion number `index` (1-based, in file order).
    Asserted { index: usize },
    /// `interval` is the rule's interval form on the premise intervals.
    Rule { rule: RuleId, premises: Vec<Arc<Derivation>> },
    /// Two derivations of the same event; `interval` is their intersection,
    /// with the lower end from `lower` and the upper end from `upper`.
    Meet { lower: Arc<Derivation>, upper: Arc<Derivation> },
}

impl Derivation {
    pub fn asserted(index: usize, conclusion: ConditionalEvent, interval: ProbInterval) -> Self {
        Derivation {
            conclusion,
            interval,
            step: Step::Asserted { index },
        }
    }

    pub fn rule(rule: RuleId, conclusion: ConditionalEvent, premises: Vec<Arc<Derivation>>) -> Self {
        let intervals: Vec<ProbInterval> = premises.iter().map(|p| p.interval.clone()).collect();
        let interval = rule.propagate(&intervals).expect("premise count matches rule arity");
        Derivation {
            conclusion,
            interval,
            step: Step::Rule { rule, premises },
        }
    }

    /// Number of rule applications along the longest branch.
    pub fn depth(&self) -> usize {
        match &self.step {
            Step::Asserted { .. } => 0,
            Step::Rule { premises, .. } => 1 + premises.iter().map(|p| p.depth()).max().unwrap_or(0),
            Step::Meet { lower, upper } => lower.depth().max(upper.depth()),
        }
    }

    /// Compact structure such as `RW(And(Cut(3, 2), 1))`, with asserted
    /// leaves shown by their index.
    pub fn shape(&self) -> String {
        match &self.step {
            Step::Asserted { index } => index.to_string(),
            Step::Rule { rule, premises } => {
                let inner: Vec<String> = premises.iter().map(|p| p.shape()).collect();
                if inner.is_empty() {
                    rule.title().to_string()
                } else {
                    format!("{}({})", rule.title(), inner.join(", "))
                }
            }
            Step::Meet { lower, upper } => format!("Meet({}, {})", lower.shape(), upper.shape()),
        }
    }

    /// Rules used, outermost first in depth-first order.
    pub fn rules(&self) -> Vec<RuleId> {
        let mut out = Vec::new();
        self.collect_rules(&mut out);
        out
    }

    fn collect_rules(&self, out: &mut Vec<RuleId>) {
        match &self.step {
            Step::Asserted { .. } => {}
            Step::Rule { rule, premises } => {
                out.push(*rule);
                premises.iter().for_each(|p| p.collect_rules(out));
            }
            Step::Meet { lower, upper } => {
                lower.collect_rules(out);
                upper.collect_rules(out);
            }
        }
    }

    fn render(&self, f: &mut fmt::Formatter<'_>, prefix: &str, last: bool, root: bool) -> fmt::Result {
        let (branch, child_prefix) = if root {
            (String::new(), String::new())
        } else if last {
            (format!("{prefix}└─ "), format!("{prefix}   "))
        } else {
            (format!("{prefix}├─ "), format!("{prefix}│  "))
        };
        let how = match &self.step {
            Step::Asserted { index } => format!("asserted #{index}"),
            Step::Rule { rule, .. } => rule.title().to_string(),
            Step::Meet { .. } => "meet".to_string(),
        };
        writeln!(f, "{branch}{}  {}  ({how})", self.conclusion, self.interval.display_both())?;
        let children: Vec<&Arc<Derivation>> = match &self.step {
            Step::Asserted { .. } => vec![],
            Step::Rule { premises, .. } => premises.iter().collect(),
            Step::Meet { lower, upper } => vec![lower, upper],
        };
        let n = children.len();
        for (k, c) in children.into_iter().enumerate() {
            c.render(f, &child_prefix, k + 1 == n, false)?;
        }
        Ok(())
    }
}

/// Indented tree, one node per line.
impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.render(f, "", true, true)
    }
}
