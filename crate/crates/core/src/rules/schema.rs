use super::RuleId;
use crate::logic::{ConditionalEvent, Formula};

/// A rule instance over the logically independent atoms `a`, `b`, `c`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleSchema {
    pub rule: RuleId,
    pub premises: Vec<ConditionalEvent>,
    pub conclusion: ConditionalEvent,
}

fn ce(e: Formula, h: Formula) -> ConditionalEvent {
    ConditionalEvent::new(e, h).expect("schema antecedents are satisfiable")
}

impl RuleId {
    /// Premises in the order expected by [`RuleId::propagate`].
    pub fn schema(self) -> RuleSchema {
        let a = Formula::atom("a");
        let b = Formula::atom("b");
        let c = Formula::atom("c");
        let ab = Formula::and(a.clone(), b.clone());
        let (premises, conclusion) = match self {
            RuleId::Reflexivity => (vec![], ce(a.clone(), a)),
            RuleId::Lle => (vec![ce(c.clone(), a.clone())], ce(c, Formula::not(Formula::not(a)))),
            RuleId::Rw => (vec![ce(b.clone(), a.clone())], ce(Formula::or(b, c), a)),
            RuleId::And => (
                vec![ce(b.clone(), a.clone()), ce(c.clone(), a.clone())],
                ce(Formula::and(b, c), a),
            ),
            RuleId::Cm => (vec![ce(c.clone(), a.clone()), ce(b, a)], ce(c, ab)),
            RuleId::Or => (
                vec![ce(c.clone(), a.clone()), ce(c.clone(), b.clone())],
                ce(c, Formula::or(a, b)),
            ),
            RuleId::Cut => (vec![ce(c.clone(), ab), ce(b, a.clone())], ce(c, a)),
            RuleId::S => (vec![ce(c.clone(), ab)], ce(Formula::or(Formula::not(b), c), a)),
            RuleId::Dwrm => (vec![ce(c.clone(), a.clone()), ce(Formula::not(b), a)], ce(c, ab)),
        };
        RuleSchema {
            rule: self,
            premises,
            conclusion,
        }
    }
}
