//! Inference rules of System P (and dWRM from P⁺) as bound propagators.
//!
//! Each two-premise rule has a *point envelope* `(x, y) -> [z', z'']`, the
//! exact range of coherent values of the conclusion given precise premise
//! values, and an *interval form* `[α1,β1] × [α2,β2] -> [α3,β3]` obtained by
//! evaluating the envelope at the extremal corners of the premise box.

mod forms;
mod schema;

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::logic::LogicError;
use crate::rational::{self, Rational};

pub use forms::*;
pub use schema::RuleSchema;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleError {
    #[error("invalid probability interval [{lo}, {hi}]")]
    InvalidInterval { lo: Rational, hi: Rational },
    #[error("value {0} is outside [0, 1]")]
    OutOfRange(Rational),
    #[error("`{premise}` does not entail `{conclusion}`")]
    NotEntailed { premise: String, conclusion: String },
    #[error("`{0}` and `{1}` are not equivalent")]
    NotEquivalent(String, String),
    #[error("{rule} is undefined at ε = ({e1}, {e2})")]
    Degenerate { rule: RuleId, e1: Rational, e2: Rational },
    #[error("{rule} takes {expected} premise(s), got {got}")]
    Arity { rule: RuleId, expected: usize, got: usize },
    #[error("{0} has no ε-form")]
    NoEpsilonForm(RuleId),
    #[error(transparent)]
    Logic(#[from] LogicError),
}

/// Closed interval `[lo, hi] ⊆ [0, 1]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawInterval", into = "RawInterval")]
pub struct ProbInterval {
    lo: Rational,
    hi: Rational,
}

/// Exact coherent range `[z', z'']` of a conclusion for precise premises.
pub type Envelope = ProbInterval;

#[derive(Serialize, Deserialize)]
struct RawInterval {
    #[serde(with = "rational::serde_string")]
    lo: Rational,
    #[serde(with = "rational::serde_string")]
    hi: Rational,
}

impl TryFrom<RawInterval> for ProbInterval {
    type Error = RuleError;

    fn try_from(raw: RawInterval) -> Result<Self, Self::Error> {
        ProbInterval::new(raw.lo, raw.hi)
    }
}

impl From<ProbInterval> for RawInterval {
    fn from(i: ProbInterval) -> Self {
        RawInterval { lo: i.lo, hi: i.hi }
    }
}

impl ProbInterval {
    pub fn new(lo: Rational, hi: Rational) -> Result<Self, RuleError> {
        if !rational::is_probability(&lo) || !rational::is_probability(&hi) || lo > hi {
            return Err(RuleError::InvalidInterval { lo, hi });
        }
        Ok(ProbInterval { lo, hi })
    }

    /// Crate-internal constructor for values already known to be valid.
    pub(crate) fn checked(lo: Rational, hi: Rational) -> Self {
        debug_assert!(rational::is_probability(&lo) && rational::is_probability(&hi) && lo <= hi, "[{lo}, {hi}]");
        ProbInterval { lo, hi }
    }

    pub fn point(p: Rational) -> Result<Self, RuleError> {
        Self::new(p.clone(), p)
    }

    pub fn unit() -> Self {
        ProbInterval {
            lo: Rational::zero(),
            hi: Rational::one(),
        }
    }

    pub fn certain() -> Self {
        ProbInterval {
            lo: Rational::one(),
            hi: Rational::one(),
        }
    }

    /// `[1 − ε, 1]`.
    pub fn from_eps(eps: Rational) -> Result<Self, RuleError> {
        if !rational::is_probability(&eps) {
            return Err(RuleError::OutOfRange(eps));
        }
        Ok(ProbInterval {
            lo: Rational::one() - eps,
            hi: Rational::one(),
        })
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    /// `1 − lo`, the ε of a lower bound.
    pub fn eps(&self) -> Rational {
        Rational::one() - &self.lo
    }

    pub fn is_vacuous(&self) -> bool {
        self.lo.is_zero() && self.hi.is_one()
    }

    pub fn contains(&self, p: &Rational) -> bool {
        self.lo <= *p && *p <= self.hi
    }

    pub fn is_subset(&self, other: &ProbInterval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn intersect(&self, other: &ProbInterval) -> Option<ProbInterval> {
        let lo = (&self.lo).max(&other.lo).clone();
        let hi = (&self.hi).min(&other.hi).clone();
        (lo <= hi).then_some(ProbInterval { lo, hi })
    }

    pub fn intersects(&self, other: &ProbInterval) -> bool {
        self.intersect(other).is_some()
    }

    /// `[lo ≈ dec, hi ≈ dec]` for terminal output.
    pub fn display_both(&self) -> String {
        format!("[{}, {}] ≈ [{}, {}]", rational::to_exact(&self.lo), rational::to_exact(&self.hi), rational::to_decimal(&self.lo, 6), rational::to_decimal(&self.hi, 6))
    }
}

impl fmt::Display for ProbInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RuleId {
    Reflexivity,
    Lle,
    Rw,
    And,
    Cm,
    Or,
    Cut,
    S,
    Dwrm,
}

impl RuleId {
    pub const ALL: [RuleId; 9] = [
        RuleId::Reflexivity,
        RuleId::Lle,
        RuleId::Rw,
        RuleId::And,
        RuleId::Cm,
        RuleId::Or,
        RuleId::Cut,
        RuleId::S,
        RuleId::Dwrm,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RuleId::Reflexivity => "reflexivity",
            RuleId::Lle => "lle",
            RuleId::Rw => "rw",
            RuleId::And => "and",
            RuleId::Cm => "cm",
            RuleId::Or => "or",
            RuleId::Cut => "cut",
            RuleId::S => "s",
            RuleId::Dwrm => "dwrm",
        }
    }

    pub fn title(self) -> &'static str {
        match self {
            RuleId::Reflexivity => "Reflexivity",
            RuleId::Lle => "LLE",
            RuleId::Rw => "RW",
            RuleId::And => "And",
            RuleId::Cm => "CM",
            RuleId::Or => "Or",
            RuleId::Cut => "Cut",
            RuleId::S => "S",
            RuleId::Dwrm => "dWRM",
        }
    }

    pub fn arity(self) -> usize {
        match self {
            RuleId::Reflexivity => 0,
            RuleId::Lle | RuleId::Rw | RuleId::S => 1,
            RuleId::And | RuleId::Cm | RuleId::Or | RuleId::Cut | RuleId::Dwrm => 2,
        }
    }

    /// Interval form on the rule's premises, in schema order.
    ///
    /// RW and LLE are applied to their canonical schema instances, where the
    /// side condition holds.
    pub fn propagate(self, premises: &[ProbInterval]) -> Result<ProbInterval, RuleError> {
        self.check_arity(premises.len())?;
        Ok(match self {
            RuleId::Reflexivity => reflexivity(),
            RuleId::Lle => premises[0].clone(),
            RuleId::Rw | RuleId::S => s_rule(&premises[0]),
            RuleId::And => and_rule(&premises[0], &premises[1]),
            RuleId::Cm => cm_rule(&premises[0], &premises[1]),
            RuleId::Or => or_rule(&premises[0], &premises[1]),
            RuleId::Cut => cut_rule(&premises[0], &premises[1]),
            RuleId::Dwrm => dwrm_rule(&premises[0], &premises[1]),
        })
    }

    /// Point envelope for precise premise values.
    pub fn envelope(self, values: &[Rational]) -> Result<Envelope, RuleError> {
        self.check_arity(values.len())?;
        if let Some(v) = values.iter().find(|v| !rational::is_probability(v)) {
            return Err(RuleError::OutOfRange(v.clone()));
        }
        Ok(match self {
            RuleId::Reflexivity => reflexivity(),
            RuleId::Lle => ProbInterval::checked(values[0].clone(), values[0].clone()),
            RuleId::Rw | RuleId::S => ProbInterval::checked(values[0].clone(), Rational::one()),
            RuleId::And => and_point(&values[0], &values[1]),
            RuleId::Cm => cm_point(&values[0], &values[1]),
            RuleId::Or => or_point(&values[0], &values[1]),
            RuleId::Cut => cut_point(&values[0], &values[1]),
            RuleId::Dwrm => dwrm_point(&values[0], &values[1]),
        })
    }

    /// ε of the conclusion for premises `[1 − e1, 1]`, `[1 − e2, 1]`.
    pub fn eps(self, e1: &Rational, e2: &Rational) -> Result<Rational, RuleError> {
        for e in [e1, e2] {
            if !rational::is_probability(e) {
                return Err(RuleError::OutOfRange(e.clone()));
            }
        }
        match self {
            RuleId::And => Ok(eps_and(e1, e2)),
            RuleId::Cm => eps_cm(e1, e2),
            RuleId::Or => eps_or(e1, e2),
            RuleId::Cut => Ok(eps_cut(e1, e2)),
            other => Err(RuleError::NoEpsilonForm(other)),
        }
    }

    fn check_arity(self, got: usize) -> Result<(), RuleError> {
        if got != self.arity() {
            return Err(RuleError::Arity {
                rule: self,
                expected: self.arity(),
                got,
            });
        }
        Ok(())
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.title())
    }
}

impl FromStr for RuleId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.to_ascii_lowercase();
        RuleId::ALL
            .into_iter()
            .find(|r| r.name() == lower)
            .ok_or_else(|| format!("unknown rule `{s}` (expected one of: reflexivity, lle, rw, and, cm, or, cut, s, dwrm)"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    #[test]
    fn interval_validation() {
        assert!(ProbInterval::new(ratio(1, 2), ratio(1, 3)).is_err());
        assert!(ProbInterval::new(ratio(-1, 2), ratio(1, 3)).is_err());
        assert!(ProbInterval::new(ratio(0, 1), ratio(4, 3)).is_err());
        assert!(ProbInterval::new(ratio(1, 3), ratio(1, 3)).is_ok());
    }

    #[test]
    fn intersection() {
        let a = ProbInterval::new(ratio(2, 10), ratio(6, 10)).unwrap();
        let b = ProbInterval::new(ratio(5, 10), ratio(9, 10)).unwrap();
        assert_eq!(a.intersect(&b).unwrap(), ProbInterval::new(ratio(1, 2), ratio(3, 5)).unwrap());
        let c = ProbInterval::new(ratio(7, 10), ratio(8, 10)).unwrap();
        assert!(a.intersect(&c).is_none());
    }

    #[test]
    fn rule_names_round_trip() {
        for r in RuleId::ALL {
            assert_eq!(r.name().parse::<RuleId>().unwrap(), r);
        }
        assert!("monotonicity".parse::<RuleId>().is_err());
    }

    #[test]
    fn serde_form() {
        let i = ProbInterval::new(ratio(18, 25), ratio(1, 1)).unwrap();
        let json = serde_json::to_string(&i).unwrap();
        assert_eq!(json, r#"{"lo":"18/25","hi":"1"}"#);
        assert_eq!(serde_json::from_str::<ProbInterval>(&json).unwrap(), i);
        assert!(serde_json::from_str::<ProbInterval>(r#"{"lo":"1","hi":"1/2"}"#).is_err());
    }

    #[test]
    fn arity_errors() {
        assert!(matches!(RuleId::And.propagate(&[ProbInterval::unit()]), Err(RuleError::Arity { .. })));
        assert!(matches!(RuleId::S.eps(&ratio(1, 10), &ratio(1, 10)), Err(RuleError::NoEpsilonForm(_))));
    }
}
