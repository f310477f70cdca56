use num_traits::One;

use super::CoherenceError;
use crate::logic::ConditionalEvent;
use crate::rational::{self, Rational};
use crate::rules::ProbInterval;

/// Precise values `p_i = P(E_i|H_i)` on a family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointAssessment {
    family: Vec<ConditionalEvent>,
    values: Vec<Rational>,
}

impl PointAssessment {
    pub fn new(family: Vec<ConditionalEvent>, values: Vec<Rational>) -> Result<Self, CoherenceError> {
        if family.len() != values.len() {
            return Err(CoherenceError::LengthMismatch {
                family: family.len(),
                values: values.len(),
            });
        }
        if let Some(v) = values.iter().find(|v| !rational::is_probability(v)) {
            return Err(CoherenceError::OutOfRange(v.clone()));
        }
        Ok(PointAssessment { family, values })
    }

    /// Every event assessed at 1.
    pub fn certain(family: Vec<ConditionalEvent>) -> Self {
        let values = vec![Rational::one(); family.len()];
        PointAssessment { family, values }
    }

    pub fn family(&self) -> &[ConditionalEvent] {
        &self.family
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.family.len()
    }

    pub fn is_empty(&self) -> bool {
        self.family.is_empty()
    }

    pub fn to_intervals(&self) -> IntervalAssessment {
        IntervalAssessment {
            family: self.family.clone(),
            intervals: self
                .values
                .iter()
                .map(|v| ProbInterval::checked(v.clone(), v.clone()))
                .collect(),
        }
    }
}

/// Lower and upper bounds `α_i ≤ P(E_i|H_i) ≤ β_i` on a family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalAssessment {
    family: Vec<ConditionalEvent>,
    intervals: Vec<ProbInterval>,
}

impl IntervalAssessment {
    pub fn new(family: Vec<ConditionalEvent>, intervals: Vec<ProbInterval>) -> Result<Self, CoherenceError> {
        if family.len() != intervals.len() {
            return Err(CoherenceError::LengthMismatch {
                family: family.len(),
                values: intervals.len(),
            });
        }
        Ok(IntervalAssessment { family, intervals })
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (ConditionalEvent, ProbInterval)>) -> Self {
        let (family, intervals) = pairs.into_iter().unzip();
        IntervalAssessment { family, intervals }
    }

    pub fn family(&self) -> &[ConditionalEvent] {
        &self.family
    }

    pub fn intervals(&self) -> &[ProbInterval] {
        &self.intervals
    }

    pub fn len(&self) -> usize {
        self.family.len()
    }

    pub fn is_empty(&self) -> bool {
        self.family.is_empty()
    }

    pub fn push(&mut self, event: ConditionalEvent, interval: ProbInterval) {
        self.family.push(event);
        self.intervals.push(interval);
    }

    pub fn with(&self, event: ConditionalEvent, interval: ProbInterval) -> Self {
        let mut a = self.clone();
        a.push(event, interval);
        a
    }
}

/// Image of one constituent: `1` where it makes `E_i|H_i` true, `0` where
/// false, and the assessed `p_i` where the event is void.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QPoint {
    pub coordinates: Vec<Rational>,
}
