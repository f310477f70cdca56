//! Coherence of conditional probability assessments over world weights.
//!
//! Every question is reduced to linear systems over nonnegative weights `λ_w`
//! on the worlds where at least one active antecedent holds. An interval
//! `[α_i, β_i]` on `E_i|H_i` becomes
//!
//! ```text
//! α_i · λ(H_i) ≤ λ(E_i H_i) ≤ β_i · λ(H_i)
//! ```
//!
//! Antecedents that receive zero weight in every solution are checked again
//! on their own, in a smaller system. This sequence of layers is what lets
//! conditioning events of probability zero be treated exactly.

mod assessment;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::logic::{self, AtomUniverse, ConditionalEvent, LogicError, TruthTable, DEFAULT_ATOM_LIMIT};
use crate::lp::{LinearProgram, LpOutcome, Relation, Sense};
use crate::rational::Rational;
use crate::rules::ProbInterval;

pub use assessment::{IntervalAssessment, PointAssessment, QPoint};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoherenceError {
    #[error(transparent)]
    Logic(#[from] LogicError),
    #[error("{family} events but {values} values")]
    LengthMismatch { family: usize, values: usize },
    #[error("value {0} is outside [0, 1]")]
    OutOfRange(Rational),
    #[error("the assessment is not g-coherent")]
    Incoherent,
    #[error("the knowledge base is not p-consistent")]
    InconsistentKb,
    #[error("point has {got} coordinates, expected {expected}")]
    Dimension { expected: usize, got: usize },
}

/// Coherence checks with a configurable atom limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Coherence {
    pub atom_limit: usize,
}

impl Default for Coherence {
    fn default() -> Self {
        Coherence {
            atom_limit: DEFAULT_ATOM_LIMIT,
        }
    }
}

/// Truth tables of a family (and optionally a target) over a shared universe.
struct Frame {
    h: Vec<TruthTable>,
    eh: Vec<TruthTable>,
    bounds: Vec<ProbInterval>,
}

enum Normalise {
    /// `Σ λ = 1`.
    Total,
    /// `λ(H_t) = 1`; the remaining rows are homogeneous.
    Antecedent(usize),
}

impl Frame {
    fn build(events: &[&ConditionalEvent], bounds: Vec<ProbInterval>, limit: usize) -> Result<Frame, LogicError> {
        let formulas = events.iter().flat_map(|c| [c.consequent(), c.antecedent()]);
        let universe = AtomUniverse::spanning(formulas, limit)?;
        let mut h = Vec::with_capacity(events.len());
        let mut eh = Vec::with_capacity(events.len());
        for c in events {
            let key = logic::canonical_key(c, &universe)?;
            h.push(key.h);
            eh.push(key.eh);
        }
        Ok(Frame { h, eh, bounds })
    }

    fn world_count(&self) -> usize {
        self.h.first().map_or(1, TruthTable::len)
    }

    /// Worlds satisfying some antecedent in `active`, minus those in `exclude`.
    fn support(&self, active: &[usize], exclude: Option<usize>) -> Vec<usize> {
        let mut set = TruthTable::empty(self.world_count());
        for &i in active {
            set = set.or(&self.h[i]);
        }
        if let Some(t) = exclude {
            set = set.and(&self.h[t].not());
        }
        set.worlds().collect()
    }

    fn indicator(&self, table: &TruthTable, worlds: &[usize]) -> Vec<Rational> {
        worlds
            .iter()
            .map(|&w| if table.get(w) { Rational::one() } else { Rational::zero() })
            .collect()
    }

    fn system(&self, active: &[usize], worlds: &[usize], norm: Normalise) -> LinearProgram {
        let mut lp = LinearProgram::new(worlds.len());
        match norm {
            Normalise::Total => lp.add_row(vec![Rational::one(); worlds.len()], Relation::Eq, Rational::one()),
            Normalise::Antecedent(t) => lp.add_row(self.indicator(&self.h[t], worlds), Relation::Eq, Rational::one()),
        }
        for &i in active {
            let b = &self.bounds[i];
            if b.is_vacuous() {
                continue;
            }
            let eh = self.indicator(&self.eh[i], worlds);
            let h = self.indicator(&self.h[i], worlds);
            let row = |p: &Rational| eh.iter().zip(&h).map(|(e, h)| e - p * h).collect::<Vec<_>>();
            if b.lo() == b.hi() {
                lp.add_row(row(b.lo()), Relation::Eq, Rational::zero());
            } else {
                if !b.lo().is_zero() {
                    lp.add_row(row(b.lo()), Relation::Ge, Rational::zero());
                }
                if !b.hi().is_one() {
                    lp.add_row(row(b.hi()), Relation::Le, Rational::zero());
                }
            }
        }
        lp
    }

    fn antecedent_weight(&self, i: usize, worlds: &[usize], point: &[Rational]) -> Rational {
        worlds
            .iter()
            .zip(point)
            .filter(|(&w, _)| self.h[i].get(w))
            .map(|(_, x)| x.clone())
            .sum()
    }

    /// Indices of `candidates` whose antecedent has zero weight in every
    /// solution of `lp`, given one feasible `point`.
    fn forced_zero(&self, lp: &LinearProgram, worlds: &[usize], point: &[Rational], candidates: &[usize]) -> Vec<usize> {
        let mut remaining: Vec<usize> = candidates
            .iter()
            .copied()
            .filter(|&i| self.antecedent_weight(i, worlds, point).is_zero())
            .collect();
        while !remaining.is_empty() {
            let objective: Vec<Rational> = worlds
                .iter()
                .map(|&w| Rational::from_integer(remaining.iter().filter(|&&i| self.h[i].get(w)).count().into()))
                .collect();
            let LpOutcome::Optimal { value, point } = lp.optimize(&objective, Sense::Maximize) else {
                unreachable!("bounded feasible system")
            };
            if value.is_zero() {
                break;
            }
            remaining.retain(|&i| self.antecedent_weight(i, worlds, &point).is_zero());
        }
        remaining
    }

    /// Layered g-coherence check of the sub-assessment on `active`.
    fn gcoherent(&self, active: &[usize]) -> bool {
        let mut active = active.to_vec();
        while !active.is_empty() {
            let worlds = self.support(&active, None);
            let lp = self.system(&active, &worlds, Normalise::Total);
            let Some(point) = lp.feasible_point() else {
                return false;
            };
            active = self.forced_zero(&lp, &worlds, &point, &active);
        }
        true
    }

    /// `[p∘, p^∘]` for the event at index `target`, given that `active` is
    /// g-coherent.
    fn tight(&self, active: &[usize], target: usize) -> ProbInterval {
        let mut lo: Option<Rational> = None;
        let mut hi: Option<Rational> = None;
        let mut merge = |l: Rational, h: Rational| {
            lo = Some(lo.take().map_or(l.clone(), |x| x.min(l)));
            hi = Some(hi.take().map_or(h.clone(), |x| x.max(h)));
        };

        let mut active = active.to_vec();
        loop {
            // Target antecedent with positive weight: scale so that λ(H_t) = 1.
            let mut with_target = active.clone();
            with_target.push(target);
            let worlds = self.support(&with_target, None);
            let lp = self.system(&active, &worlds, Normalise::Antecedent(target));
            let objective = self.indicator(&self.eh[target], &worlds);
            if let (Some(l), Some(h)) = (
                lp.optimize(&objective, Sense::Minimize).value().cloned(),
                lp.optimize(&objective, Sense::Maximize).value().cloned(),
            ) {
                merge(l, h);
            }

            // Target antecedent with zero weight in this layer.
            if active.is_empty() {
                break;
            }
            let worlds = self.support(&active, Some(target));
            let lp = self.system(&active, &worlds, Normalise::Total);
            let Some(point) = lp.feasible_point() else {
                break;
            };
            active = self.forced_zero(&lp, &worlds, &point, &active);
        }
        let (lo, hi) = (lo.expect("some layer admits the target"), hi.expect("set with lo"));
        ProbInterval::checked(lo, hi)
    }
}

impl Coherence {
    pub fn new(atom_limit: usize) -> Self {
        Coherence { atom_limit }
    }

    /// Constituent images for the worlds where at least one antecedent holds,
    /// in world order.
    pub fn q_points(&self, assessment: &PointAssessment) -> Result<Vec<QPoint>, CoherenceError> {
        let (universe, worlds) = logic::enumerate_constituents(assessment.family(), self.atom_limit)?;
        let keys = assessment
            .family()
            .iter()
            .map(|c| logic::canonical_key(c, &universe))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(worlds
            .iter()
            .filter(|w| !w.in_void_region())
            .map(|w| QPoint {
                coordinates: keys
                    .iter()
                    .zip(assessment.values())
                    .map(|(k, p)| match (k.h.get(w.index), k.eh.get(w.index)) {
                        (false, _) => p.clone(),
                        (true, true) => Rational::one(),
                        (true, false) => Rational::zero(),
                    })
                    .collect(),
            })
            .collect())
    }

    /// Point assessment coherence, including zero-probability antecedents.
    pub fn check_coherence(&self, assessment: &PointAssessment) -> Result<bool, CoherenceError> {
        self.check_gcoherence(&assessment.to_intervals())
    }

    pub fn check_gcoherence(&self, assessment: &IntervalAssessment) -> Result<bool, CoherenceError> {
        if assessment.is_empty() {
            return Ok(true);
        }
        let events: Vec<&ConditionalEvent> = assessment.family().iter().collect();
        let frame = Frame::build(&events, assessment.intervals().to_vec(), self.atom_limit)?;
        let all: Vec<usize> = (0..events.len()).collect();
        Ok(frame.gcoherent(&all))
    }

    /// Exact range of coherent values of `target` given the assessment.
    pub fn tight_extension(&self, assessment: &IntervalAssessment, target: &ConditionalEvent) -> Result<ProbInterval, CoherenceError> {
        let mut events: Vec<&ConditionalEvent> = assessment.family().iter().collect();
        events.push(target);
        let mut bounds = assessment.intervals().to_vec();
        bounds.push(ProbInterval::unit());
        let frame = Frame::build(&events, bounds, self.atom_limit)?;
        let n = assessment.len();
        let all: Vec<usize> = (0..n).collect();
        if !frame.gcoherent(&all) {
            return Err(CoherenceError::Incoherent);
        }
        Ok(frame.tight(&all, n))
    }

    /// All events at probability 1 is coherent.
    pub fn strict_p_consistency(&self, kb: &[ConditionalEvent]) -> Result<bool, CoherenceError> {
        self.check_coherence(&PointAssessment::certain(kb.to_vec()))
    }

    /// `kb` p-entails `target` iff adding the negated target at probability 1
    /// destroys coherence.
    pub fn p_entails(&self, kb: &[ConditionalEvent], target: &ConditionalEvent) -> Result<bool, CoherenceError> {
        if !self.strict_p_consistency(kb)? {
            return Err(CoherenceError::InconsistentKb);
        }
        let mut family = kb.to_vec();
        family.push(target.negated());
        Ok(!self.strict_p_consistency(&family)?)
    }
}

/// Exact feasibility of `p = Σ λ_h Q_h` with `λ ≥ 0`, `Σ λ_h = 1`.
pub fn in_convex_hull(p: &[Rational], points: &[QPoint]) -> Result<bool, CoherenceError> {
    if let Some(q) = points.iter().find(|q| q.coordinates.len() != p.len()) {
        return Err(CoherenceError::Dimension {
            expected: p.len(),
            got: q.coordinates.len(),
        });
    }
    let mut lp = LinearProgram::new(points.len());
    lp.add_row(vec![Rational::one(); points.len()], Relation::Eq, Rational::one());
    for (i, pi) in p.iter().enumerate() {
        let row = points.iter().map(|q| q.coordinates[i].clone()).collect();
        lp.add_row(row, Relation::Eq, pi.clone());
    }
    Ok(lp.feasible_point().is_some())
}

pub fn q_points(assessment: &PointAssessment) -> Result<Vec<QPoint>, CoherenceError> {
    Coherence::default().q_points(assessment)
}

pub fn check_coherence(assessment: &PointAssessment) -> Result<bool, CoherenceError> {
    Coherence::default().check_coherence(assessment)
}

pub fn check_gcoherence(assessment: &IntervalAssessment) -> Result<bool, CoherenceError> {
    Coherence::default().check_gcoherence(assessment)
}

pub fn tight_extension(assessment: &IntervalAssessment, target: &ConditionalEvent) -> Result<ProbInterval, CoherenceError> {
    Coherence::default().tight_extension(assessment, target)
}

pub fn strict_p_consistency(kb: &[ConditionalEvent]) -> Result<bool, CoherenceError> {
    Coherence::default().strict_p_consistency(kb)
}

pub fn p_entails(kb: &[ConditionalEvent], target: &ConditionalEvent) -> Result<bool, CoherenceError> {
    Coherence::default().p_entails(kb, target)
}
