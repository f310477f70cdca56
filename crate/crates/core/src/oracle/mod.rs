//! Brute-force checks of the rule envelopes over explicit world distributions.
//!
//! For fixed premise values the distributions over the 8 worlds of
//! `{a, b, c}` form a polytope. Its vertices are enumerated exactly, then
//! mixed pairwise at grid resolution and at random. Along a segment the
//! conclusion value is a ratio of affine functions and hence monotone, so
//! the vertices carry the extremes and the mixtures approach the ones that
//! sit at a vertex where some antecedent has zero weight.
//!
//! This module shares no code with [`crate::lp`] or [`crate::coherence`].

mod vertex;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::logic::{self, AtomUniverse, ConditionalEvent, Formula, LogicError, TruthTable};
use crate::par::{self, Execution};
use crate::rational::{self, Rational};
use crate::rules::{Envelope, ProbInterval, RuleError, RuleId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("grid must be at least 2, got {0}")]
    GridTooSmall(usize),
    #[error("no distribution with positive antecedents gives {rule} premises the values {values}")]
    InfeasiblePremise { rule: RuleId, values: String },
    #[error("weights must be nonnegative and sum to 1")]
    InvalidWeights,
    #[error("{got} weights for {expected} worlds")]
    WeightCount { expected: usize, got: usize },
    #[error(transparent)]
    Rule(#[from] RuleError),
    #[error(transparent)]
    Logic(#[from] LogicError),
}

/// Probability weights on the worlds of an atom universe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WorldDistribution {
    universe: AtomUniverse,
    weights: Vec<Rational>,
}

impl WorldDistribution {
    pub fn new(universe: AtomUniverse, weights: Vec<Rational>) -> Result<Self, OracleError> {
        if weights.len() != universe.world_count() {
            return Err(OracleError::WeightCount {
                expected: universe.world_count(),
                got: weights.len(),
            });
        }
        let total: Rational = weights.iter().sum();
        if !total.is_one() || weights.iter().any(|w| *w < Rational::zero()) {
            return Err(OracleError::InvalidWeights);
        }
        Ok(WorldDistribution { universe, weights })
    }

    pub fn uniform(universe: AtomUniverse) -> Self {
        let n = universe.world_count();
        let w = rational::ratio(1, n as i64);
        WorldDistribution {
            weights: vec![w; n],
            universe,
        }
    }

    pub fn point_mass(universe: AtomUniverse, world: usize) -> Self {
        let mut weights = vec![Rational::zero(); universe.world_count()];
        weights[world] = Rational::one();
        WorldDistribution { universe, weights }
    }

    pub fn universe(&self) -> &AtomUniverse {
        &self.universe
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    fn mass(&self, t: &TruthTable) -> Rational {
        t.worlds().map(|w| &self.weights[w]).sum()
    }

    pub fn probability(&self, f: &Formula) -> Result<Rational, LogicError> {
        Ok(self.mass(&self.universe.table(f)?))
    }
}

/// `P(E|H)`, or `None` when `H` has zero weight.
pub fn conditional_value(d: &WorldDistribution, c: &ConditionalEvent) -> Result<Option<Rational>, LogicError> {
    let key = logic::canonical_key(c, &d.universe)?;
    let h = d.mass(&key.h);
    if h.is_zero() {
        return Ok(None);
    }
    Ok(Some(d.mass(&key.eh) / h))
}

/// Outcome of an envelope check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnvelopeReport {
    pub rule: RuleId,
    /// Premise values, as degenerate intervals for point checks.
    pub inputs: Vec<ProbInterval>,
    /// Point envelope, or interval-form output for box sweeps.
    pub formula_envelope: Envelope,
    #[serde(with = "rational::serde_string")]
    pub empirical_min: Rational,
    #[serde(with = "rational::serde_string")]
    pub empirical_max: Rational,
    pub samples: u64,
    /// Samples where some antecedent had zero weight.
    pub undefined: u64,
    pub violations: u64,
    pub sound: bool,
    /// `empirical_min − lo`.
    #[serde(with = "rational::serde_string")]
    pub gap_lo: Rational,
    /// `hi − empirical_max`.
    #[serde(with = "rational::serde_string")]
    pub gap_hi: Rational,
    /// Some vertex distribution realizes the endpoint exactly.
    pub attained_lo: bool,
    pub attained_hi: bool,
}

/// Summary statistics of the conclusion value along one premise slice.
#[derive(Debug, Clone)]
struct Tally {
    min: Option<Rational>,
    max: Option<Rational>,
    vertex_values: Vec<Rational>,
    samples: u64,
    undefined: u64,
    outside: u64,
}

impl Tally {
    fn empty() -> Self {
        Tally {
            min: None,
            max: None,
            vertex_values: Vec::new(),
            samples: 0,
            undefined: 0,
            outside: 0,
        }
    }

    fn record(&mut self, value: Option<Rational>, bound: &ProbInterval) {
        self.samples += 1;
        let Some(v) = value else {
            self.undefined += 1;
            return;
        };
        if !bound.contains(&v) {
            self.outside += 1;
        }
        if self.min.as_ref().is_none_or(|m| v < *m) {
            self.min = Some(v.clone());
        }
        if self.max.as_ref().is_none_or(|m| v > *m) {
            self.max = Some(v);
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        self.samples += other.samples;
        self.undefined += other.undefined;
        self.outside += other.outside;
        self.min = match (self.min, other.min) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        self.max = match (self.max, other.max) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (a, b) => a.or(b),
        };
        self.vertex_values.extend(other.vertex_values);
        self
    }
}

/// The quantities of one vertex that the checks need: weights of each
/// premise antecedent, and of the conclusion's `E∧H` and `H`.
#[derive(Debug, Clone)]
struct Corner {
    premise_h: Vec<Rational>,
    concl_eh: Rational,
    concl_h: Rational,
}

impl Corner {
    fn defined(&self) -> bool {
        !self.concl_h.is_zero() && self.premise_h.iter().all(|h| !h.is_zero())
    }

    fn value(&self) -> Option<Rational> {
        self.defined().then(|| &self.concl_eh / &self.concl_h)
    }

    /// Value of `t·self + (1−t)·other`.
    fn mix(&self, other: &Corner, t: &Rational) -> Option<Rational> {
        let s = Rational::one() - t;
        let lerp = |a: &Rational, b: &Rational| t * a + &s * b;
        let h = lerp(&self.concl_h, &other.concl_h);
        if h.is_zero() || self.premise_h.iter().zip(&other.premise_h).any(|(a, b)| lerp(a, b).is_zero()) {
            return None;
        }
        Some(lerp(&self.concl_eh, &other.concl_eh) / h)
    }
}

/// World tables of a rule schema over `{a, b, c}`.
struct SchemaTables {
    premises: Vec<(TruthTable, TruthTable)>,
    conclusion: (TruthTable, TruthTable),
    worlds: usize,
}

impl SchemaTables {
    fn new(rule: RuleId) -> Result<Self, LogicError> {
        let schema = rule.schema();
        let universe = AtomUniverse::new(["a", "b", "c"].map(|s| logic::Atom::new(s).expect("valid atom")), 3)?;
        let key = |c: &ConditionalEvent| logic::canonical_key(c, &universe).map(|k| (k.eh, k.h));
        Ok(SchemaTables {
            premises: schema.premises.iter().map(key).collect::<Result<_, _>>()?,
            conclusion: key(&schema.conclusion)?,
            worlds: universe.world_count(),
        })
    }

    /// Vertices of the premise slice `P(E_i|H_i) = v_i` (antecedent weights
    /// allowed to vanish).
    fn corners(&self, values: &[Rational]) -> Vec<Corner> {
        let ind = |t: &TruthTable, w: usize| if t.get(w) { Rational::one() } else { Rational::zero() };
        let mut a = vec![vec![Rational::one(); self.worlds]];
        let mut b = vec![Rational::one()];
        for ((eh, h), v) in self.premises.iter().zip(values) {
            a.push((0..self.worlds).map(|w| ind(eh, w) - v * ind(h, w)).collect());
            b.push(Rational::zero());
        }
        vertex::vertices(&a, &b, self.worlds)
            .into_iter()
            .map(|lam| {
                let mass = |t: &TruthTable| -> Rational { t.worlds().map(|w| &lam[w]).sum() };
                Corner {
                    premise_h: self.premises.iter().map(|(_, h)| mass(h)).collect(),
                    concl_eh: mass(&self.conclusion.0),
                    concl_h: mass(&self.conclusion.1),
                }
            })
            .collect()
    }
}

fn check_grid(grid: usize) -> Result<(), OracleError> {
    if grid < 2 {
        return Err(OracleError::GridTooSmall(grid));
    }
    Ok(())
}

fn render_values(values: &[Rational]) -> String {
    let parts: Vec<String> = values.iter().map(rational::to_literal).collect();
    format!("({})", parts.join(", "))
}

/// Exact vertex values, plus the mixtures at each of `steps` of every defined
/// vertex with every other vertex.
fn tally_pairs(corners: &[Corner], bound: &ProbInterval, steps: &[Rational], exec: Execution) -> Tally {
    let indices: Vec<usize> = (0..corners.len()).collect();
    par::map_reduce(
        &indices,
        exec,
        |&i| {
            let mut t = Tally::empty();
            let ci = &corners[i];
            let v = ci.value();
            if let Some(v) = &v {
                t.vertex_values.push(v.clone());
            }
            t.record(v, bound);
            if !ci.defined() {
                return t;
            }
            for (j, cj) in corners.iter().enumerate() {
                if j == i || (cj.defined() && j < i) {
                    continue;
                }
                for s in steps {
                    t.record(ci.mix(cj, s), bound);
                }
            }
            t
        },
        Tally::empty,
        Tally::merge,
    )
}

fn report(rule: RuleId, inputs: Vec<ProbInterval>, envelope: Envelope, tally: Tally) -> EnvelopeReport {
    let min = tally.min.clone().expect("defined samples present");
    let max = tally.max.clone().expect("defined samples present");
    EnvelopeReport {
        rule,
        inputs,
        gap_lo: &min - envelope.lo(),
        gap_hi: envelope.hi() - &max,
        attained_lo: tally.vertex_values.contains(envelope.lo()),
        attained_hi: tally.vertex_values.contains(envelope.hi()),
        formula_envelope: envelope,
        empirical_min: min,
        empirical_max: max,
        samples: tally.samples,
        undefined: tally.undefined,
        violations: tally.outside,
        sound: tally.outside == 0,
    }
}

/// Checks the point envelope of `rule` at the given premise values.
pub fn verify_envelope(rule: RuleId, values: &[Rational], grid: usize, seed: u64) -> Result<EnvelopeReport, OracleError> {
    verify_envelope_with(rule, values, grid, seed, Execution::default())
}

pub fn verify_envelope_with(rule: RuleId, values: &[Rational], grid: usize, seed: u64, exec: Execution) -> Result<EnvelopeReport, OracleError> {
    check_grid(grid)?;
    let envelope = rule.envelope(values)?;
    let tables = SchemaTables::new(rule)?;
    let corners = tables.corners(values);
    let infeasible = || OracleError::InfeasiblePremise {
        rule,
        values: render_values(values),
    };
    if !corners.iter().any(Corner::defined) {
        return Err(infeasible());
    }

    let steps: Vec<Rational> = (1..grid).map(|k| rational::ratio(k as i64, grid as i64)).collect();
    let mut tally = tally_pairs(&corners, &envelope, &steps, exec);

    // Seeded mixtures of three vertices with integer weights in 1..=grid.
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..4 * grid {
        let picks: Vec<(usize, u64)> = (0..3).map(|_| (rng.gen_range(0..corners.len()), rng.gen_range(1..=grid as u64))).collect();
        let total: u64 = picks.iter().map(|p| p.1).sum();
        let mut mix = Corner {
            premise_h: vec![Rational::zero(); tables.premises.len()],
            concl_eh: Rational::zero(),
            concl_h: Rational::zero(),
        };
        for (i, w) in picks {
            let w = rational::ratio(w as i64, total as i64);
            let c = &corners[i];
            for (m, h) in mix.premise_h.iter_mut().zip(&c.premise_h) {
                *m += &w * h;
            }
            mix.concl_eh += &w * &c.concl_eh;
            mix.concl_h += &w * &c.concl_h;
        }
        tally.record(mix.value(), &envelope);
    }

    let inputs = values.iter().map(|v| ProbInterval::checked(v.clone(), v.clone())).collect();
    Ok(report(rule, inputs, envelope, tally))
}

fn axis(i: &ProbInterval, grid: usize) -> Vec<Rational> {
    if i.lo() == i.hi() {
        return vec![i.lo().clone()];
    }
    let width = i.hi() - i.lo();
    (0..=grid).map(|k| i.lo() + &width * rational::ratio(k as i64, grid as i64)).collect()
}

/// Sweeps the premise box at grid resolution and compares the union of the
/// observed conclusion values with the interval form of `rule`.
pub fn verify_interval_rule(rule: RuleId, premises: &[ProbInterval], grid: usize, exec: Execution) -> Result<EnvelopeReport, OracleError> {
    check_grid(grid)?;
    let output = rule.propagate(premises)?;
    let tables = SchemaTables::new(rule)?;

    let mut cells: Vec<Vec<Rational>> = vec![Vec::new()];
    for p in premises {
        let ax = axis(p, grid);
        cells = cells
            .into_iter()
            .flat_map(|prefix| {
                ax.iter().map(move |x| {
                    let mut c = prefix.clone();
                    c.push(x.clone());
                    c
                })
            })
            .collect();
    }

    // Per cell: vertex values and the nearest grid mixture toward each vertex.
    let near = [rational::ratio(1, grid as i64)];
    let tally = par::map_reduce(
        &cells,
        exec,
        |values| {
            let corners = tables.corners(values);
            tally_pairs(&corners, &output, &near, Execution::Sequential)
        },
        Tally::empty,
        Tally::merge,
    );
    if tally.min.is_none() {
        return Err(OracleError::InfeasiblePremise {
            rule,
            values: premises.iter().map(ToString::to_string).collect::<Vec<_>>().join(" × "),
        });
    }
    Ok(report(rule, premises.to_vec(), output, tally))
}
