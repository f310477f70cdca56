use num_traits::{One, Zero};

use super::{ProbInterval, RuleError, RuleId};
use crate::logic::{self, Formula};
use crate::rational::Rational;

fn one() -> Rational {
    Rational::one()
}

fn zero() -> Rational {
    Rational::zero()
}

fn env(lo: Rational, hi: Rational) -> ProbInterval {
    ProbInterval::checked(lo, hi)
}

fn debug_unit(values: &[&Rational]) {
    debug_assert!(values.iter().all(|v| crate::rational::is_probability(v)), "{values:?}");
}

/// A|A: only the value 1 is coherent.
pub fn reflexivity() -> ProbInterval {
    ProbInterval::certain()
}

/// Left logical equivalence: the bound carries over unchanged.
pub fn lle_rule(i1: &ProbInterval, a: &Formula, b: &Formula) -> Result<ProbInterval, RuleError> {
    if !logic::equivalent(a, b) {
        return Err(RuleError::NotEquivalent(a.to_string(), b.to_string()));
    }
    Ok(i1.clone())
}

/// Right weakening from `B|A` to `C|A` with `B ⊨ C`.
pub fn rw_rule(i1: &ProbInterval, b: &Formula, c: &Formula) -> Result<ProbInterval, RuleError> {
    if !logic::implies(b, c) {
        return Err(RuleError::NotEntailed {
            premise: b.to_string(),
            conclusion: c.to_string(),
        });
    }
    Ok(env(i1.lo().clone(), one()))
}

/// `B|A = x, C|A = y  ⟹  BC|A ∈ [max(0, x+y−1), min(x, y)]`.
pub fn and_point(x: &Rational, y: &Rational) -> ProbInterval {
    debug_unit(&[x, y]);
    env((x + y - one()).max(zero()), x.min(y).clone())
}

pub fn and_rule(i1: &ProbInterval, i2: &ProbInterval) -> ProbInterval {
    env(
        (i1.lo() + i2.lo() - one()).max(zero()),
        i1.hi().min(i2.hi()).clone(),
    )
}

/// Cautious monotonicity: `C|A = x, B|A = y  ⟹  C|AB`.
pub fn cm_point(x: &Rational, y: &Rational) -> ProbInterval {
    debug_unit(&[x, y]);
    let s = x + y;
    let lo = if s > one() { (s - one()) / y } else { zero() };
    let hi = if x < y { x / y } else { one() };
    env(lo, hi)
}

/// Lower bound at the corner `(α1, α2)`, upper bound at `(β1, α2)`.
pub fn cm_rule(i1: &ProbInterval, i2: &ProbInterval) -> ProbInterval {
    let lo = cm_point(i1.lo(), i2.lo()).lo().clone();
    let hi = cm_point(i1.hi(), i2.lo()).hi().clone();
    env(lo, hi)
}

/// `C|A = x, C|B = y  ⟹  C|(A∨B)`.
pub fn or_point(x: &Rational, y: &Rational) -> ProbInterval {
    debug_unit(&[x, y]);
    let xy = x * y;
    let lo = if x.is_zero() && y.is_zero() {
        zero()
    } else {
        &xy / (x + y - &xy)
    };
    let hi = if x.is_one() && y.is_one() {
        one()
    } else {
        (x + y - &xy - &xy) / (one() - &xy)
    };
    env(lo, hi)
}

/// Both envelope ends increase in each coordinate.
pub fn or_rule(i1: &ProbInterval, i2: &ProbInterval) -> ProbInterval {
    let lo = or_point(i1.lo(), i2.lo()).lo().clone();
    let hi = or_point(i1.hi(), i2.hi()).hi().clone();
    env(lo, hi)
}

/// `C|AB = x, B|A = y  ⟹  C|A ∈ [xy, xy + 1 − y]`.
pub fn cut_point(x: &Rational, y: &Rational) -> ProbInterval {
    debug_unit(&[x, y]);
    let xy = x * y;
    let hi = &xy + one() - y;
    env(xy, hi)
}

pub fn cut_rule(i1: &ProbInterval, i2: &ProbInterval) -> ProbInterval {
    let lo = i1.lo() * i2.lo();
    let hi = i1.hi() * i2.lo() + one() - i2.lo();
    env(lo, hi)
}

/// `C|AB ⟹ (¬B ∨ C)|A`: the lower bound survives, the upper relaxes to 1.
pub fn s_rule(i1: &ProbInterval) -> ProbInterval {
    env(i1.lo().clone(), one())
}

/// Disjunctive weak rational monotony: `C|A = x, B^c|A = y  ⟹  C|AB`.
///
/// At `y = 1` the event `AB` is impossible given `A` and the envelope is
/// `[0, 1]`.
pub fn dwrm_point(x: &Rational, y: &Rational) -> ProbInterval {
    debug_unit(&[x, y]);
    let lo = if x > y { (x - y) / (one() - y) } else { zero() };
    let hi = if x + y < one() { x / (one() - y) } else { one() };
    env(lo, hi)
}

/// Lower bound at `(α1, β2)`; the upper end `x / (1 − y)` increases in both
/// coordinates, so it is taken at `(β1, β2)`.
pub fn dwrm_rule(i1: &ProbInterval, i2: &ProbInterval) -> ProbInterval {
    let lo = dwrm_point(i1.lo(), i2.hi()).lo().clone();
    let hi = dwrm_point(i1.hi(), i2.hi()).hi().clone();
    env(lo, hi)
}

/// `ε3 = ε1 + ε2`, capped at 1.
pub fn eps_and(e1: &Rational, e2: &Rational) -> Rational {
    debug_unit(&[e1, e2]);
    (e1 + e2).min(one())
}

/// `ε3 = ε1 / (1 − ε2)`, capped at 1.
pub fn eps_cm(e1: &Rational, e2: &Rational) -> Result<Rational, RuleError> {
    debug_unit(&[e1, e2]);
    if e2.is_one() {
        return Err(RuleError::Degenerate {
            rule: RuleId::Cm,
            e1: e1.clone(),
            e2: e2.clone(),
        });
    }
    Ok((e1 / (one() - e2)).min(one()))
}

/// `ε3 = (ε1 + ε2 − 2ε1ε2) / (1 − ε1ε2)`.
pub fn eps_or(e1: &Rational, e2: &Rational) -> Result<Rational, RuleError> {
    debug_unit(&[e1, e2]);
    let prod = e1 * e2;
    if prod.is_one() {
        return Err(RuleError::Degenerate {
            rule: RuleId::Or,
            e1: e1.clone(),
            e2: e2.clone(),
        });
    }
    Ok((e1 + e2 - &prod - &prod) / (one() - prod))
}

/// `ε3 = ε1 + ε2 − ε1ε2`.
pub fn eps_cut(e1: &Rational, e2: &Rational) -> Rational {
    debug_unit(&[e1, e2]);
    (e1 + e2 - e1 * e2).min(one())
}
