//! Algebraic properties of the closed-form rule envelopes.

use proptest::prelude::*;
use ptight::rational::{one, ratio, zero};
use ptight::rules::{ProbInterval, RuleId};
use ptight::Rational;

const BINARY: [RuleId; 5] = [RuleId::And, RuleId::Cm, RuleId::Or, RuleId::Cut, RuleId::Dwrm];
const WITH_EPS: [RuleId; 4] = [RuleId::And, RuleId::Cm, RuleId::Or, RuleId::Cut];

prop_compose! {
    /// A rational in `[0, 1]` with denominator up to 1000.
    fn prob()(d in 1i64..=1000)(n in 0..=d, d in Just(d)) -> Rational {
        ratio(n, d)
    }
}

prop_compose! {
    /// A rational in the open interval `(0, 1)`.
    fn open_prob()(d in 2i64..=1000)(n in 1..d, d in Just(d)) -> Rational {
        ratio(n, d)
    }
}

prop_compose! {
    fn interval()(a in prob(), b in prob()) -> ProbInterval {
        ProbInterval::new(a.clone().min(b.clone()), a.max(b)).unwrap()
    }
}

fn iv(lo: Rational, hi: Rational) -> ProbInterval {
    ProbInterval::new(lo, hi).unwrap()
}

fn from_eps(e: &Rational) -> ProbInterval {
    ProbInterval::from_eps(e.clone()).unwrap()
}

proptest! {
    #[test]
    fn outputs_are_probability_intervals(i1 in interval(), i2 in interval()) {
        for rule in BINARY {
            let out = rule.propagate(&[i1.clone(), i2.clone()]).unwrap();
            prop_assert!(zero() <= *out.lo() && out.lo() <= out.hi() && *out.hi() <= one());
        }
        let s = RuleId::S.propagate(std::slice::from_ref(&i1)).unwrap();
        prop_assert_eq!(s, iv(i1.lo().clone(), one()));
    }

    #[test]
    fn interval_form_is_the_hull_of_the_corner_envelopes(i1 in interval(), i2 in interval()) {
        for rule in BINARY {
            let corners = [
                (i1.lo(), i2.lo()),
                (i1.lo(), i2.hi()),
                (i1.hi(), i2.lo()),
                (i1.hi(), i2.hi()),
            ];
            let envs: Vec<ProbInterval> = corners
                .iter()
                .map(|(x, y)| rule.envelope(&[(*x).clone(), (*y).clone()]).unwrap())
                .collect();
            let lo = envs.iter().map(|e| e.lo().clone()).min().unwrap();
            let hi = envs.iter().map(|e| e.hi().clone()).max().unwrap();
            prop_assert_eq!(rule.propagate(&[i1.clone(), i2.clone()]).unwrap(), iv(lo, hi), "{}", rule);
        }
    }

    #[test]
    fn and_and_or_are_commutative(i1 in interval(), i2 in interval()) {
        for rule in [RuleId::And, RuleId::Or] {
            prop_assert_eq!(
                rule.propagate(&[i1.clone(), i2.clone()]).unwrap(),
                rule.propagate(&[i2.clone(), i1.clone()]).unwrap()
            );
        }
    }

    #[test]
    fn widening_premises_widens_the_conclusion(i1 in interval(), i2 in interval(), w1 in interval(), w2 in interval()) {
        let hull = |a: &ProbInterval, b: &ProbInterval| iv(a.lo().min(b.lo()).clone(), a.hi().max(b.hi()).clone());
        let (o1, o2) = (hull(&i1, &w1), hull(&i2, &w2));
        for rule in BINARY {
            let narrow = rule.propagate(&[i1.clone(), i2.clone()]).unwrap();
            let wide = rule.propagate(&[o1.clone(), o2.clone()]).unwrap();
            prop_assert!(narrow.is_subset(&wide), "{}", rule);
        }
    }

    #[test]
    fn eps_form_agrees_with_interval_form(e1 in prob(), e2 in prob()) {
        prop_assume!(e1 < one() && e2 < one());
        for rule in WITH_EPS {
            let out = rule.propagate(&[from_eps(&e1), from_eps(&e2)]).unwrap();
            prop_assert_eq!(out.lo().clone(), one() - rule.eps(&e1, &e2).unwrap(), "{}", rule);
        }
    }

    #[test]
    fn and_is_sharp_on_its_curve(a1 in prob(), a2 in prob()) {
        prop_assume!(&a1 + &a2 >= one());
        let a3 = &a1 + &a2 - one();
        prop_assert_eq!(RuleId::And.envelope(&[a1, a2]).unwrap().lo().clone(), a3);
    }

    #[test]
    fn cm_is_sharp_on_its_curve(a2 in open_prob(), a3 in prob()) {
        let a1 = one() - (one() - &a3) * &a2;
        prop_assert_eq!(RuleId::Cm.envelope(&[a1, a2]).unwrap().lo().clone(), a3);
    }

    #[test]
    fn or_is_sharp_on_its_curve(a1 in open_prob(), a3 in open_prob()) {
        let denom = &a1 * (one() + &a3) - &a3;
        prop_assume!(denom > zero());
        let a2 = &a1 * &a3 / denom;
        prop_assume!(a2 <= one());
        prop_assert_eq!(RuleId::Or.envelope(&[a1, a2]).unwrap().lo().clone(), a3);
    }

    #[test]
    fn cut_is_sharp_on_its_curve(a1 in open_prob(), a3 in prob()) {
        prop_assume!(a3 <= a1);
        let a2 = &a3 / &a1;
        prop_assert_eq!(RuleId::Cut.envelope(&[a1, a2]).unwrap().lo().clone(), a3);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn exact_eps_beats_the_naive_sum(e1 in open_prob(), e2 in open_prob()) {
        let naive = &e1 + &e2;
        prop_assert!(RuleId::Or.eps(&e1, &e2).unwrap() < naive);
        prop_assert!(RuleId::Cut.eps(&e1, &e2).unwrap() < naive);
    }
}

#[test]
fn premise_order_matters_for_cut_cm_and_dwrm() {
    let a = iv(ratio(9, 10), one());
    let b = iv(ratio(1, 2), ratio(3, 5));
    for rule in [RuleId::Cut, RuleId::Cm, RuleId::Dwrm] {
        let ab = rule.propagate(&[a.clone(), b.clone()]).unwrap();
        let ba = rule.propagate(&[b.clone(), a.clone()]).unwrap();
        assert_ne!(ab, ba, "{rule}");
    }
    assert_eq!(RuleId::Cut.propagate(&[a.clone(), b.clone()]).unwrap(), iv(ratio(9, 20), one()));
    assert_eq!(RuleId::Cut.propagate(&[b.clone(), a.clone()]).unwrap(), iv(ratio(9, 20), ratio(16, 25)));
    assert_eq!(RuleId::Cm.propagate(&[a.clone(), b.clone()]).unwrap(), iv(ratio(4, 5), one()));
    assert_eq!(RuleId::Cm.propagate(&[b.clone(), a.clone()]).unwrap(), iv(ratio(4, 9), ratio(2, 3)));
    assert_eq!(RuleId::Dwrm.propagate(&[a.clone(), b.clone()]).unwrap(), iv(ratio(3, 4), one()));
    assert_eq!(RuleId::Dwrm.propagate(&[b, a]).unwrap(), iv(zero(), one()));
}
