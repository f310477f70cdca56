//! Rule envelopes against brute-force world distributions.

use std::time::Instant;

use ptight::oracle::{self, EnvelopeReport};
use ptight::par::Execution;
use ptight::rational::{parse_rational, ratio};
use ptight::rules::{ProbInterval, RuleId};
use ptight::Rational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const GRID: usize = 100;
const GAP_TOLERANCE: (i64, i64) = (1, 50);

fn r(s: &str) -> Rational {
    parse_rational(s).unwrap()
}

fn iv(lo: &str, hi: &str) -> ProbInterval {
    ProbInterval::new(r(lo), r(hi)).unwrap()
}

fn interior(rng: &mut ChaCha8Rng) -> Rational {
    ratio(rng.gen_range(1..100), 100)
}

fn assert_sound_and_tight(rep: &EnvelopeReport) {
    assert!(rep.sound, "{:?}", rep);
    let tol = ratio(GAP_TOLERANCE.0, GAP_TOLERANCE.1);
    assert!(rep.gap_lo >= ratio(0, 1) && rep.gap_lo <= tol, "gap_lo {} for {:?}", rep.gap_lo, rep);
    assert!(rep.gap_hi >= ratio(0, 1) && rep.gap_hi <= tol, "gap_hi {} for {:?}", rep.gap_hi, rep);
}

#[test]
fn random_points_are_sound_and_tight() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for rule in RuleId::ALL {
        let start = Instant::now();
        for seed in 0..50 {
            let values: Vec<Rational> = (0..rule.arity()).map(|_| interior(&mut rng)).collect();
            let rep = oracle::verify_envelope(rule, &values, GRID, seed).unwrap();
            assert_sound_and_tight(&rep);
            if matches!(rule, RuleId::And | RuleId::Cut | RuleId::Or) {
                assert!(rep.attained_lo && rep.attained_hi, "{rule} at {values:?}");
            }
        }
        eprintln!("{rule}: {:?}", start.elapsed());
    }
}

#[test]
fn reference_points() {
    let rep = oracle::verify_envelope(RuleId::Cm, &[r("0.95"), r("0.8")], GRID, 0).unwrap();
    assert_eq!(rep.formula_envelope, iv("0.9375", "1"));
    assert_sound_and_tight(&rep);

    let rep = oracle::verify_envelope(RuleId::Or, &[r("0.5"), r("0.5")], GRID, 0).unwrap();
    assert_eq!(rep.formula_envelope, iv("1/3", "2/3"));
    assert!(rep.attained_lo && rep.attained_hi);

    let rep = oracle::verify_envelope(RuleId::Dwrm, &[r("0.9"), r("0.5")], GRID, 0).unwrap();
    assert_eq!(rep.formula_envelope, iv("0.8", "1"));
    assert_sound_and_tight(&rep);
}

#[test]
fn interval_boxes() {
    let rep = oracle::verify_interval_rule(RuleId::Cut, &[iv("0.9", "1"), iv("0.8", "1")], 50, Execution::Parallel).unwrap();
    assert!(rep.sound);
    assert!(rep.gap_lo <= ratio(1, 50));
    assert_eq!(rep.formula_envelope, iv("0.72", "1"));

    let rep = oracle::verify_interval_rule(RuleId::Dwrm, &[iv("0.9", "0.9"), iv("0", "0.5")], 50, Execution::Parallel).unwrap();
    assert!(rep.sound);
    assert_eq!(rep.formula_envelope, iv("0.8", "1"));
    assert!(rep.gap_lo <= ratio(1, 50) && rep.gap_hi <= ratio(1, 50));
}

#[test]
fn dwrm_corner_at_smallest_negated_premise_is_violated_by_sampled_distributions() {
    // Upper end at (β1, α2) would be 0.9 here; distributions reach 1.
    let rep = oracle::verify_interval_rule(RuleId::Dwrm, &[iv("0.9", "0.9"), iv("0", "0.5")], 50, Execution::Parallel).unwrap();
    assert!(rep.empirical_max > r("0.9"));
}
