//! Truth-table semantics of formulas and conditional events.

use proptest::prelude::*;
use ptight::logic::{self, Atom, AtomUniverse, ConditionalEvent, Formula};

const ATOMS: [&str; 3] = ["a", "b", "c"];

fn formula() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        6 => prop::sample::select(&ATOMS[..]).prop_map(Formula::atom),
        1 => Just(Formula::Top),
        1 => Just(Formula::Bottom),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(x, y)| Formula::and(x, y)),
            (inner.clone(), inner.clone()).prop_map(|(x, y)| Formula::or(x, y)),
            (inner.clone(), inner.clone()).prop_map(|(x, y)| Formula::implies(x, y)),
            (inner.clone(), inner).prop_map(|(x, y)| Formula::iff(x, y)),
        ]
    })
}

fn conditional() -> impl Strategy<Value = ConditionalEvent> {
    (formula(), formula()).prop_filter_map("antecedent must be satisfiable", |(e, h)| ConditionalEvent::new(e, h).ok())
}

fn universe() -> AtomUniverse {
    AtomUniverse::new(ATOMS.iter().map(|a| Atom::new(*a).unwrap()), 20).unwrap()
}

proptest! {
    #[test]
    fn printing_round_trips(f in formula()) {
        let printed = f.to_string();
        let back: Formula = printed.parse().unwrap();
        prop_assert!(logic::equivalent(&f, &back), "{}", printed);
        prop_assert_eq!(back.to_string(), printed);
    }

    #[test]
    fn equivalence_is_mutual_implication(f in formula(), g in formula()) {
        prop_assert_eq!(logic::equivalent(&f, &g), logic::implies(&f, &g) && logic::implies(&g, &f));
    }

    #[test]
    fn inclusion_is_reflexive_and_transitive(x in conditional(), y in conditional(), z in conditional()) {
        prop_assert!(logic::gn_included(&x, &x));
        if logic::gn_included(&x, &y) && logic::gn_included(&y, &z) {
            prop_assert!(logic::gn_included(&x, &z));
        }
    }

    #[test]
    fn constituents_partition_the_assignments(x in conditional(), y in conditional()) {
        let (u, worlds) = logic::enumerate_constituents(&[x.clone(), y.clone()], 20).unwrap();
        prop_assert_eq!(worlds.len(), 1usize << u.len());
        let mut seen: Vec<_> = worlds.iter().map(|w| w.constituent.assignment().clone()).collect();
        seen.sort();
        seen.dedup();
        prop_assert_eq!(seen.len(), worlds.len());
        for w in &worlds {
            prop_assert_eq!(w.satisfies[0], x.antecedent().evaluate(&w.constituent).unwrap());
        }
    }

    #[test]
    fn keys_agree_with_semantic_equivalence(x in conditional(), y in conditional()) {
        let u = universe();
        let same_key = logic::canonical_key(&x, &u).unwrap() == logic::canonical_key(&y, &u).unwrap();
        let equivalent = logic::equivalent(&x.conjunction(), &y.conjunction()) && logic::equivalent(x.antecedent(), y.antecedent());
        prop_assert_eq!(same_key, equivalent);
    }
}
