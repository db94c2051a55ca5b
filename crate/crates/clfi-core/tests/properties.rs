//! Property suites: parser round trips, translation laws, antichain
//! semantics, and sampled structural laws on random playable models.

use std::collections::HashSet;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use clfi_core::explore::{random_formula, random_formula_with_fi, random_induced_model};
use clfi_core::formula::parse;
use clfi_core::mcheck::{classify, satisfies, truth_set, PowerCategory};
use clfi_core::{AgentSet, EffFamily, Formula, StateSet};

fn coalition_strategy() -> impl Strategy<Value = AgentSet> {
    (0u16..16).prop_map(AgentSet::from_bits)
}

fn formula_strategy() -> impl Strategy<Value = Formula> {
    let leaf = "[a-z][a-z0-9_]{0,3}".prop_map(Formula::atom);
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Formula::and(l, r)),
            (coalition_strategy(), inner.clone()).prop_map(|(c, f)| Formula::eff(c, f)),
            (coalition_strategy(), inner).prop_map(|(c, f)| Formula::fi(c, f)),
        ]
    })
}

proptest! {
    #[test]
    fn parse_print_is_a_fixed_point(f in formula_strategy()) {
        let printed = f.to_string();
        let reparsed = parse(&printed).unwrap();
        prop_assert_eq!(&reparsed, &f);
        prop_assert_eq!(reparsed.to_string(), printed);
    }

    #[test]
    fn translation_is_idempotent_and_fi_free(f in formula_strategy()) {
        let once = f.translate();
        prop_assert!(!once.contains_fi());
        prop_assert_eq!(once.translate(), once.clone());
    }

    #[test]
    fn closure_respects_the_size_bound(f in formula_strategy()) {
        let closure = f.closure_fi();
        let bound = 2 * f.subformulas().len() + 8 * f.fi_node_count();
        prop_assert!(closure.len() <= bound);
        // the closure always carries the formula and its negation
        prop_assert!(closure.contains(&f));
        prop_assert!(closure.contains(&Formula::not(f.clone())));
    }
}

fn family_strategy() -> impl Strategy<Value = Vec<StateSet>> {
    prop::collection::vec((0u32..64).prop_map(StateSet::from_bits), 1..5)
}

/// Brute-force expansion of an upward closure over six states.
fn upward_closure(minimal: &[StateSet]) -> HashSet<u32> {
    StateSet::all_subsets(6)
        .filter(|x| minimal.iter().any(|m| m.is_subset_of(*x)))
        .map(|x| x.bits())
        .collect()
}

proptest! {
    #[test]
    fn membership_matches_expanded_closure(sets in family_strategy()) {
        let fam = EffFamily::from_minimal(sets.clone());
        let expanded = upward_closure(&sets);
        for x in StateSet::all_subsets(6) {
            prop_assert_eq!(fam.contains(x), expanded.contains(&x.bits()));
        }
    }

    #[test]
    fn superset_insertion_is_semantically_invisible(sets in family_strategy(), extra in 0u32..64) {
        let with_superset: Vec<StateSet> = sets
            .iter()
            .copied()
            .chain([sets[0].union(StateSet::from_bits(extra))])
            .collect();
        let base = EffFamily::from_minimal(sets);
        let extended = EffFamily::from_minimal(with_superset);
        prop_assert_eq!(&base, &extended);
        for x in StateSet::all_subsets(6) {
            prop_assert_eq!(base.contains(x), extended.contains(x));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn translation_preserves_truth_sets(seed in 0u64..10_000, fseed in 0u64..10_000) {
        let (_, m) = random_induced_model(seed, 3, 2, 2, &["p", "q"]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(fseed);
        let f = random_formula_with_fi(&mut rng, 2, &["p", "q"], 3);
        let direct = truth_set(&m, &f).unwrap();
        let translated = truth_set(&m, &f.translate()).unwrap();
        prop_assert_eq!(direct, translated);
    }

    #[test]
    fn exactly_one_category_holds(seed in 0u64..10_000, fseed in 0u64..10_000) {
        let (_, m) = random_induced_model(seed, 3, 3, 2, &["p", "q"]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(fseed);
        let f = random_formula(&mut rng, 3, &["p", "q"], 3);
        for w in 0..m.num_states() {
            for c in m.coalitions() {
                let cat = classify(&m, w, c, &f).unwrap();
                // the four defining formulas partition every pointed model
                let pos = Formula::eff(c, f.clone());
                let neg = Formula::eff(c, Formula::not(f.clone()));
                let holds = [
                    Formula::and(pos.clone(), neg.clone()),
                    Formula::and(pos.clone(), Formula::not(neg.clone())),
                    Formula::and(Formula::not(pos.clone()), neg.clone()),
                    Formula::and(Formula::not(pos), Formula::not(neg)),
                ]
                .map(|g| satisfies(&m, w, &g).unwrap());
                prop_assert_eq!(holds.iter().filter(|&&h| h).count(), 1);
                prop_assert!(holds[cat.index()]);
            }
        }
    }
}

#[test]
fn shift_and_complement_laws_hold_on_random_playable_models() {
    use clfi_core::duality::{complement_constraints, Transform};
    use clfi_core::robustness::coalitional_shift_check;

    for seed in 0..100u64 {
        let states = 2 + (seed % 3) as usize;
        let agents = 1 + (seed % 3) as usize;
        let (_, m) = random_induced_model(seed, states, agents, 2, &["p", "q"]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let formulas = [
            Formula::atom("p"),
            Formula::atom("q"),
            random_formula(&mut rng, agents, &["p", "q"], 3),
        ];
        assert!(coalitional_shift_check(&m, &formulas).unwrap().is_empty(), "seed {seed}");
        assert!(complement_constraints(&m, &formulas).unwrap().is_empty(), "seed {seed}");
        // negating the issue permutes labels on every model, dual or not
        for f in &formulas {
            for w in 0..m.num_states() {
                for c in m.coalitions() {
                    let base = classify(&m, w, c, f).unwrap();
                    let neg = classify(&m, w, c, &Formula::not(f.clone())).unwrap();
                    assert_eq!(neg, Transform::Neg.category_action(base));
                }
            }
        }
    }
}

#[test]
fn full_inability_is_strictly_stronger_than_lack_of_full_control() {
    // adverse determination refutes full control without full inability
    let veto = clfi_core::explore::fixture(clfi_core::explore::FixtureKind::Veto).model;
    let pass = Formula::atom("pass");
    let cat = classify(&veto, 0, AgentSet::singleton(1), &pass).unwrap();
    assert_eq!(cat, PowerCategory::Ad);
    assert_ne!(cat, PowerCategory::Fc);
    assert_ne!(cat, PowerCategory::Fi);
}
