mod common;

use common::{declared_values, model, model_with_automaton, model_with_sets};
use possmc::automata::{check_omega, check_safety, product, AutomatonKind, FiniteAutomaton};
use possmc::reach::{
    bounded_until_possibility, build_partition, reach_via_closure, repeated_reach_possibility,
    until_possibility,
};
use possmc::{Possibility, PossibilityReport, StateSet};
use possmc_oracle::{
    all_paths, all_words, d_t_oracle, enumerate_reach, enumerate_repeated, enumerate_until,
    good_prefix_possibility, lift_path, strongly_connected_subsets,
};
use proptest::prelude::*;

fn on_declared_values(m: &possmc::PossKripke, r: &PossibilityReport) -> bool {
    let allowed = declared_values(m);
    r.per_state
        .iter()
        .chain([&r.aggregate])
        .all(|p| allowed.contains(p))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn reach_methods_agree((m, _, b) in model_with_sets(6)) {
        let closure = reach_via_closure(&m, &b);
        let fixpoint = until_possibility(&m, &StateSet::full(m.len()), &b);
        prop_assert_eq!(&closure.per_state, &fixpoint.per_state);
        prop_assert_eq!(closure.aggregate, fixpoint.aggregate);
        for s in 0..m.len() {
            prop_assert_eq!(closure.per_state[s], enumerate_reach(&m, &b, s).unwrap());
        }
        prop_assert!(on_declared_values(&m, &closure));
    }

    #[test]
    fn until_matches_enumeration((m, c, b) in model_with_sets(6)) {
        let fixpoint = until_possibility(&m, &c, &b);
        let query = build_partition(&m, &c, &b).s_query.len();
        prop_assert!(fixpoint.iterations.unwrap() <= query);
        let mut prev = bounded_until_possibility(&m, &c, &b, 0);
        for n in 0..=query + 1 {
            let bounded = bounded_until_possibility(&m, &c, &b, n);
            for s in 0..m.len() {
                prop_assert_eq!(bounded.per_state[s], enumerate_until(&m, &c, &b, s, Some(n)).unwrap());
                prop_assert!(prev.per_state[s] <= bounded.per_state[s]);
                prop_assert!(bounded.per_state[s] <= fixpoint.per_state[s]);
            }
            if n >= query {
                prop_assert_eq!(&bounded.per_state, &fixpoint.per_state);
            }
            prev = bounded;
        }
        for s in 0..m.len() {
            prop_assert_eq!(fixpoint.per_state[s], enumerate_until(&m, &c, &b, s, None).unwrap());
        }
        prop_assert!(on_declared_values(&m, &fixpoint));
    }

    #[test]
    fn repeated_reach_matches_lassos((m, _, b) in model_with_sets(6)) {
        let r = repeated_reach_possibility(&m, &b);
        let reach = reach_via_closure(&m, &b);
        for s in 0..m.len() {
            prop_assert_eq!(r.per_state[s], enumerate_repeated(&m, &b, s).unwrap());
            prop_assert!(r.per_state[s] <= reach.per_state[s]);
        }
        let by_member = b
            .iter()
            .map(|a| repeated_reach_possibility(&m, &StateSet::from_indices(m.len(), [a])))
            .fold(vec![Possibility::ZERO; m.len()], |acc, single| {
                acc.iter().zip(&single.per_state).map(|(x, y)| x.join(*y)).collect()
            });
        prop_assert_eq!(&r.per_state, &by_member);
        prop_assert!(on_declared_values(&m, &r));
    }

    #[test]
    fn repeated_reach_matches_strongly_connected_subsets(m in model(5)) {
        for a in 0..m.len() {
            let single = repeated_reach_possibility(&m, &StateSet::from_indices(m.len(), [a]));
            let subsets = strongly_connected_subsets(&m, a).unwrap();
            for s in 0..m.len() {
                let via_d_t = Possibility::join_all(subsets.iter().map(|t| d_t_oracle(&m, t, s, a).unwrap()));
                prop_assert_eq!(single.per_state[s], via_d_t);
            }
        }
    }

    #[test]
    fn safety_matches_good_prefixes((m, a) in model_with_automaton(AutomatonKind::Nfa)) {
        let r = check_safety(&m, &a).unwrap();
        for s in 0..m.len() {
            prop_assert_eq!(r.per_state[s], good_prefix_possibility(&m, &a, s).unwrap());
        }
        prop_assert_eq!(&r, &check_safety(&m, &a.complete()).unwrap());
        prop_assert!(on_declared_values(&m, &r));
    }

    #[test]
    fn omega_matches_product_lassos((m, a) in model_with_automaton(AutomatonKind::Nba)) {
        let r = check_omega(&m, &a).unwrap();
        let prod = product(&m, &a.complete()).unwrap();
        for s in 0..m.len() {
            let lassos = Possibility::join_all(
                prod.entry_points(s)
                    .map(|i| enumerate_repeated(&prod.structure, &prod.goal, i).unwrap()),
            );
            prop_assert_eq!(r.per_state[s], lassos);
        }
        prop_assert_eq!(&r, &check_omega(&m, &a.complete()).unwrap());
        prop_assert!(on_declared_values(&m, &r));
    }

    #[test]
    fn completion_preserves_the_language((_, a) in model_with_automaton(AutomatonKind::Nfa)) {
        let completed = a.complete();
        prop_assert!(completed.is_complete());
        for word in all_words(a.props(), 3) {
            prop_assert_eq!(a.accepts_finite(&word).unwrap(), completed.accepts_finite(&word).unwrap());
        }
    }

    #[test]
    fn lifting_preserves_path_possibility((m, a) in model_with_automaton(AutomatonKind::Nfa)) {
        let a = a.complete();
        let prod = product(&m, &a).unwrap();
        for path in all_paths(&m, 2) {
            let lifts = lift_path(&m, &a, &prod, &path);
            prop_assert!(!lifts.is_empty());
            prop_assert_eq!(prod.structure.path_set_possibility(&lifts), m.cylinder_possibility(&path));
        }
    }

    #[test]
    fn universal_automaton_reduces_to_plain_checks(m in model(5)) {
        let props: Vec<String> = m.props().iter().cloned().collect();
        let nfa = FiniteAutomaton::universal(AutomatonKind::Nfa, &props).unwrap();
        let nba = FiniteAutomaton::universal(AutomatonKind::Nba, &props).unwrap();
        prop_assert!(check_safety(&m, &nfa).unwrap().per_state.iter().all(|p| *p == Possibility::ONE));
        let plus = m.transitions().transitive_closure();
        let omega = check_omega(&m, &nba).unwrap();
        for s in 0..m.len() {
            let expected = Possibility::join_all((0..m.len()).map(|a| plus.get(s, a).meet(plus.get(a, a))));
            prop_assert_eq!(omega.per_state[s], expected);
        }
        prop_assert_eq!(product(&m, &nfa).unwrap().structure.len(), m.len());
    }
}
