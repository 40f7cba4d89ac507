use possmc::automata::{AutomatonKind, FiniteAutomaton};
use possmc::format::{parse_automaton, parse_model};
use possmc::{PossKripke, Possibility, StateSet};
use possmc_oracle::gen::{random_model, random_state_set};
use possmc_oracle::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const FOUR_STATE: &str = "\
states s0 s1 s2 s3
ap s0 s1 s2 s3
init s0 1
trans s0 -> s1 1
trans s0 -> s2 0.2
trans s1 -> s2 1
trans s1 -> s3 0.9
trans s2 -> s1 0.7
trans s2 -> s3 1
trans s3 -> s3 1
label s0 s0
label s1 s1
label s2 s2
label s3 s3
";

fn four_state() -> PossKripke {
    parse_model(FOUR_STATE).unwrap()
}

fn set(m: &PossKripke, names: &[&str]) -> StateSet {
    m.state_set(names).unwrap()
}

fn p(v: f64) -> Possibility {
    Possibility::new(v).unwrap()
}

#[test]
fn reach_on_four_state() {
    let m = four_state();
    assert_eq!(
        enumerate_reach(&m, &set(&m, &["s3"]), 0).unwrap(),
        Possibility::ONE
    );
    assert_eq!(
        enumerate_reach(&m, &set(&m, &["s0"]), 0).unwrap(),
        Possibility::ONE
    );
    assert_eq!(
        enumerate_reach(&m, &set(&m, &["s0"]), 3).unwrap(),
        Possibility::ZERO
    );
    assert_eq!(
        enumerate_reach(&m, &set(&m, &["s2"]), 3).unwrap(),
        Possibility::ZERO
    );
}

#[test]
fn until_on_four_state() {
    let m = four_state();
    let c = set(&m, &["s0", "s1", "s2"]);
    let b = set(&m, &["s3"]);
    let at = |bound| -> Vec<f64> {
        (0..4)
            .map(|s| enumerate_until(&m, &c, &b, s, bound).unwrap().value())
            .collect()
    };
    assert_eq!(at(Some(0)), vec![0.0, 0.0, 0.0, 1.0]);
    assert_eq!(at(Some(1)), vec![0.0, 0.9, 1.0, 1.0]);
    assert_eq!(at(Some(2)), vec![0.9, 1.0, 1.0, 1.0]);
    assert_eq!(at(Some(3)), vec![1.0; 4]);
    assert_eq!(at(None), vec![1.0; 4]);
    let full = StateSet::full(4);
    for s in 0..4 {
        assert_eq!(
            enumerate_until(&m, &full, &b, s, None).unwrap(),
            enumerate_reach(&m, &b, s).unwrap()
        );
    }
}

#[test]
fn repeated_on_four_state() {
    let m = four_state();
    let at_s0 = |t: &str| enumerate_repeated(&m, &set(&m, &[t]), 0).unwrap().value();
    assert_eq!(at_s0("s1"), 0.7);
    assert_eq!(at_s0("s2"), 0.7);
    assert_eq!(at_s0("s3"), 1.0);
    assert_eq!(at_s0("s0"), 0.0);
    assert_eq!(
        enumerate_repeated(&m, &StateSet::empty(4), 0).unwrap(),
        Possibility::ZERO
    );

    let (lasso, v) = best_lasso(&m, &set(&m, &["s3"]), 0).unwrap().unwrap();
    assert_eq!(v, Possibility::ONE);
    assert_eq!(lasso.weight(&m), v);
    assert_eq!(lasso.cycle, vec![3]);
    assert_eq!(lasso.stem, vec![0, 1, 2, 3]);
}

#[test]
fn strong_connectivity_is_strict() {
    let m = four_state();
    assert!(is_strongly_connected(&m, &set(&m, &["s1", "s2"])));
    assert!(is_strongly_connected(&m, &set(&m, &["s3"])));
    assert!(!is_strongly_connected(&m, &set(&m, &["s1"])));
    assert!(!is_strongly_connected(&m, &set(&m, &["s2", "s3"])));
    assert!(!is_strongly_connected(&m, &StateSet::empty(4)));
    assert_eq!(
        strongly_connected_subsets(&m, 1).unwrap(),
        vec![set(&m, &["s1", "s2"])]
    );
}

#[test]
fn d_t_on_four_state() {
    let m = four_state();
    assert_eq!(
        d_t_oracle(&m, &set(&m, &["s1", "s2"]), 0, 1).unwrap(),
        p(0.7)
    );
    assert_eq!(
        d_t_oracle(&m, &set(&m, &["s3"]), 0, 3).unwrap(),
        Possibility::ONE
    );
    assert_eq!(
        d_t_oracle(&m, &set(&m, &["s1"]), 0, 1),
        Err(OracleError::NotStronglyConnected)
    );
    assert_eq!(
        d_t_oracle(&m, &set(&m, &["s3"]), 0, 1),
        Err(OracleError::NotMember(1))
    );
}

#[test]
fn size_caps_are_errors() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let m = random_model(&mut rng, MAX_STATES + 1, 0.3);
    let b = StateSet::full(m.len());
    assert!(matches!(
        enumerate_reach(&m, &b, 0),
        Err(OracleError::TooLarge { .. })
    ));
    assert!(matches!(
        enumerate_repeated(&m, &b, 0),
        Err(OracleError::TooLarge { .. })
    ));
}

#[test]
fn singleton_d_t_matches_closure_formula() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..200 {
        let n = rand::Rng::gen_range(&mut rng, 2..=5);
        let m = random_model(&mut rng, n, 0.5);
        let plus = m.transitions().transitive_closure();
        for a in 0..n {
            let single = StateSet::from_indices(n, [a]);
            if !is_strongly_connected(&m, &single) {
                continue;
            }
            for s in 0..n {
                assert_eq!(
                    d_t_oracle(&m, &single, s, a).unwrap(),
                    plus.get(s, a).meet(plus.get(a, a))
                );
            }
        }
    }
}

#[test]
fn d_t_is_antitone_in_t() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..150 {
        let n = rand::Rng::gen_range(&mut rng, 2..=5);
        let m = random_model(&mut rng, n, 0.5);
        for a in 0..n {
            let subsets = strongly_connected_subsets(&m, a).unwrap();
            for big in &subsets {
                for small in subsets.iter().filter(|t| t.is_subset(big)) {
                    for s in 0..n {
                        assert!(
                            d_t_oracle(&m, big, s, a).unwrap()
                                <= d_t_oracle(&m, small, s, a).unwrap()
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn longer_until_caps_change_nothing() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..100 {
        let n = rand::Rng::gen_range(&mut rng, 2..=5);
        let m = random_model(&mut rng, n, 0.4);
        let b = random_state_set(&mut rng, n, 0.3);
        let c = random_state_set(&mut rng, n, 0.6);
        for s in 0..n {
            assert_eq!(
                enumerate_until(&m, &c, &b, s, None).unwrap(),
                enumerate_until(&m, &c, &b, s, Some(n + 2)).unwrap()
            );
        }
    }
}

#[test]
fn good_prefixes_on_four_state() {
    let m = four_state();
    let ends_in_s2: FiniteAutomaton = parse_automaton(
        "automaton nfa\nstates q0 q1\nap s0 s1 s2 s3\ninitial q0\naccepting q1\n\
         trans q0 {s0} -> q0\ntrans q0 {s1} -> q0\ntrans q0 {s3} -> q0\ntrans q0 {s2} -> q0\n\
         trans q0 {s2} -> q1\n",
    )
    .unwrap();
    assert_eq!(ends_in_s2.kind(), AutomatonKind::Nfa);
    assert_eq!(
        good_prefix_possibility(&m, &ends_in_s2, 0).unwrap(),
        Possibility::ONE
    );
    assert_eq!(
        good_prefix_possibility(&m, &ends_in_s2, 3).unwrap(),
        Possibility::ZERO
    );
}

#[test]
fn lifted_paths_preserve_weight() {
    let m = four_state();
    let a = FiniteAutomaton::universal(
        AutomatonKind::Nfa,
        &m.props().iter().cloned().collect::<Vec<_>>(),
    )
    .unwrap();
    let prod = possmc::automata::product(&m, &a).unwrap();
    for path in all_paths(&m, 3) {
        let lifts = lift_path(&m, &a, &prod, &path);
        assert_eq!(lifts.len(), 1);
        assert_eq!(
            prod.structure.path_set_possibility(&lifts),
            m.cylinder_possibility(&path)
        );
    }
}

#[test]
fn word_enumeration_counts() {
    let props = vec!["a".to_string(), "b".to_string()];
    assert_eq!(all_words(&props, 0).len(), 1);
    assert_eq!(all_words(&props, 2).len(), 1 + 4 + 16);
}
