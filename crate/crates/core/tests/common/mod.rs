#![allow(dead_code)]

use std::collections::BTreeSet;

use possmc::automata::{AutomatonKind, FiniteAutomaton};
use possmc::{PossKripke, Possibility, StateSet};
use possmc_oracle::gen;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// Random valid models with `2..=max_states` states.
pub fn model(max_states: usize) -> impl Strategy<Value = PossKripke> {
    (2..=max_states, any::<u64>()).prop_map(|(n, seed)| gen::random_model(&mut rng(seed), n, 0.5))
}

/// A model together with two random state sets, used as `C` and `B`.
pub fn model_with_sets(
    max_states: usize,
) -> impl Strategy<Value = (PossKripke, StateSet, StateSet)> {
    (model(max_states), any::<u64>()).prop_map(|(m, seed)| {
        let mut r = rng(seed);
        let c = gen::random_state_set(&mut r, m.len(), 0.6);
        let b = gen::random_state_set(&mut r, m.len(), 0.3);
        (m, c, b)
    })
}

/// A model and an automaton whose completed product has at most 12 states.
pub fn model_with_automaton(
    kind: AutomatonKind,
) -> impl Strategy<Value = (PossKripke, FiniteAutomaton)> {
    (1usize..=3, any::<u64>()).prop_map(move |(nq, seed)| {
        let mut r = rng(seed);
        let a = gen::random_automaton(&mut r, kind, nq, 0.35);
        let completed = a.complete().len();
        let n = (12 / completed).clamp(1, 4);
        (gen::random_model(&mut r, n, 0.5), a)
    })
}

/// `{0, 1}` plus every declared value of the model.
pub fn declared_values(m: &PossKripke) -> BTreeSet<Possibility> {
    let mut values: BTreeSet<Possibility> = m.transitions().entries().iter().copied().collect();
    values.extend(m.init().entries().iter().copied());
    values.insert(Possibility::ZERO);
    values.insert(Possibility::ONE);
    values
}
