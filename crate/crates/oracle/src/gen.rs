//! Random instances for differential tests.

use possmc::automata::{AutomatonKind, FiniteAutomaton, RawAutomaton};
use possmc::{FuzzyMatrix, FuzzyVector, PossKripke, StateSet};
use rand::seq::SliceRandom;
use rand::Rng;

/// Values drawn for nonzero entries.
pub const GRID: [f64; 5] = [0.2, 0.5, 0.7, 0.9, 1.0];

/// Propositions used by [`random_model`] labels.
pub const PROPS: [&str; 2] = ["p", "q"];

fn random_row<R: Rng>(rng: &mut R, n: usize, density: f64) -> Vec<f64> {
    let mut row: Vec<f64> = (0..n)
        .map(|_| {
            if rng.gen_bool(density) {
                *GRID.choose(rng).unwrap()
            } else {
                0.0
            }
        })
        .collect();
    if !row.contains(&1.0) {
        row[rng.gen_range(0..n)] = 1.0;
    }
    row
}

/// A valid model on `n` states. Each entry is nonzero with probability
/// `density`; one entry per row and of `I` is forced to 1 when needed.
/// Labels are random subsets of [`PROPS`].
pub fn random_model<R: Rng>(rng: &mut R, n: usize, density: f64) -> PossKripke {
    let labels: Vec<String> = (0..n).map(|i| format!("s{i}")).collect();
    let rows: Vec<Vec<f64>> = (0..n).map(|_| random_row(rng, n, density)).collect();
    let row_refs: Vec<&[f64]> = rows.iter().map(Vec::as_slice).collect();
    let p = FuzzyMatrix::from_rows(labels.clone(), &row_refs).expect("grid values are in range");
    let i = FuzzyVector::from_values(labels, &random_row(rng, n, density))
        .expect("grid values are in range");
    let state_labels = (0..n)
        .map(|_| {
            PROPS
                .iter()
                .filter(|_| rng.gen_bool(0.5))
                .map(|p| p.to_string())
                .collect()
        })
        .collect();
    let props = PROPS.iter().map(|p| p.to_string()).collect();
    PossKripke::from_parts(p, i, props, state_labels).expect("rows and init have supremum 1")
}

/// Each state joins the set with probability `density`.
pub fn random_state_set<R: Rng>(rng: &mut R, n: usize, density: f64) -> StateSet {
    StateSet::from_indices(n, (0..n).filter(|_| rng.gen_bool(density)))
}

/// An automaton over [`PROPS`] with `n` states, usually incomplete. Each
/// possible move is present with probability `density`.
pub fn random_automaton<R: Rng>(
    rng: &mut R,
    kind: AutomatonKind,
    n: usize,
    density: f64,
) -> FiniteAutomaton {
    let states: Vec<String> = (0..n).map(|i| format!("q{i}")).collect();
    let props: Vec<String> = PROPS.iter().map(|p| p.to_string()).collect();
    let letters: Vec<Vec<String>> = (0u32..1 << props.len())
        .map(|bits| {
            props
                .iter()
                .enumerate()
                .filter(|(i, _)| bits & (1 << i) != 0)
                .map(|(_, p)| p.clone())
                .collect()
        })
        .collect();
    let mut transitions = Vec::new();
    for q in &states {
        for letter in &letters {
            for q2 in &states {
                if rng.gen_bool(density) {
                    transitions.push((q.clone(), letter.clone(), q2.clone()));
                }
            }
        }
    }
    let mut initial: Vec<String> = states
        .iter()
        .filter(|_| rng.gen_bool(0.4))
        .cloned()
        .collect();
    if initial.is_empty() {
        initial.push(states.choose(rng).unwrap().clone());
    }
    let accepting = states
        .iter()
        .filter(|_| rng.gen_bool(0.4))
        .cloned()
        .collect();
    RawAutomaton {
        kind,
        states,
        props,
        initial,
        accepting,
        transitions,
    }
    .validate()
    .expect("generated automaton is well formed")
}
