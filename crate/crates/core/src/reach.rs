//! Possibility of `◇B`, `C U B`, `C U≤n B` and `□◇B`.

use std::collections::VecDeque;
use std::fmt;

use crate::algebra::{self, FuzzyMatrix, FuzzyVector, Possibility};
use crate::kripke::{PossKripke, StateSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    ClosureFormula,
    FixedPoint,
    BoundedIteration,
    RepeatedClosure,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::ClosureFormula => "closure_formula",
            Method::FixedPoint => "fixed_point",
            Method::BoundedIteration => "bounded_iteration",
            Method::RepeatedClosure => "repeated_closure",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Per-state possibilities plus their aggregate under the initial distribution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PossibilityReport {
    pub states: Vec<String>,
    pub per_state: Vec<Possibility>,
    /// `⋁_s I(s) ∧ per_state(s)`.
    pub aggregate: Possibility,
    pub method: Method,
    pub iterations: Option<usize>,
}

impl PossibilityReport {
    pub fn new(
        m: &PossKripke,
        per_state: Vec<Possibility>,
        method: Method,
        iterations: Option<usize>,
    ) -> Self {
        debug_assert_eq!(per_state.len(), m.len());
        let aggregate = Possibility::join_all(
            per_state
                .iter()
                .enumerate()
                .map(|(i, p)| m.initial(i).meet(*p)),
        );
        PossibilityReport {
            states: m.states().to_vec(),
            per_state,
            aggregate,
            method,
            iterations,
        }
    }

    pub fn get(&self, state: &str) -> Option<Possibility> {
        self.states
            .iter()
            .position(|s| s == state)
            .map(|i| self.per_state[i])
    }
}

/// Partition of the state space for constrained reachability.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UntilPartition {
    /// States known to have possibility 0.
    pub s_zero: StateSet,
    /// States known to have possibility 1.
    pub s_one: StateSet,
    /// States whose value comes from the fixed point.
    pub s_query: StateSet,
}

impl UntilPartition {
    fn query_indices(&self) -> Vec<usize> {
        self.s_query.iter().collect()
    }
}

/// `per_state(s) = ⋁_{t∈B} P⁺(s,t)` for `s ∉ B`, and `1` on `B`.
pub fn reach_via_closure(m: &PossKripke, target: &StateSet) -> PossibilityReport {
    let plus = m.transitions().transitive_closure();
    let per_state = (0..m.len())
        .map(|s| {
            if target.contains(s) {
                Possibility::ONE
            } else {
                Possibility::join_all(target.iter().map(|t| plus.get(s, t)))
            }
        })
        .collect();
    PossibilityReport::new(m, per_state, Method::ClosureFormula, None)
}

/// The extreme admissible partition: `S=1 = B`, and `S=0` holds every state
/// that cannot reach `B` through a path whose non-final states lie in `C`.
pub fn build_partition(m: &PossKripke, constraint: &StateSet, target: &StateSet) -> UntilPartition {
    let n = m.len();
    let mut can_reach = target.clone();
    let mut queue: VecDeque<usize> = target.iter().collect();
    while let Some(t) = queue.pop_front() {
        for s in 0..n {
            if constraint.contains(s) && m.transition(s, t).is_positive() && can_reach.insert(s) {
                queue.push_back(s);
            }
        }
    }
    let s_query = StateSet::from_indices(n, can_reach.iter().filter(|&s| !target.contains(s)));
    UntilPartition {
        s_zero: can_reach.complement(),
        s_one: target.clone(),
        s_query,
    }
}

/// Restricts `P` to `S?` and collects `b_s = P(s, S=1)`.
fn until_system(m: &PossKripke, partition: &UntilPartition) -> Option<(FuzzyMatrix, FuzzyVector)> {
    let query = partition.query_indices();
    if query.is_empty() {
        return None;
    }
    let a = m
        .transitions()
        .restrict(&query)
        .expect("indices are in range");
    let b = query
        .iter()
        .map(|&s| Possibility::join_all(partition.s_one.iter().map(|u| m.transition(s, u))))
        .collect();
    let b = FuzzyVector::new(a.labels().to_vec(), b).expect("matching dimension");
    Some((a, b))
}

fn assemble(
    m: &PossKripke,
    partition: &UntilPartition,
    solution: Option<&FuzzyVector>,
) -> Vec<Possibility> {
    let mut per_state = vec![Possibility::ZERO; m.len()];
    for s in partition.s_one.iter() {
        per_state[s] = Possibility::ONE;
    }
    if let Some(x) = solution {
        for (k, s) in partition.s_query.iter().enumerate() {
            per_state[s] = x.get(k);
        }
    }
    per_state
}

/// `Po(s ⊨ C U B)` as the least fixed point of `Φ(x) = A∘x ∨ b` on `S?`.
pub fn until_possibility(
    m: &PossKripke,
    constraint: &StateSet,
    target: &StateSet,
) -> PossibilityReport {
    let partition = build_partition(m, constraint, target);
    match until_system(m, &partition) {
        Some((a, b)) => {
            let fp = algebra::least_fixed_point(&a, &b).expect("matching dimension");
            let per_state = assemble(m, &partition, Some(&fp.solution));
            PossibilityReport::new(m, per_state, Method::FixedPoint, Some(fp.iterations))
        }
        None => PossibilityReport::new(
            m,
            assemble(m, &partition, None),
            Method::FixedPoint,
            Some(0),
        ),
    }
}

/// `Po(s ⊨ C U≤n B)`: the `n`-th iterate of `Φ` from the zero vector.
pub fn bounded_until_possibility(
    m: &PossKripke,
    constraint: &StateSet,
    target: &StateSet,
    bound: usize,
) -> PossibilityReport {
    let partition = build_partition(m, constraint, target);
    let solution = until_system(m, &partition)
        .map(|(a, b)| algebra::iterate(&a, &b, bound).expect("matching dimension"));
    let per_state = assemble(m, &partition, solution.as_ref());
    PossibilityReport::new(m, per_state, Method::BoundedIteration, Some(bound))
}

/// `Po(s ⊨ □◇B) = ⋁_{a∈B} P⁺(s,a) ∧ P⁺(a,a)`, applied to every state
/// including those in `B`.
pub fn repeated_reach_possibility(m: &PossKripke, target: &StateSet) -> PossibilityReport {
    let plus = m.transitions().transitive_closure();
    let per_state = (0..m.len())
        .map(|s| Possibility::join_all(target.iter().map(|a| plus.get(s, a).meet(plus.get(a, a)))))
        .collect();
    PossibilityReport::new(m, per_state, Method::RepeatedClosure, None)
}
