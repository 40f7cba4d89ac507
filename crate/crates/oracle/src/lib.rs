//! Brute-force reference evaluators for possmc.
//!
//! Every function here enumerates paths, lassos or permutations directly and
//! takes joins of path meets, without using the closure or fixed-point
//! machinery it is compared against (the one exception is [`d_t_oracle`],
//! whose formula is stated in terms of `P⁺`). Nothing here is fast.
//!
//! Simple paths suffice for reachability: removing a cycle from a witness
//! leaves a shorter witness whose meet is at least as large, because dropping
//! terms from a `min` never lowers it. The same argument bounds lasso stems
//! and cycles, and applies to pairs `(state, automaton state set)` when
//! checking good prefixes.
//!
//! The searches prune a branch once its running meet cannot beat the best
//! value already found. Extending a path only lowers its meet, so this never
//! changes the result.

use std::collections::BTreeSet;

use possmc::automata::{FiniteAutomaton, ProductStructure, Symbol};
use possmc::{FinitePath, PossKripke, Possibility, StateSet};
use thiserror::Error;

pub mod gen;

/// Largest structure the enumerators accept.
pub const MAX_STATES: usize = 12;
/// Largest `T` accepted by [`d_t_oracle`].
pub const MAX_SUBSET: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("instance has {size} states, the oracle accepts at most {cap}")]
    TooLarge { size: usize, cap: usize },
    #[error("the subset is not strongly connected")]
    NotStronglyConnected,
    #[error("state {0} is not a member of the subset")]
    NotMember(usize),
}

fn check_size(size: usize, cap: usize) -> Result<(), OracleError> {
    if size > cap {
        return Err(OracleError::TooLarge { size, cap });
    }
    Ok(())
}

/// `Po(from ⊨ ◇B)`: join over simple paths from `from` into `B` whose earlier
/// states avoid `B`.
pub fn enumerate_reach(
    m: &PossKripke,
    target: &StateSet,
    from: usize,
) -> Result<Possibility, OracleError> {
    check_size(m.len(), MAX_STATES)?;
    if target.contains(from) {
        return Ok(Possibility::ONE);
    }
    let mut best = Possibility::ZERO;
    let mut on_path = vec![false; m.len()];
    reach_dfs(m, target, from, Possibility::ONE, &mut on_path, &mut best);
    Ok(best)
}

fn reach_dfs(
    m: &PossKripke,
    target: &StateSet,
    s: usize,
    value: Possibility,
    on_path: &mut [bool],
    best: &mut Possibility,
) {
    on_path[s] = true;
    for t in 0..m.len() {
        let p = m.transition(s, t);
        if p.is_zero() || on_path[t] {
            continue;
        }
        let v = value.meet(p);
        if v <= *best {
            continue;
        }
        if target.contains(t) {
            *best = v;
        } else {
            reach_dfs(m, target, t, v, on_path, best);
        }
    }
    on_path[s] = false;
}

/// `Po(from ⊨ C U≤n B)`: join over all path fragments (not only simple ones)
/// with at most `n` transitions, non-final states in `C` and final state in
/// `B`. Without a bound, `n = |S|`.
pub fn enumerate_until(
    m: &PossKripke,
    constraint: &StateSet,
    target: &StateSet,
    from: usize,
    bound: Option<usize>,
) -> Result<Possibility, OracleError> {
    check_size(m.len(), MAX_STATES)?;
    let bound = bound.unwrap_or(m.len());
    let mut best = Possibility::ZERO;
    until_dfs(
        m,
        constraint,
        target,
        from,
        Possibility::ONE,
        bound,
        &mut best,
    );
    Ok(best)
}

fn until_dfs(
    m: &PossKripke,
    constraint: &StateSet,
    target: &StateSet,
    s: usize,
    value: Possibility,
    steps_left: usize,
    best: &mut Possibility,
) {
    if target.contains(s) && value > *best {
        *best = value;
    }
    if steps_left == 0 || !constraint.contains(s) {
        return;
    }
    for t in 0..m.len() {
        let v = value.meet(m.transition(s, t));
        if v > *best {
            until_dfs(m, constraint, target, t, v, steps_left - 1, best);
        }
    }
}

/// An ultimately periodic path: `stem` ends where `cycle` starts, and the
/// cycle closes from its last state back to its first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lasso {
    pub stem: Vec<usize>,
    pub cycle: Vec<usize>,
}

impl Lasso {
    /// Meet over every edge of the stem, the cycle and its closing edge.
    pub fn weight(&self, m: &PossKripke) -> Possibility {
        let closing = (*self.cycle.last().unwrap(), self.cycle[0]);
        Possibility::meet_all(
            self.stem
                .windows(2)
                .chain(self.cycle.windows(2))
                .map(|w| m.transition(w[0], w[1]))
                .chain(std::iter::once(m.transition(closing.0, closing.1))),
        )
    }
}

/// Best cycle through `c` (simple apart from its endpoints) that visits `B`.
fn best_cycle(m: &PossKripke, target: &StateSet, c: usize) -> Option<(Vec<usize>, Possibility)> {
    struct Search<'a> {
        m: &'a PossKripke,
        target: &'a StateSet,
        start: usize,
        path: Vec<usize>,
        best: Option<(Vec<usize>, Possibility)>,
    }
    impl Search<'_> {
        fn run(&mut self, s: usize, value: Possibility, hit: bool) {
            for t in 0..self.m.len() {
                let p = self.m.transition(s, t);
                if p.is_zero() {
                    continue;
                }
                let v = value.meet(p);
                if self.best.as_ref().is_some_and(|(_, b)| v <= *b) {
                    continue;
                }
                if t == self.start {
                    if hit {
                        self.best = Some((self.path.clone(), v));
                    }
                } else if !self.path.contains(&t) {
                    self.path.push(t);
                    self.run(t, v, hit || self.target.contains(t));
                    self.path.pop();
                }
            }
        }
    }
    let mut search = Search {
        m,
        target,
        start: c,
        path: vec![c],
        best: None,
    };
    search.run(c, Possibility::ONE, target.contains(c));
    search.best
}

/// Best lasso from `from` whose cycle visits `B`, by enumerating simple stems
/// and simple cycles.
pub fn best_lasso(
    m: &PossKripke,
    target: &StateSet,
    from: usize,
) -> Result<Option<(Lasso, Possibility)>, OracleError> {
    check_size(m.len(), MAX_STATES)?;
    let cycles: Vec<_> = (0..m.len()).map(|c| best_cycle(m, target, c)).collect();
    let mut best: Option<(Lasso, Possibility)> = None;
    let mut stem = vec![from];
    stem_dfs(m, &cycles, Possibility::ONE, &mut stem, &mut best);
    Ok(best)
}

fn stem_dfs(
    m: &PossKripke,
    cycles: &[Option<(Vec<usize>, Possibility)>],
    value: Possibility,
    stem: &mut Vec<usize>,
    best: &mut Option<(Lasso, Possibility)>,
) {
    let c = *stem.last().unwrap();
    if let Some((cycle, w)) = &cycles[c] {
        let v = value.meet(*w);
        if best.as_ref().is_none_or(|(_, b)| v > *b) {
            let lasso = Lasso {
                stem: stem.clone(),
                cycle: cycle.clone(),
            };
            *best = Some((lasso, v));
        }
    }
    for t in 0..m.len() {
        let v = value.meet(m.transition(c, t));
        if v.is_zero() || stem.contains(&t) || best.as_ref().is_some_and(|(_, b)| v <= *b) {
            continue;
        }
        stem.push(t);
        stem_dfs(m, cycles, v, stem, best);
        stem.pop();
    }
}

/// `Po(from ⊨ □◇B)` as the best lasso weight.
pub fn enumerate_repeated(
    m: &PossKripke,
    target: &StateSet,
    from: usize,
) -> Result<Possibility, OracleError> {
    Ok(best_lasso(m, target, from)?.map_or(Possibility::ZERO, |(_, v)| v))
}

/// Whether every ordered pair of members (including `(t, t)`) is joined by a
/// nonempty path that stays inside `subset`.
pub fn is_strongly_connected(m: &PossKripke, subset: &StateSet) -> bool {
    if subset.is_empty() {
        return false;
    }
    subset.iter().all(|x| {
        let mut seen = StateSet::empty(m.len());
        let mut stack = vec![x];
        while let Some(s) = stack.pop() {
            for t in subset.iter() {
                if m.transition(s, t).is_positive() && seen.insert(t) {
                    stack.push(t);
                }
            }
        }
        subset.is_subset(&seen)
    })
}

/// All strongly connected subsets containing `a`.
pub fn strongly_connected_subsets(m: &PossKripke, a: usize) -> Result<Vec<StateSet>, OracleError> {
    check_size(m.len(), MAX_STATES)?;
    let n = m.len();
    Ok((0u32..1 << n)
        .filter(|bits| bits & (1 << a) != 0)
        .map(|bits| StateSet::from_indices(n, (0..n).filter(|i| bits & (1 << i) != 0)))
        .filter(|t| t.len() <= MAX_SUBSET && is_strongly_connected(m, t))
        .collect())
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

/// `D_T = ⋁_φ ⋀_{i=0..k} P⁺(t_φ(i), t_φ(i+1))` with `t_φ(0) = s` and
/// `t_φ(k+1) = t_φ(1)`.
pub fn d_t_oracle(
    m: &PossKripke,
    subset: &StateSet,
    s: usize,
    a: usize,
) -> Result<Possibility, OracleError> {
    check_size(subset.len(), MAX_SUBSET)?;
    if !subset.contains(a) {
        return Err(OracleError::NotMember(a));
    }
    if !is_strongly_connected(m, subset) {
        return Err(OracleError::NotStronglyConnected);
    }
    let plus = m.transitions().transitive_closure();
    let members: Vec<usize> = subset.iter().collect();
    Ok(Possibility::join_all(
        permutations(&members).into_iter().map(|order| {
            let mut chain = Vec::with_capacity(order.len() + 2);
            chain.push(s);
            chain.extend(&order);
            chain.push(order[0]);
            Possibility::meet_all(chain.windows(2).map(|w| plus.get(w[0], w[1])))
        }),
    ))
}

fn label_symbol(m: &PossKripke, a: &FiniteAutomaton, s: usize) -> Symbol {
    a.symbol(m.label(s).iter())
        .expect("labels within the automaton's alphabet")
}

/// Join of `P(π)` over finite paths `π` from `from` whose trace is accepted
/// by `a`, computed on the model alone by tracking the set of automaton
/// states reached so far.
pub fn good_prefix_possibility(
    m: &PossKripke,
    a: &FiniteAutomaton,
    from: usize,
) -> Result<Possibility, OracleError> {
    check_size(m.len() * a.len(), MAX_STATES)?;
    let start = a.step(a.initial(), label_symbol(m, a, from));
    let mut best = Possibility::ZERO;
    let mut visited = vec![(from, start.clone())];
    prefix_dfs(m, a, from, start, Possibility::ONE, &mut visited, &mut best);
    Ok(best)
}

fn prefix_dfs(
    m: &PossKripke,
    a: &FiniteAutomaton,
    s: usize,
    runs: BTreeSet<usize>,
    value: Possibility,
    visited: &mut Vec<(usize, BTreeSet<usize>)>,
    best: &mut Possibility,
) {
    if runs.iter().any(|&q| a.is_accepting(q)) && value > *best {
        *best = value;
    }
    if runs.is_empty() {
        return;
    }
    for t in 0..m.len() {
        let v = value.meet(m.transition(s, t));
        if v <= *best {
            continue;
        }
        let next = a.step(&runs, label_symbol(m, a, t));
        if visited.iter().any(|(u, r)| *u == t && *r == next) {
            continue;
        }
        visited.push((t, next.clone()));
        prefix_dfs(m, a, t, next, v, visited, best);
        visited.pop();
    }
}

/// All lifts `⟨s0,q1⟩⟨s1,q2⟩…` of a model path into the product, one per run
/// of `a` on the path's trace.
pub fn lift_path(
    m: &PossKripke,
    a: &FiniteAutomaton,
    prod: &ProductStructure,
    path: &FinitePath,
) -> Vec<FinitePath> {
    let mut runs: Vec<Vec<usize>> = a
        .step(a.initial(), label_symbol(m, a, path.first()))
        .into_iter()
        .map(|q| vec![q])
        .collect();
    for &s in &path.states()[1..] {
        let sym = label_symbol(m, a, s);
        runs = runs
            .into_iter()
            .flat_map(|run| {
                let q = *run.last().unwrap();
                a.successors(q, sym)
                    .map(|q2| {
                        let mut r = run.clone();
                        r.push(q2);
                        r
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
    }
    runs.into_iter()
        .map(|run| {
            let indices = path
                .states()
                .iter()
                .zip(&run)
                .map(|(&s, &q)| prod.index(s, q))
                .collect();
            prod.structure
                .path_from_indices(indices)
                .expect("lifted path follows product transitions")
        })
        .collect()
}

/// Every finite path of `m` with at most `max_len` transitions.
pub fn all_paths(m: &PossKripke, max_len: usize) -> Vec<FinitePath> {
    let mut out = Vec::new();
    let mut frontier: Vec<Vec<usize>> = (0..m.len()).map(|s| vec![s]).collect();
    for _ in 0..=max_len {
        let mut next = Vec::new();
        for p in frontier {
            let last = *p.last().unwrap();
            for t in 0..m.len() {
                if m.transition(last, t).is_positive() {
                    let mut q = p.clone();
                    q.push(t);
                    next.push(q);
                }
            }
            out.push(m.path_from_indices(p).expect("built along positive edges"));
        }
        frontier = next;
    }
    out
}

/// Every word over `2^props` of length at most `max_len`.
pub fn all_words(props: &[String], max_len: usize) -> Vec<Vec<Vec<String>>> {
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
    let mut out = vec![vec![]];
    let mut layer: Vec<Vec<Vec<String>>> = vec![vec![]];
    for _ in 0..max_len {
        layer = layer
            .into_iter()
            .flat_map(|w| {
                letters.iter().map(move |l| {
                    let mut w2 = w.clone();
                    w2.push(l.clone());
                    w2
                })
            })
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}
