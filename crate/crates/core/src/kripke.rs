//! Possibilistic Kripke structures and the possibility measure on their paths.

use std::collections::{BTreeSet, HashMap, VecDeque};

use thiserror::Error;

use crate::algebra::{AlgebraError, FuzzyMatrix, FuzzyVector, Possibility};

/// Identifies the declaration in a [`RawKripke`] that an error refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decl {
    State(usize),
    Init(usize),
    Transition(usize),
    Label(usize),
    Prop(usize),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum KripkeError {
    #[error("the state set is empty")]
    EmptyStateSet,
    #[error("state `{name}` is declared twice")]
    DuplicateState { name: String, at: Decl },
    #[error("atomic proposition `{name}` is declared twice")]
    DuplicateProp { name: String, at: Decl },
    #[error("unknown state `{name}`")]
    UnknownState { name: String, at: Option<Decl> },
    #[error("unknown atomic proposition `{name}` in the label of `{state}`")]
    UnknownProp {
        name: String,
        state: String,
        at: Decl,
    },
    #[error("value {value} is outside [0, 1]")]
    OutOfRange { value: f64, at: Decl },
    #[error("duplicate transition `{src}` -> `{dst}`")]
    DuplicateTransition { src: String, dst: String, at: Decl },
    #[error("duplicate initial value for `{state}`")]
    DuplicateInit { state: String, at: Decl },
    #[error("duplicate label declaration for `{state}`")]
    DuplicateLabel { state: String, at: Decl },
    #[error("outgoing possibilities of `{state}` have supremum {sup}, expected 1")]
    RowSupremum { state: String, sup: f64, at: Decl },
    #[error("initial distribution has supremum {sup}, expected 1")]
    InitSupremum { sup: f64 },
    #[error("`{}` is not a path: transition `{src}` -> `{dst}` has possibility 0", .path.join(" "))]
    NotAPath {
        path: Vec<String>,
        src: String,
        dst: String,
    },
    #[error("a path needs at least one state")]
    EmptyPath,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// An unvalidated structure, as declared.
///
/// Unlisted transitions and initial values are `0`; states without a label
/// declaration get the empty label.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RawKripke {
    pub states: Vec<String>,
    pub init: Vec<(String, f64)>,
    pub transitions: Vec<(String, String, f64)>,
    pub props: Vec<String>,
    pub labels: Vec<(String, Vec<String>)>,
}

impl RawKripke {
    pub fn validate(&self) -> Result<PossKripke, KripkeError> {
        if self.states.is_empty() {
            return Err(KripkeError::EmptyStateSet);
        }
        let mut index = HashMap::new();
        for (i, name) in self.states.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(KripkeError::DuplicateState {
                    name: name.clone(),
                    at: Decl::State(i),
                });
            }
        }
        let lookup = |name: &str, at: Decl| {
            index
                .get(name)
                .copied()
                .ok_or_else(|| KripkeError::UnknownState {
                    name: name.to_string(),
                    at: Some(at),
                })
        };
        let value = |v: f64, at: Decl| {
            Possibility::new(v).map_err(|e| match e {
                AlgebraError::OutOfRange(value) => KripkeError::OutOfRange { value, at },
                _ => KripkeError::OutOfRange { value: v, at },
            })
        };

        let n = self.states.len();
        let mut matrix = vec![None; n * n];
        for (k, (src, dst, v)) in self.transitions.iter().enumerate() {
            let at = Decl::Transition(k);
            let (i, j) = (lookup(src, at)?, lookup(dst, at)?);
            let p = value(*v, at)?;
            if matrix[i * n + j].replace(p).is_some() {
                return Err(KripkeError::DuplicateTransition {
                    src: src.clone(),
                    dst: dst.clone(),
                    at,
                });
            }
        }
        let mut init = vec![None; n];
        for (k, (state, v)) in self.init.iter().enumerate() {
            let at = Decl::Init(k);
            let i = lookup(state, at)?;
            let p = value(*v, at)?;
            if init[i].replace(p).is_some() {
                return Err(KripkeError::DuplicateInit {
                    state: state.clone(),
                    at,
                });
            }
        }

        let mut props = BTreeSet::new();
        for (k, p) in self.props.iter().enumerate() {
            if !props.insert(p.clone()) {
                return Err(KripkeError::DuplicateProp {
                    name: p.clone(),
                    at: Decl::Prop(k),
                });
            }
        }
        let mut labels: Vec<Option<BTreeSet<String>>> = vec![None; n];
        for (k, (state, names)) in self.labels.iter().enumerate() {
            let at = Decl::Label(k);
            let i = lookup(state, at)?;
            let mut set = BTreeSet::new();
            for name in names {
                if !props.contains(name) {
                    return Err(KripkeError::UnknownProp {
                        name: name.clone(),
                        state: state.clone(),
                        at,
                    });
                }
                set.insert(name.clone());
            }
            if labels[i].replace(set).is_some() {
                return Err(KripkeError::DuplicateLabel {
                    state: state.clone(),
                    at,
                });
            }
        }

        let matrix = FuzzyMatrix::new(
            self.states.clone(),
            matrix.into_iter().map(Option::unwrap_or_default).collect(),
        )?;
        let init = FuzzyVector::new(
            self.states.clone(),
            init.into_iter().map(Option::unwrap_or_default).collect(),
        )?;
        PossKripke::from_parts(
            matrix,
            init,
            props,
            labels.into_iter().map(Option::unwrap_or_default).collect(),
        )
    }
}

/// A set of states of one structure, by index.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StateSet {
    members: Vec<bool>,
}

impl StateSet {
    pub fn empty(universe: usize) -> Self {
        StateSet {
            members: vec![false; universe],
        }
    }

    pub fn full(universe: usize) -> Self {
        StateSet {
            members: vec![true; universe],
        }
    }

    pub fn from_indices(universe: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut set = StateSet::empty(universe);
        for i in indices {
            set.insert(i);
        }
        set
    }

    pub fn universe(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.members.get(i).copied().unwrap_or(false)
    }

    pub fn insert(&mut self, i: usize) -> bool {
        !std::mem::replace(&mut self.members[i], true)
    }

    pub fn len(&self) -> usize {
        self.members.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.members.iter().any(|&b| b)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.members
            .iter()
            .enumerate()
            .filter_map(|(i, &b)| b.then_some(i))
    }

    pub fn complement(&self) -> StateSet {
        StateSet {
            members: self.members.iter().map(|b| !b).collect(),
        }
    }

    pub fn union(&self, other: &StateSet) -> StateSet {
        StateSet {
            members: self
                .members
                .iter()
                .zip(&other.members)
                .map(|(a, b)| *a || *b)
                .collect(),
        }
    }

    pub fn intersection(&self, other: &StateSet) -> StateSet {
        StateSet {
            members: self
                .members
                .iter()
                .zip(&other.members)
                .map(|(a, b)| *a && *b)
                .collect(),
        }
    }

    pub fn is_subset(&self, other: &StateSet) -> bool {
        self.members
            .iter()
            .zip(&other.members)
            .all(|(a, b)| !a || *b)
    }
}

/// A nonempty finite path fragment `s0 s1 … sn` with positive transitions.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FinitePath(Vec<usize>);

impl FinitePath {
    pub fn states(&self) -> &[usize] {
        &self.0
    }

    pub fn first(&self) -> usize {
        self.0[0]
    }

    pub fn last(&self) -> usize {
        *self.0.last().expect("nonempty")
    }

    /// Number of transitions.
    pub fn len(&self) -> usize {
        self.0.len() - 1
    }

    /// Whether the path is a single state with no transitions.
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// A validated finite possibilistic Kripke structure `(S, P, I, AP, L)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PossKripke {
    states: Vec<String>,
    index: HashMap<String, usize>,
    transitions: FuzzyMatrix,
    init: FuzzyVector,
    props: BTreeSet<String>,
    labels: Vec<BTreeSet<String>>,
}

impl PossKripke {
    /// Validates the normalisation conditions; nothing is repaired.
    pub fn from_parts(
        transitions: FuzzyMatrix,
        init: FuzzyVector,
        props: BTreeSet<String>,
        labels: Vec<BTreeSet<String>>,
    ) -> Result<Self, KripkeError> {
        let states = transitions.labels().to_vec();
        if init.labels() != states.as_slice() {
            return Err(AlgebraError::ShapeMismatch {
                left_dim: states.len(),
                left_labels: states.join(","),
                right_dim: init.dim(),
                right_labels: init.labels().join(","),
            }
            .into());
        }
        for (i, state) in states.iter().enumerate() {
            let sup = Possibility::join_all(transitions.row(i).iter().copied());
            if sup != Possibility::ONE {
                return Err(KripkeError::RowSupremum {
                    state: state.clone(),
                    sup: sup.value(),
                    at: Decl::State(i),
                });
            }
        }
        let sup = Possibility::join_all(init.entries().iter().copied());
        if sup != Possibility::ONE {
            return Err(KripkeError::InitSupremum { sup: sup.value() });
        }
        assert_eq!(labels.len(), states.len(), "one label set per state");
        for (i, label) in labels.iter().enumerate() {
            if let Some(p) = label.iter().find(|p| !props.contains(*p)) {
                return Err(KripkeError::UnknownProp {
                    name: p.clone(),
                    state: states[i].clone(),
                    at: Decl::State(i),
                });
            }
        }
        let index = states
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        Ok(PossKripke {
            states,
            index,
            transitions,
            init,
            props,
            labels,
        })
    }

    /// Structure with `AP = S` and `L(s) = {s}`.
    pub fn with_state_labels(
        transitions: FuzzyMatrix,
        init: FuzzyVector,
    ) -> Result<Self, KripkeError> {
        let props = transitions.labels().iter().cloned().collect();
        let labels = transitions
            .labels()
            .iter()
            .map(|s| BTreeSet::from([s.clone()]))
            .collect();
        PossKripke::from_parts(transitions, init, props, labels)
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn state_name(&self, i: usize) -> &str {
        &self.states[i]
    }

    pub fn state_index(&self, name: &str) -> Result<usize, KripkeError> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| KripkeError::UnknownState {
                name: name.to_string(),
                at: None,
            })
    }

    pub fn transitions(&self) -> &FuzzyMatrix {
        &self.transitions
    }

    pub fn transition(&self, i: usize, j: usize) -> Possibility {
        self.transitions.get(i, j)
    }

    pub fn init(&self) -> &FuzzyVector {
        &self.init
    }

    pub fn initial(&self, i: usize) -> Possibility {
        self.init.get(i)
    }

    pub fn props(&self) -> &BTreeSet<String> {
        &self.props
    }

    pub fn label(&self, i: usize) -> &BTreeSet<String> {
        &self.labels[i]
    }

    pub fn labels(&self) -> &[BTreeSet<String>] {
        &self.labels
    }

    /// Number of transitions with positive possibility.
    pub fn edge_count(&self) -> usize {
        self.transitions
            .entries()
            .iter()
            .filter(|p| p.is_positive())
            .count()
    }

    /// Resolves state names into a [`StateSet`].
    pub fn state_set<S: AsRef<str>>(&self, names: &[S]) -> Result<StateSet, KripkeError> {
        let mut set = StateSet::empty(self.len());
        for name in names {
            set.insert(self.state_index(name.as_ref())?);
        }
        Ok(set)
    }

    pub fn state_names(&self, set: &StateSet) -> Vec<&str> {
        set.iter().map(|i| self.state_name(i)).collect()
    }

    /// `Post(s)`.
    pub fn post(&self, s: usize) -> StateSet {
        StateSet::from_indices(
            self.len(),
            (0..self.len()).filter(|&t| self.transition(s, t).is_positive()),
        )
    }

    /// `Pre(s)`.
    pub fn pre(&self, s: usize) -> StateSet {
        StateSet::from_indices(
            self.len(),
            (0..self.len()).filter(|&t| self.transition(t, s).is_positive()),
        )
    }

    /// `Post*(B)`: states reachable from `B` in zero or more steps.
    pub fn post_star(&self, from: &StateSet) -> StateSet {
        self.search(from, |m, s, t| m.transition(s, t).is_positive())
    }

    /// `Pre*(B)`: states from which `B` is reachable in zero or more steps.
    pub fn pre_star(&self, to: &StateSet) -> StateSet {
        self.search(to, |m, s, t| m.transition(t, s).is_positive())
    }

    fn search(&self, seeds: &StateSet, edge: impl Fn(&Self, usize, usize) -> bool) -> StateSet {
        let mut seen = seeds.clone();
        let mut queue: VecDeque<usize> = seeds.iter().collect();
        while let Some(s) = queue.pop_front() {
            for t in 0..self.len() {
                if edge(self, s, t) && seen.insert(t) {
                    queue.push_back(t);
                }
            }
        }
        seen
    }

    /// Checks that the named states form a path fragment of this structure.
    pub fn finite_path<S: AsRef<str>>(&self, names: &[S]) -> Result<FinitePath, KripkeError> {
        let indices = names
            .iter()
            .map(|n| self.state_index(n.as_ref()))
            .collect::<Result<Vec<_>, _>>()?;
        self.path_from_indices(indices)
    }

    pub fn path_from_indices(&self, indices: Vec<usize>) -> Result<FinitePath, KripkeError> {
        if indices.is_empty() {
            return Err(KripkeError::EmptyPath);
        }
        for &i in &indices {
            if i >= self.len() {
                return Err(KripkeError::UnknownState {
                    name: format!("#{i}"),
                    at: None,
                });
            }
        }
        if let Some(w) = indices
            .windows(2)
            .find(|w| self.transition(w[0], w[1]).is_zero())
        {
            return Err(KripkeError::NotAPath {
                path: indices.iter().map(|&i| self.states[i].clone()).collect(),
                src: self.states[w[0]].clone(),
                dst: self.states[w[1]].clone(),
            });
        }
        Ok(FinitePath(indices))
    }

    /// `Po(Cyl(s0 … sn)) = I(s0) ∧ P(s0,s1) ∧ … ∧ P(sn-1,sn)`.
    pub fn cylinder_possibility(&self, path: &FinitePath) -> Possibility {
        self.initial(path.first()).meet(self.path_weight(path))
    }

    /// `P(s0,s1) ∧ … ∧ P(sn-1,sn)`, without the initial value.
    pub fn path_weight(&self, path: &FinitePath) -> Possibility {
        Possibility::meet_all(path.0.windows(2).map(|w| self.transition(w[0], w[1])))
    }

    /// Possibility of a finite union of cylinder sets; the empty union has
    /// possibility `0`.
    pub fn path_set_possibility<'a>(
        &self,
        paths: impl IntoIterator<Item = &'a FinitePath>,
    ) -> Possibility {
        Possibility::join_all(paths.into_iter().map(|p| self.cylinder_possibility(p)))
    }

    /// The same structure with `s` as its unique initial state.
    pub fn rebase_initial(&self, s: &str) -> Result<PossKripke, KripkeError> {
        let i = self.state_index(s)?;
        Ok(self.rebase_initial_index(i))
    }

    pub fn rebase_initial_index(&self, i: usize) -> PossKripke {
        let entries = (0..self.len())
            .map(|j| {
                if j == i {
                    Possibility::ONE
                } else {
                    Possibility::ZERO
                }
            })
            .collect();
        PossKripke {
            init: FuzzyVector::new(self.states.clone(), entries).expect("same labels"),
            ..self.clone()
        }
    }

    pub fn to_raw(&self) -> RawKripke {
        let n = self.len();
        RawKripke {
            states: self.states.clone(),
            init: (0..n)
                .filter(|&i| self.initial(i).is_positive())
                .map(|i| (self.states[i].clone(), self.initial(i).value()))
                .collect(),
            transitions: (0..n)
                .flat_map(|i| (0..n).map(move |j| (i, j)))
                .filter(|&(i, j)| self.transition(i, j).is_positive())
                .map(|(i, j)| {
                    (
                        self.states[i].clone(),
                        self.states[j].clone(),
                        self.transition(i, j).value(),
                    )
                })
                .collect(),
            props: self.props.iter().cloned().collect(),
            labels: (0..n)
                .map(|i| {
                    (
                        self.states[i].clone(),
                        self.labels[i].iter().cloned().collect(),
                    )
                })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn four_state_raw() -> RawKripke {
        let s = |x: &str| x.to_string();
        RawKripke {
            states: vec![s("s0"), s("s1"), s("s2"), s("s3")],
            init: vec![(s("s0"), 1.0)],
            transitions: vec![
                (s("s0"), s("s1"), 1.0),
                (s("s0"), s("s2"), 0.2),
                (s("s1"), s("s2"), 1.0),
                (s("s1"), s("s3"), 0.9),
                (s("s2"), s("s1"), 0.7),
                (s("s2"), s("s3"), 1.0),
                (s("s3"), s("s3"), 1.0),
            ],
            props: vec![s("s0"), s("s1"), s("s2"), s("s3")],
            labels: ["s0", "s1", "s2", "s3"]
                .iter()
                .map(|x| (s(x), vec![s(x)]))
                .collect(),
        }
    }

    #[test]
    fn four_state_is_valid() {
        let m = four_state_raw().validate().unwrap();
        assert_eq!(m.len(), 4);
        assert_eq!(m.edge_count(), 7);
    }

    #[test]
    fn rejects_row_supremum() {
        let mut raw = four_state_raw();
        raw.transitions[6].2 = 0.5;
        let err = raw.validate().unwrap_err();
        assert_eq!(
            err,
            KripkeError::RowSupremum {
                state: "s3".into(),
                sup: 0.5,
                at: Decl::State(3)
            }
        );
    }

    #[test]
    fn rejects_malformed_input() {
        assert_eq!(
            RawKripke::default().validate().unwrap_err(),
            KripkeError::EmptyStateSet
        );

        let mut raw = four_state_raw();
        raw.init[0].1 = 0.4;
        assert_eq!(
            raw.validate().unwrap_err(),
            KripkeError::InitSupremum { sup: 0.4 }
        );

        let mut raw = four_state_raw();
        raw.transitions.push(("s0".into(), "s9".into(), 0.5));
        assert!(
            matches!(raw.validate().unwrap_err(), KripkeError::UnknownState { name, at: Some(Decl::Transition(7)) } if name == "s9")
        );

        let mut raw = four_state_raw();
        raw.labels[1].1.push("q".into());
        assert!(
            matches!(raw.validate().unwrap_err(), KripkeError::UnknownProp { name, .. } if name == "q")
        );

        let mut raw = four_state_raw();
        raw.transitions[1].2 = 1.5;
        assert_eq!(
            raw.validate().unwrap_err(),
            KripkeError::OutOfRange {
                value: 1.5,
                at: Decl::Transition(1)
            }
        );

        let mut raw = four_state_raw();
        raw.transitions.push(("s0".into(), "s1".into(), 0.5));
        assert!(matches!(
            raw.validate().unwrap_err(),
            KripkeError::DuplicateTransition { .. }
        ));
    }

    #[test]
    fn graph_queries() {
        let m = four_state_raw().validate().unwrap();
        assert_eq!(m.state_names(&m.post(0)), vec!["s1", "s2"]);
        assert_eq!(m.state_names(&m.pre(1)), vec!["s0", "s2"]);
        let s3 = m.state_set(&["s3"]).unwrap();
        assert_eq!(m.pre_star(&s3), StateSet::full(4));
        assert_eq!(m.post_star(&s3), s3);
        assert!(m.post_star(&StateSet::empty(4)).is_empty());
        for s in 0..m.len() {
            assert!(!m.post(s).is_empty());
        }
    }

    #[test]
    fn cylinders() {
        let m = four_state_raw().validate().unwrap();
        let po = |names: &[&str]| {
            m.cylinder_possibility(&m.finite_path(names).unwrap())
                .value()
        };
        assert_eq!(po(&["s0", "s1", "s2"]), 1.0);
        assert_eq!(po(&["s0", "s2"]), 0.2);
        assert_eq!(po(&["s0", "s1", "s3"]), 0.9);
        let single = m.finite_path(&["s0"]).unwrap();
        assert!(single.is_empty());
        assert_eq!(single.states(), &[0]);
        assert_eq!(m.cylinder_possibility(&single).value(), 1.0);
        assert!(!m.finite_path(&["s0", "s2"]).unwrap().is_empty());
        assert_eq!(po(&["s1"]), 0.0);
        assert!(matches!(
            m.finite_path(&["s0", "s3"]),
            Err(KripkeError::NotAPath { .. })
        ));
        assert!(matches!(
            m.finite_path(&["s0", "sx"]),
            Err(KripkeError::UnknownState { .. })
        ));
        assert_eq!(m.finite_path::<&str>(&[]), Err(KripkeError::EmptyPath));
    }

    #[test]
    fn path_sets() {
        let m = four_state_raw().validate().unwrap();
        let complement = [
            m.finite_path(&["s0", "s2"]).unwrap(),
            m.finite_path(&["s0", "s1", "s3"]).unwrap(),
        ];
        assert_eq!(m.path_set_possibility(&complement).value(), 0.9);
        assert_eq!(m.path_set_possibility(&[]), Possibility::ZERO);
        let singles: Vec<_> = m
            .states()
            .iter()
            .map(|s| m.finite_path(&[s]).unwrap())
            .collect();
        assert_eq!(m.path_set_possibility(&singles), Possibility::ONE);
    }

    #[test]
    fn rebasing() {
        let m = four_state_raw().validate().unwrap();
        assert_eq!(m.rebase_initial("s0").unwrap(), m);
        let m2 = m.rebase_initial("s2").unwrap();
        let p = m2.finite_path(&["s2", "s3"]).unwrap();
        assert_eq!(m2.cylinder_possibility(&p), Possibility::ONE);
        let twice = m
            .rebase_initial("s1")
            .unwrap()
            .rebase_initial("s2")
            .unwrap();
        assert_eq!(twice, m2);
        assert!(m.rebase_initial("nope").is_err());
    }

    #[test]
    fn raw_round_trip() {
        let m = four_state_raw().validate().unwrap();
        assert_eq!(m.to_raw().validate().unwrap(), m);
    }
}
