//! Finite automata over `2^AP` and their product with a Kripke structure.
//!
//! Regular safety properties reduce to `◇(S×F)` and ω-regular properties to
//! `□◇(S×F)` on the product.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::algebra::{FuzzyMatrix, FuzzyVector, Possibility};
use crate::kripke::{KripkeError, PossKripke, StateSet};
use crate::reach::{self, Method, PossibilityReport};

/// Largest supported `|AP|`; completion enumerates all `2^|AP|` symbols.
pub const MAX_PROPS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AutomatonKind {
    Nfa,
    Nba,
}

impl AutomatonKind {
    pub fn as_str(self) -> &'static str {
        match self {
            AutomatonKind::Nfa => "nfa",
            AutomatonKind::Nba => "nba",
        }
    }
}

impl fmt::Display for AutomatonKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Identifies the declaration in a [`RawAutomaton`] that an error refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AutDecl {
    State(usize),
    Prop(usize),
    Initial(usize),
    Accepting(usize),
    Transition(usize),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AutomatonError {
    #[error("the automaton has no states")]
    NoStates,
    #[error("automaton state `{name}` is declared twice")]
    DuplicateState { name: String, at: AutDecl },
    #[error("atomic proposition `{name}` is declared twice")]
    DuplicateProp { name: String, at: AutDecl },
    #[error("unknown automaton state `{name}`")]
    UnknownState { name: String, at: AutDecl },
    #[error("unknown atomic proposition `{name}` in a symbol")]
    UnknownProp { name: String, at: Option<AutDecl> },
    #[error("atomic proposition `{name}` repeated within a symbol")]
    RepeatedInSymbol { name: String, at: AutDecl },
    #[error("the initial state set is empty")]
    EmptyInitial,
    #[error("{count} atomic propositions exceed the supported maximum of {MAX_PROPS}")]
    AlphabetTooLarge { count: usize },
    #[error("automaton is not complete: state `{state}` has no move on {symbol}")]
    Incomplete { state: String, symbol: String },
    #[error("expected an {expected} automaton, found {found}")]
    WrongKind {
        expected: AutomatonKind,
        found: AutomatonKind,
    },
    #[error(
        "label of state `{state}` contains `{prop}`, which is not in the automaton's alphabet"
    )]
    AlphabetMismatch { state: String, prop: String },
    #[error("product structure is invalid: {0}")]
    Product(#[from] KripkeError),
}

/// A letter of `2^AP`, as a bit set over the automaton's sorted propositions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(u32);

impl Symbol {
    pub fn bits(self) -> u32 {
        self.0
    }
}

/// An unvalidated automaton, as declared. Each transition carries its symbol
/// as a list of proposition names.
#[derive(Debug, Clone, PartialEq)]
pub struct RawAutomaton {
    pub kind: AutomatonKind,
    pub states: Vec<String>,
    pub props: Vec<String>,
    pub initial: Vec<String>,
    pub accepting: Vec<String>,
    pub transitions: Vec<(String, Vec<String>, String)>,
}

impl RawAutomaton {
    pub fn validate(&self) -> Result<FiniteAutomaton, AutomatonError> {
        if self.states.is_empty() {
            return Err(AutomatonError::NoStates);
        }
        let mut index = HashMap::new();
        for (i, s) in self.states.iter().enumerate() {
            if index.insert(s.as_str(), i).is_some() {
                return Err(AutomatonError::DuplicateState {
                    name: s.clone(),
                    at: AutDecl::State(i),
                });
            }
        }
        let lookup = |name: &str, at: AutDecl| {
            index
                .get(name)
                .copied()
                .ok_or_else(|| AutomatonError::UnknownState {
                    name: name.to_string(),
                    at,
                })
        };
        let mut props = BTreeSet::new();
        for (i, p) in self.props.iter().enumerate() {
            if !props.insert(p.clone()) {
                return Err(AutomatonError::DuplicateProp {
                    name: p.clone(),
                    at: AutDecl::Prop(i),
                });
            }
        }
        if props.len() > MAX_PROPS {
            return Err(AutomatonError::AlphabetTooLarge { count: props.len() });
        }
        let props: Vec<String> = props.into_iter().collect();
        let mut a = FiniteAutomaton {
            kind: self.kind,
            states: self.states.clone(),
            props,
            delta: BTreeMap::new(),
            initial: BTreeSet::new(),
            accepting: BTreeSet::new(),
        };
        for (i, q) in self.initial.iter().enumerate() {
            a.initial.insert(lookup(q, AutDecl::Initial(i))?);
        }
        if a.initial.is_empty() {
            return Err(AutomatonError::EmptyInitial);
        }
        for (i, q) in self.accepting.iter().enumerate() {
            a.accepting.insert(lookup(q, AutDecl::Accepting(i))?);
        }
        for (i, (src, symbol, dst)) in self.transitions.iter().enumerate() {
            let at = AutDecl::Transition(i);
            let (src, dst) = (lookup(src, at)?, lookup(dst, at)?);
            let mut bits = 0u32;
            for name in symbol {
                let bit = a
                    .prop_bit(name)
                    .map_err(|name| AutomatonError::UnknownProp { name, at: Some(at) })?;
                if bits & bit != 0 {
                    return Err(AutomatonError::RepeatedInSymbol {
                        name: name.clone(),
                        at,
                    });
                }
                bits |= bit;
            }
            a.delta.entry((src, Symbol(bits))).or_default().insert(dst);
        }
        Ok(a)
    }
}

/// A nondeterministic automaton `(Q, 2^AP, δ, I, F)`, read as an NFA or a
/// Büchi automaton according to its kind.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteAutomaton {
    kind: AutomatonKind,
    states: Vec<String>,
    props: Vec<String>,
    delta: BTreeMap<(usize, Symbol), BTreeSet<usize>>,
    initial: BTreeSet<usize>,
    accepting: BTreeSet<usize>,
}

impl FiniteAutomaton {
    /// One accepting state looping on every symbol.
    pub fn universal(kind: AutomatonKind, props: &[String]) -> Result<Self, AutomatonError> {
        let q = "u".to_string();
        let raw = RawAutomaton {
            kind,
            states: vec![q.clone()],
            props: props.to_vec(),
            initial: vec![q.clone()],
            accepting: vec![q],
            transitions: vec![],
        };
        let mut a = raw.validate()?;
        for sym in a.symbols() {
            a.delta.entry((0, sym)).or_default().insert(0);
        }
        Ok(a)
    }

    pub fn kind(&self) -> AutomatonKind {
        self.kind
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Atomic propositions in sorted order.
    pub fn props(&self) -> &[String] {
        &self.props
    }

    pub fn initial(&self) -> &BTreeSet<usize> {
        &self.initial
    }

    pub fn accepting(&self) -> &BTreeSet<usize> {
        &self.accepting
    }

    pub fn is_accepting(&self, q: usize) -> bool {
        self.accepting.contains(&q)
    }

    fn prop_bit(&self, name: &str) -> Result<u32, String> {
        self.props
            .binary_search_by(|p| p.as_str().cmp(name))
            .map(|i| 1 << i)
            .map_err(|_| name.to_string())
    }

    /// All `2^|AP|` symbols.
    pub fn symbols(&self) -> impl Iterator<Item = Symbol> {
        (0..1u32 << self.props.len()).map(Symbol)
    }

    /// Encodes a set of propositions; fails on a proposition outside `AP`.
    pub fn symbol<S: AsRef<str>>(
        &self,
        props: impl IntoIterator<Item = S>,
    ) -> Result<Symbol, AutomatonError> {
        let mut bits = 0;
        for p in props {
            bits |= self
                .prop_bit(p.as_ref())
                .map_err(|name| AutomatonError::UnknownProp { name, at: None })?;
        }
        Ok(Symbol(bits))
    }

    /// Proposition names of a symbol, sorted.
    pub fn symbol_props(&self, sym: Symbol) -> Vec<&str> {
        self.props
            .iter()
            .enumerate()
            .filter(|(i, _)| sym.0 & (1 << i) != 0)
            .map(|(_, p)| p.as_str())
            .collect()
    }

    pub fn symbol_text(&self, sym: Symbol) -> String {
        format!("{{{}}}", self.symbol_props(sym).join(","))
    }

    /// `δ(q, u)`.
    pub fn successors(&self, q: usize, sym: Symbol) -> impl Iterator<Item = usize> + '_ {
        self.delta.get(&(q, sym)).into_iter().flatten().copied()
    }

    /// All transitions `(q, u, q')` in deterministic order.
    pub fn transitions(&self) -> impl Iterator<Item = (usize, Symbol, usize)> + '_ {
        self.delta
            .iter()
            .flat_map(|(&(q, sym), dsts)| dsts.iter().map(move |&d| (q, sym, d)))
    }

    /// `δ(R, u)` for a set of states `R`.
    pub fn step(&self, from: &BTreeSet<usize>, sym: Symbol) -> BTreeSet<usize> {
        from.iter().flat_map(|&q| self.successors(q, sym)).collect()
    }

    pub fn is_complete(&self) -> bool {
        self.first_missing().is_none()
    }

    fn first_missing(&self) -> Option<(usize, Symbol)> {
        (0..self.len())
            .flat_map(|q| self.symbols().map(move |u| (q, u)))
            .find(|key| self.delta.get(key).is_none_or(BTreeSet::is_empty))
    }

    /// Adds a non-accepting trap state absorbing every missing move. An
    /// automaton that is already complete is returned unchanged.
    pub fn complete(&self) -> FiniteAutomaton {
        if self.is_complete() {
            return self.clone();
        }
        let mut a = self.clone();
        let mut name = "q_trap".to_string();
        let mut k = 1;
        while a.states.contains(&name) {
            name = format!("q_trap{k}");
            k += 1;
        }
        let trap = a.states.len();
        a.states.push(name);
        let symbols: Vec<_> = a.symbols().collect();
        for q in 0..a.states.len() {
            for &u in &symbols {
                let dsts = a.delta.entry((q, u)).or_default();
                if dsts.is_empty() || q == trap {
                    dsts.insert(trap);
                }
            }
        }
        a
    }

    /// Whether some run on `word` ends in an accepting state.
    pub fn accepts_finite<S: AsRef<str>>(&self, word: &[Vec<S>]) -> Result<bool, AutomatonError> {
        let mut current = self.initial.clone();
        for letter in word {
            let sym = self.symbol(letter.iter().map(|s| s.as_ref()))?;
            current = self.step(&current, sym);
        }
        Ok(current.iter().any(|q| self.accepting.contains(q)))
    }

    pub fn to_raw(&self) -> RawAutomaton {
        RawAutomaton {
            kind: self.kind,
            states: self.states.clone(),
            props: self.props.clone(),
            initial: self
                .initial
                .iter()
                .map(|&q| self.states[q].clone())
                .collect(),
            accepting: self
                .accepting
                .iter()
                .map(|&q| self.states[q].clone())
                .collect(),
            transitions: self
                .transitions()
                .map(|(q, u, d)| {
                    (
                        self.states[q].clone(),
                        self.symbol_props(u).into_iter().map(String::from).collect(),
                        self.states[d].clone(),
                    )
                })
                .collect(),
        }
    }
}

/// The product `M⊗A` with goal set `S×F`.
///
/// Product state `⟨s,q⟩` is named `s|q` and has index `s·|Q| + q`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductStructure {
    pub structure: PossKripke,
    pub goal: StateSet,
    automaton_states: usize,
    /// `δ(I, L(s))` for each model state `s`.
    entries: Vec<BTreeSet<usize>>,
}

impl ProductStructure {
    pub fn index(&self, s: usize, q: usize) -> usize {
        s * self.automaton_states + q
    }

    pub fn split(&self, idx: usize) -> (usize, usize) {
        (idx / self.automaton_states, idx % self.automaton_states)
    }

    /// Product states `⟨s,q⟩` with `q ∈ δ(q0, L(s))` for some initial `q0`.
    pub fn entry_points(&self, s: usize) -> impl Iterator<Item = usize> + '_ {
        self.entries[s].iter().map(move |&q| self.index(s, q))
    }
}

fn label_symbols(m: &PossKripke, a: &FiniteAutomaton) -> Result<Vec<Symbol>, AutomatonError> {
    (0..m.len())
        .map(|s| {
            a.symbol(m.label(s).iter()).map_err(|e| match e {
                AutomatonError::UnknownProp { name, .. } => AutomatonError::AlphabetMismatch {
                    state: m.state_name(s).to_string(),
                    prop: name,
                },
                e => e,
            })
        })
        .collect()
}

/// Builds `M⊗A`. The automaton must be complete.
pub fn product(m: &PossKripke, a: &FiniteAutomaton) -> Result<ProductStructure, AutomatonError> {
    if let Some((q, u)) = a.first_missing() {
        return Err(AutomatonError::Incomplete {
            state: a.states[q].clone(),
            symbol: a.symbol_text(u),
        });
    }
    let letters = label_symbols(m, a)?;
    let (ns, nq) = (m.len(), a.len());
    let names: Vec<String> = (0..ns)
        .flat_map(|s| (0..nq).map(move |q| (s, q)))
        .map(|(s, q)| format!("{}|{}", m.state_name(s), a.states[q]))
        .collect();

    let entries: Vec<BTreeSet<usize>> = letters.iter().map(|&u| a.step(&a.initial, u)).collect();
    let mut init = vec![Possibility::ZERO; ns * nq];
    for s in 0..ns {
        for &q in &entries[s] {
            init[s * nq + q] = m.initial(s);
        }
    }

    let mut matrix = vec![Possibility::ZERO; ns * nq * ns * nq];
    let width = ns * nq;
    for s in 0..ns {
        for s2 in 0..ns {
            let p = m.transition(s, s2);
            if p.is_zero() {
                continue;
            }
            for q in 0..nq {
                for q2 in a.successors(q, letters[s2]) {
                    matrix[(s * nq + q) * width + s2 * nq + q2] = p;
                }
            }
        }
    }

    let transitions = FuzzyMatrix::new(names.clone(), matrix).expect("distinct product names");
    let init = FuzzyVector::new(names, init).expect("matching dimension");
    let structure = PossKripke::with_state_labels(transitions, init)?;
    let goal = StateSet::from_indices(
        ns * nq,
        (0..ns).flat_map(|s| a.accepting.iter().map(move |&q| s * nq + q)),
    );
    Ok(ProductStructure {
        structure,
        goal,
        automaton_states: nq,
        entries,
    })
}

fn lift_to_model(
    m: &PossKripke,
    prod: &ProductStructure,
    on_product: &PossibilityReport,
    method: Method,
) -> PossibilityReport {
    let per_state = (0..m.len())
        .map(|s| Possibility::join_all(prod.entry_points(s).map(|i| on_product.per_state[i])))
        .collect();
    PossibilityReport::new(m, per_state, method, None)
}

fn expect_kind(a: &FiniteAutomaton, expected: AutomatonKind) -> Result<(), AutomatonError> {
    if a.kind != expected {
        return Err(AutomatonError::WrongKind {
            expected,
            found: a.kind,
        });
    }
    Ok(())
}

/// Possibility of a trace with a prefix accepted by the good-prefix NFA `a`,
/// via `◇(S×F)` on the product.
pub fn check_safety(
    m: &PossKripke,
    a: &FiniteAutomaton,
) -> Result<PossibilityReport, AutomatonError> {
    expect_kind(a, AutomatonKind::Nfa)?;
    let prod = product(m, &a.complete())?;
    let on_product = reach::reach_via_closure(&prod.structure, &prod.goal);
    Ok(lift_to_model(m, &prod, &on_product, Method::ClosureFormula))
}

/// Possibility of a trace in `L_ω(a)`, via `□◇(S×F)` on the product.
pub fn check_omega(
    m: &PossKripke,
    a: &FiniteAutomaton,
) -> Result<PossibilityReport, AutomatonError> {
    expect_kind(a, AutomatonKind::Nba)?;
    let prod = product(m, &a.complete())?;
    let on_product = reach::repeated_reach_possibility(&prod.structure, &prod.goal);
    Ok(lift_to_model(
        m,
        &prod,
        &on_product,
        Method::RepeatedClosure,
    ))
}
