//! Possibilistic model checking of linear-time properties.
//!
//! A [`PossKripke`] structure assigns possibility degrees in `[0, 1]` to
//! initial states and transitions. The possibility of a set of paths is the
//! join over its paths of the meet of the values along each path. This crate
//! computes that measure exactly for reachability, constrained and bounded
//! until, repeated reachability, regular safety properties given by a
//! good-prefix NFA, and ω-regular properties given by a Büchi automaton.
//!
//! ```
//! use possmc::format::parse_model;
//! use possmc::reach::repeated_reach_possibility;
//!
//! let m = parse_model("
//! states a b
//! init a 1
//! trans a -> b 0.4
//! trans a -> a 1
//! trans b -> b 1
//! ").unwrap();
//! let b = m.state_set(&["b"]).unwrap();
//! assert_eq!(repeated_reach_possibility(&m, &b).aggregate.value(), 0.4);
//! ```

pub mod algebra;
pub mod automata;
pub mod format;
pub mod kripke;
pub mod reach;

pub use algebra::{FuzzyMatrix, FuzzyVector, Possibility};
pub use automata::{AutomatonKind, FiniteAutomaton, ProductStructure};
pub use kripke::{FinitePath, PossKripke, RawKripke, StateSet};
pub use reach::{Method, PossibilityReport, UntilPartition};
