//! Line-oriented text formats for models and automata, and DOT export.
//!
//! Model grammar (one declaration per line, `#` starts a comment):
//!
//! ```text
//! model   := line*
//! line    := decl? comment?
//! decl    := "states" ID+
//!          | "ap" ID*
//!          | "init" ID NUM
//!          | "trans" ID "->" ID NUM
//!          | "label" ID ID*
//! ```
//!
//! Automaton grammar:
//!
//! ```text
//! automaton := line*
//! decl      := "automaton" ("nfa" | "nba")
//!            | "states" ID+
//!            | "ap" ID*
//!            | "initial" ID+
//!            | "accepting" ID*
//!            | "trans" ID symbol "->" ID
//! symbol    := "{" (ID ("," ID)*)? "}"
//! ```
//!
//! `ID` is any run of characters other than whitespace, `{`, `}`, `,` and
//! `#`. `NUM` is a decimal literal in `[0, 1]`. Lists may be split over
//! several lines of the same keyword. Unlisted transitions and initial values
//! are `0`; a state without a `label` line has the empty label.

use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::algebra::Possibility;
use crate::automata::{
    AutDecl, AutomatonError, AutomatonKind, FiniteAutomaton, ProductStructure, RawAutomaton,
};
use crate::kripke::{Decl, KripkeError, PossKripke, RawKripke, StateSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Location {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseErrorKind {
    #[error("{0}")]
    Syntax(String),
    #[error(transparent)]
    Model(#[from] KripkeError),
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("{location}: {kind}")]
pub struct ParseError {
    pub location: Location,
    pub kind: ParseErrorKind,
}

impl ParseError {
    fn syntax(location: Location, msg: impl Into<String>) -> Self {
        ParseError {
            location,
            kind: ParseErrorKind::Syntax(msg.into()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
struct Token<'a> {
    text: &'a str,
    at: Location,
}

fn tokenize(line_no: usize, line: &str) -> Vec<Token<'_>> {
    let line = match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    };
    let mut tokens = Vec::new();
    let mut start: Option<usize> = None;
    let column = |byte: usize| line[..byte].chars().count() + 1;
    for (i, c) in line.char_indices() {
        let special = matches!(c, '{' | '}' | ',');
        if c.is_whitespace() || special {
            if let Some(s) = start.take() {
                tokens.push(Token {
                    text: &line[s..i],
                    at: Location {
                        line: line_no,
                        column: column(s),
                    },
                });
            }
            if special {
                tokens.push(Token {
                    text: &line[i..i + 1],
                    at: Location {
                        line: line_no,
                        column: column(i),
                    },
                });
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        tokens.push(Token {
            text: &line[s..],
            at: Location {
                line: line_no,
                column: column(s),
            },
        });
    }
    tokens
}

fn lines(text: &str) -> impl Iterator<Item = Vec<Token<'_>>> {
    text.lines()
        .enumerate()
        .map(|(i, l)| tokenize(i + 1, l))
        .filter(|t| !t.is_empty())
}

fn is_ident(tok: &Token<'_>) -> bool {
    !matches!(tok.text, "{" | "}" | "," | "->")
}

fn ident<'a>(tok: Option<&Token<'a>>, end: Location, what: &str) -> Result<&'a str, ParseError> {
    match tok {
        Some(t) if is_ident(t) => Ok(t.text),
        Some(t) => Err(ParseError::syntax(
            t.at,
            format!("expected {what}, found `{}`", t.text),
        )),
        None => Err(ParseError::syntax(end, format!("expected {what}"))),
    }
}

fn expect(tok: Option<&Token<'_>>, end: Location, text: &str) -> Result<(), ParseError> {
    match tok {
        Some(t) if t.text == text => Ok(()),
        Some(t) => Err(ParseError::syntax(
            t.at,
            format!("expected `{text}`, found `{}`", t.text),
        )),
        None => Err(ParseError::syntax(end, format!("expected `{text}`"))),
    }
}

fn number(tok: Option<&Token<'_>>, end: Location) -> Result<f64, ParseError> {
    let t = tok.ok_or_else(|| ParseError::syntax(end, "expected a possibility value"))?;
    let v: f64 = t
        .text
        .parse()
        .map_err(|_| ParseError::syntax(t.at, format!("`{}` is not a decimal number", t.text)))?;
    Possibility::new(v).map_err(|e| ParseError::syntax(t.at, e.to_string()))?;
    Ok(v)
}

fn no_trailing(tokens: &[Token<'_>], used: usize) -> Result<(), ParseError> {
    match tokens.get(used) {
        Some(t) => Err(ParseError::syntax(t.at, format!("unexpected `{}`", t.text))),
        None => Ok(()),
    }
}

fn end_of(tokens: &[Token<'_>]) -> Location {
    let last = tokens.last().expect("nonempty line");
    Location {
        line: last.at.line,
        column: last.at.column + last.text.chars().count(),
    }
}

/// Source locations of each declaration, for mapping validation errors.
#[derive(Default)]
struct ModelSpans {
    states: Vec<Location>,
    props: Vec<Location>,
    init: Vec<Location>,
    transitions: Vec<Location>,
    labels: Vec<Location>,
}

impl ModelSpans {
    fn locate(&self, err: &KripkeError) -> Location {
        let decl = match err {
            KripkeError::DuplicateState { at, .. }
            | KripkeError::DuplicateProp { at, .. }
            | KripkeError::UnknownProp { at, .. }
            | KripkeError::OutOfRange { at, .. }
            | KripkeError::DuplicateTransition { at, .. }
            | KripkeError::DuplicateInit { at, .. }
            | KripkeError::DuplicateLabel { at, .. }
            | KripkeError::RowSupremum { at, .. } => Some(*at),
            KripkeError::UnknownState { at, .. } => *at,
            KripkeError::InitSupremum { .. } => {
                return self
                    .init
                    .first()
                    .copied()
                    .unwrap_or(Location { line: 1, column: 1 })
            }
            _ => None,
        };
        let found = decl.and_then(|d| match d {
            Decl::State(i) => self.states.get(i),
            Decl::Prop(i) => self.props.get(i),
            Decl::Init(i) => self.init.get(i),
            Decl::Transition(i) => self.transitions.get(i),
            Decl::Label(i) => self.labels.get(i),
        });
        found.copied().unwrap_or(Location { line: 1, column: 1 })
    }
}

/// Parses and validates a model.
pub fn parse_model(text: &str) -> Result<PossKripke, ParseError> {
    let (raw, spans) = parse_raw_model(text)?;
    raw.validate().map_err(|e| ParseError {
        location: spans.locate(&e),
        kind: e.into(),
    })
}

fn parse_raw_model(text: &str) -> Result<(RawKripke, ModelSpans), ParseError> {
    let mut raw = RawKripke::default();
    let mut spans = ModelSpans::default();
    for tokens in lines(text) {
        let end = end_of(&tokens);
        let kw = &tokens[0];
        let mut it = tokens.iter().skip(1);
        match kw.text {
            "states" | "ap" => {
                let (list, locs) = if kw.text == "states" {
                    (&mut raw.states, &mut spans.states)
                } else {
                    (&mut raw.props, &mut spans.props)
                };
                if kw.text == "states" && tokens.len() == 1 {
                    return Err(ParseError::syntax(end, "expected at least one state"));
                }
                for t in it {
                    list.push(ident(Some(t), end, "a name")?.to_string());
                    locs.push(t.at);
                }
            }
            "init" => {
                let state = ident(it.next(), end, "a state")?;
                let v = number(it.next(), end)?;
                no_trailing(&tokens, 3)?;
                raw.init.push((state.to_string(), v));
                spans.init.push(kw.at);
            }
            "trans" => {
                let src = ident(it.next(), end, "a source state")?;
                expect(it.next(), end, "->")?;
                let dst = ident(it.next(), end, "a target state")?;
                let v = number(it.next(), end)?;
                no_trailing(&tokens, 5)?;
                raw.transitions.push((src.to_string(), dst.to_string(), v));
                spans.transitions.push(kw.at);
            }
            "label" => {
                let state = ident(it.next(), end, "a state")?;
                let props = it
                    .map(|t| ident(Some(t), end, "a proposition").map(String::from))
                    .collect::<Result<Vec<_>, _>>()?;
                raw.labels.push((state.to_string(), props));
                spans.labels.push(kw.at);
            }
            other => {
                return Err(ParseError::syntax(
                    kw.at,
                    format!("unknown declaration `{other}`"),
                ));
            }
        }
    }
    Ok((raw, spans))
}

/// Renders a model in the text format; `parse_model` inverts it.
pub fn render_model(m: &PossKripke) -> String {
    let raw = m.to_raw();
    let mut out = String::new();
    writeln!(out, "states {}", raw.states.join(" ")).unwrap();
    if raw.props.is_empty() {
        writeln!(out, "ap").unwrap();
    } else {
        writeln!(out, "ap {}", raw.props.join(" ")).unwrap();
    }
    for (s, v) in &raw.init {
        writeln!(out, "init {s} {v}").unwrap();
    }
    for (s, t, v) in &raw.transitions {
        writeln!(out, "trans {s} -> {t} {v}").unwrap();
    }
    for (s, props) in &raw.labels {
        if props.is_empty() {
            writeln!(out, "label {s}").unwrap();
        } else {
            writeln!(out, "label {s} {}", props.join(" ")).unwrap();
        }
    }
    out
}

#[derive(Default)]
struct AutomatonSpans {
    states: Vec<Location>,
    props: Vec<Location>,
    initial: Vec<Location>,
    accepting: Vec<Location>,
    transitions: Vec<Location>,
    initial_line: Option<Location>,
}

impl AutomatonSpans {
    fn locate(&self, err: &AutomatonError) -> Location {
        let decl = match err {
            AutomatonError::DuplicateState { at, .. }
            | AutomatonError::DuplicateProp { at, .. }
            | AutomatonError::UnknownState { at, .. }
            | AutomatonError::RepeatedInSymbol { at, .. } => Some(*at),
            AutomatonError::UnknownProp { at, .. } => *at,
            AutomatonError::EmptyInitial => self.initial_line.map(|_| AutDecl::Initial(0)),
            _ => None,
        };
        let found = decl.and_then(|d| match d {
            AutDecl::State(i) => self.states.get(i),
            AutDecl::Prop(i) => self.props.get(i),
            AutDecl::Initial(i) => self.initial.get(i).or(self.initial_line.as_ref()),
            AutDecl::Accepting(i) => self.accepting.get(i),
            AutDecl::Transition(i) => self.transitions.get(i),
        });
        found.copied().unwrap_or(Location { line: 1, column: 1 })
    }
}

/// Parses and validates an automaton.
pub fn parse_automaton(text: &str) -> Result<FiniteAutomaton, ParseError> {
    let mut kind = None;
    let mut raw = RawAutomaton {
        kind: AutomatonKind::Nfa,
        states: vec![],
        props: vec![],
        initial: vec![],
        accepting: vec![],
        transitions: vec![],
    };
    let mut spans = AutomatonSpans::default();
    for tokens in lines(text) {
        let end = end_of(&tokens);
        let kw = &tokens[0];
        let mut it = tokens.iter().skip(1);
        match kw.text {
            "automaton" => {
                let t = it
                    .next()
                    .ok_or_else(|| ParseError::syntax(end, "expected `nfa` or `nba`"))?;
                let k = match t.text {
                    "nfa" => AutomatonKind::Nfa,
                    "nba" => AutomatonKind::Nba,
                    other => {
                        return Err(ParseError::syntax(
                            t.at,
                            format!("unknown automaton kind `{other}`, expected `nfa` or `nba`"),
                        ))
                    }
                };
                if kind.replace(k).is_some() {
                    return Err(ParseError::syntax(kw.at, "automaton kind declared twice"));
                }
                no_trailing(&tokens, 2)?;
            }
            "states" | "ap" | "initial" | "accepting" => {
                let (list, locs) = match kw.text {
                    "states" => (&mut raw.states, &mut spans.states),
                    "ap" => (&mut raw.props, &mut spans.props),
                    "initial" => {
                        spans.initial_line.get_or_insert(kw.at);
                        (&mut raw.initial, &mut spans.initial)
                    }
                    _ => (&mut raw.accepting, &mut spans.accepting),
                };
                for t in it {
                    list.push(ident(Some(t), end, "a name")?.to_string());
                    locs.push(t.at);
                }
            }
            "trans" => {
                let src = ident(it.next(), end, "a source state")?;
                expect(it.next(), end, "{")?;
                let mut symbol = Vec::new();
                let mut used = 3;
                loop {
                    let t = it
                        .next()
                        .ok_or_else(|| ParseError::syntax(end, "unterminated symbol"))?;
                    used += 1;
                    if t.text == "}" {
                        break;
                    }
                    if !symbol.is_empty() {
                        if t.text != "," {
                            return Err(ParseError::syntax(
                                t.at,
                                format!("expected `,` or `}}`, found `{}`", t.text),
                            ));
                        }
                        let t = it
                            .next()
                            .ok_or_else(|| ParseError::syntax(end, "unterminated symbol"))?;
                        used += 1;
                        symbol.push(ident(Some(t), end, "a proposition")?.to_string());
                    } else {
                        symbol.push(ident(Some(t), end, "a proposition")?.to_string());
                    }
                }
                expect(it.next(), end, "->")?;
                let dst = ident(it.next(), end, "a target state")?;
                no_trailing(&tokens, used + 2)?;
                raw.transitions
                    .push((src.to_string(), symbol, dst.to_string()));
                spans.transitions.push(kw.at);
            }
            other => {
                return Err(ParseError::syntax(
                    kw.at,
                    format!("unknown declaration `{other}`"),
                ));
            }
        }
    }
    raw.kind = kind.ok_or_else(|| {
        ParseError::syntax(
            Location { line: 1, column: 1 },
            "missing `automaton nfa|nba` declaration",
        )
    })?;
    raw.validate().map_err(|e| ParseError {
        location: spans.locate(&e),
        kind: e.into(),
    })
}

/// Renders an automaton in the text format; `parse_automaton` inverts it.
pub fn render_automaton(a: &FiniteAutomaton) -> String {
    let raw = a.to_raw();
    let mut out = String::new();
    writeln!(out, "automaton {}", raw.kind).unwrap();
    writeln!(out, "states {}", raw.states.join(" ")).unwrap();
    if raw.props.is_empty() {
        writeln!(out, "ap").unwrap();
    } else {
        writeln!(out, "ap {}", raw.props.join(" ")).unwrap();
    }
    writeln!(out, "initial {}", raw.initial.join(" ")).unwrap();
    if raw.accepting.is_empty() {
        writeln!(out, "accepting").unwrap();
    } else {
        writeln!(out, "accepting {}", raw.accepting.join(" ")).unwrap();
    }
    for (q, sym, d) in &raw.transitions {
        writeln!(out, "trans {q} {{{}}} -> {d}", sym.join(",")).unwrap();
    }
    out
}

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

/// DOT digraph of a structure. Initial states are drawn bold with their
/// initial possibility; states in `goal` are drawn as double circles.
pub fn export_dot(m: &PossKripke, goal: Option<&StateSet>) -> String {
    let mut out = String::new();
    out.push_str("digraph possmc {\n  rankdir=LR;\n  node [shape=ellipse];\n");
    for (i, name) in m.states().iter().enumerate() {
        let label = m.label(i);
        let mut text = name.clone();
        if !(label.len() == 1 && label.contains(name)) {
            let props: Vec<&str> = label.iter().map(String::as_str).collect();
            text = format!("{name}\n{{{}}}", props.join(","));
        }
        let mut attrs = vec![format!("label={}", quote(&text))];
        if goal.is_some_and(|g| g.contains(i)) {
            attrs.push("shape=doublecircle".into());
        }
        let init = m.initial(i);
        if init.is_positive() {
            attrs.push("style=bold".into());
            attrs.push(format!("xlabel={}", quote(&format!("init {init}"))));
        }
        writeln!(out, "  {} [{}];", quote(name), attrs.join(", ")).unwrap();
    }
    for i in 0..m.len() {
        for j in 0..m.len() {
            let p = m.transition(i, j);
            if p.is_positive() {
                writeln!(
                    out,
                    "  {} -> {} [label={}];",
                    quote(m.state_name(i)),
                    quote(m.state_name(j)),
                    quote(&p.to_string())
                )
                .unwrap();
            }
        }
    }
    out.push_str("}\n");
    out
}

pub fn export_product_dot(p: &ProductStructure) -> String {
    export_dot(&p.structure, Some(&p.goal))
}
