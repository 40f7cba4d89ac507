//! Command-line front end for possmc.
//!
//! [`run`] takes the full argument vector and writes to the given streams,
//! so the binary and the tests share one entry point. Exit codes: 0 on
//! success, 1 on a usage error, 2 when an input cannot be read, parsed or
//! validated.

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use possmc::automata::{self, FiniteAutomaton};
use possmc::format::{self, ParseError};
use possmc::reach;
use possmc::{PossKripke, Possibility, PossibilityReport, StateSet};
use serde::Serialize;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "possmc",
    version,
    about = "Possibilistic model checking of linear-time properties"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse and validate a model.
    Validate { model: PathBuf },
    /// Possibility of the cylinder set spanned by a finite path.
    Measure {
        model: PathBuf,
        /// Comma-separated state names, starting at an initial state.
        #[arg(long, value_delimiter = ',', required = true)]
        prefix: Vec<String>,
        #[arg(long)]
        json: bool,
    },
    /// Possibility of eventually reaching the target set.
    Reach {
        model: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        target: Vec<String>,
        #[arg(long, value_enum, default_value_t = ReachMethod::Closure)]
        method: ReachMethod,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Possibility of reaching the target through states of the left set.
    Until {
        model: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        left: Vec<String>,
        #[arg(long, value_delimiter = ',', required = true)]
        target: Vec<String>,
        /// Maximum number of transitions.
        #[arg(long)]
        bound: Option<usize>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Possibility of visiting the target set infinitely often.
    Repeated {
        model: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        target: Vec<String>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Possibility of a regular safety property given by its good-prefix NFA.
    Safety {
        model: PathBuf,
        nfa: PathBuf,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Possibility of an omega-regular property given by a Büchi automaton.
    Omega {
        model: PathBuf,
        nba: PathBuf,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Print the transitive closure of the transition matrix.
    Closure {
        model: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Build the product with an automaton (completed first).
    Product {
        model: PathBuf,
        automaton: PathBuf,
        /// Emit Graphviz DOT instead of the model format.
        #[arg(long)]
        dot: bool,
    },
    /// Export a model as Graphviz DOT.
    Dot { model: PathBuf },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReachMethod {
    Closure,
    Fixpoint,
}

#[derive(Debug, Args)]
struct OutputArgs {
    /// Also print one `state value` line per state.
    #[arg(long)]
    per_state: bool,
    /// Emit a JSON report.
    #[arg(long, conflicts_with = "per_state")]
    json: bool,
}

#[derive(Debug)]
enum Failure {
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    Parse {
        path: PathBuf,
        source: ParseError,
    },
    Invalid(String),
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Io { path, source } => write!(f, "{}: {source}", path.display()),
            Failure::Parse { path, source } => write!(f, "{}:{source}", path.display()),
            Failure::Invalid(msg) => f.write_str(msg),
        }
    }
}

impl<E: std::error::Error> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Invalid(e.to_string())
    }
}

#[derive(Serialize)]
struct StateValue<'a> {
    state: &'a str,
    value: f64,
}

#[derive(Serialize)]
struct JsonReport<'a> {
    property: String,
    method: &'a str,
    aggregate: f64,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    per_state: Vec<StateValue<'a>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    iteration_count: Option<usize>,
}

#[derive(Serialize)]
struct JsonClosure<'a> {
    states: &'a [String],
    closure: Vec<Vec<f64>>,
}

/// Runs one invocation and returns its exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                EXIT_USAGE
            } else {
                let _ = write!(out, "{}", e.render());
                EXIT_OK
            };
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INPUT
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|source| Failure::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn load_model(path: &Path) -> Result<PossKripke, Failure> {
    format::parse_model(&read(path)?).map_err(|source| Failure::Parse {
        path: path.to_path_buf(),
        source,
    })
}

fn load_automaton(path: &Path) -> Result<FiniteAutomaton, Failure> {
    format::parse_automaton(&read(path)?).map_err(|source| Failure::Parse {
        path: path.to_path_buf(),
        source,
    })
}

fn set_text(names: &[String]) -> String {
    format!("{{{}}}", names.join(","))
}

fn execute(command: Command, out: &mut dyn Write) -> Result<(), Failure> {
    match command {
        Command::Validate { model } => {
            let m = load_model(&model)?;
            writeln!(
                out,
                "ok: {} states, {} transitions",
                m.len(),
                m.edge_count()
            )?;
        }
        Command::Measure {
            model,
            prefix,
            json,
        } => {
            let m = load_model(&model)?;
            let path = m.finite_path(&prefix)?;
            let value = m.cylinder_possibility(&path);
            if json {
                let report = JsonReport {
                    property: format!("cylinder {}", prefix.join(" ")),
                    method: "cylinder",
                    aggregate: value.value(),
                    per_state: Vec::new(),
                    iteration_count: None,
                };
                write_json(out, &report)?;
            } else {
                writeln!(out, "{value}")?;
            }
        }
        Command::Reach {
            model,
            target,
            method,
            output,
        } => {
            let m = load_model(&model)?;
            let b = m.state_set(&target)?;
            let report = match method {
                ReachMethod::Closure => reach::reach_via_closure(&m, &b),
                ReachMethod::Fixpoint => reach::until_possibility(&m, &StateSet::full(m.len()), &b),
            };
            print_report(out, &output, format!("F {}", set_text(&target)), &report)?;
        }
        Command::Until {
            model,
            left,
            target,
            bound,
            output,
        } => {
            let m = load_model(&model)?;
            let c = m.state_set(&left)?;
            let b = m.state_set(&target)?;
            let (report, op) = match bound {
                Some(n) => (
                    reach::bounded_until_possibility(&m, &c, &b, n),
                    format!("U<={n}"),
                ),
                None => (reach::until_possibility(&m, &c, &b), "U".to_string()),
            };
            let property = format!("{} {op} {}", set_text(&left), set_text(&target));
            print_report(out, &output, property, &report)?;
        }
        Command::Repeated {
            model,
            target,
            output,
        } => {
            let m = load_model(&model)?;
            let b = m.state_set(&target)?;
            let report = reach::repeated_reach_possibility(&m, &b);
            print_report(out, &output, format!("G F {}", set_text(&target)), &report)?;
        }
        Command::Safety { model, nfa, output } => {
            let m = load_model(&model)?;
            let a = load_automaton(&nfa)?;
            let report = automata::check_safety(&m, &a)?;
            print_report(out, &output, format!("safety {}", nfa.display()), &report)?;
        }
        Command::Omega { model, nba, output } => {
            let m = load_model(&model)?;
            let a = load_automaton(&nba)?;
            let report = automata::check_omega(&m, &a)?;
            print_report(out, &output, format!("omega {}", nba.display()), &report)?;
        }
        Command::Closure { model, json } => {
            let m = load_model(&model)?;
            let plus = m.transitions().transitive_closure();
            if json {
                let closure = (0..m.len())
                    .map(|i| plus.row(i).iter().map(|p| p.value()).collect())
                    .collect();
                write_json(
                    out,
                    &JsonClosure {
                        states: m.states(),
                        closure,
                    },
                )?;
            } else {
                writeln!(out, "\t{}", m.states().join("\t"))?;
                for (i, name) in m.states().iter().enumerate() {
                    let row: Vec<String> = plus.row(i).iter().map(Possibility::to_string).collect();
                    writeln!(out, "{name}\t{}", row.join("\t"))?;
                }
            }
        }
        Command::Product {
            model,
            automaton,
            dot,
        } => {
            let m = load_model(&model)?;
            let a = load_automaton(&automaton)?;
            let prod = automata::product(&m, &a.complete())?;
            if dot {
                write!(out, "{}", format::export_product_dot(&prod))?;
            } else {
                write!(out, "{}", format::render_model(&prod.structure))?;
            }
        }
        Command::Dot { model } => {
            let m = load_model(&model)?;
            write!(out, "{}", format::export_dot(&m, None))?;
        }
    }
    Ok(())
}

fn write_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value)?;
    writeln!(out, "{text}")?;
    Ok(())
}

fn print_report(
    out: &mut dyn Write,
    output: &OutputArgs,
    property: String,
    r: &PossibilityReport,
) -> Result<(), Failure> {
    if output.json {
        let per_state = r
            .states
            .iter()
            .zip(&r.per_state)
            .map(|(state, p)| StateValue {
                state,
                value: p.value(),
            })
            .collect();
        let report = JsonReport {
            property,
            method: r.method.as_str(),
            aggregate: r.aggregate.value(),
            per_state,
            iteration_count: r.iterations,
        };
        return write_json(out, &report);
    }
    writeln!(out, "{}", r.aggregate)?;
    if output.per_state {
        for (state, p) in r.states.iter().zip(&r.per_state) {
            writeln!(out, "{state} {p}")?;
        }
    }
    Ok(())
}
