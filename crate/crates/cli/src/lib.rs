//! Command-line front end for `countra-core`.
//!
//! [`execute`] parses arguments and runs one command, writing reports to the
//! given streams and returning the process exit code:
//! 0 success or agreement, 1 reject or disagreement, 2 usage error,
//! 3 input or parse error, 4 resource guard.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use countra_core::enumerate::{difftest, DiffReport, DEFAULT_MAX_WORDS};
use countra_core::format::{load_machine, save_machine};
use countra_core::languages::{
    amb2m_incremental_machine, amb2m_machine, config_census_with_budget, dyck1_machine,
    fig1_machine, lm_crosscheck, lm_machine, lm_machine_guarded, CensusReport, GrammarLm,
    DEFAULT_CENSUS_ROWS, MAX_CENSUS_P,
};
use countra_core::machine::{format_configuration, format_trace};
use countra_core::semilinear::{decompose_qscl, verify_decomposition};
use countra_core::slstm::{counting_lstm, load_lstm, save_lstm, SaturatedLstm};
use countra_core::transforms::{
    combine, general_to_threshold, threshold_to_general, to_incremental, to_stateless,
    BooleanCombinator,
};
use countra_core::{CounterMachine, Error};

/// Environment variable overriding enumeration and census budgets.
pub const MAX_ENUM_VAR: &str = "COUNTRA_MAX_ENUM";

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INPUT: i32 = 3;
pub const EXIT_RESOURCE: i32 = 4;

#[derive(Parser, Debug)]
#[command(
    name = "countra",
    version,
    about = "Real-time counter machines: run, transform, combine and analyze"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a machine on one input
    Run {
        /// Machine JSON file, or `builtin:NAME`
        machine: String,
        input: String,
        /// Print the configuration sequence
        #[arg(long)]
        trace: bool,
        #[command(flatten)]
        encoding: Encoding,
        #[arg(long)]
        json: bool,
    },
    /// Print which restricted variants a machine belongs to
    Classify { machine: String },
    /// Apply a simulation construction
    Transform {
        kind: TransformKind,
        machine: String,
        /// Output file; the machine goes to stdout when omitted
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Build a product machine accepting `p(verdicts)`
    Combine {
        /// not, and, or, diff, symdiff, or a 0/1 truth table such as 1101
        op: String,
        #[arg(required = true)]
        machines: Vec<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Compare two machines on every string up to a length
    Difftest {
        left: String,
        right: String,
        #[arg(long, default_value_t = 8)]
        max_len: usize,
        #[arg(long)]
        json: bool,
    },
    /// Count configurations against boolean functions over operator prefixes
    Census {
        #[arg(long, default_value_t = 10)]
        max_p: usize,
        /// Machine over {0, 1, ∧, ∨}; the one-counter L_2 decider by default
        #[arg(long)]
        machine: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Decompose a stateless simplified machine and verify the result
    Semilinear {
        machine: String,
        #[arg(long, default_value_t = 8)]
        verify_len: usize,
        #[arg(long)]
        json: bool,
    },
    /// Run a saturated LSTM weight file on one input
    Lstm {
        /// Weights JSON file, or `builtin:counting`
        weights: String,
        input: String,
        #[arg(long)]
        trace: bool,
        #[command(flatten)]
        encoding: Encoding,
        #[arg(long)]
        json: bool,
    },
    /// Cross-check the counting deciders of a prefix grammar against a parser
    Lm {
        /// Grammar JSON (token to arity), or `builtin:L1`, `builtin:L2`, `builtin:L3`
        grammar: String,
        #[arg(long, default_value_t = 8)]
        max_len: usize,
        #[arg(long)]
        json: bool,
    },
    /// Write a built-in machine, grammar or weight file
    Builtin {
        name: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(clap::Args, Debug)]
struct Encoding {
    /// Token separator for multi-character tokens; one token per character otherwise
    #[arg(long)]
    sep: Option<String>,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum TransformKind {
    Incremental,
    Stateless,
    Dethreshold,
    Threshold,
}

const MACHINE_BUILTINS: &[&str] = &[
    "fig1",
    "amb2m",
    "amb2m-incremental",
    "dyck1",
    "lm1",
    "lm2",
    "lm3",
    "lm1-guarded",
    "lm2-guarded",
    "lm3-guarded",
];

fn grammar_builtin(name: &str) -> Option<GrammarLm> {
    match name {
        "L1" | "l1" => Some(GrammarLm::unary()),
        "L2" | "l2" => Some(GrammarLm::booleans()),
        "L3" | "l3" => Some(GrammarLm::ternary()),
        _ => None,
    }
}

pub fn builtin_machine(name: &str) -> Option<CounterMachine> {
    let lm = |n: &str| grammar_builtin(&format!("L{}", &n[2..3]));
    Some(match name {
        "fig1" => fig1_machine(),
        "amb2m" => amb2m_machine(),
        "amb2m-incremental" => amb2m_incremental_machine(),
        "dyck1" => dyck1_machine(),
        "lm1" | "lm2" | "lm3" => lm_machine(&lm(name)?),
        "lm1-guarded" | "lm2-guarded" | "lm3-guarded" => lm_machine_guarded(&lm(name)?),
        _ => return None,
    })
}

fn read(path: &str) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|e| Error::Load(format!("{path}: {e}")))
}

fn with_path(path: &str, e: Error) -> Error {
    match e {
        Error::Load(msg) => Error::Load(format!("{path}: {msg}")),
        other => other,
    }
}

pub fn load_machine_arg(arg: &str) -> Result<CounterMachine, Error> {
    if let Some(name) = arg.strip_prefix("builtin:") {
        return builtin_machine(name).ok_or_else(|| {
            Error::Load(format!(
                "unknown builtin `{name}`; available: {}",
                MACHINE_BUILTINS.join(", ")
            ))
        });
    }
    load_machine(&read(arg)?).map_err(|e| with_path(arg, e))
}

fn load_lstm_arg(arg: &str) -> Result<SaturatedLstm, Error> {
    match arg {
        "builtin:counting" => Ok(counting_lstm()),
        _ => load_lstm(&read(arg)?).map_err(|e| with_path(arg, e)),
    }
}

fn load_grammar_arg(arg: &str) -> Result<GrammarLm, Error> {
    if let Some(name) = arg.strip_prefix("builtin:") {
        return grammar_builtin(name)
            .ok_or_else(|| Error::Load(format!("unknown grammar `{name}`")));
    }
    GrammarLm::from_json(&read(arg)?).map_err(|e| with_path(arg, e))
}

fn encode(
    alphabet: &countra_core::Alphabet,
    input: &str,
    encoding: &Encoding,
) -> Result<Vec<usize>, Error> {
    match &encoding.sep {
        Some(sep) => alphabet.encode_separated(input, sep),
        None => alphabet.encode_chars(input),
    }
}

/// Enumeration budget, overridable through [`MAX_ENUM_VAR`].
fn max_words() -> Result<Option<u64>, Error> {
    match std::env::var(MAX_ENUM_VAR) {
        Ok(v) => v.trim().parse().map(Some).map_err(|_| {
            Error::Contract(format!(
                "{MAX_ENUM_VAR} must be a non-negative integer, got `{v}`"
            ))
        }),
        Err(_) => Ok(None),
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Resource(_) | Error::Overflow { .. } => EXIT_RESOURCE,
        Error::Contract(_) => EXIT_USAGE,
        _ => EXIT_INPUT,
    }
}

fn show_word(word: &str) -> &str {
    if word.is_empty() {
        "ε"
    } else {
        word
    }
}

fn write_output(path: Option<&Path>, text: &str, out: &mut dyn Write) -> Result<(), Error> {
    match path {
        Some(p) => std::fs::write(p, format!("{text}\n"))
            .map_err(|e| Error::Load(format!("{}: {e}", p.display()))),
        None => writeln!(out, "{text}").map_err(io_error),
    }
}

fn io_error(e: std::io::Error) -> Error {
    Error::Load(format!("write failed: {e}"))
}

fn print_diff(report: &DiffReport, json: bool, out: &mut dyn Write) -> Result<(), Error> {
    if json {
        return writeln!(
            out,
            "{}",
            serde_json::to_string_pretty(report).expect("report serializes")
        )
        .map_err(io_error);
    }
    writeln!(
        out,
        "tested {} strings up to length {}: {} disagreement(s)",
        report.tested_count, report.max_len, report.disagreements
    )
    .map_err(io_error)?;
    for c in &report.counterexamples {
        writeln!(
            out,
            "  {:<12} left {:<6} right {}",
            show_word(&c.word),
            verdict(c.left),
            verdict(c.right)
        )
        .map_err(io_error)?;
    }
    Ok(())
}

fn verdict(accept: bool) -> &'static str {
    if accept {
        "accept"
    } else {
        "reject"
    }
}

#[derive(Serialize)]
struct RunReport {
    verdict: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    trace: Option<Vec<serde_json::Value>>,
    elapsed_ns: u128,
}

/// Parses `args` (including the program name) and runs the command.
pub fn execute<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                return EXIT_USAGE;
            }
            let _ = write!(out, "{}", e.render());
            return EXIT_OK;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Error> {
    match command {
        Command::Run {
            machine,
            input,
            trace,
            encoding,
            json,
        } => {
            let m = load_machine_arg(&machine)?;
            let word = encode(m.alphabet(), &input, &encoding)?;
            let start = Instant::now();
            let configs = if trace {
                Some(m.run_trace(&word)?)
            } else {
                None
            };
            let accept = match &configs {
                Some(t) => m.accepts_config(t.last().expect("trace is nonempty")),
                None => m.accepts(&word)?,
            };
            let elapsed = start.elapsed();
            if json {
                let report = RunReport {
                    verdict: verdict(accept),
                    trace: configs.as_ref().map(|t| {
                        t.iter()
                            .map(|c| json!({ "state": c.state, "counters": c.counters }))
                            .collect()
                    }),
                    elapsed_ns: elapsed.as_nanos(),
                };
                writeln!(
                    out,
                    "{}",
                    serde_json::to_string_pretty(&report).expect("serializes")
                )
                .map_err(io_error)?;
            } else {
                if let Some(t) = &configs {
                    writeln!(out, "{}", format_trace(&m, &word, t)).map_err(io_error)?;
                }
                writeln!(out, "{}", verdict(accept)).map_err(io_error)?;
                writeln!(err, "elapsed: {elapsed:?}").map_err(io_error)?;
            }
            Ok(if accept { EXIT_OK } else { EXIT_NEGATIVE })
        }
        Command::Classify { machine } => {
            let m = load_machine_arg(&machine)?;
            let r = m.classify();
            writeln!(
                out,
                "states {}, counters {}, symbols {}",
                m.num_states(),
                m.num_counters(),
                m.alphabet().len()
            )
            .map_err(io_error)?;
            for (name, yes, why) in [
                (
                    "simplified",
                    r.is_simplified,
                    r.simplified_violations.first(),
                ),
                (
                    "incremental",
                    r.is_incremental,
                    r.incremental_violations.first(),
                ),
                ("stateless", r.is_stateless, r.stateless_violations.first()),
            ] {
                match why {
                    Some(w) if !yes => writeln!(out, "{name:<12} no  ({w})"),
                    _ => writeln!(out, "{name:<12} yes"),
                }
                .map_err(io_error)?;
            }
            writeln!(
                out,
                "{:<12} {}",
                "threshold",
                if r.is_threshold { "yes" } else { "no" }
            )
            .map_err(io_error)?;
            Ok(EXIT_OK)
        }
        Command::Transform {
            kind,
            machine,
            output,
        } => {
            let m = load_machine_arg(&machine)?;
            let t = match kind {
                TransformKind::Incremental => to_incremental(&m)?,
                TransformKind::Stateless => to_stateless(&m)?,
                TransformKind::Dethreshold => {
                    if !m.is_threshold() {
                        writeln!(err, "note: machine has no thresholds; copying it unchanged")
                            .map_err(io_error)?;
                    }
                    threshold_to_general(&m)?
                }
                TransformKind::Threshold => general_to_threshold(&m)?,
            };
            let report = format!(
                "states {} -> {}, counters {} -> {}",
                m.num_states(),
                t.num_states(),
                m.num_counters(),
                t.num_counters()
            );
            write_output(output.as_deref(), &save_machine(&t), out)?;
            if output.is_some() {
                writeln!(out, "{report}")
            } else {
                writeln!(err, "{report}")
            }
            .map_err(io_error)?;
            Ok(EXIT_OK)
        }
        Command::Combine {
            op,
            machines,
            output,
        } => {
            let loaded = machines
                .iter()
                .map(|m| load_machine_arg(m))
                .collect::<Result<Vec<_>, _>>()?;
            let p = match op.as_str() {
                "not" => BooleanCombinator::not(),
                "and" => BooleanCombinator::and(),
                "or" => BooleanCombinator::or(),
                "diff" => BooleanCombinator::difference(),
                "symdiff" => BooleanCombinator::symmetric_difference(),
                table => BooleanCombinator::parse(loaded.len(), table)?,
            };
            let refs: Vec<&CounterMachine> = loaded.iter().collect();
            let product = combine(&refs, &p)?;
            write_output(output.as_deref(), &save_machine(&product), out)?;
            let report = format!(
                "combinator {p}: states {}, counters {}",
                product.num_states(),
                product.num_counters()
            );
            if output.is_some() {
                writeln!(out, "{report}")
            } else {
                writeln!(err, "{report}")
            }
            .map_err(io_error)?;
            Ok(EXIT_OK)
        }
        Command::Difftest {
            left,
            right,
            max_len,
            json,
        } => {
            let (a, b) = (load_machine_arg(&left)?, load_machine_arg(&right)?);
            let report = difftest(&a, &b, max_len, max_words()?.unwrap_or(DEFAULT_MAX_WORDS))?;
            print_diff(&report, json, out)?;
            Ok(if report.agrees() {
                EXIT_OK
            } else {
                EXIT_NEGATIVE
            })
        }
        Command::Census {
            max_p,
            machine,
            json,
        } => {
            let grammar = GrammarLm::booleans();
            let m = match machine {
                Some(arg) => load_machine_arg(&arg)?,
                None => lm_machine(&grammar),
            };
            let budget = max_words()?;
            if budget.is_none() && max_p > MAX_CENSUS_P {
                return Err(Error::Resource(format!(
                    "census prefix length {max_p} exceeds the guard of {MAX_CENSUS_P}; set {MAX_ENUM_VAR} to override"
                )));
            }
            let print = |report: &CensusReport, out: &mut dyn Write| {
                if json {
                    writeln!(out, "{}", report.to_json())
                } else {
                    write!(out, "{report}")
                }
                .map_err(io_error)
            };
            match config_census_with_budget(
                &m,
                &grammar,
                max_p,
                budget.unwrap_or(DEFAULT_CENSUS_ROWS),
            )? {
                Ok(report) => print(&report, out)?,
                Err(exceeded) => {
                    print(&exceeded.partial, out)?;
                    return Err(exceeded.into());
                }
            }
            Ok(EXIT_OK)
        }
        Command::Semilinear {
            machine,
            verify_len,
            json,
        } => {
            let m = load_machine_arg(&machine)?;
            let d = decompose_qscl(&m)?;
            let report =
                verify_decomposition(&m, verify_len, max_words()?.unwrap_or(DEFAULT_MAX_WORDS))?;
            if json {
                let value = json!({ "decomposition": d.to_json(), "verification": report });
                writeln!(
                    out,
                    "{}",
                    serde_json::to_string_pretty(&value).expect("serializes")
                )
                .map_err(io_error)?;
            } else {
                writeln!(out, "{d}").map_err(io_error)?;
                print_diff(&report, false, out)?;
            }
            Ok(if report.agrees() {
                EXIT_OK
            } else {
                EXIT_NEGATIVE
            })
        }
        Command::Lstm {
            weights,
            input,
            trace,
            encoding,
            json,
        } => {
            let net = load_lstm_arg(&weights)?;
            let word = encode(net.alphabet(), &input, &encoding)?;
            let start = Instant::now();
            let states = net.run_trace(&word)?;
            let accept = net.output(states.last().expect("trace is nonempty"));
            let elapsed = start.elapsed();
            let cells = |v: &[countra_core::slstm::Rational]| {
                v.iter().map(ToString::to_string).collect::<Vec<_>>()
            };
            if json {
                let report = RunReport {
                    verdict: verdict(accept),
                    trace: trace.then(|| {
                        states
                            .iter()
                            .map(|s| json!({ "c": cells(&s.c), "h": cells(&s.h) }))
                            .collect()
                    }),
                    elapsed_ns: elapsed.as_nanos(),
                };
                writeln!(
                    out,
                    "{}",
                    serde_json::to_string_pretty(&report).expect("serializes")
                )
                .map_err(io_error)?;
            } else {
                if trace {
                    for (t, s) in states.iter().enumerate() {
                        let token = if t == 0 {
                            ""
                        } else {
                            net.alphabet().symbol(word[t - 1])
                        };
                        writeln!(out, "{t:>3} {token:<3} c = ⟨{}⟩", cells(&s.c).join(", "))
                            .map_err(io_error)?;
                    }
                }
                writeln!(out, "{}", verdict(accept)).map_err(io_error)?;
                writeln!(err, "elapsed: {elapsed:?}").map_err(io_error)?;
            }
            Ok(if accept { EXIT_OK } else { EXIT_NEGATIVE })
        }
        Command::Lm {
            grammar,
            max_len,
            json,
        } => {
            let g = load_grammar_arg(&grammar)?;
            let report = lm_crosscheck(&g, max_len, max_words()?.unwrap_or(DEFAULT_MAX_WORDS))?;
            if json {
                writeln!(
                    out,
                    "{}",
                    serde_json::to_string_pretty(&report).expect("serializes")
                )
                .map_err(io_error)?;
            } else {
                for (label, r) in [
                    ("counting rule vs parser", &report.verbatim_vs_parser),
                    ("guarded rule vs parser", &report.guarded_vs_parser),
                    ("machine vs counting rule", &report.machine_vs_verbatim),
                    (
                        "guarded machine vs parser",
                        &report.guarded_machine_vs_parser,
                    ),
                ] {
                    writeln!(out, "{label}:").map_err(io_error)?;
                    print_diff(r, false, out)?;
                }
            }
            let sound = report.guarded_vs_parser.agrees()
                && report.machine_vs_verbatim.agrees()
                && report.guarded_machine_vs_parser.agrees();
            Ok(if sound { EXIT_OK } else { EXIT_NEGATIVE })
        }
        Command::Builtin { name, output } => {
            let text = if name == "counting" {
                save_lstm(&counting_lstm())?
            } else if let Some(g) = grammar_builtin(&name) {
                g.to_json()
            } else {
                save_machine(&load_machine_arg(&format!("builtin:{name}"))?)
            };
            write_output(output.as_deref(), &text, out)?;
            Ok(EXIT_OK)
        }
    }
}

/// Renders one configuration per line, for callers that want the raw sequence.
pub fn trace_lines(machine: &CounterMachine, word: &[usize]) -> Result<Vec<String>, Error> {
    Ok(machine
        .run_trace(word)?
        .iter()
        .map(format_configuration)
        .collect())
}
