//! Parikh images and semilinear descriptions of stateless simplified machines.
//!
//! A stateless machine whose updates depend only on the input symbol keeps
//! counter `i` equal to `u_i · Ψ(y)`, where `y` is the suffix after the last
//! token that resets counter `i` (or the whole input if there is none) and
//! `Ψ` counts tokens. Acceptance is a zero-pattern test on those values, so
//! the language is a boolean combination of linear conditions on suffixes.
//! [`decompose_qscl`] builds that combination and [`verify_decomposition`]
//! checks it against the machine exhaustively.

use std::fmt;

use serde::Serialize;

use crate::enumerate::{check_against, DiffReport};
use crate::error::{Error, Result};
use crate::machine::{Alphabet, CounterMachine, UpdateAction, ZeroPattern};

/// Token counts indexed by alphabet position.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub struct ParikhVector(pub Vec<u64>);

impl ParikhVector {
    pub fn zeros(len: usize) -> Self {
        Self(vec![0; len])
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `Σ_j u_j n_j`, with overflow reported as `None`.
    pub fn dot(&self, u: &[i64]) -> Option<i64> {
        self.0.iter().zip(u).try_fold(0i64, |acc, (&n, &w)| {
            acc.checked_add(i64::try_from(n).ok()?.checked_mul(w)?)
        })
    }
}

impl fmt::Display for ParikhVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_tuple(f, &self.0)
    }
}

fn write_tuple<T: fmt::Display>(f: &mut fmt::Formatter<'_>, items: &[T]) -> fmt::Result {
    f.write_str("⟨")?;
    for (i, x) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{x}")?;
    }
    f.write_str("⟩")
}

pub fn parikh(alphabet: &Alphabet, word: &[usize]) -> Result<ParikhVector> {
    let mut counts = ParikhVector::zeros(alphabet.len());
    for &s in word {
        *counts
            .0
            .get_mut(s)
            .ok_or_else(|| Error::UnknownSymbol(format!("#{s}")))? += 1;
    }
    Ok(counts)
}

/// `{ n : W n + b = 0 }` with signed integer coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LinearConstraintSet {
    pub coeffs: Vec<Vec<i64>>,
    pub offset: Vec<i64>,
}

impl LinearConstraintSet {
    pub fn new(coeffs: Vec<Vec<i64>>, offset: Vec<i64>, dims: usize) -> Result<Self> {
        if coeffs.len() != offset.len() || coeffs.iter().any(|row| row.len() != dims) {
            return Err(Error::Contract(format!(
                "constraint matrix must be {} x {dims} to match its offset",
                offset.len()
            )));
        }
        Ok(Self { coeffs, offset })
    }

    pub fn contains(&self, n: &ParikhVector) -> bool {
        self.coeffs
            .iter()
            .zip(&self.offset)
            .all(|(row, &b)| n.dot(row).and_then(|v| v.checked_add(b)) == Some(0))
    }
}

/// A language built from linear sets with the operations the decomposition needs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SetExpr {
    All,
    Linear(LinearConstraintSet),
    Complement(Box<SetExpr>),
    Union(Vec<SetExpr>),
    Intersection(Vec<SetExpr>),
    /// `Σ* · Z · L`: some token in `Z` occurs and the suffix after the last one is in `L`.
    MarkerSuffix(Vec<usize>, Box<SetExpr>),
    /// Strings with no token from `Z` that lie in `L`.
    MarkerFree(Vec<usize>, Box<SetExpr>),
}

impl SetExpr {
    pub fn contains(&self, alphabet: &Alphabet, word: &[usize]) -> bool {
        match self {
            SetExpr::All => true,
            SetExpr::Linear(set) => parikh(alphabet, word).is_ok_and(|n| set.contains(&n)),
            SetExpr::Complement(e) => !e.contains(alphabet, word),
            SetExpr::Union(es) => es.iter().any(|e| e.contains(alphabet, word)),
            SetExpr::Intersection(es) => es.iter().all(|e| e.contains(alphabet, word)),
            SetExpr::MarkerSuffix(z, e) => word
                .iter()
                .rposition(|s| z.contains(s))
                .is_some_and(|pos| e.contains(alphabet, &word[pos + 1..])),
            SetExpr::MarkerFree(z, e) => {
                !word.iter().any(|s| z.contains(s)) && e.contains(alphabet, word)
            }
        }
    }

    pub fn display<'a>(&'a self, alphabet: &'a Alphabet) -> impl fmt::Display + 'a {
        ShowExpr(self, alphabet)
    }
}

struct ShowExpr<'a>(&'a SetExpr, &'a Alphabet);

fn write_tokens(f: &mut fmt::Formatter<'_>, alphabet: &Alphabet, tokens: &[usize]) -> fmt::Result {
    f.write_str("{")?;
    for (i, &s) in tokens.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        f.write_str(alphabet.symbol(s))?;
    }
    f.write_str("}")
}

impl fmt::Display for ShowExpr<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ShowExpr(expr, alphabet) = *self;
        let join = |f: &mut fmt::Formatter<'_>, es: &[SetExpr], op: &str, empty: &str| {
            if es.is_empty() {
                return f.write_str(empty);
            }
            for (i, e) in es.iter().enumerate() {
                if i > 0 {
                    f.write_str(op)?;
                }
                write!(f, "({})", ShowExpr(e, alphabet))?;
            }
            Ok(())
        };
        match expr {
            SetExpr::All => f.write_str("Σ*"),
            SetExpr::Linear(set) => {
                f.write_str("{x : ")?;
                for (r, (row, b)) in set.coeffs.iter().zip(&set.offset).enumerate() {
                    if r > 0 {
                        f.write_str(", ")?;
                    }
                    write_tuple(f, row)?;
                    write!(f, "·Ψ(x) = {}", -b)?;
                }
                f.write_str("}")
            }
            SetExpr::Complement(e) => write!(f, "¬({})", ShowExpr(e, alphabet)),
            SetExpr::Union(es) => join(f, es, " ∪ ", "∅"),
            SetExpr::Intersection(es) => join(f, es, " ∩ ", "Σ*"),
            SetExpr::MarkerSuffix(z, e) => {
                f.write_str("Σ* · ")?;
                write_tokens(f, alphabet, z)?;
                write!(f, " · {}", ShowExpr(e, alphabet))
            }
            SetExpr::MarkerFree(z, e) => {
                f.write_str("(Σ ∖ ")?;
                write_tokens(f, alphabet, z)?;
                write!(f, ")* ∩ {}", ShowExpr(e, alphabet))
            }
        }
    }
}

/// A language over a fixed alphabet given by a [`SetExpr`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemilinearSet {
    pub alphabet: Alphabet,
    pub expr: SetExpr,
}

impl SemilinearSet {
    pub fn contains(&self, word: &[usize]) -> bool {
        self.expr.contains(&self.alphabet, word)
    }
}

impl fmt::Display for SemilinearSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.expr.display(&self.alphabet))
    }
}

/// Update vector and reset tokens of one counter.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CounterComponent {
    /// `u[s]` is the amount added on symbol `s`; zero for reset symbols.
    pub u: Vec<i64>,
    /// Symbols that reset the counter.
    pub resets: Vec<usize>,
}

impl CounterComponent {
    /// Strings after which the counter is zero.
    pub fn zero_set(&self) -> SetExpr {
        let linear = SetExpr::Linear(LinearConstraintSet {
            coeffs: vec![self.u.clone()],
            offset: vec![0],
        });
        if self.resets.is_empty() {
            return linear;
        }
        SetExpr::Union(vec![
            SetExpr::MarkerSuffix(self.resets.clone(), Box::new(linear.clone())),
            SetExpr::MarkerFree(self.resets.clone(), Box::new(linear)),
        ])
    }
}

/// Semilinear description of a stateless simplified machine.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QsclDecomposition {
    pub alphabet: Alphabet,
    pub counters: Vec<CounterComponent>,
    /// Accepting zero-patterns; bit `i` set means counter `i` must be nonzero.
    pub accepting: Vec<ZeroPattern>,
}

impl QsclDecomposition {
    /// `⋃_{b ∈ F} ⋂_i {x : c_i(x) = 0}` or its complement per bit of `b`.
    pub fn set(&self) -> SemilinearSet {
        let components = self
            .accepting
            .iter()
            .map(|b| {
                SetExpr::Intersection(
                    self.counters
                        .iter()
                        .enumerate()
                        .map(|(i, c)| {
                            let zero = c.zero_set();
                            if b.get(i) {
                                SetExpr::Complement(Box::new(zero))
                            } else {
                                zero
                            }
                        })
                        .collect(),
                )
            })
            .collect();
        SemilinearSet {
            alphabet: self.alphabet.clone(),
            expr: SetExpr::Union(components),
        }
    }

    /// For patterns requiring every counter to be zero on a reset-free machine,
    /// the whole condition is the single linear set `{n : W n = 0}` with rows `u_i`.
    pub fn linear_component(&self, pattern: ZeroPattern) -> Option<LinearConstraintSet> {
        (pattern.bits() == 0 && self.counters.iter().all(|c| c.resets.is_empty())).then(|| {
            LinearConstraintSet {
                coeffs: self.counters.iter().map(|c| c.u.clone()).collect(),
                offset: vec![0; self.counters.len()],
            }
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        let components: Vec<_> = self
            .accepting
            .iter()
            .map(|&b| {
                let counters: Vec<_> = self
                    .counters
                    .iter()
                    .enumerate()
                    .map(|(i, c)| {
                        serde_json::json!({
                            "u": c.u,
                            "Z": c.resets.iter().map(|&s| self.alphabet.symbol(s)).collect::<Vec<_>>(),
                            "target": if b.get(i) { serde_json::json!("nonzero") } else { serde_json::json!(0) },
                        })
                    })
                    .collect();
                let mut entry = serde_json::json!({ "pattern": b.to_string(), "counters": counters });
                if let Some(linear) = self.linear_component(b) {
                    entry["linear"] = serde_json::to_value(linear).expect("serializes");
                }
                entry
            })
            .collect();
        serde_json::json!({ "alphabet": self.alphabet.symbols(), "components": components })
    }
}

impl fmt::Display for QsclDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.accepting.is_empty() {
            return writeln!(f, "no accepting pattern: ∅");
        }
        for b in &self.accepting {
            writeln!(f, "pattern {b}:")?;
            if self.counters.is_empty() {
                writeln!(f, "  Σ*")?;
            }
            for (i, c) in self.counters.iter().enumerate() {
                write!(f, "  counter {i}: u = ")?;
                write_tuple(f, &c.u)?;
                f.write_str(", Z = ")?;
                if c.resets.is_empty() {
                    f.write_str("∅")?;
                } else {
                    write_tokens(f, &self.alphabet, &c.resets)?;
                }
                writeln!(f, ", target {}", if b.get(i) { "nonzero" } else { "0" })?;
            }
        }
        write!(f, "set: {}", self.set())
    }
}

pub fn decompose_qscl(machine: &CounterMachine) -> Result<QsclDecomposition> {
    let report = machine.classify();
    if !report.is_simplified || !report.is_stateless || machine.is_threshold() {
        let reason = report
            .violations()
            .next()
            .cloned()
            .unwrap_or_else(|| "threshold machines have no zero-pattern decomposition".into());
        return Err(Error::UnsupportedVariant(format!(
            "decomposition needs a stateless simplified machine: {reason}"
        )));
    }
    let k = machine.num_counters();
    let any = ZeroPattern::zeros(k);
    let counters = (0..k)
        .map(|i| {
            let mut c = CounterComponent {
                u: vec![0; machine.alphabet().len()],
                resets: Vec::new(),
            };
            for s in 0..machine.alphabet().len() {
                match machine.update(s, 0, any)[i] {
                    UpdateAction::Add(m) => c.u[s] = m,
                    UpdateAction::Reset => c.resets.push(s),
                }
            }
            c
        })
        .collect();
    Ok(QsclDecomposition {
        alphabet: machine.alphabet().clone(),
        counters,
        accepting: ZeroPattern::all(k)
            .filter(|&b| machine.is_accepting(0, b))
            .collect(),
    })
}

pub fn semilinear_member(d: &QsclDecomposition, word: &[usize]) -> bool {
    d.set().contains(word)
}

/// Compares the machine (left) with its decomposition (right) on every string up to `max_len`.
pub fn verify_decomposition(
    machine: &CounterMachine,
    max_len: usize,
    max_words: u64,
) -> Result<DiffReport> {
    let set = decompose_qscl(machine)?.set();
    check_against(machine, max_len, max_words, |w| set.contains(w))
}
