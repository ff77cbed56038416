//! Prefix-notation expression languages `L_m` and their one-counter deciders.
//!
//! A grammar assigns every token an arity; values have arity 0. A string is
//! well formed when it parses as a single expression
//! `<exp> -> <TOKEN of arity i> <exp>^i`.
//!
//! Two counting deciders are provided. [`lm_decide`] is the textbook rule:
//! sum `arity - 1` over the string and accept iff the total is `-1`.
//! That rule alone also accepts strings whose running sum reaches `-1` early,
//! such as `0 1 ∨`. [`lm_decide_guarded`] additionally rejects once an
//! expression has been completed before the last token, which matches the
//! grammar exactly. [`lm_crosscheck`] enumerates both against the
//! recursive-descent parser [`lm_parse`] and reports every disagreement.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::enumerate::{check_against, compare, DiffReport};
use crate::error::{Error, Result};
use crate::machine::{Alphabet, CounterMachine, Entry, UpdateAction};

/// Token inventory of an `L_m` grammar.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrammarLm {
    max_arity: usize,
    alphabet: Alphabet,
    arities: Vec<usize>,
}

impl GrammarLm {
    pub fn new<I, S>(max_arity: usize, tokens: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, usize)>,
        S: Into<String>,
    {
        let (names, arities): (Vec<String>, Vec<usize>) =
            tokens.into_iter().map(|(s, a)| (s.into(), a)).unzip();
        if max_arity == 0 {
            return Err(Error::Contract(
                "grammar max arity must be at least 1".into(),
            ));
        }
        if !arities.contains(&0) {
            return Err(Error::Contract(
                "grammar needs at least one value token".into(),
            ));
        }
        if let Some((name, a)) = names.iter().zip(&arities).find(|(_, &a)| a > max_arity) {
            return Err(Error::Contract(format!(
                "token `{name}` has arity {a} above the maximum {max_arity}"
            )));
        }
        Ok(Self {
            max_arity,
            alphabet: Alphabet::new(names)?,
            arities,
        })
    }

    /// Reads a JSON object mapping token to arity, e.g. `{"0": 0, "∨": 2}`.
    ///
    /// Tokens are ordered by their text; the maximum arity is the largest one present.
    pub fn from_json(text: &str) -> Result<Self> {
        let map: BTreeMap<String, usize> =
            serde_json::from_str(text).map_err(|e| Error::Load(e.to_string()))?;
        let max = map.values().copied().max().unwrap_or(0).max(1);
        Self::new(max, map)
    }

    pub fn to_json(&self) -> String {
        let map: BTreeMap<&str, usize> = self
            .alphabet
            .symbols()
            .iter()
            .map(String::as_str)
            .zip(self.arities.iter().copied())
            .collect();
        serde_json::to_string_pretty(&map).expect("grammar serializes")
    }

    /// `L_1` over `0`, `1` and negation `¬`.
    pub fn unary() -> Self {
        Self::new(1, [("0", 0), ("1", 0), ("¬", 1)]).expect("static grammar")
    }

    /// `L_2` boolean expressions over `0`, `1`, `∧`, `∨`.
    pub fn booleans() -> Self {
        Self::new(2, [("0", 0), ("1", 0), ("∧", 2), ("∨", 2)]).expect("static grammar")
    }

    /// `L_3` over a value `0`, unary `¬`, binary `∧` and ternary `?`.
    pub fn ternary() -> Self {
        Self::new(3, [("0", 0), ("¬", 1), ("∧", 2), ("?", 3)]).expect("static grammar")
    }

    pub fn max_arity(&self) -> usize {
        self.max_arity
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn arity(&self, symbol: usize) -> usize {
        self.arities[symbol]
    }

    /// Symbols whose arity is `arity`.
    pub fn tokens_of_arity(&self, arity: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.arities.len()).filter(move |&s| self.arities[s] == arity)
    }

    fn check(&self, word: &[usize]) -> Result<()> {
        match word.iter().find(|&&s| s >= self.arities.len()) {
            Some(s) => Err(Error::UnknownSymbol(format!("#{s}"))),
            None => Ok(()),
        }
    }
}

/// The counting rule exactly as usually stated: `c += arity - 1`, accept iff `c = -1`.
pub fn lm_decide(grammar: &GrammarLm, word: &[usize]) -> Result<bool> {
    grammar.check(word)?;
    let c: i64 = word.iter().map(|&s| grammar.arity(s) as i64 - 1).sum();
    Ok(c == -1)
}

/// Counting rule that also rejects a completed expression followed by more tokens.
pub fn lm_decide_guarded(grammar: &GrammarLm, word: &[usize]) -> Result<bool> {
    grammar.check(word)?;
    let mut c: i64 = 0;
    for (t, &s) in word.iter().enumerate() {
        c += grammar.arity(s) as i64 - 1;
        if c == -1 && t + 1 != word.len() {
            return Ok(false);
        }
    }
    Ok(c == -1)
}

/// Token-level convenience wrapper around [`lm_decide`].
pub fn lm_decide_tokens(grammar: &GrammarLm, tokens: &[&str]) -> Result<bool> {
    lm_decide(grammar, &grammar.alphabet().encode(tokens.iter().copied())?)
}

/// Recursive-descent recognizer for the grammar.
pub fn lm_parse(grammar: &GrammarLm, word: &[usize]) -> Result<bool> {
    grammar.check(word)?;
    fn expression(grammar: &GrammarLm, word: &[usize], pos: usize) -> Option<usize> {
        let &head = word.get(pos)?;
        (0..grammar.arity(head)).try_fold(pos + 1, |p, _| expression(grammar, word, p))
    }
    Ok(expression(grammar, word, 0) == Some(word.len()))
}

/// One-counter machine implementing [`lm_decide`].
///
/// The counter holds `c + 1`, so the final test `c = -1` becomes a zero check.
/// State `0` means nothing has been read yet: the first token adds its arity
/// (absorbing the `+1` offset) and moves to state `1`, where every token adds
/// `arity - 1`. Accepts in state `1` with the counter at zero; the empty
/// string stays in state `0` and is rejected.
pub fn lm_machine(grammar: &GrammarLm) -> CounterMachine {
    CounterMachine::from_fn(
        grammar.alphabet().clone(),
        2,
        1,
        None,
        |sym, state, _| {
            let a = grammar.arity(sym) as i64;
            let delta = if state == 0 { a } else { a - 1 };
            Entry::new(vec![UpdateAction::Add(delta)], 1)
        },
        |state, mask| state == 1 && !mask.get(0),
    )
    .expect("lm machine is well formed")
}

/// One-counter machine implementing [`lm_decide_guarded`].
///
/// Same shifted counter as [`lm_machine`], plus a sink state `2` entered when
/// a token arrives while the counter is already zero (a finished expression).
pub fn lm_machine_guarded(grammar: &GrammarLm) -> CounterMachine {
    CounterMachine::from_fn(
        grammar.alphabet().clone(),
        3,
        1,
        None,
        |sym, state, mask| {
            let a = grammar.arity(sym) as i64;
            match state {
                0 => Entry::new(vec![UpdateAction::Add(a)], 1),
                1 if mask.get(0) => Entry::new(vec![UpdateAction::Add(a - 1)], 1),
                _ => Entry::stay(1, 2),
            }
        },
        |state, mask| state == 1 && !mask.get(0),
    )
    .expect("guarded lm machine is well formed")
}

/// Exhaustive comparison of the deciders and machines against [`lm_parse`].
#[derive(Clone, Debug, Serialize)]
pub struct LmCrosscheck {
    pub max_len: usize,
    /// `lm_decide` versus the parser.
    pub verbatim_vs_parser: DiffReport,
    /// `lm_decide_guarded` versus the parser.
    pub guarded_vs_parser: DiffReport,
    /// `lm_machine` versus `lm_decide`.
    pub machine_vs_verbatim: DiffReport,
    /// `lm_machine_guarded` versus the parser.
    pub guarded_machine_vs_parser: DiffReport,
}

pub fn lm_crosscheck(grammar: &GrammarLm, max_len: usize, max_words: u64) -> Result<LmCrosscheck> {
    let alphabet = grammar.alphabet();
    let parse = |w: &[usize]| lm_parse(grammar, w).expect("enumerated words are in the alphabet");
    let plain = lm_machine(grammar);
    let guarded = lm_machine_guarded(grammar);
    Ok(LmCrosscheck {
        max_len,
        verbatim_vs_parser: compare(
            alphabet,
            max_len,
            max_words,
            |w| lm_decide(grammar, w),
            parse,
        )?,
        guarded_vs_parser: compare(
            alphabet,
            max_len,
            max_words,
            |w| lm_decide_guarded(grammar, w),
            parse,
        )?,
        machine_vs_verbatim: check_against(&plain, max_len, max_words, |w| {
            lm_decide(grammar, w).expect("enumerated words are in the alphabet")
        })?,
        guarded_machine_vs_parser: check_against(&guarded, max_len, max_words, parse)?,
    })
}
