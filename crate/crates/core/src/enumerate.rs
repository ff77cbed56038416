//! Exhaustive bounded enumeration of `Σ^≤n` and differential testing.
//!
//! Machines are run along a depth-first walk of the word tree, so every
//! prefix is stepped exactly once.

use std::collections::BinaryHeap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::machine::{Alphabet, Configuration, CounterMachine};

/// Default cap on the number of enumerated words.
pub const DEFAULT_MAX_WORDS: u64 = 20_000_000;

/// Number of words of length at most `max_len` over `symbols` symbols.
pub fn word_count(symbols: usize, max_len: usize) -> Option<u64> {
    let mut total: u64 = 0;
    let mut level: u64 = 1;
    for len in 0..=max_len {
        total = total.checked_add(level)?;
        if len < max_len {
            level = level.checked_mul(symbols as u64)?;
        }
    }
    Some(total)
}

fn guard(symbols: usize, max_len: usize, max_words: u64) -> Result<u64> {
    match word_count(symbols, max_len) {
        Some(n) if n <= max_words => Ok(n),
        _ => Err(Error::Resource(format!(
            "enumerating words up to length {max_len} over {symbols} symbols exceeds {max_words} words"
        ))),
    }
}

/// Calls `f` on every word of length `<= max_len`, shortest first, in
/// lexicographic symbol-index order within each length.
pub fn for_each_word<F: FnMut(&[usize])>(symbols: usize, max_len: usize, mut f: F) {
    let mut word = Vec::with_capacity(max_len);
    for len in 0..=max_len {
        word.clear();
        word.resize(len, 0);
        'words: loop {
            f(&word);
            // odometer increment, last position fastest
            let mut i = len;
            loop {
                if i == 0 {
                    break 'words;
                }
                i -= 1;
                word[i] += 1;
                if word[i] < symbols {
                    break;
                }
                word[i] = 0;
            }
        }
    }
}

/// One word on which two deciders disagree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub word: String,
    pub left: bool,
    pub right: bool,
}

/// Outcome of an exhaustive comparison.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiffReport {
    pub tested_count: u64,
    pub max_len: usize,
    /// Total number of disagreeing words.
    pub disagreements: u64,
    /// The shortest disagreements (by length, then symbol order), at most `MAX_RECORDED`.
    pub counterexamples: Vec<Counterexample>,
}

impl DiffReport {
    pub const MAX_RECORDED: usize = 64;

    pub fn agrees(&self) -> bool {
        self.disagreements == 0
    }

    fn record(&mut self, word: String, left: bool, right: bool) {
        self.disagreements += 1;
        if self.counterexamples.len() < Self::MAX_RECORDED {
            self.counterexamples
                .push(Counterexample { word, left, right });
        }
    }
}

struct Walk<'a> {
    machines: [&'a CounterMachine; 2],
    max_len: usize,
    word: Vec<usize>,
    /// The smallest disagreements by (length, word), as a bounded max-heap.
    found: BinaryHeap<(usize, Vec<usize>, bool, bool)>,
    disagreements: u64,
    tested: u64,
}

impl Walk<'_> {
    fn visit(&mut self, configs: [&Configuration; 2]) -> Result<()> {
        let a = self.machines[0].accepts_config(configs[0]);
        let b = self.machines[1].accepts_config(configs[1]);
        self.tested += 1;
        if a != b {
            self.disagreements += 1;
            self.found.push((self.word.len(), self.word.clone(), a, b));
            if self.found.len() > DiffReport::MAX_RECORDED {
                self.found.pop();
            }
        }
        if self.word.len() == self.max_len {
            return Ok(());
        }
        let symbols = self.machines[0].alphabet().len();
        for s in 0..symbols {
            let mut left = configs[0].clone();
            let mut right = configs[1].clone();
            self.machines[0].step_in_place(&mut left, s)?;
            self.machines[1].step_in_place(&mut right, s)?;
            self.word.push(s);
            self.visit([&left, &right])?;
            self.word.pop();
        }
        Ok(())
    }
}

fn render(alphabet: &Alphabet, word: &[usize]) -> String {
    let single_char = alphabet.symbols().iter().all(|s| s.chars().count() == 1);
    alphabet.render(word, if single_char { "" } else { " " })
}

/// Compares two machines on every word of length `<= max_len`.
pub fn difftest(
    left: &CounterMachine,
    right: &CounterMachine,
    max_len: usize,
    max_words: u64,
) -> Result<DiffReport> {
    if left.alphabet() != right.alphabet() {
        return Err(Error::AlphabetMismatch(format!(
            "{:?} vs {:?}",
            left.alphabet().symbols(),
            right.alphabet().symbols()
        )));
    }
    guard(left.alphabet().len(), max_len, max_words)?;
    let mut walk = Walk {
        machines: [left, right],
        max_len,
        word: Vec::with_capacity(max_len),
        found: BinaryHeap::new(),
        disagreements: 0,
        tested: 0,
    };
    let (a, b) = (left.initial(), right.initial());
    walk.visit([&a, &b])?;

    let mut report = DiffReport {
        tested_count: walk.tested,
        max_len,
        disagreements: 0,
        counterexamples: Vec::new(),
    };
    for (_, w, a, b) in walk.found.into_sorted_vec() {
        report.record(render(left.alphabet(), &w), a, b);
    }
    report.disagreements = walk.disagreements;
    Ok(report)
}

/// Compares two decision procedures on every word of length `<= max_len`.
///
/// `left` may fail (e.g. on counter overflow); the first failure aborts the run.
pub fn compare<L, R>(
    alphabet: &Alphabet,
    max_len: usize,
    max_words: u64,
    mut left: L,
    mut right: R,
) -> Result<DiffReport>
where
    L: FnMut(&[usize]) -> Result<bool>,
    R: FnMut(&[usize]) -> bool,
{
    guard(alphabet.len(), max_len, max_words)?;
    let mut report = DiffReport {
        tested_count: 0,
        max_len,
        disagreements: 0,
        counterexamples: Vec::new(),
    };
    let mut failure = None;
    for_each_word(alphabet.len(), max_len, |w| {
        if failure.is_some() {
            return;
        }
        match left(w) {
            Ok(a) => {
                report.tested_count += 1;
                let b = right(w);
                if a != b {
                    report.record(render(alphabet, w), a, b);
                }
            }
            Err(e) => failure = Some(e),
        }
    });
    match failure {
        Some(e) => Err(e),
        None => Ok(report),
    }
}

/// Compares a machine against an arbitrary decision procedure on `Σ^≤max_len`.
pub fn check_against<F>(
    machine: &CounterMachine,
    max_len: usize,
    max_words: u64,
    oracle: F,
) -> Result<DiffReport>
where
    F: FnMut(&[usize]) -> bool,
{
    compare(
        machine.alphabet(),
        max_len,
        max_words,
        |w| machine.accepts(w),
        oracle,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machine::{Entry, UpdateAction};

    #[test]
    fn counts_words() {
        assert_eq!(word_count(3, 0), Some(1));
        assert_eq!(word_count(2, 3), Some(15));
        assert_eq!(word_count(1, 5), Some(6));
        assert_eq!(word_count(1000, 100), None);
    }

    #[test]
    fn enumerates_in_order() {
        let mut seen = Vec::new();
        for_each_word(2, 2, |w| seen.push(w.to_vec()));
        assert_eq!(
            seen,
            vec![
                vec![],
                vec![0],
                vec![1],
                vec![0, 0],
                vec![0, 1],
                vec![1, 0],
                vec![1, 1]
            ]
        );
    }

    fn parity(accept_even: bool) -> CounterMachine {
        CounterMachine::from_fn(
            Alphabet::from_chars("ab").unwrap(),
            2,
            0,
            None,
            |_, q, _| Entry::stay(0, 1 - q),
            |q, _| (q == 0) == accept_even,
        )
        .unwrap()
    }

    #[test]
    fn difftest_finds_shortest_counterexamples() {
        let even = parity(true);
        let odd = parity(false);
        let report = difftest(&even, &odd, 2, DEFAULT_MAX_WORDS).unwrap();
        assert_eq!(report.tested_count, 7);
        assert_eq!(report.disagreements, 7);
        assert_eq!(report.counterexamples[0].word, "");
        assert_eq!(report.counterexamples[1].word, "a");

        let same = difftest(&even, &even, 4, DEFAULT_MAX_WORDS).unwrap();
        assert!(same.agrees());
        assert_eq!(same.tested_count, 31);
    }

    #[test]
    fn difftest_zero_length_checks_only_empty_word() {
        let r = difftest(&parity(true), &parity(false), 0, DEFAULT_MAX_WORDS).unwrap();
        assert_eq!(r.tested_count, 1);
        assert_eq!(r.counterexamples.len(), 1);
    }

    #[test]
    fn guard_and_alphabet_checks() {
        let a = parity(true);
        assert!(matches!(
            difftest(&a, &a, 30, 1000),
            Err(Error::Resource(_))
        ));
        let other = CounterMachine::from_fn(
            Alphabet::from_chars("xy").unwrap(),
            1,
            1,
            None,
            |_, _, _| Entry::new(vec![UpdateAction::Add(1)], 0),
            |_, _| true,
        )
        .unwrap();
        assert!(matches!(
            difftest(&a, &other, 2, 100),
            Err(Error::AlphabetMismatch(_))
        ));
    }

    #[test]
    fn oracle_comparison() {
        let even = parity(true);
        let r = check_against(&even, 5, DEFAULT_MAX_WORDS, |w| w.len() % 2 == 0).unwrap();
        assert!(r.agrees());
        let r = check_against(&even, 3, DEFAULT_MAX_WORDS, |_| true).unwrap();
        assert_eq!(r.disagreements, 10);
    }
}
