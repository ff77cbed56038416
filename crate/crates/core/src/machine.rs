//! Counter machine model and real-time execution.
//!
//! A machine reads one token per step. Before each step the counters are
//! collapsed into a [`ZeroPattern`] (bit `i` is `0` iff counter `i` is zero,
//! or, for threshold machines, bit `i` is `1` iff `c_i <= m_i`). The update
//! table and the transition table are both keyed by
//! `(symbol, state, pattern)` and both read the pattern of the configuration
//! *before* the step. Acceptance looks at the final `(state, pattern)` pair.
//!
//! Tables are stored densely over the whole finite domain, so every machine
//! value is total by construction.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

/// Largest number of `(symbol, state, pattern)` points a table may hold.
pub const MAX_TABLE_POINTS: usize = 1 << 24;

/// Largest counter count supported by the dense pattern encoding.
pub const MAX_COUNTERS: usize = 24;

/// Ordered set of tokens. The order fixes symbol indices and Parikh-vector layout.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    symbols: Vec<String>,
    index: HashMap<String, usize>,
}

impl Alphabet {
    pub fn new<I, S>(symbols: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let symbols: Vec<String> = symbols.into_iter().map(Into::into).collect();
        if symbols.is_empty() {
            return Err(Error::InvalidMachine("alphabet is empty".into()));
        }
        let mut index = HashMap::with_capacity(symbols.len());
        for (i, s) in symbols.iter().enumerate() {
            if index.insert(s.clone(), i).is_some() {
                return Err(Error::InvalidMachine(format!("duplicate symbol `{s}`")));
            }
        }
        Ok(Self { symbols, index })
    }

    /// One symbol per character of `chars`.
    pub fn from_chars(chars: &str) -> Result<Self> {
        Self::new(chars.chars().map(String::from))
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn symbol(&self, index: usize) -> &str {
        &self.symbols[index]
    }

    pub fn index_of(&self, token: &str) -> Option<usize> {
        self.index.get(token).copied()
    }

    /// Maps tokens to symbol indices.
    pub fn encode<'a, I>(&self, tokens: I) -> Result<Vec<usize>>
    where
        I: IntoIterator<Item = &'a str>,
    {
        tokens
            .into_iter()
            .map(|t| {
                self.index_of(t)
                    .ok_or_else(|| Error::UnknownSymbol(t.to_string()))
            })
            .collect()
    }

    /// Splits `input` into single-character tokens and encodes them.
    pub fn encode_chars(&self, input: &str) -> Result<Vec<usize>> {
        input
            .chars()
            .map(|ch| {
                let mut buf = [0u8; 4];
                let t = ch.encode_utf8(&mut buf);
                self.index_of(t)
                    .ok_or_else(|| Error::UnknownSymbol(t.to_string()))
            })
            .collect()
    }

    /// Splits `input` on `sep` (empty pieces are skipped) and encodes them.
    pub fn encode_separated(&self, input: &str, sep: &str) -> Result<Vec<usize>> {
        self.encode(input.split(sep).filter(|t| !t.is_empty()))
    }

    /// Renders a word back into text, joining tokens with `sep`.
    pub fn render(&self, word: &[usize], sep: &str) -> String {
        word.iter()
            .map(|&s| self.symbols[s].as_str())
            .collect::<Vec<_>>()
            .join(sep)
    }
}

/// Per-counter update: add a constant or reset to zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum UpdateAction {
    Add(i64),
    Reset,
}

impl UpdateAction {
    pub const NOOP: UpdateAction = UpdateAction::Add(0);

    pub fn apply(self, value: i64) -> Option<i64> {
        match self {
            UpdateAction::Add(m) => value.checked_add(m),
            UpdateAction::Reset => Some(0),
        }
    }

    /// Magnitude of the added constant; resets count as zero.
    pub fn magnitude(self) -> u64 {
        match self {
            UpdateAction::Add(m) => m.unsigned_abs(),
            UpdateAction::Reset => 0,
        }
    }
}

impl fmt::Display for UpdateAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UpdateAction::Add(m) if *m >= 0 => write!(f, "+{m}"),
            UpdateAction::Add(m) => write!(f, "{m}"),
            UpdateAction::Reset => f.write_str("x0"),
        }
    }
}

impl std::str::FromStr for UpdateAction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "x0" || s == "×0" {
            return Ok(UpdateAction::Reset);
        }
        let bad = || Error::Load(format!("bad update action `{s}` (expected +m, -m or x0)"));
        let (sign, digits) = match s.chars().next() {
            Some('+') => (1i64, &s[1..]),
            Some('-') => (-1i64, &s[1..]),
            _ => return Err(bad()),
        };
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let magnitude: i64 = digits.parse().map_err(|_| bad())?;
        Ok(UpdateAction::Add(sign * magnitude))
    }
}

/// The finite view of the counters, one bit per counter.
///
/// For zero-check machines bit `i` is `0` iff counter `i` is zero. For
/// threshold machines bit `i` is `1` iff `c_i <= m_i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ZeroPattern {
    bits: u32,
    len: u8,
}

impl ZeroPattern {
    pub fn from_bits(bits: u32, len: usize) -> Self {
        debug_assert!(len <= MAX_COUNTERS);
        debug_assert!(len == 32 || bits >> len == 0);
        Self {
            bits,
            len: len as u8,
        }
    }

    pub fn zeros(len: usize) -> Self {
        Self::from_bits(0, len)
    }

    pub fn from_slice(bits: &[bool]) -> Self {
        let packed = bits
            .iter()
            .enumerate()
            .fold(0u32, |acc, (i, &b)| acc | (u32::from(b) << i));
        Self::from_bits(packed, bits.len())
    }

    /// Parses a string such as `"01"`, where character `i` is the bit for counter `i`.
    pub fn parse(s: &str) -> Result<Self> {
        let mut bits = Vec::with_capacity(s.len());
        for ch in s.chars() {
            match ch {
                '0' => bits.push(false),
                '1' => bits.push(true),
                _ => {
                    return Err(Error::Load(format!(
                        "bad mask `{s}` (expected 0/1 characters)"
                    )))
                }
            }
        }
        if bits.len() > MAX_COUNTERS {
            return Err(Error::Load(format!("mask `{s}` is too long")));
        }
        Ok(Self::from_slice(&bits))
    }

    pub fn bits(self) -> u32 {
        self.bits
    }

    pub fn len(self) -> usize {
        self.len as usize
    }

    pub fn is_empty(self) -> bool {
        self.len == 0
    }

    pub fn get(self, i: usize) -> bool {
        (self.bits >> i) & 1 == 1
    }

    pub fn iter(self) -> impl Iterator<Item = bool> {
        (0..self.len()).map(move |i| self.get(i))
    }

    /// All `2^len` patterns in index order.
    pub fn all(len: usize) -> impl Iterator<Item = ZeroPattern> {
        (0..1u32 << len).map(move |b| ZeroPattern::from_bits(b, len))
    }
}

impl fmt::Display for ZeroPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Machine state plus exact counter values.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Configuration {
    pub state: usize,
    pub counters: Vec<i64>,
}

impl Configuration {
    pub fn initial(num_counters: usize) -> Self {
        Self {
            state: 0,
            counters: vec![0; num_counters],
        }
    }
}

/// One table row: the counter updates and the next state for a domain point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Entry {
    pub actions: Vec<UpdateAction>,
    pub next: usize,
}

impl Entry {
    pub fn new(actions: Vec<UpdateAction>, next: usize) -> Self {
        Self { actions, next }
    }

    /// No counter change, go to `next`.
    pub fn stay(num_counters: usize, next: usize) -> Self {
        Self::new(vec![UpdateAction::NOOP; num_counters], next)
    }
}

/// A deterministic real-time counter machine with dense tables.
///
/// State `0` is the initial state. The update and transition tables are
/// indexed by `(symbol, state, pattern)`; the acceptance mask by
/// `(state, pattern)`. `thresholds` is present exactly for threshold machines.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CounterMachine {
    alphabet: Alphabet,
    num_states: usize,
    num_counters: usize,
    updates: Vec<UpdateAction>,
    transitions: Vec<usize>,
    accepting: Vec<bool>,
    thresholds: Option<Vec<i64>>,
}

/// Number of domain points of a table, or a resource error if it is too large.
pub(crate) fn table_points(symbols: usize, states: usize, counters: usize) -> Result<usize> {
    if counters > MAX_COUNTERS {
        return Err(Error::Resource(format!(
            "{counters} counters exceed the supported maximum of {MAX_COUNTERS}"
        )));
    }
    symbols
        .checked_mul(states)
        .and_then(|n| n.checked_mul(1usize << counters))
        .filter(|&n| n <= MAX_TABLE_POINTS)
        .ok_or_else(|| {
            Error::Resource(format!(
                "table over {symbols} symbols x {states} states x 2^{counters} patterns is too large"
            ))
        })
}

impl CounterMachine {
    /// Builds a machine by evaluating `entry` and `accept` over the whole domain.
    pub fn from_fn<E, A>(
        alphabet: Alphabet,
        num_states: usize,
        num_counters: usize,
        thresholds: Option<Vec<i64>>,
        mut entry: E,
        mut accept: A,
    ) -> Result<Self>
    where
        E: FnMut(usize, usize, ZeroPattern) -> Entry,
        A: FnMut(usize, ZeroPattern) -> bool,
    {
        if num_states == 0 {
            return Err(Error::InvalidMachine(
                "machine needs at least one state".into(),
            ));
        }
        if let Some(t) = &thresholds {
            if t.len() != num_counters {
                return Err(Error::InvalidMachine(format!(
                    "{} thresholds for {num_counters} counters",
                    t.len()
                )));
            }
        }
        let points = table_points(alphabet.len(), num_states, num_counters)?;
        let mut updates = Vec::with_capacity(points * num_counters);
        let mut transitions = Vec::with_capacity(points);
        for sym in 0..alphabet.len() {
            for state in 0..num_states {
                for pattern in ZeroPattern::all(num_counters) {
                    let e = entry(sym, state, pattern);
                    if e.actions.len() != num_counters {
                        return Err(Error::InvalidMachine(format!(
                            "entry ({}, {state}, {pattern}) has {} actions, expected {num_counters}",
                            alphabet.symbol(sym),
                            e.actions.len()
                        )));
                    }
                    if e.next >= num_states {
                        return Err(Error::InvalidMachine(format!(
                            "entry ({}, {state}, {pattern}) targets missing state {}",
                            alphabet.symbol(sym),
                            e.next
                        )));
                    }
                    updates.extend_from_slice(&e.actions);
                    transitions.push(e.next);
                }
            }
        }
        let mut accepting = Vec::with_capacity(num_states << num_counters);
        for state in 0..num_states {
            for pattern in ZeroPattern::all(num_counters) {
                accepting.push(accept(state, pattern));
            }
        }
        Ok(Self {
            alphabet,
            num_states,
            num_counters,
            updates,
            transitions,
            accepting,
            thresholds,
        })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.num_states
    }

    pub fn num_counters(&self) -> usize {
        self.num_counters
    }

    pub fn thresholds(&self) -> Option<&[i64]> {
        self.thresholds.as_deref()
    }

    pub fn is_threshold(&self) -> bool {
        self.thresholds.is_some()
    }

    fn point(&self, symbol: usize, state: usize, pattern: ZeroPattern) -> usize {
        ((symbol * self.num_states + state) << self.num_counters) | pattern.bits() as usize
    }

    /// The update vector for a domain point.
    pub fn update(&self, symbol: usize, state: usize, pattern: ZeroPattern) -> &[UpdateAction] {
        let p = self.point(symbol, state, pattern) * self.num_counters;
        &self.updates[p..p + self.num_counters]
    }

    pub fn transition(&self, symbol: usize, state: usize, pattern: ZeroPattern) -> usize {
        self.transitions[self.point(symbol, state, pattern)]
    }

    pub fn is_accepting(&self, state: usize, pattern: ZeroPattern) -> bool {
        self.accepting[(state << self.num_counters) | pattern.bits() as usize]
    }

    /// Largest `|m|` over every `Add(m)` in the update table (0 if none).
    pub fn max_step(&self) -> u64 {
        self.updates
            .iter()
            .map(|a| a.magnitude())
            .max()
            .unwrap_or(0)
    }

    /// Largest `|m|` added to counter `counter` anywhere in the table.
    pub fn max_step_of(&self, counter: usize) -> u64 {
        self.updates
            .iter()
            .skip(counter)
            .step_by(self.num_counters.max(1))
            .map(|a| a.magnitude())
            .max()
            .unwrap_or(0)
    }

    /// Collapses a counter vector into the pattern the tables are keyed by.
    pub fn mask_of(&self, counters: &[i64]) -> Result<ZeroPattern> {
        if counters.len() != self.num_counters {
            return Err(Error::Contract(format!(
                "counter vector has length {}, machine has {} counters",
                counters.len(),
                self.num_counters
            )));
        }
        Ok(self.mask_unchecked(counters))
    }

    fn mask_unchecked(&self, counters: &[i64]) -> ZeroPattern {
        let bits = match &self.thresholds {
            None => counters
                .iter()
                .enumerate()
                .fold(0u32, |acc, (i, &c)| acc | (u32::from(c != 0) << i)),
            Some(t) => counters
                .iter()
                .zip(t)
                .enumerate()
                .fold(0u32, |acc, (i, (&c, &m))| acc | (u32::from(c <= m) << i)),
        };
        ZeroPattern::from_bits(bits, self.num_counters)
    }

    pub fn initial(&self) -> Configuration {
        Configuration::initial(self.num_counters)
    }

    fn check_config(&self, config: &Configuration) -> Result<()> {
        if config.state >= self.num_states {
            return Err(Error::Contract(format!(
                "state {} out of range (machine has {} states)",
                config.state, self.num_states
            )));
        }
        if config.counters.len() != self.num_counters {
            return Err(Error::Contract(format!(
                "configuration has {} counters, machine has {}",
                config.counters.len(),
                self.num_counters
            )));
        }
        Ok(())
    }

    fn check_symbol(&self, symbol: usize) -> Result<()> {
        if symbol >= self.alphabet.len() {
            return Err(Error::UnknownSymbol(format!("#{symbol}")));
        }
        Ok(())
    }

    /// Applies one transition in place. Both tables read the pre-step pattern.
    pub fn step_in_place(&self, config: &mut Configuration, symbol: usize) -> Result<()> {
        let pattern = self.mask_unchecked(&config.counters);
        let p = self.point(symbol, config.state, pattern);
        let actions = &self.updates[p * self.num_counters..(p + 1) * self.num_counters];
        for (i, (c, a)) in config.counters.iter_mut().zip(actions).enumerate() {
            *c = a.apply(*c).ok_or(Error::Overflow { counter: i })?;
        }
        config.state = self.transitions[p];
        Ok(())
    }

    pub fn step(&self, config: &Configuration, symbol: usize) -> Result<Configuration> {
        self.check_config(config)?;
        self.check_symbol(symbol)?;
        let mut next = config.clone();
        self.step_in_place(&mut next, symbol)?;
        Ok(next)
    }

    /// Runs the machine on `word` from the initial configuration.
    pub fn run(&self, word: &[usize]) -> Result<Configuration> {
        let mut config = self.initial();
        for &s in word {
            self.check_symbol(s)?;
            self.step_in_place(&mut config, s)?;
        }
        Ok(config)
    }

    pub fn accepts_config(&self, config: &Configuration) -> bool {
        self.is_accepting(config.state, self.mask_unchecked(&config.counters))
    }

    pub fn accepts(&self, word: &[usize]) -> Result<bool> {
        let config = self.run(word)?;
        Ok(self.accepts_config(&config))
    }

    /// Convenience wrapper: tokenizes `input` one character per token.
    pub fn accepts_str(&self, input: &str) -> Result<bool> {
        self.accepts(&self.alphabet.encode_chars(input)?)
    }

    /// Every configuration visited on `word`, starting with the initial one.
    pub fn run_trace(&self, word: &[usize]) -> Result<Vec<Configuration>> {
        let mut trace = Vec::with_capacity(word.len() + 1);
        let mut config = self.initial();
        trace.push(config.clone());
        for &s in word {
            self.check_symbol(s)?;
            self.step_in_place(&mut config, s)?;
            trace.push(config.clone());
        }
        Ok(trace)
    }

    /// Checks which restricted variants the encoded tables satisfy.
    pub fn classify(&self) -> VariantReport {
        let mut report = VariantReport::default();
        let k = self.num_counters;

        for sym in 0..self.alphabet.len() {
            let reference = self.update(sym, 0, ZeroPattern::zeros(k)).to_vec();
            for state in 0..self.num_states {
                for pattern in ZeroPattern::all(k) {
                    let actions = self.update(sym, state, pattern);
                    for (i, a) in actions.iter().enumerate() {
                        if a.magnitude() > 1 {
                            let witness = format!(
                                "update ({}, q{state}, {pattern}) counter {i} is {a}",
                                self.alphabet.symbol(sym)
                            );
                            report.incremental_violations.push(witness.clone());
                            report.simplified_violations.push(witness);
                        }
                    }
                    if actions != reference.as_slice() {
                        report.simplified_violations.push(format!(
                            "update for `{}` differs between (q0, {}) and (q{state}, {pattern})",
                            self.alphabet.symbol(sym),
                            ZeroPattern::zeros(k)
                        ));
                    }
                }
            }
        }
        if self.num_states != 1 {
            report
                .stateless_violations
                .push(format!("machine has {} states", self.num_states));
        }
        report.is_simplified = report.simplified_violations.is_empty();
        report.is_incremental = report.incremental_violations.is_empty();
        report.is_stateless = report.stateless_violations.is_empty();
        report.is_threshold = self.thresholds.is_some();
        report
    }
}

/// Which restricted machine variants a machine belongs to, with witnesses.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VariantReport {
    pub is_simplified: bool,
    pub is_incremental: bool,
    pub is_stateless: bool,
    pub is_threshold: bool,
    pub simplified_violations: Vec<String>,
    pub incremental_violations: Vec<String>,
    pub stateless_violations: Vec<String>,
}

impl VariantReport {
    pub fn violations(&self) -> impl Iterator<Item = &String> {
        self.simplified_violations
            .iter()
            .chain(&self.incremental_violations)
            .chain(&self.stateless_violations)
    }
}

/// Formats a configuration as `⟨c1, .., ck, qN⟩`.
pub fn format_configuration(config: &Configuration) -> String {
    let mut out = String::from("⟨");
    for c in &config.counters {
        out.push_str(&format!("{c}, "));
    }
    out.push_str(&format!("q{}⟩", config.state));
    out
}

/// Renders a trace in arrow form, e.g. `⟨0, q0⟩ →a ⟨1, q0⟩ ∈ F`.
pub fn format_trace(machine: &CounterMachine, word: &[usize], trace: &[Configuration]) -> String {
    let mut out = String::new();
    for (i, config) in trace.iter().enumerate() {
        if i > 0 {
            out.push_str(&format!(" →{} ", machine.alphabet().symbol(word[i - 1])));
        }
        out.push_str(&format_configuration(config));
    }
    if let Some(last) = trace.last() {
        out.push_str(if machine.accepts_config(last) {
            " ∈ F"
        } else {
            " ∉ F"
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Three states; `a` adds one in q0, `b` subtracts in q0/q1, a late `a` sinks into q2.
    fn fig1() -> CounterMachine {
        let alphabet = Alphabet::from_chars("ab").unwrap();
        CounterMachine::from_fn(
            alphabet,
            3,
            1,
            None,
            |sym, state, _| match (sym, state) {
                (0, 0) => Entry::new(vec![UpdateAction::Add(1)], 0),
                (1, 0) | (1, 1) => Entry::new(vec![UpdateAction::Add(-1)], 1),
                _ => Entry::stay(1, 2),
            },
            |state, p| state < 2 && !p.get(0),
        )
        .unwrap()
    }

    #[test]
    fn mask_zero_check() {
        let m = CounterMachine::from_fn(
            Alphabet::from_chars("a").unwrap(),
            1,
            2,
            None,
            |_, _, _| Entry::stay(2, 0),
            |_, _| true,
        )
        .unwrap();
        assert_eq!(
            m.mask_of(&[0, 5]).unwrap(),
            ZeroPattern::from_slice(&[false, true])
        );
        assert_eq!(m.mask_of(&[0, 0]).unwrap(), ZeroPattern::zeros(2));
        assert!(matches!(m.mask_of(&[0]), Err(Error::Contract(_))));
    }

    #[test]
    fn mask_threshold_polarity() {
        let m = CounterMachine::from_fn(
            Alphabet::from_chars("a").unwrap(),
            1,
            1,
            Some(vec![3]),
            |_, _, _| Entry::stay(1, 0),
            |_, _| true,
        )
        .unwrap();
        assert_eq!(m.mask_of(&[4]).unwrap().to_string(), "0");
        assert_eq!(m.mask_of(&[3]).unwrap().to_string(), "1");
    }

    #[test]
    fn step_matches_worked_example() {
        let m = fig1();
        let c = m.step(&m.initial(), 0).unwrap();
        assert_eq!(
            c,
            Configuration {
                state: 0,
                counters: vec![1]
            }
        );
        let c = m
            .step(
                &Configuration {
                    state: 0,
                    counters: vec![2],
                },
                1,
            )
            .unwrap();
        assert_eq!(
            c,
            Configuration {
                state: 1,
                counters: vec![1]
            }
        );
    }

    #[test]
    fn step_rejects_bad_inputs() {
        let m = fig1();
        assert!(matches!(
            m.step(&m.initial(), 7),
            Err(Error::UnknownSymbol(_))
        ));
        let bad = Configuration {
            state: 9,
            counters: vec![0],
        };
        assert!(matches!(m.step(&bad, 0), Err(Error::Contract(_))));
        assert!(matches!(m.accepts_str("abc"), Err(Error::UnknownSymbol(t)) if t == "c"));
    }

    #[test]
    fn identity_update_keeps_counters() {
        let m = CounterMachine::from_fn(
            Alphabet::from_chars("x").unwrap(),
            2,
            2,
            None,
            |_, state, _| Entry::stay(2, 1 - state),
            |_, _| false,
        )
        .unwrap();
        let c = Configuration {
            state: 0,
            counters: vec![4, -2],
        };
        let next = m.step(&c, 0).unwrap();
        assert_eq!(next.counters, c.counters);
        assert_eq!(next.state, 1);
    }

    #[test]
    fn acceptance_and_empty_input() {
        let m = fig1();
        assert!(m.accepts_str("aabb").unwrap());
        assert!(!m.accepts_str("aaba").unwrap());
        assert!(m.accepts_str("").unwrap());
    }

    #[test]
    fn trace_shapes() {
        let m = fig1();
        let word = m.alphabet().encode_chars("aabb").unwrap();
        let trace = m.run_trace(&word).unwrap();
        let states: Vec<_> = trace.iter().map(|c| c.state).collect();
        let counts: Vec<_> = trace.iter().map(|c| c.counters[0]).collect();
        assert_eq!(states, [0, 0, 0, 1, 1]);
        assert_eq!(counts, [0, 1, 2, 1, 0]);
        assert_eq!(m.run_trace(&[]).unwrap(), vec![m.initial()]);

        let word = m.alphabet().encode_chars("ab").unwrap();
        let counts: Vec<_> = m
            .run_trace(&word)
            .unwrap()
            .iter()
            .map(|c| c.counters[0])
            .collect();
        assert_eq!(counts, [0, 1, 0]);
    }

    #[test]
    fn overflow_is_an_error() {
        let m = CounterMachine::from_fn(
            Alphabet::from_chars("a").unwrap(),
            1,
            1,
            None,
            |_, _, _| Entry::new(vec![UpdateAction::Add(i64::MAX)], 0),
            |_, _| true,
        )
        .unwrap();
        assert!(m.accepts_str("a").is_ok());
        assert_eq!(m.accepts_str("aa"), Err(Error::Overflow { counter: 0 }));
    }

    #[test]
    fn classify_reports_witnesses() {
        let report = fig1().classify();
        assert!(report.is_incremental);
        assert!(!report.is_simplified);
        assert!(!report.is_stateless);
        assert!(!report.is_threshold);
        assert!(!report.simplified_violations.is_empty());

        let plus_two = CounterMachine::from_fn(
            Alphabet::from_chars("a").unwrap(),
            1,
            1,
            None,
            |_, _, _| Entry::new(vec![UpdateAction::Add(2)], 0),
            |_, _| true,
        )
        .unwrap();
        let report = plus_two.classify();
        assert!(!report.is_incremental);
        assert!(!report.is_simplified);
        assert!(report.is_stateless);
        assert_eq!(report.incremental_violations.len(), 2);
    }

    #[test]
    fn action_parsing() {
        assert_eq!("+3".parse::<UpdateAction>().unwrap(), UpdateAction::Add(3));
        assert_eq!("-1".parse::<UpdateAction>().unwrap(), UpdateAction::Add(-1));
        assert_eq!("x0".parse::<UpdateAction>().unwrap(), UpdateAction::Reset);
        assert!("3".parse::<UpdateAction>().is_err());
        assert!("+".parse::<UpdateAction>().is_err());
        assert_eq!(UpdateAction::Add(-2).to_string(), "-2");
        assert_eq!(UpdateAction::Add(0).to_string(), "+0");
    }

    #[test]
    fn alphabet_rejects_duplicates() {
        assert!(Alphabet::new(["a", "a"]).is_err());
        assert!(Alphabet::new(Vec::<String>::new()).is_err());
        let a = Alphabet::new(["∧", "∨", "0"]).unwrap();
        assert_eq!(a.encode_chars("∨0").unwrap(), vec![1, 2]);
        assert_eq!(a.encode_separated("∨ 0  ∧", " ").unwrap(), vec![1, 2, 0]);
    }

    #[test]
    fn trace_formatting() {
        let m = fig1();
        let word = m.alphabet().encode_chars("ab").unwrap();
        let trace = m.run_trace(&word).unwrap();
        assert_eq!(
            format_trace(&m, &word, &trace),
            "⟨0, q0⟩ →a ⟨1, q0⟩ →b ⟨0, q1⟩ ∈ F"
        );
    }
}
