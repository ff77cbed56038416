use std::fmt;

use crate::error::{Error, Result};
use crate::machine::{CounterMachine, Entry, ZeroPattern};

use super::{threshold_to_general, Radix};

/// A boolean function `{0,1}^arity → {0,1}` given as a truth table.
///
/// Entry `idx` is the output when input `j` equals bit `j` of `idx`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BooleanCombinator {
    arity: usize,
    table: Vec<bool>,
}

impl BooleanCombinator {
    pub fn new(arity: usize, table: Vec<bool>) -> Result<Self> {
        if arity > 16 || table.len() != 1 << arity {
            return Err(Error::Contract(format!(
                "truth table of length {} does not match arity {arity}",
                table.len()
            )));
        }
        Ok(Self { arity, table })
    }

    pub fn from_fn(arity: usize, f: impl Fn(&[bool]) -> bool) -> Self {
        let table = (0..1usize << arity)
            .map(|idx| f(&(0..arity).map(|j| (idx >> j) & 1 == 1).collect::<Vec<_>>()))
            .collect();
        Self { arity, table }
    }

    /// Parses a string of `0`/`1` characters; character `idx` is table entry `idx`.
    pub fn parse(arity: usize, table: &str) -> Result<Self> {
        let bits = table
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::Contract(format!("bad truth table `{table}`"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(arity, bits)
    }

    pub fn not() -> Self {
        Self::from_fn(1, |x| !x[0])
    }

    pub fn and() -> Self {
        Self::from_fn(2, |x| x[0] && x[1])
    }

    pub fn or() -> Self {
        Self::from_fn(2, |x| x[0] || x[1])
    }

    pub fn difference() -> Self {
        Self::from_fn(2, |x| x[0] && !x[1])
    }

    pub fn symmetric_difference() -> Self {
        Self::from_fn(2, |x| x[0] != x[1])
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn eval(&self, inputs: &[bool]) -> bool {
        debug_assert_eq!(inputs.len(), self.arity);
        let idx = inputs
            .iter()
            .enumerate()
            .fold(0usize, |acc, (j, &b)| acc | (usize::from(b) << j));
        self.table[idx]
    }
}

impl fmt::Display for BooleanCombinator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.table {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Runs all machines in parallel and accepts iff `p` maps their verdicts to 1.
///
/// Counters are concatenated in input order and states form a mixed-radix
/// product. If every input is a threshold machine the product is one too;
/// otherwise threshold inputs are converted with [`threshold_to_general`]
/// first.
pub fn combine(machines: &[&CounterMachine], p: &BooleanCombinator) -> Result<CounterMachine> {
    if machines.len() != p.arity() {
        return Err(Error::Contract(format!(
            "{} machines for a combinator of arity {}",
            machines.len(),
            p.arity()
        )));
    }
    let Some(first) = machines.first() else {
        return Err(Error::Contract("combine needs at least one machine".into()));
    };
    let alphabet = first.alphabet().clone();
    if let Some(other) = machines.iter().find(|m| m.alphabet() != &alphabet) {
        return Err(Error::AlphabetMismatch(format!(
            "{:?} vs {:?}",
            alphabet.symbols(),
            other.alphabet().symbols()
        )));
    }

    let all_threshold = machines.iter().all(|m| m.is_threshold());
    let converted: Vec<CounterMachine>;
    let parts: Vec<&CounterMachine> = if all_threshold || machines.iter().all(|m| !m.is_threshold())
    {
        machines.to_vec()
    } else {
        converted = machines
            .iter()
            .map(|m| threshold_to_general(m))
            .collect::<Result<_>>()?;
        converted.iter().collect()
    };

    let radix = Radix::new(parts.iter().map(|m| m.num_states()).collect())?;
    let offsets: Vec<usize> = parts
        .iter()
        .scan(0, |acc, m| {
            let start = *acc;
            *acc += m.num_counters();
            Some(start)
        })
        .collect();
    let total_counters: usize = parts.iter().map(|m| m.num_counters()).sum();
    let thresholds = all_threshold.then(|| {
        parts
            .iter()
            .flat_map(|m| m.thresholds().unwrap_or_default().iter().copied())
            .collect()
    });
    let slice = |mask: ZeroPattern, j: usize| {
        let k = parts[j].num_counters();
        ZeroPattern::from_bits((mask.bits() >> offsets[j]) & ((1u32 << k) - 1), k)
    };

    CounterMachine::from_fn(
        alphabet,
        radix.size()?,
        total_counters,
        thresholds,
        |sym, state, mask| {
            let states = radix.unpack(state);
            let mut actions = Vec::with_capacity(total_counters);
            let mut next = Vec::with_capacity(parts.len());
            for (j, m) in parts.iter().enumerate() {
                let local = slice(mask, j);
                actions.extend_from_slice(m.update(sym, states[j], local));
                next.push(m.transition(sym, states[j], local));
            }
            Entry::new(actions, radix.pack(&next))
        },
        |state, mask| {
            let states = radix.unpack(state);
            let verdicts: Vec<bool> = parts
                .iter()
                .enumerate()
                .map(|(j, m)| m.is_accepting(states[j], slice(mask, j)))
                .collect();
            p.eval(&verdicts)
        },
    )
}

pub fn complement(m: &CounterMachine) -> Result<CounterMachine> {
    combine(&[m], &BooleanCombinator::not())
}

pub fn union(a: &CounterMachine, b: &CounterMachine) -> Result<CounterMachine> {
    combine(&[a, b], &BooleanCombinator::or())
}

pub fn intersection(a: &CounterMachine, b: &CounterMachine) -> Result<CounterMachine> {
    combine(&[a, b], &BooleanCombinator::and())
}

pub fn difference(a: &CounterMachine, b: &CounterMachine) -> Result<CounterMachine> {
    combine(&[a, b], &BooleanCombinator::difference())
}

pub fn symmetric_difference(a: &CounterMachine, b: &CounterMachine) -> Result<CounterMachine> {
    combine(&[a, b], &BooleanCombinator::symmetric_difference())
}
