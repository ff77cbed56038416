//! JSON machine descriptions.
//!
//! ```json
//! {
//!   "alphabet": ["a", "b"],
//!   "num_states": 3,
//!   "num_counters": 1,
//!   "updates": [
//!     {"symbol": "a", "state": 0, "mask": "0", "actions": ["+1"]},
//!     {"actions": ["+0"]}
//!   ],
//!   "transitions": [
//!     {"symbol": "b", "state": 0, "next": 1},
//!     {"next": 2}
//!   ],
//!   "accept": [{"state": 0, "mask": "0"}],
//!   "thresholds": [3]
//! }
//! ```
//!
//! `symbol`, `state` and `mask` may each be omitted from an `updates` or
//! `transitions` record; the record then covers every value of that key and
//! acts as a default. At each domain point the matching record with the most
//! keys present wins. Two equally specific matches that disagree, or a point
//! with no match at all, is a load error.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::machine::{Alphabet, CounterMachine, Entry, UpdateAction, ZeroPattern};

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct UpdateRecord {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub symbol: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub state: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mask: Option<String>,
    pub actions: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct TransitionRecord {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub symbol: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub state: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mask: Option<String>,
    pub next: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct AcceptRecord {
    pub state: usize,
    pub mask: String,
}

/// Serialized form of a [`CounterMachine`].
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct MachineFile {
    pub alphabet: Vec<String>,
    pub num_states: usize,
    pub num_counters: usize,
    pub updates: Vec<UpdateRecord>,
    pub transitions: Vec<TransitionRecord>,
    pub accept: Vec<AcceptRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub thresholds: Option<Vec<i64>>,
}

/// Resolved key of a record; `None` fields are wildcards.
struct Key {
    symbol: Option<usize>,
    state: Option<usize>,
    mask: Option<ZeroPattern>,
}

impl Key {
    #[allow(clippy::too_many_arguments)]
    fn resolve(
        alphabet: &Alphabet,
        num_states: usize,
        num_counters: usize,
        symbol: &Option<String>,
        state: Option<usize>,
        mask: &Option<String>,
        what: &str,
        index: usize,
    ) -> Result<Self> {
        let symbol = symbol
            .as_deref()
            .map(|s| {
                alphabet
                    .index_of(s)
                    .ok_or_else(|| Error::Load(format!("{what}[{index}]: unknown symbol `{s}`")))
            })
            .transpose()?;
        if let Some(q) = state {
            if q >= num_states {
                return Err(Error::Load(format!(
                    "{what}[{index}]: state {q} out of range (num_states = {num_states})"
                )));
            }
        }
        let mask = mask
            .as_deref()
            .map(|m| parse_mask(m, num_counters, what, index))
            .transpose()?;
        Ok(Self {
            symbol,
            state,
            mask,
        })
    }

    fn matches(&self, symbol: usize, state: usize, mask: ZeroPattern) -> bool {
        self.symbol.is_none_or(|s| s == symbol)
            && self.state.is_none_or(|q| q == state)
            && self.mask.is_none_or(|m| m == mask)
    }

    fn specificity(&self) -> u8 {
        u8::from(self.symbol.is_some())
            + u8::from(self.state.is_some())
            + u8::from(self.mask.is_some())
    }
}

fn parse_mask(m: &str, num_counters: usize, what: &str, index: usize) -> Result<ZeroPattern> {
    let p = ZeroPattern::parse(m).map_err(|e| Error::Load(format!("{what}[{index}]: {e}")))?;
    if p.len() != num_counters {
        return Err(Error::Load(format!(
            "{what}[{index}]: mask `{m}` has length {}, expected {num_counters}",
            p.len()
        )));
    }
    Ok(p)
}

/// Picks the most specific matching record; ties that disagree are errors.
fn lookup<'a, T: PartialEq>(
    records: &'a [(Key, T)],
    alphabet: &Alphabet,
    what: &str,
    symbol: usize,
    state: usize,
    mask: ZeroPattern,
) -> Result<&'a T> {
    let mut best: Option<(u8, &T)> = None;
    for (key, value) in records {
        if !key.matches(symbol, state, mask) {
            continue;
        }
        let spec = key.specificity();
        match best {
            Some((b, v)) if b == spec && v != value => {
                return Err(Error::Load(format!(
                    "{what}: conflicting records for ({}, {state}, {mask})",
                    alphabet.symbol(symbol)
                )))
            }
            Some((b, _)) if b >= spec => {}
            _ => best = Some((spec, value)),
        }
    }
    best.map(|(_, v)| v).ok_or_else(|| {
        Error::Load(format!(
            "{what}: table is not total, no record covers ({}, {state}, {mask})",
            alphabet.symbol(symbol)
        ))
    })
}

impl MachineFile {
    pub fn into_machine(self) -> Result<CounterMachine> {
        let alphabet = Alphabet::new(self.alphabet.iter().cloned())?;
        let (q, k) = (self.num_states, self.num_counters);
        if q == 0 {
            return Err(Error::Load("num_states must be positive".into()));
        }
        if let Some(t) = &self.thresholds {
            if t.len() != k {
                return Err(Error::Load(format!(
                    "{} thresholds for {k} counters",
                    t.len()
                )));
            }
        }

        let mut updates = Vec::with_capacity(self.updates.len());
        for (i, r) in self.updates.iter().enumerate() {
            let key = Key::resolve(&alphabet, q, k, &r.symbol, r.state, &r.mask, "updates", i)?;
            if r.actions.len() != k {
                return Err(Error::Load(format!(
                    "updates[{i}]: {} actions, expected {k}",
                    r.actions.len()
                )));
            }
            let actions = r
                .actions
                .iter()
                .map(|a| a.parse::<UpdateAction>())
                .collect::<Result<Vec<_>>>()
                .map_err(|e| Error::Load(format!("updates[{i}]: {e}")))?;
            updates.push((key, actions));
        }
        let mut transitions = Vec::with_capacity(self.transitions.len());
        for (i, r) in self.transitions.iter().enumerate() {
            let key = Key::resolve(
                &alphabet,
                q,
                k,
                &r.symbol,
                r.state,
                &r.mask,
                "transitions",
                i,
            )?;
            if r.next >= q {
                return Err(Error::Load(format!(
                    "transitions[{i}]: next state {} out of range",
                    r.next
                )));
            }
            transitions.push((key, r.next));
        }
        let mut accepting = vec![false; q << k];
        for (i, r) in self.accept.iter().enumerate() {
            if r.state >= q {
                return Err(Error::Load(format!(
                    "accept[{i}]: state {} out of range",
                    r.state
                )));
            }
            let mask = parse_mask(&r.mask, k, "accept", i)?;
            accepting[(r.state << k) | mask.bits() as usize] = true;
        }

        // Validate totality up front so the builder closure cannot fail.
        crate::machine::table_points(alphabet.len(), q, k)?;
        let mut table = Vec::new();
        for sym in 0..alphabet.len() {
            for state in 0..q {
                for mask in ZeroPattern::all(k) {
                    let actions = lookup(&updates, &alphabet, "updates", sym, state, mask)?;
                    let next = lookup(&transitions, &alphabet, "transitions", sym, state, mask)?;
                    table.push(Entry::new(actions.clone(), *next));
                }
            }
        }
        let mut rows = table.into_iter();
        CounterMachine::from_fn(
            alphabet,
            q,
            k,
            self.thresholds,
            |_, _, _| rows.next().expect("row per domain point"),
            |state, mask| accepting[(state << k) | mask.bits() as usize],
        )
    }

    /// Fully explicit description: one record per domain point.
    pub fn from_machine(machine: &CounterMachine) -> Self {
        let k = machine.num_counters();
        let alphabet = machine.alphabet();
        let mut updates = Vec::new();
        let mut transitions = Vec::new();
        for sym in 0..alphabet.len() {
            for state in 0..machine.num_states() {
                for mask in ZeroPattern::all(k) {
                    updates.push(UpdateRecord {
                        symbol: Some(alphabet.symbol(sym).to_string()),
                        state: Some(state),
                        mask: Some(mask.to_string()),
                        actions: machine
                            .update(sym, state, mask)
                            .iter()
                            .map(ToString::to_string)
                            .collect(),
                    });
                    transitions.push(TransitionRecord {
                        symbol: Some(alphabet.symbol(sym).to_string()),
                        state: Some(state),
                        mask: Some(mask.to_string()),
                        next: machine.transition(sym, state, mask),
                    });
                }
            }
        }
        let mut accept = Vec::new();
        for state in 0..machine.num_states() {
            for mask in ZeroPattern::all(k) {
                if machine.is_accepting(state, mask) {
                    accept.push(AcceptRecord {
                        state,
                        mask: mask.to_string(),
                    });
                }
            }
        }
        Self {
            alphabet: alphabet.symbols().to_vec(),
            num_states: machine.num_states(),
            num_counters: k,
            updates,
            transitions,
            accept,
            thresholds: machine.thresholds().map(<[i64]>::to_vec),
        }
    }
}

/// Parses a machine description; errors carry line and column.
pub fn load_machine(json: &str) -> Result<CounterMachine> {
    let file: MachineFile = serde_json::from_str(json).map_err(|e| Error::Load(e.to_string()))?;
    file.into_machine()
}

pub fn save_machine(machine: &CounterMachine) -> String {
    serde_json::to_string_pretty(&MachineFile::from_machine(machine))
        .expect("machine file serializes")
}
