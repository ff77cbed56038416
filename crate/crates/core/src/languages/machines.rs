//! Hand-built machines for the standard example languages.

use crate::machine::{Alphabet, CounterMachine, Entry, UpdateAction};

fn add(m: i64) -> Vec<UpdateAction> {
    vec![UpdateAction::Add(m)]
}

/// The three-state, one-counter recognizer of `{a^n b^n}`.
///
/// `q0` counts `a`s up, `b` moves to `q1` which counts down, and an `a` after
/// any `b` sinks into `q2`. Accepts in `q0` or `q1` with the counter at zero.
pub fn fig1_machine() -> CounterMachine {
    CounterMachine::from_fn(
        Alphabet::from_chars("ab").expect("static alphabet"),
        3,
        1,
        None,
        |sym, state, _| match (sym, state) {
            (0, 0) => Entry::new(add(1), 0),
            (1, 0) | (1, 1) => Entry::new(add(-1), 1),
            _ => Entry::new(add(0), 2),
        },
        |state, mask| state < 2 && !mask.get(0),
    )
    .expect("fig1 machine is well formed")
}

/// One-counter general machine for `{a^m b^(2m)}`: `+2` per `a`, `-1` per `b`.
///
/// `q0` reads `a`s, `q1` reads `b`s, `q2` is the sink for an `a` after a `b`.
pub fn amb2m_machine() -> CounterMachine {
    CounterMachine::from_fn(
        Alphabet::from_chars("ab").expect("static alphabet"),
        3,
        1,
        None,
        |sym, state, _| match (sym, state) {
            (0, 0) => Entry::new(add(2), 0),
            (1, 0) | (1, 1) => Entry::new(add(-1), 1),
            _ => Entry::new(add(0), 2),
        },
        |state, mask| state < 2 && !mask.get(0),
    )
    .expect("amb2m machine is well formed")
}

/// Two-counter incremental machine for `{a^m b^(2m)}` with state-dependent updates.
///
/// In `q0`, `a` increments the first counter (only while the second is still
/// zero) and `b` moves one unit from the first counter to the second. Once the
/// first counter is empty, the next `b` switches to `q1`, which drains the
/// second counter. `q2` is the sink. Accepts with both counters zero.
pub fn amb2m_incremental_machine() -> CounterMachine {
    use UpdateAction::Add;
    CounterMachine::from_fn(
        Alphabet::from_chars("ab").expect("static alphabet"),
        3,
        2,
        None,
        |sym, state, mask| {
            let (first, second) = (mask.get(0), mask.get(1));
            match (sym, state) {
                (0, 0) if !second => Entry::new(vec![Add(1), Add(0)], 0),
                (1, 0) if first => Entry::new(vec![Add(-1), Add(1)], 0),
                (1, 0) if second => Entry::new(vec![Add(0), Add(-1)], 1),
                (1, 1) if second => Entry::new(vec![Add(0), Add(-1)], 1),
                _ => Entry::stay(2, 2),
            }
        },
        |state, mask| state < 2 && mask.bits() == 0,
    )
    .expect("amb2m incremental machine is well formed")
}

/// Balanced parentheses where no prefix closes more than it opens.
pub fn dyck1_machine() -> CounterMachine {
    CounterMachine::from_fn(
        Alphabet::from_chars("()").expect("static alphabet"),
        2,
        1,
        None,
        |sym, state, mask| match (sym, state) {
            (0, 0) => Entry::new(add(1), 0),
            (1, 0) if mask.get(0) => Entry::new(add(-1), 0),
            _ => Entry::new(add(0), 1),
        },
        |state, mask| state == 0 && !mask.get(0),
    )
    .expect("dyck1 machine is well formed")
}

/// Counter value of a reset-free simplified one-counter machine on `a^m b^l`.
pub fn scl_counter_decomposition(u_a: i64, u_b: i64, m: u64, l: u64) -> i64 {
    u_a * m as i64 + u_b * l as i64
}
