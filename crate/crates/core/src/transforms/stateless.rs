use crate::error::Result;
use crate::machine::{CounterMachine, Entry, UpdateAction, ZeroPattern};

use super::require_zero_check;

/// Decodes the state block of a stateless-simulation pattern.
///
/// The block is `ω(i)`: all zeros for `q0`, a single set bit at `i` for `q_i`.
/// Anything else cannot occur on a run and yields `None`.
fn decode_state(mask: ZeroPattern, k: usize, num_states: usize) -> Option<usize> {
    let block = mask.bits() >> k;
    match block.count_ones() {
        0 => Some(0),
        1 => {
            let i = block.trailing_zeros() as usize;
            (i != 0 && i < num_states).then_some(i)
        }
        _ => None,
    }
}

/// Replaces the finite state by `|Q|` one-hot state counters.
///
/// The result has one state and `k + |Q|` counters; counters `k..k+|Q|` hold
/// `ω(i)` for the simulated state `q_i`. A source transition `q_i → q_j` adds
/// `-ω(i) + ω(j)` to that block.
pub fn to_stateless(machine: &CounterMachine) -> Result<CounterMachine> {
    require_zero_check(machine, "to_stateless")?;
    let k = machine.num_counters();
    let q = machine.num_states();
    let low = (1u32 << k) - 1;

    CounterMachine::from_fn(
        machine.alphabet().clone(),
        1,
        k + q,
        None,
        |sym, _, mask| {
            let Some(i) = decode_state(mask, k, q) else {
                return Entry::stay(k + q, 0);
            };
            let source_mask = ZeroPattern::from_bits(mask.bits() & low, k);
            let j = machine.transition(sym, i, source_mask);
            let mut actions = machine.update(sym, i, source_mask).to_vec();
            let mut delta = vec![0i64; q];
            if i != 0 {
                delta[i] -= 1;
            }
            if j != 0 {
                delta[j] += 1;
            }
            actions.extend(delta.into_iter().map(UpdateAction::Add));
            Entry::new(actions, 0)
        },
        |_, mask| match decode_state(mask, k, q) {
            Some(i) => machine.is_accepting(i, ZeroPattern::from_bits(mask.bits() & low, k)),
            None => false,
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::{difftest, DEFAULT_MAX_WORDS};
    use crate::machine::Alphabet;
    use crate::Error;

    fn fig1() -> CounterMachine {
        CounterMachine::from_fn(
            Alphabet::from_chars("ab").unwrap(),
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
    fn fig1_becomes_stateless() {
        let source = fig1();
        let target = to_stateless(&source).unwrap();
        assert_eq!(target.num_states(), 1);
        assert_eq!(target.num_counters(), 4);
        assert!(target.classify().is_stateless);
        assert!(difftest(&source, &target, 10, DEFAULT_MAX_WORDS)
            .unwrap()
            .agrees());
    }

    #[test]
    fn state_block_tracks_source_state() {
        let target = to_stateless(&fig1()).unwrap();
        let word = target.alphabet().encode_chars("aab").unwrap();
        let end = target.run(&word).unwrap();
        assert_eq!(end.counters, vec![1, 0, 1, 0]);
        let word = target.alphabet().encode_chars("aaba").unwrap();
        assert_eq!(target.run(&word).unwrap().counters[1..], [0, 0, 1]);
    }

    #[test]
    fn single_state_machine_keeps_zero_block() {
        let source = CounterMachine::from_fn(
            Alphabet::from_chars("ab").unwrap(),
            1,
            1,
            None,
            |sym, _, _| Entry::new(vec![UpdateAction::Add(if sym == 0 { 1 } else { -1 })], 0),
            |_, m| !m.get(0),
        )
        .unwrap();
        let target = to_stateless(&source).unwrap();
        assert_eq!(target.num_counters(), 2);
        let word = target.alphabet().encode_chars("abba").unwrap();
        for config in target.run_trace(&word).unwrap() {
            assert_eq!(config.counters[1], 0);
        }
        assert!(difftest(&source, &target, 8, DEFAULT_MAX_WORDS)
            .unwrap()
            .agrees());
    }

    #[test]
    fn dead_patterns_are_inert() {
        let target = to_stateless(&fig1()).unwrap();
        // state block 011 is not one-hot
        let mask = ZeroPattern::from_slice(&[false, false, true, true]);
        assert_eq!(target.update(0, 0, mask), &[UpdateAction::NOOP; 4]);
        assert!(!target.is_accepting(0, mask));
    }

    #[test]
    fn threshold_input_is_rejected() {
        let m = CounterMachine::from_fn(
            Alphabet::from_chars("a").unwrap(),
            1,
            1,
            Some(vec![0]),
            |_, _, _| Entry::stay(1, 0),
            |_, _| true,
        )
        .unwrap();
        assert!(matches!(
            to_stateless(&m),
            Err(Error::UnsupportedVariant(_))
        ));
    }
}
