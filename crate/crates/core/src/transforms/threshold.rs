use crate::error::Result;
use crate::machine::{CounterMachine, Entry, UpdateAction, ZeroPattern};

use super::{require_zero_check, Radix};

/// Per-counter plan for simulating the predicate `c <= m` with zero-checks.
///
/// The counter is tracked through an oriented value `v = s * c`, with
/// `s = +1` for `m >= 0` and `s = -1` for `m < 0`, and a bound `t >= 0`:
///
/// * `m >= 0`: `c <= m` iff `v <= t` with `t = m`
/// * `m < 0`:  `c <= m` iff `-c >= -m` iff not `v <= t` with `t = -m - 1`
///
/// `v` is held as a ring counter, `v' = floor(v / d)` in a real counter and
/// `r = v mod d` in finite state, with `d > t` and `d` at least the largest
/// step, so `v'` moves by at most one per token. A finite-state flag remembers
/// whether `v'` went negative the last time it left zero. Then
/// `v <= t` iff (`v' = 0` and `r <= t`) or (`v' != 0` and the flag is set).
#[derive(Clone, Copy, Debug)]
struct Track {
    flip: bool,
    bound: i64,
    modulus: i64,
}

impl Track {
    fn new(threshold: i64, max_step: u64) -> Self {
        let (flip, bound) = if threshold >= 0 {
            (false, threshold)
        } else {
            (true, -threshold - 1)
        };
        let modulus = (bound + 1).max(max_step as i64).max(1);
        Self {
            flip,
            bound,
            modulus,
        }
    }

    fn predicate(&self, counter_is_zero: bool, residue: i64, negative: bool) -> bool {
        let within = if counter_is_zero {
            residue <= self.bound
        } else {
            negative
        };
        within != self.flip
    }
}

/// Converts a threshold machine into a zero-check machine for the same language.
///
/// Zero-check machines are returned unchanged.
pub fn threshold_to_general(machine: &CounterMachine) -> Result<CounterMachine> {
    let Some(thresholds) = machine.thresholds() else {
        return Ok(machine.clone());
    };
    let k = machine.num_counters();
    let tracks: Vec<Track> = thresholds
        .iter()
        .enumerate()
        .map(|(i, &m)| Track::new(m, machine.max_step_of(i)))
        .collect();
    let mut bases = vec![machine.num_states()];
    for t in &tracks {
        bases.push(t.modulus as usize);
        bases.push(2);
    }
    let radix = Radix::new(bases)?;

    // (source state, residues, negative flags)
    let split = |state: usize| {
        let digits = radix.unpack(state);
        let residues: Vec<i64> = (0..k).map(|i| digits[1 + 2 * i] as i64).collect();
        let negative: Vec<bool> = (0..k).map(|i| digits[2 + 2 * i] == 1).collect();
        (digits[0], residues, negative)
    };
    let source_mask = |mask: ZeroPattern, residues: &[i64], negative: &[bool]| {
        ZeroPattern::from_slice(
            &(0..k)
                .map(|i| tracks[i].predicate(!mask.get(i), residues[i], negative[i]))
                .collect::<Vec<_>>(),
        )
    };

    CounterMachine::from_fn(
        machine.alphabet().clone(),
        radix.size()?,
        k,
        None,
        |sym, state, mask| {
            let (q, residues, negative) = split(state);
            let view = source_mask(mask, &residues, &negative);
            let mut digits = vec![machine.transition(sym, q, view)];
            let mut actions = Vec::with_capacity(k);
            for (i, action) in machine.update(sym, q, view).iter().enumerate() {
                let track = tracks[i];
                match *action {
                    UpdateAction::Reset => {
                        actions.push(UpdateAction::Reset);
                        digits.extend([0, 0]);
                    }
                    UpdateAction::Add(m) => {
                        let step = if track.flip { -m } else { m };
                        let shifted = residues[i] + step;
                        let carry = shifted.div_euclid(track.modulus);
                        let neg = if mask.get(i) { negative[i] } else { carry < 0 };
                        actions.push(UpdateAction::Add(carry));
                        digits.push(shifted.rem_euclid(track.modulus) as usize);
                        digits.push(usize::from(neg));
                    }
                }
            }
            Entry::new(actions, radix.pack(&digits))
        },
        |state, mask| {
            let (q, residues, negative) = split(state);
            machine.is_accepting(q, source_mask(mask, &residues, &negative))
        },
    )
}

/// Converts a zero-check machine into a threshold machine.
///
/// Each counter is duplicated into a `<= -1` copy and a `<= 0` copy; the
/// original counter is zero exactly when the second predicate holds and the
/// first does not.
pub fn general_to_threshold(machine: &CounterMachine) -> Result<CounterMachine> {
    require_zero_check(machine, "general_to_threshold")?;
    let k = machine.num_counters();
    let view = |mask: ZeroPattern| {
        ZeroPattern::from_slice(
            &(0..k)
                .map(|i| !(mask.get(2 * i + 1) && !mask.get(2 * i)))
                .collect::<Vec<_>>(),
        )
    };
    CounterMachine::from_fn(
        machine.alphabet().clone(),
        machine.num_states(),
        2 * k,
        Some((0..k).flat_map(|_| [-1, 0]).collect()),
        |sym, q, mask| {
            let source = view(mask);
            let actions = machine
                .update(sym, q, source)
                .iter()
                .flat_map(|&a| [a, a])
                .collect();
            Entry::new(actions, machine.transition(sym, q, source))
        },
        |q, mask| machine.is_accepting(q, view(mask)),
    )
}
