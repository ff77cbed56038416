use crate::error::Result;
use crate::machine::{Configuration, CounterMachine, Entry, UpdateAction, ZeroPattern};

use super::{require_zero_check, Radix};

/// Ring-counter layout used by [`to_incremental`].
///
/// Source counter `c_i` is held as `c'_i = floor(c_i / d_i)` in a counter and
/// `r_i = c_i mod d_i` (in `0..d_i`) in finite state, so `c_i = d_i * c'_i + r_i`
/// for every sign of `c_i`. `d_i` is the largest constant ever added to
/// counter `i` (at least 1), which keeps every step of `c'_i` within `±1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingCounterPlan {
    pub moduli: Vec<u64>,
    pub source_states: usize,
}

impl RingCounterPlan {
    pub fn for_machine(machine: &CounterMachine) -> Self {
        let moduli = (0..machine.num_counters())
            .map(|i| machine.max_step_of(i).max(1))
            .collect();
        Self {
            moduli,
            source_states: machine.num_states(),
        }
    }

    fn radix(&self) -> Result<Radix> {
        let mut bases = vec![self.source_states];
        bases.extend(self.moduli.iter().map(|&d| d as usize));
        Radix::new(bases)
    }

    /// Number of states of the simulating machine: `|Q| * prod d_i`.
    pub fn num_states(&self) -> Result<usize> {
        self.radix()?.size()
    }

    /// The simulating configuration for a source configuration.
    pub fn encode(&self, source: &Configuration) -> Result<Configuration> {
        let mut digits = vec![source.state];
        let mut counters = Vec::with_capacity(source.counters.len());
        for (&c, &d) in source.counters.iter().zip(&self.moduli) {
            let d = d as i64;
            digits.push(c.rem_euclid(d) as usize);
            counters.push(c.div_euclid(d));
        }
        Ok(Configuration {
            state: self.radix()?.pack(&digits),
            counters,
        })
    }

    /// Reconstructs `(q, c)` with `c_i = d_i * c'_i + r_i`.
    pub fn decode(&self, simulated: &Configuration) -> Result<Configuration> {
        let digits = self.radix()?.unpack(simulated.state);
        let counters = simulated
            .counters
            .iter()
            .zip(&self.moduli)
            .zip(&digits[1..])
            .map(|((&c, &d), &r)| c * d as i64 + r as i64)
            .collect();
        Ok(Configuration {
            state: digits[0],
            counters,
        })
    }
}

/// Rewrites a general machine into one whose additive updates are all in `{-1, 0, +1}`.
pub fn to_incremental(machine: &CounterMachine) -> Result<CounterMachine> {
    require_zero_check(machine, "to_incremental")?;
    let plan = RingCounterPlan::for_machine(machine);
    let radix = plan.radix()?;
    let k = machine.num_counters();

    CounterMachine::from_fn(
        machine.alphabet().clone(),
        radix.size()?,
        k,
        None,
        |sym, state, mask| {
            let digits = radix.unpack(state);
            let (q, residues) = (digits[0], &digits[1..]);
            // c_i = 0 iff c'_i = 0 and r_i = 0
            let source_mask = ZeroPattern::from_slice(
                &(0..k)
                    .map(|i| mask.get(i) || residues[i] != 0)
                    .collect::<Vec<_>>(),
            );
            let mut next_digits = vec![machine.transition(sym, q, source_mask)];
            let mut actions = Vec::with_capacity(k);
            for (i, action) in machine.update(sym, q, source_mask).iter().enumerate() {
                let d = plan.moduli[i] as i64;
                match *action {
                    UpdateAction::Reset => {
                        actions.push(UpdateAction::Reset);
                        next_digits.push(0);
                    }
                    UpdateAction::Add(m) => {
                        let shifted = residues[i] as i64 + m;
                        // +1 if r + m >= d, -1 if r + m < 0, +0 otherwise
                        actions.push(UpdateAction::Add(shifted.div_euclid(d)));
                        next_digits.push(shifted.rem_euclid(d) as usize);
                    }
                }
            }
            Entry::new(actions, radix.pack(&next_digits))
        },
        |state, mask| {
            let digits = radix.unpack(state);
            let source_mask = ZeroPattern::from_slice(
                &(0..k)
                    .map(|i| mask.get(i) || digits[i + 1] != 0)
                    .collect::<Vec<_>>(),
            );
            machine.is_accepting(digits[0], source_mask)
        },
    )
}
