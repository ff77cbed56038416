//! Random machines for differential testing.

use rand::Rng;

use crate::machine::{Alphabet, CounterMachine, Entry, UpdateAction, ZeroPattern};

/// Size limits for generated machines. Actual sizes are drawn uniformly up to each bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Shape {
    pub max_states: usize,
    pub max_counters: usize,
    pub max_symbols: usize,
    pub max_step: i64,
}

impl Default for Shape {
    fn default() -> Self {
        Self {
            max_states: 3,
            max_counters: 2,
            max_symbols: 3,
            max_step: 3,
        }
    }
}

fn alphabet<R: Rng + ?Sized>(rng: &mut R, max_symbols: usize) -> Alphabet {
    let n = rng.gen_range(1..=max_symbols.clamp(1, 26));
    let letters: String = ('a'..='z').take(n).collect();
    Alphabet::from_chars(&letters).expect("distinct letters")
}

fn action<R: Rng + ?Sized>(rng: &mut R, max_step: i64) -> UpdateAction {
    if rng.gen_ratio(1, 8) {
        UpdateAction::Reset
    } else {
        UpdateAction::Add(rng.gen_range(-max_step..=max_step))
    }
}

fn random_table<R: Rng + ?Sized>(
    rng: &mut R,
    shape: &Shape,
    thresholds: Option<Vec<i64>>,
) -> CounterMachine {
    let alphabet = alphabet(rng, shape.max_symbols);
    let q = rng.gen_range(1..=shape.max_states.max(1));
    let k = thresholds
        .as_ref()
        .map_or_else(|| rng.gen_range(0..=shape.max_counters), Vec::len);
    let step = shape.max_step.max(0);
    // Draw the whole table first so the closures below stay deterministic.
    let points = (alphabet.len() * q) << k;
    let entries: Vec<Entry> = (0..points)
        .map(|_| {
            Entry::new(
                (0..k).map(|_| action(rng, step)).collect(),
                rng.gen_range(0..q),
            )
        })
        .collect();
    let accept: Vec<bool> = (0..q << k).map(|_| rng.gen_bool(0.4)).collect();
    CounterMachine::from_fn(
        alphabet,
        q,
        k,
        thresholds,
        |sym, state, mask| entries[((sym * q + state) << k) | mask.bits() as usize].clone(),
        |state, mask| accept[(state << k) | mask.bits() as usize],
    )
    .expect("generated machine is well formed")
}

/// A zero-check machine with arbitrary entries within `shape`.
pub fn random_machine<R: Rng + ?Sized>(rng: &mut R, shape: &Shape) -> CounterMachine {
    random_table(rng, shape, None)
}

/// A threshold machine with thresholds drawn from `-max_step..=max_step`.
pub fn random_threshold_machine<R: Rng + ?Sized>(rng: &mut R, shape: &Shape) -> CounterMachine {
    let k = rng.gen_range(0..=shape.max_counters);
    let bound = shape.max_step.max(0);
    let thresholds = (0..k).map(|_| rng.gen_range(-bound..=bound)).collect();
    random_table(rng, shape, Some(thresholds))
}

/// A stateless simplified machine: one state, updates in `{-1, 0, +1, reset}`
/// chosen per symbol only, and a random set of accepting zero-patterns.
pub fn random_qscl_machine<R: Rng + ?Sized>(
    rng: &mut R,
    max_counters: usize,
    max_symbols: usize,
) -> CounterMachine {
    let alphabet = alphabet(rng, max_symbols);
    let k = rng.gen_range(0..=max_counters);
    let per_symbol: Vec<Vec<UpdateAction>> = (0..alphabet.len())
        .map(|_| {
            (0..k)
                .map(|_| match rng.gen_range(0..7) {
                    0 => UpdateAction::Reset,
                    1 | 2 => UpdateAction::Add(-1),
                    3 | 4 => UpdateAction::Add(1),
                    _ => UpdateAction::NOOP,
                })
                .collect()
        })
        .collect();
    let accept: Vec<bool> = ZeroPattern::all(k).map(|_| rng.gen_bool(0.5)).collect();
    CounterMachine::from_fn(
        alphabet,
        1,
        k,
        None,
        |sym, _, _| Entry::new(per_symbol[sym].clone(), 0),
        |_, mask| accept[mask.bits() as usize],
    )
    .expect("generated machine is well formed")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn respects_shape() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let shape = Shape::default();
        for _ in 0..50 {
            let m = random_machine(&mut rng, &shape);
            assert!(m.num_states() <= 3 && m.num_counters() <= 2 && m.alphabet().len() <= 3);
            assert!(m.max_step() <= 3);
            assert!(!m.is_threshold());
            let t = random_threshold_machine(&mut rng, &shape);
            assert!(t.thresholds().unwrap().iter().all(|m| m.abs() <= 3));
        }
    }

    #[test]
    fn qscl_machines_classify() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let report = random_qscl_machine(&mut rng, 2, 3).classify();
            assert!(report.is_simplified && report.is_stateless);
        }
    }

    #[test]
    fn seeded_generation_is_reproducible() {
        let a = random_machine(&mut ChaCha8Rng::seed_from_u64(3), &Shape::default());
        let b = random_machine(&mut ChaCha8Rng::seed_from_u64(3), &Shape::default());
        assert_eq!(a, b);
    }
}
