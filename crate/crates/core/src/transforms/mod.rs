//! Machine-to-machine simulation constructions.
//!
//! Every transform returns a machine over the same alphabet that accepts the
//! same language as its input. None of them minimize their output.

mod combine;
mod incremental;
mod stateless;
mod threshold;

pub use combine::{
    combine, complement, difference, intersection, symmetric_difference, union, BooleanCombinator,
};
pub use incremental::{to_incremental, RingCounterPlan};
pub use stateless::to_stateless;
pub use threshold::{general_to_threshold, threshold_to_general};

use crate::error::{Error, Result};
use crate::machine::CounterMachine;

fn require_zero_check(machine: &CounterMachine, what: &str) -> Result<()> {
    if machine.is_threshold() {
        return Err(Error::UnsupportedVariant(format!(
            "{what} needs a zero-check machine; run threshold_to_general first"
        )));
    }
    Ok(())
}

/// Mixed-radix packing of a tuple of small digits into one index.
#[derive(Clone, Debug)]
pub(crate) struct Radix {
    bases: Vec<usize>,
}

impl Radix {
    pub(crate) fn new(bases: Vec<usize>) -> Result<Self> {
        let radix = Self { bases };
        radix.size()?;
        Ok(radix)
    }

    pub(crate) fn size(&self) -> Result<usize> {
        self.bases
            .iter()
            .try_fold(1usize, |acc, &b| acc.checked_mul(b))
            .filter(|&n| n <= crate::machine::MAX_TABLE_POINTS)
            .ok_or_else(|| Error::Resource(format!("state space {:?} is too large", self.bases)))
    }

    /// First digit is least significant.
    pub(crate) fn pack(&self, digits: &[usize]) -> usize {
        digits
            .iter()
            .zip(&self.bases)
            .rev()
            .fold(0, |acc, (&d, &b)| acc * b + d)
    }

    pub(crate) fn unpack(&self, mut index: usize) -> Vec<usize> {
        self.bases
            .iter()
            .map(|&b| {
                let d = index % b;
                index /= b;
                d
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::Radix;

    #[test]
    fn radix_round_trip() {
        let r = Radix::new(vec![3, 2, 4]).unwrap();
        assert_eq!(r.size().unwrap(), 24);
        for i in 0..24 {
            assert_eq!(r.pack(&r.unpack(i)), i);
        }
        assert_eq!(r.pack(&[0, 0, 0]), 0);
        assert_eq!(r.pack(&[1, 0, 0]), 1);
        assert_eq!(r.pack(&[0, 1, 0]), 3);
    }
}
