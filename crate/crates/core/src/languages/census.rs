//! Configuration census over operator-only boolean prefixes.
//!
//! For each prefix length `p`, every string in `{∧, ∨}^p` is fed to a machine
//! and the distinct configurations reached are counted, alongside the number
//! of distinct boolean functions those prefixes denote. Functions grow as
//! `2^p` while a `k`-counter machine only reaches `O(p^k)` configurations, so
//! no such machine can keep track of which function it has read.

use std::collections::HashSet;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use super::boolean::{prefix_function, BoolOp};
use super::lm::GrammarLm;
use crate::error::{Error, Result};
use crate::machine::{Configuration, CounterMachine};

/// Largest prefix length accepted by [`config_census`].
pub const MAX_CENSUS_P: usize = 12;

/// Default cap on truth-table rows evaluated across a whole census.
///
/// Length `p` costs `2^p * 2^(p+1)` rows; the default admits `p <= 12`.
pub const DEFAULT_CENSUS_ROWS: u64 = 1 << 26;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CensusRow {
    pub p: usize,
    pub prefixes: u64,
    pub reachable_configs: usize,
    pub distinct_functions: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CensusReport {
    pub rows: Vec<CensusRow>,
}

impl CensusReport {
    /// Smallest `C` with `reachable_configs(p) <= C * (p + 1)^degree` on the given rows.
    pub fn fitted_constant(&self, degree: u32, rows: impl Fn(&CensusRow) -> bool) -> u64 {
        self.rows
            .iter()
            .filter(|r| rows(r))
            .map(|r| (r.reachable_configs as u64).div_ceil((r.p as u64 + 1).pow(degree)))
            .max()
            .unwrap_or(0)
    }

    /// Rows violating `reachable_configs(p) <= C * p + C`.
    pub fn linear_bound_violations(&self, c: u64) -> Vec<usize> {
        self.rows
            .iter()
            .filter(|r| r.reachable_configs as u64 > c * r.p as u64 + c)
            .map(|r| r.p)
            .collect()
    }

    /// First `p` at which the functions outnumber the configurations.
    pub fn crossover(&self) -> Option<usize> {
        self.rows
            .iter()
            .find(|r| r.distinct_functions > r.reachable_configs)
            .map(|r| r.p)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("census report serializes")
    }
}

impl fmt::Display for CensusReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{:>3}  {:>8}  {:>17}  {:>18}",
            "p", "prefixes", "reachable_configs", "distinct_functions"
        )?;
        for r in &self.rows {
            writeln!(
                f,
                "{:>3}  {:>8}  {:>17}  {:>18}",
                r.p, r.prefixes, r.reachable_configs, r.distinct_functions
            )?;
        }
        Ok(())
    }
}

/// Budget exhaustion, carrying the rows completed before the limit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CensusBudgetExceeded {
    pub partial: CensusReport,
    pub stopped_at: usize,
    pub budget: u64,
}

impl fmt::Display for CensusBudgetExceeded {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "census budget of {} rows exhausted at p = {} ({} rows completed)",
            self.budget,
            self.stopped_at,
            self.partial.rows.len()
        )
    }
}

impl std::error::Error for CensusBudgetExceeded {}

impl From<CensusBudgetExceeded> for Error {
    fn from(e: CensusBudgetExceeded) -> Self {
        Error::Resource(e.to_string())
    }
}

fn census_cost(p: usize) -> u64 {
    1u64 << (2 * p + 1)
}

/// Census for `p = 0..=max_p` with the default budget.
pub fn config_census(
    machine: &CounterMachine,
    grammar: &GrammarLm,
    max_p: usize,
) -> Result<CensusReport> {
    if max_p > MAX_CENSUS_P {
        return Err(Error::Resource(format!(
            "census prefix length {max_p} exceeds the guard of {MAX_CENSUS_P}"
        )));
    }
    Ok(config_census_with_budget(
        machine,
        grammar,
        max_p,
        DEFAULT_CENSUS_ROWS,
    )??)
}

/// Census with an explicit row budget.
///
/// The outer result reports setup errors; the inner one reports budget
/// exhaustion together with the partial report.
pub fn config_census_with_budget(
    machine: &CounterMachine,
    grammar: &GrammarLm,
    max_p: usize,
    budget: u64,
) -> Result<Result<CensusReport, CensusBudgetExceeded>> {
    if machine.alphabet() != grammar.alphabet() {
        return Err(Error::AlphabetMismatch(format!(
            "machine alphabet {:?} differs from grammar alphabet {:?}",
            machine.alphabet().symbols(),
            grammar.alphabet().symbols()
        )));
    }
    let symbol = |op: BoolOp| {
        grammar
            .alphabet()
            .index_of(op.token())
            .filter(|&s| grammar.arity(s) == 2)
            .ok_or_else(|| Error::Contract(format!("grammar lacks binary `{}`", op.token())))
    };
    let ops = [
        (BoolOp::And, symbol(BoolOp::And)?),
        (BoolOp::Or, symbol(BoolOp::Or)?),
    ];

    let mut report = CensusReport::default();
    let mut spent = 0u64;
    for p in 0..=max_p {
        spent = spent.saturating_add(census_cost(p));
        if p >= 64 || spent > budget {
            return Ok(Err(CensusBudgetExceeded {
                partial: report,
                stopped_at: p,
                budget,
            }));
        }
        let results: Vec<(Configuration, _)> = (0..1u64 << p)
            .into_par_iter()
            .map(|bits| -> Result<_> {
                let prefix: Vec<(BoolOp, usize)> =
                    (0..p).map(|j| ops[((bits >> j) & 1) as usize]).collect();
                let word: Vec<usize> = prefix.iter().map(|&(_, s)| s).collect();
                let config = machine.run(&word)?;
                let ops: Vec<BoolOp> = prefix.iter().map(|&(op, _)| op).collect();
                Ok((config, prefix_function(&ops)))
            })
            .collect::<Result<_>>()?;
        let configs: HashSet<&Configuration> = results.iter().map(|(c, _)| c).collect();
        let functions: HashSet<_> = results.iter().map(|(_, f)| f).collect();
        report.rows.push(CensusRow {
            p,
            prefixes: 1 << p,
            reachable_configs: configs.len(),
            distinct_functions: functions.len(),
        });
    }
    Ok(Ok(report))
}

/// Checks the inductive step of the counting argument for every prefix of length `p`.
///
/// For each `g`, the minimal satisfying assignment of `⟦∧ g⟧` (ordered right
/// to left) must end in `1` and that of `⟦∨ g⟧` in `0`, so the two differ.
/// Returns the prefixes for which this fails.
pub fn inductive_step_failures(p: usize) -> Vec<Vec<BoolOp>> {
    (0..1u64 << p)
        .into_par_iter()
        .filter_map(|bits| {
            let g: Vec<BoolOp> = (0..p)
                .map(|j| {
                    if (bits >> j) & 1 == 0 {
                        BoolOp::And
                    } else {
                        BoolOp::Or
                    }
                })
                .collect();
            let extend = |op| {
                let mut ops = vec![op];
                ops.extend_from_slice(&g);
                prefix_function(&ops)
            };
            let (f_and, f_or) = (extend(BoolOp::And), extend(BoolOp::Or));
            let last = p + 1;
            let ends_in = |f: &super::boolean::PrefixFunction| {
                f.min_satisfying().map(|idx| (idx >> last) & 1)
            };
            let ok = f_and != f_or && ends_in(&f_and) == Some(1) && ends_in(&f_or) == Some(0);
            (!ok).then_some(g)
        })
        .collect()
}
