//! Example machines, prefix expression languages and the boolean census.

mod boolean;
mod census;
mod lm;
mod machines;

pub use boolean::{bool_eval, prefix_function, BoolExpr, BoolOp, BoolToken, PrefixFunction};
pub use census::{
    config_census, config_census_with_budget, inductive_step_failures, CensusBudgetExceeded,
    CensusReport, CensusRow, DEFAULT_CENSUS_ROWS, MAX_CENSUS_P,
};
pub use lm::{
    lm_crosscheck, lm_decide, lm_decide_guarded, lm_decide_tokens, lm_machine, lm_machine_guarded,
    lm_parse, GrammarLm, LmCrosscheck,
};
pub use machines::{
    amb2m_incremental_machine, amb2m_machine, dyck1_machine, fig1_machine,
    scl_counter_decomposition,
};
