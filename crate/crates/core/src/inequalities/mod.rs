//! The inequalities: evaluators for the general theorems and their
//! specialisations, with the bound constant and report types they share.

mod corollaries;
mod report;
mod scenario;
mod sup;
mod theorems;

pub use corollaries::eval_corollary;
pub use report::{Consistency, CorollaryId, InequalityReport, ScenarioContext, TheoremId, Tolerances, CSV_HEADER};
pub use scenario::{EvalOptions, Scenario};
pub use sup::{bound_constant, estimate_sup, SupBound, SupDomain, SupMethod, UNBOUNDED_RATIO};
pub use theorems::{
    eval_first_order_ostrowski, eval_ostrowski_gruss, eval_weighted_ostrowski, evaluate, montgomery_residual,
    second_order_remainder,
};
