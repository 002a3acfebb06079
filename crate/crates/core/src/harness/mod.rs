//! Deterministic sweep plans, parallel evaluation, sharpness search and an
//! independent reference integrator.

mod plan;
mod reference;
mod sharpness;
mod sweep;

pub use plan::{
    default_plans, default_psis, lambda_grid, random_scale, random_scenario, smooth_across_gaps, Arithmetic, Filtered,
    FunctionFamily, GeneratedScenarios, ScenarioSpec, SweepPlan, XRule,
};
pub use reference::reference_integral;
pub use sharpness::{sharpness_search, Argmax, SharpnessResult};
pub use sweep::{
    evaluate_spec, evaluate_specs, plan_hash, run_sweep, run_sweep_with_jobs, ReportSet, SweepEntry, SweepFailure,
};
