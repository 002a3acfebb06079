use std::path::Path;

use rayon::prelude::*;
use serde_json::json;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::harness::plan::{Arithmetic, Filtered, ScenarioSpec, SweepPlan};
use crate::inequalities::{evaluate, EvalOptions, InequalityReport, TheoremId, CSV_HEADER};
use crate::scalar::Rational;

/// One evaluated scenario × theorem.
#[derive(Clone, Debug)]
pub struct SweepEntry {
    pub scenario_id: usize,
    pub report: InequalityReport,
}

/// An evaluation that raised an error. Recorded, never fatal to the sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepFailure {
    pub scenario_id: usize,
    pub theorem: TheoremId,
    pub error: Error,
}

/// Reports of a sweep, sorted by scenario id and then by theorem order.
#[derive(Clone, Debug)]
pub struct ReportSet {
    pub plan_hash: String,
    pub n_scenarios: usize,
    pub reports: Vec<SweepEntry>,
    pub failures: Vec<SweepFailure>,
    pub filtered: Vec<Filtered>,
    pub ratio_floor: f64,
}

/// Evaluates `theorem` on `spec` in the arithmetic the spec resolves to.
pub fn evaluate_spec(spec: &ScenarioSpec, theorem: TheoremId, opts: &EvalOptions) -> Result<InequalityReport> {
    match spec.resolved_arithmetic() {
        Arithmetic::Exact => evaluate(theorem, &spec.build::<Rational>()?, opts),
        _ => evaluate(theorem, &spec.build::<f64>()?, opts),
    }
}

/// Evaluates every spec against every theorem in parallel and sorts the
/// results, so the outcome does not depend on scheduling.
pub fn evaluate_specs(
    specs: &[ScenarioSpec],
    theorems: &[TheoremId],
    opts: &EvalOptions,
) -> (Vec<SweepEntry>, Vec<SweepFailure>) {
    let results: Vec<(usize, usize, Result<InequalityReport>)> = specs
        .par_iter()
        .flat_map_iter(|spec| {
            theorems.iter().enumerate().map(move |(k, th)| (spec.id, k, evaluate_spec(spec, *th, opts)))
        })
        .collect();
    let mut results = results;
    results.sort_by_key(|(id, k, _)| (*id, *k));
    let mut reports = Vec::new();
    let mut failures = Vec::new();
    for (scenario_id, k, res) in results {
        match res {
            Ok(report) => reports.push(SweepEntry { scenario_id, report }),
            Err(error) => failures.push(SweepFailure { scenario_id, theorem: theorems[k], error }),
        }
    }
    (reports, failures)
}

/// Hex SHA-256 of the plan's canonical text.
pub fn plan_hash(plan: &SweepPlan) -> String {
    hex::encode(Sha256::digest(plan.canonical().as_bytes()))
}

/// Expands `plan` and evaluates it on the global rayon pool.
pub fn run_sweep(plan: &SweepPlan) -> Result<ReportSet> {
    let generated = plan.generate()?;
    let (reports, failures) = evaluate_specs(&generated.scenarios, &plan.theorems, &plan.eval);
    Ok(ReportSet {
        plan_hash: plan_hash(plan),
        n_scenarios: generated.scenarios.len(),
        reports,
        failures,
        filtered: generated.filtered,
        ratio_floor: plan.eval.tolerances.tol_quad,
    })
}

/// [`run_sweep`] on a dedicated pool of `jobs` threads.
pub fn run_sweep_with_jobs(plan: &SweepPlan, jobs: usize) -> Result<ReportSet> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::DomainError(format!("thread pool: {e}")))?;
    pool.install(|| run_sweep(plan))
}

impl ReportSet {
    pub fn violations(&self) -> impl Iterator<Item = &SweepEntry> {
        self.reports.iter().filter(|e| !e.report.holds)
    }

    pub fn n_violations(&self) -> usize {
        self.violations().count()
    }

    pub fn min_slack(&self) -> Option<f64> {
        self.reports.iter().map(|e| e.report.slack).reduce(f64::min)
    }

    pub fn max_ratio(&self) -> Option<f64> {
        self.reports.iter().map(|e| e.report.ratio(self.ratio_floor)).reduce(f64::max)
    }

    /// Reports for one theorem.
    pub fn for_theorem(&self, id: TheoremId) -> impl Iterator<Item = &InequalityReport> {
        self.reports.iter().filter(move |e| e.report.theorem_id == id).map(|e| &e.report)
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::DomainError(format!("csv: {e}"));
        w.write_record(CSV_HEADER).map_err(io)?;
        for e in &self.reports {
            w.write_record(e.report.csv_record()).map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::DomainError(format!("csv: {e}")))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn summary_json(&self) -> serde_json::Value {
        json!({
            "plan_hash": self.plan_hash,
            "n_scenarios": self.n_scenarios,
            "n_violations": self.n_violations(),
            "min_slack": self.min_slack(),
            "max_ratio": self.max_ratio(),
            "n_reports": self.reports.len(),
            "n_errors": self.failures.len(),
            "n_filtered": self.filtered.len(),
        })
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv()?).map_err(|e| Error::DomainError(format!("{}: {e}", path.display())))
    }

    pub fn write_json(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(&self.summary_json()).expect("json");
        std::fs::write(path, text + "\n").map_err(|e| Error::DomainError(format!("{}: {e}", path.display())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::plan::FunctionFamily;

    fn z_plan(theorem: TheoremId) -> SweepPlan {
        SweepPlan {
            scales: vec!["Z[0,4]".into()],
            functions: vec![
                FunctionFamily::Spec("poly:0,1".parse().unwrap()),
                FunctionFamily::Spec("poly:0,0,1".parse().unwrap()),
            ],
            lambdas: vec!["0".into(), "1/2".into(), "1".into()],
            theorems: vec![theorem],
            ..SweepPlan::default()
        }
    }

    #[test]
    fn integer_plan_has_no_violations() {
        let set = run_sweep(&z_plan(TheoremId::WeightedOstrowski)).unwrap();
        assert_eq!(set.reports.len(), 18);
        assert_eq!(set.n_violations(), 0);
        assert!(set.failures.is_empty());
        assert!(set.reports.iter().all(|e| e.report.exact_holds == Some(true)));
    }

    #[test]
    fn affine_functions_zero_gruss_lhs() {
        let mut plan = z_plan(TheoremId::OstrowskiGruss);
        plan.scales.push("R[-1,2]".into());
        plan.functions = vec![FunctionFamily::Spec("poly:3,-2".parse().unwrap())];
        let set = run_sweep(&plan).unwrap();
        assert!(!set.reports.is_empty());
        assert!(set.reports.iter().all(|e| e.report.lhs <= 1e-10), "{:?}", set.max_ratio());
    }

    #[test]
    fn hybrid_scale_holds() {
        let mut plan = z_plan(TheoremId::WeightedOstrowski);
        plan.scales = vec!["U(R[0,1];2;3)".into()];
        // t² itself has fΔ(1⁻) = 2 ≠ 3 = fΔ(1): every evaluation is refused.
        plan.functions = vec![FunctionFamily::Spec("poly:0,0,1".parse().unwrap())];
        let set = run_sweep(&plan).unwrap();
        assert_eq!(set.n_violations(), 0);
        assert!(set.reports.is_empty());
        assert!(set.failures.iter().all(|f| matches!(f.error, Error::HypothesisViolated(_))));
        // f(2) = 3 restores continuity of fΔ
        plan.functions = vec![FunctionFamily::Spec("poly:0,0,1@2=3".parse().unwrap())];
        let set = run_sweep(&plan).unwrap();
        assert!(set.reports.len() > 10);
        assert_eq!(set.n_violations(), 0);
        assert!(set.failures.is_empty());
    }

    #[test]
    fn csv_is_reproducible_and_thread_independent() {
        let plan = z_plan(TheoremId::OstrowskiGruss);
        let a = run_sweep_with_jobs(&plan, 1).unwrap();
        let b = run_sweep_with_jobs(&plan, 4).unwrap();
        assert_eq!(a.to_csv().unwrap(), b.to_csv().unwrap());
        let csv = a.to_csv().unwrap();
        assert!(csv.starts_with("theorem_id,scale,a,b,x,lambda,psi,weight,lhs,rhs,slack,holds,M,approx_flags\n"));
        assert_eq!(a.summary_json()["plan_hash"], b.summary_json()["plan_hash"]);
        assert_eq!(a.plan_hash.len(), 64);
    }

    #[test]
    fn corrupted_bound_shows_up_as_violation() {
        let mut plan = z_plan(TheoremId::WeightedOstrowski);
        plan.eval.bound_kernel_scale = Some(0.1);
        let set = run_sweep(&plan).unwrap();
        assert!(set.n_violations() > 0);
    }
}
