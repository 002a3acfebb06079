use crate::error::{Error, Result};
use crate::harness::plan::{ScenarioSpec, SweepPlan};
use crate::harness::sweep::{evaluate_spec, evaluate_specs};
use crate::inequalities::{EvalOptions, TheoremId};
use crate::scalar::Scalar;
use crate::timescale::{parse_scale, TimeScale};

/// Where the best ratio was found.
#[derive(Clone, Debug, PartialEq)]
pub struct Argmax {
    pub x: f64,
    pub lambda: f64,
    pub scenario_id: usize,
    pub scenario: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SharpnessResult {
    pub theorem: TheoremId,
    pub best_ratio: f64,
    pub argmax: Argmax,
    /// `(evaluation index, ratio)` for every successful evaluation.
    pub trace: Vec<(usize, f64)>,
}

impl SharpnessResult {
    /// True when the best ratio exceeds `1 + tol_ineq`.
    pub fn is_violation(&self, tol_ineq: f64) -> bool {
        self.best_ratio > 1.0 + tol_ineq
    }
}

const GOLDEN_STEPS: usize = 40;
const ROUNDS: usize = 2;

struct Search<'a> {
    theorem: TheoremId,
    opts: &'a EvalOptions,
    floor: f64,
    trace: Vec<(usize, f64)>,
    best: (f64, ScenarioSpec),
}

impl Search<'_> {
    fn record(&mut self, ratio: f64, spec: &ScenarioSpec) {
        self.trace.push((self.trace.len(), ratio));
        if ratio > self.best.0 {
            self.best = (ratio, spec.clone());
        }
    }

    /// Ratio at `spec`, or `None` when the evaluation is not admissible.
    fn probe(&mut self, spec: &ScenarioSpec) -> Option<f64> {
        let report = evaluate_spec(spec, self.theorem, self.opts).ok()?;
        let r = report.ratio(self.floor);
        self.record(r, spec);
        Some(r)
    }

    /// Golden-section maximisation of a coordinate over `[lo, hi]`.
    fn golden(&mut self, lo: f64, hi: f64, set: impl Fn(f64) -> ScenarioSpec) {
        let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
        let (mut l, mut r) = (lo, hi);
        let mut c = r - inv_phi * (r - l);
        let mut d = l + inv_phi * (r - l);
        let mut fc = self.probe(&set(c)).unwrap_or(f64::NEG_INFINITY);
        let mut fd = self.probe(&set(d)).unwrap_or(f64::NEG_INFINITY);
        for _ in 0..GOLDEN_STEPS {
            if r - l < 1e-12 {
                break;
            }
            if fc > fd {
                r = d;
                d = c;
                fd = fc;
                c = r - inv_phi * (r - l);
                fc = self.probe(&set(c)).unwrap_or(f64::NEG_INFINITY);
            } else {
                l = c;
                c = d;
                fc = fd;
                d = l + inv_phi * (r - l);
                fd = self.probe(&set(d)).unwrap_or(f64::NEG_INFINITY);
            }
        }
    }
}

fn lit(v: f64) -> String {
    format!("{v:?}")
}

fn num(s: &str) -> f64 {
    f64::parse_literal(s).unwrap_or(f64::NAN)
}

/// Largest gap between consecutive values, the refinement half-width.
fn spacing(mut vals: Vec<f64>) -> f64 {
    vals.sort_by(f64::total_cmp);
    vals.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max)
}

/// Maximises `lhs / max(rhs, tol_quad)` over the plan: every generated
/// scenario is evaluated, then the best one is refined by golden-section
/// search in λ (when the plan varies λ) and in `x` (when `x` sits on a dense
/// piece). Discrete `x` is covered exhaustively by the grid.
pub fn sharpness_search(plan: &SweepPlan, theorem: TheoremId) -> Result<SharpnessResult> {
    let generated = plan.generate()?;
    let opts = &plan.eval;
    let floor = opts.tolerances.tol_quad;
    let (reports, _) = evaluate_specs(&generated.scenarios, &[theorem], opts);
    if reports.iter().all(|e| e.report.rhs <= floor) {
        return Err(Error::AllDegenerate);
    }
    let mut search = Search {
        theorem,
        opts,
        floor,
        trace: Vec::with_capacity(reports.len()),
        best: (f64::NEG_INFINITY, generated.scenarios[reports[0].scenario_id].clone()),
    };
    for e in &reports {
        search.record(e.report.ratio(floor), &generated.scenarios[e.scenario_id]);
    }

    let lambdas: Vec<f64> = plan.lambdas.iter().map(|s| num(s)).collect();
    let refine_lambda = lambdas.len() > 1;
    let lambda_width = spacing(lambdas).max(1e-3);
    for _ in 0..ROUNDS {
        let best = search.best.1.clone();
        let ts: TimeScale<f64> = parse_scale(&best.scale)?;
        let (a, b, x) = (num(&best.a), num(&best.b), num(&best.x));
        if let Some((lo, hi)) = ts.dense_segment_of(&x) {
            let (lo, hi) = (lo.max(a), hi.min(b));
            let width = (hi - lo) / 8.0;
            let (l, r) = ((x - width).max(lo), (x + width).min(hi));
            if r > l {
                search.golden(l, r, |v| ScenarioSpec { x: lit(v.clamp(lo, hi)), ..best.clone() });
            }
        }
        if refine_lambda {
            let best = search.best.1.clone();
            let lam = num(&best.lambda);
            let (l, r) = ((lam - lambda_width).max(0.0), (lam + lambda_width).min(1.0));
            if r > l {
                search.golden(l, r, |v| ScenarioSpec { lambda: lit(v.clamp(0.0, 1.0)), ..best.clone() });
            }
        }
    }

    let (best_ratio, spec) = search.best;
    Ok(SharpnessResult {
        theorem,
        best_ratio,
        argmax: Argmax { x: num(&spec.x), lambda: num(&spec.lambda), scenario_id: spec.id, scenario: spec.describe() },
        trace: search.trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::plan::{FunctionFamily, XRule};

    fn desk_plan() -> SweepPlan {
        SweepPlan {
            scales: vec!["R[0,1]".into()],
            functions: vec![FunctionFamily::Spec("poly:0,0,1".parse().unwrap())],
            x_rule: XRule::Grid(10),
            ..SweepPlan::default()
        }
    }

    #[test]
    fn desk_plan_reaches_four_sevenths() {
        let res = sharpness_search(&desk_plan(), TheoremId::WeightedOstrowski).unwrap();
        assert!(res.best_ratio >= 4.0 / 7.0 - 1e-6, "{}", res.best_ratio);
        assert!(!res.is_violation(1e-8));
        let max = res.trace.iter().map(|t| t.1).fold(f64::NEG_INFINITY, f64::max);
        assert_eq!(max, res.best_ratio);
    }

    #[test]
    fn affine_gruss_is_degenerate() {
        let mut plan = desk_plan();
        plan.functions = vec![FunctionFamily::Spec("poly:1,2".parse().unwrap())];
        assert_eq!(sharpness_search(&plan, TheoremId::OstrowskiGruss), Err(Error::AllDegenerate));
    }

    #[test]
    fn lambda_refinement_stays_in_range() {
        let mut plan = desk_plan();
        plan.scales = vec!["Z[0,5]".into()];
        plan.lambdas = vec!["0".into(), "1/2".into(), "1".into()];
        let res = sharpness_search(&plan, TheoremId::WeightedOstrowski).unwrap();
        assert!((0.0..=1.0).contains(&res.argmax.lambda));
        assert!(res.best_ratio <= 1.0 + 1e-8);
    }
}
