//! Built-in oracle table. Every expected value is a closed form worked out
//! by hand, independent of the evaluators it checks.

use std::io::Write;

use crate::harness::{
    evaluate_spec, reference_integral, run_sweep, Arithmetic, FunctionFamily, ScenarioSpec, SweepPlan,
};
use crate::inequalities::{EvalOptions, TheoremId};
use crate::kernels::{ParameterFunction, WeightSpec};
use crate::scalar::{Rational, Scalar};
use crate::timescale::{delta_integral, h_monomial, parse_scale, TimeScale, TsFunction};
use crate::Result;

fn spec(scale: &str, x: &str, lambda: &str, f: &str) -> ScenarioSpec {
    let ts: TimeScale<Rational> = parse_scale(scale).expect("selftest scale");
    ScenarioSpec {
        id: 0,
        scale: scale.into(),
        a: ts.min().to_string(),
        b: ts.max().to_string(),
        x: x.into(),
        lambda: lambda.into(),
        psi: ParameterFunction::identity(),
        weight: WeightSpec::Unit,
        function: f.parse().expect("selftest function"),
        arithmetic: Arithmetic::Auto,
    }
}

fn r(v: i64) -> Rational {
    Rational::from_i64(v)
}

fn close(got: f64, want: f64, tol: f64) -> bool {
    (got - want).abs() <= tol * (1.0 + want.abs())
}

/// `(lhs, rhs)` of `theorem` on one scenario.
fn sides(s: &ScenarioSpec, theorem: TheoremId) -> Result<(f64, f64)> {
    let r = evaluate_spec(s, theorem, &EvalOptions::default())?;
    Ok((r.lhs, r.rhs))
}

fn desk(theorem: TheoremId, lhs: f64, rhs: f64) -> Result<(bool, String)> {
    let (l, r) = sides(&spec("R[0,1]", "1/2", "0", "poly:0,0,1"), theorem)?;
    Ok((close(l, lhs, 1e-8) && close(r, rhs, 1e-8), format!("lhs={l:.6} rhs={r:.6}")))
}

type Check = (&'static str, fn() -> Result<(bool, String)>);

const CHECKS: [Check; 8] = [
    ("second-order bound, t² on [0,1] at 1/2: 1/12 vs 7/48", || {
        desk(TheoremId::WeightedOstrowski, 1.0 / 12.0, 7.0 / 48.0)
    }),
    ("Grüss bound, t² on [0,1] at 1/2: 1/12 vs 1/6", || desk(TheoremId::OstrowskiGruss, 1.0 / 12.0, 1.0 / 6.0)),
    ("first-order bound, t² on [0,1] at 1/2: 1/12 vs 1/2", || desk(TheoremId::FirstOrder, 1.0 / 12.0, 0.5)),
    ("t² on Z[0,4], three λ: second-order bound holds exactly", || {
        let plan = SweepPlan {
            scales: vec!["Z[0,4]".into()],
            functions: vec![FunctionFamily::Spec("poly:0,0,1".parse()?)],
            lambdas: vec!["0".into(), "1/2".into(), "1".into()],
            ..SweepPlan::default()
        };
        let set = run_sweep(&plan)?;
        let exact = set.reports.iter().all(|e| e.report.exact_holds == Some(true));
        Ok((set.n_violations() == 0 && exact && set.failures.is_empty(), format!("{} reports", set.reports.len())))
    }),
    ("h₂(8, 1) on Q(2) = (8 − 1)(8 − 2)/(1 + 2)", || {
        let ts: TimeScale<Rational> = parse_scale("Q(2)[0,3]")?;
        let v = h_monomial(&ts, 2, &r(8), &r(1))?;
        Ok((v == r(14), format!("{v}")))
    }),
    ("∫ t Δt over {1,2,4,8} = 1 + 4 + 16", || {
        let ts: TimeScale<Rational> = parse_scale("Q(2)[0,3]")?;
        let v = delta_integral(&ts, &TsFunction::identity(), &r(1), &r(8))?;
        Ok((v == r(21), format!("{v}")))
    }),
    ("∫ t² Δt over R[0,1] ∪ {2,3} = 1/3 + 1 + 4", || {
        let ts: TimeScale<f64> = parse_scale("U(R[0,1];2;3)")?;
        let f = TsFunction::polynomial(vec![0.0, 0.0, 1.0]);
        let v = delta_integral(&ts, &f, &0.0, &3.0)?;
        let r = reference_integral(&ts, &f, &0.0, &3.0, 12)?;
        Ok((close(v, 16.0 / 3.0, 1e-10) && close(r, v, 1e-6), format!("{v} (reference {r})")))
    }),
    ("Dragomir–Barnett closed form on [0,1], t², x = 0.3", || {
        let x = 0.3f64;
        let m = 2.0;
        let inner = (x - 0.5).powi(2) + 0.25;
        let want = m / 2.0 * (inner * inner + 1.0 / 12.0);
        let (_, r) = sides(&spec("R[0,1]", "0.3", "0", "poly:0,0,1"), "corDB".parse()?)?;
        Ok((close(r, want, 1e-8), format!("rhs={r} want={want}")))
    }),
];

/// Prints one `PASS`/`FAIL` line per oracle and returns the exit code: 0
/// when all pass, 1 otherwise.
pub fn run_selftest(out: &mut dyn Write) -> i32 {
    let mut failed = 0;
    for (name, check) in CHECKS {
        let (ok, detail) = check().unwrap_or_else(|e| (false, format!("error: {e}")));
        if !ok {
            failed += 1;
        }
        let _ = writeln!(out, "{} {name} ({detail})", if ok { "PASS" } else { "FAIL" });
    }
    let _ = writeln!(out, "{}/{} oracles passed", CHECKS.len() - failed, CHECKS.len());
    i32::from(failed > 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn selftest_passes() {
        let mut buf = Vec::new();
        let code = run_selftest(&mut buf);
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(code, 0, "{text}");
        assert_eq!(text.lines().filter(|l| l.starts_with("PASS")).count(), CHECKS.len());
    }
}
