//! Grüss-type bound across scales; for affine f the lhs vanishes.

use tsineq::harness::{run_sweep, FunctionFamily, SweepPlan, XRule};
use tsineq::inequalities::TheoremId;

fn main() -> tsineq::Result<()> {
    let plan = SweepPlan {
        scales: vec!["R[0,1]".into(), "Z[0,5]".into(), "Q(3)[0,3]".into(), "U(R[0,1];2;3)".into()],
        functions: vec![FunctionFamily::Spec("poly:0,0,1@2=3".parse()?), FunctionFamily::Spec("poly:2,-1".parse()?)],
        lambdas: vec!["0".into(), "1/2".into()],
        x_rule: XRule::All,
        theorems: vec![TheoremId::OstrowskiGruss],
        ..SweepPlan::default()
    };
    let set = run_sweep(&plan)?;
    for e in set.reports.iter().step_by(7) {
        let c = &e.report.context;
        println!("{:<14} f={:<16} x={:<6.3} λ={:<4} {}", c.scale, c.function, c.x, c.lambda, e.report.summary_line());
    }
    let affine_max = set
        .reports
        .iter()
        .filter(|e| e.report.context.function == "poly:2,-1")
        .map(|e| e.report.lhs)
        .fold(0.0, f64::max);
    println!("{} reports, {} violations, largest affine lhs {affine_max:.2e}", set.reports.len(), set.n_violations());
    Ok(())
}
