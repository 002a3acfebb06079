//! The classical case: t² on [0,1] with w = t and λ = 0. The second-order
//! bound reduces to M/2 {[(x − 1/2)² + 1/4]² + 1/12}.

use tsineq::harness::{evaluate_spec, Arithmetic, ScenarioSpec};
use tsineq::inequalities::{EvalOptions, TheoremId};

fn main() -> tsineq::Result<()> {
    let opts = EvalOptions::default();
    let db: TheoremId = "corDB".parse()?;
    println!("{:>5} {:>10} {:>10} {:>10} {:>7}", "x", "lhs", "rhs", "formula", "ratio");
    for i in 0..=10 {
        let spec = ScenarioSpec {
            id: i,
            scale: "R[0,1]".into(),
            a: "0".into(),
            b: "1".into(),
            x: format!("{i}/10"),
            lambda: "0".into(),
            psi: "id".parse()?,
            weight: "unit".parse()?,
            function: "poly:0,0,1".parse()?,
            arithmetic: Arithmetic::Auto,
        };
        let general = evaluate_spec(&spec, TheoremId::WeightedOstrowski, &opts)?;
        let special = evaluate_spec(&spec, db, &opts)?;
        let x = i as f64 / 10.0;
        let inner = (x - 0.5).powi(2) + 0.25;
        let formula = inner * inner + 1.0 / 12.0;
        assert!((special.rhs - general.rhs).abs() < 1e-12);
        println!("{x:>5.1} {:>10.6} {:>10.6} {formula:>10.6} {:>7.4}", general.lhs, general.rhs, general.ratio(1e-10));
    }
    Ok(())
}
