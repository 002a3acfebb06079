//! Specialised bounds on integer, quantum and real windows, each compared
//! with the general theorem it comes from.

use tsineq::harness::{evaluate_spec, Arithmetic, ScenarioSpec};
use tsineq::inequalities::{CorollaryId, EvalOptions, TheoremId};

fn spec(scale: &str, a: &str, b: &str, x: &str, weight: &str) -> ScenarioSpec {
    ScenarioSpec {
        id: 0,
        scale: scale.into(),
        a: a.into(),
        b: b.into(),
        x: x.into(),
        lambda: "1/2".into(),
        psi: "id".parse().unwrap(),
        weight: weight.parse().unwrap(),
        function: "poly:1,-2,0,1".parse().unwrap(),
        arithmetic: Arithmetic::Auto,
    }
}

fn main() -> tsineq::Result<()> {
    let opts = EvalOptions::default();
    let cases = [
        (CorollaryId::QuantumWeighted, spec("Q(2)[0,4]", "1", "16", "4", "unit")),
        (CorollaryId::QuantumGruss, spec("Q(2)[0,4]", "1", "16", "4", "unit")),
        (CorollaryId::IntegerWeighted, spec("Z[0,6]", "0", "6", "2", "unit")),
        (CorollaryId::IntegerGruss, spec("Z[0,6]", "0", "6", "2", "unit")),
        (CorollaryId::RealWeighted, spec("R[-1,2]", "-1", "2", "0.3", "unit")),
        (CorollaryId::QuadraticWeightGruss, spec("Q(3)[0,3]", "1", "27", "9", "quadratic:0")),
    ];
    for (id, s) in cases {
        let rep = evaluate_spec(&s, TheoremId::Corollary(id), &opts)?;
        let cons = rep.consistency.as_ref().expect("corollaries compare with their parent");
        println!(
            "{:<24} {:<10} {}  parent {} rhs={:.6} agrees={}",
            id.to_string(),
            s.scale,
            rep.summary_line(),
            cons.against,
            cons.rhs,
            cons.agrees
        );
    }
    Ok(())
}
