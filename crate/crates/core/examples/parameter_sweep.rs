//! A seeded sweep with random scenarios, written to CSV and JSON in a
//! temporary directory.

use tsineq::harness::{default_psis, lambda_grid, run_sweep_with_jobs, FunctionFamily, SweepPlan};
use tsineq::inequalities::TheoremId;

fn main() -> tsineq::Result<()> {
    let plan = SweepPlan {
        scales: vec!["Z[-2,3]".into(), "R[0,2]".into()],
        functions: vec![FunctionFamily::Polynomials { degree: 3, count: 2 }, FunctionFamily::Trig { count: 1 }],
        psis: default_psis(),
        lambdas: lambda_grid(),
        theorems: vec![TheoremId::WeightedOstrowski, TheoremId::FirstOrder],
        seed: 42,
        random_scenarios: 50,
        ..SweepPlan::default()
    };
    let set = run_sweep_with_jobs(&plan, 4)?;
    println!("{}", serde_json::to_string_pretty(&set.summary_json()).expect("json"));
    for f in set.filtered.iter().take(3) {
        println!("filtered: {} ({})", f.what, f.reason);
    }
    let dir = std::env::temp_dir().join("tsineq-sweep");
    std::fs::create_dir_all(&dir).map_err(|e| tsineq::Error::DomainError(e.to_string()))?;
    set.write_csv(&dir.join("reports.csv"))?;
    set.write_json(&dir.join("summary.json"))?;
    println!("wrote {}", dir.display());
    Ok(())
}
