//! How close does each bound come to equality? Searches the shipped plans
//! for the largest lhs/rhs.

use tsineq::harness::{default_plans, sharpness_search};
use tsineq::Error;

fn main() -> tsineq::Result<()> {
    for (name, plan) in default_plans().into_iter().take(3) {
        for &th in &plan.theorems {
            match sharpness_search(&plan, th) {
                Ok(res) => println!(
                    "{name:<8} {th:<20} best {:.6} at x={:.4} λ={:.3} after {} evaluations",
                    res.best_ratio,
                    res.argmax.x,
                    res.argmax.lambda,
                    res.trace.len()
                ),
                Err(Error::AllDegenerate) => println!("{name:<8} {th:<20} degenerate"),
                Err(e) => return Err(e),
            }
        }
    }
    Ok(())
}
