//! Forward and backward jumps and the graininess on a mixed scale.

use tsineq::timescale::{backward_jump, forward_jump, graininess, parse_scale};
use tsineq::TimeScale;

fn main() -> tsineq::Result<()> {
    let text = "U(R[0,1];3/2;2;Q(2)[2,3])";
    let ts: TimeScale<f64> = parse_scale(text)?;
    println!("scale {text}: {} segments", ts.segments().len());
    for t in [0.0, 0.5, 1.0, 1.5, 2.0, 4.0, 8.0] {
        println!(
            "t={t:<4} σ={:<4} ρ={:<4} μ={}",
            forward_jump(&ts, &t)?,
            backward_jump(&ts, &t)?,
            graininess(&ts, &t)?
        );
    }
    Ok(())
}
