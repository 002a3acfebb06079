//! Delta derivatives, delta integrals and the h_k monomials on ℝ, ℤ and a
//! quantum scale. Discrete scales run in exact rationals.

use tsineq::timescale::{delta_derivative, delta_integral, h_monomial, parse_scale, Order, TsFunction};
use tsineq::{Rational, Scalar, TimeScale};

fn main() -> tsineq::Result<()> {
    let r = Rational::from_i64;
    let square = TsFunction::polynomial(vec![r(0), r(0), r(1)]);

    let z: TimeScale<Rational> = parse_scale("Z[0,6]")?;
    println!("ℤ:  (t²)^Δ(3) = {}", delta_derivative(&z, &square, &r(3), Order::First)?);
    println!("ℤ:  (t²)^ΔΔ(3) = {}", delta_derivative(&z, &square, &r(3), Order::Second)?);
    println!("ℤ:  ∫_0^3 t Δt = {}", delta_integral(&z, &TsFunction::identity(), &r(0), &r(3))?);
    println!("ℤ:  h_2(3, 0) = {}", h_monomial(&z, 2, &r(3), &r(0))?);

    let q: TimeScale<Rational> = parse_scale("Q(2)[0,4]")?;
    println!("2^ℕ: (t²)^Δ(2) = {}", delta_derivative(&q, &square, &r(2), Order::First)?);
    println!("2^ℕ: ∫_1^4 t Δt = {}", delta_integral(&q, &TsFunction::identity(), &r(1), &r(4))?);

    let dense: TimeScale<f64> = parse_scale("R[0,1]")?;
    let sq = TsFunction::polynomial(vec![0.0, 0.0, 1.0]);
    println!("ℝ:  ∫_0^1 t² dt = {:.12}", delta_integral(&dense, &sq, &0.0, &1.0)?);
    println!("ℝ:  h_2(1, 0) = {}", h_monomial(&dense, 2, &1.0, &0.0)?);
    Ok(())
}
