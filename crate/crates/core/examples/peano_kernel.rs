//! The two-branch kernel and its moments through h_2, checked against
//! direct integration.

use tsineq::kernels::{kernel_moments_h2, peano_kernel, KernelSpec, KernelVariant, ParameterFunction, WeightPair};
use tsineq::quadrature::QuadratureOptions;
use tsineq::timescale::{integrate_fn, parse_scale};
use tsineq::TimeScale;

fn main() -> tsineq::Result<()> {
    let ts: TimeScale<f64> = parse_scale("R[0,1]")?;
    for lambda in [0.0, 0.25, 0.5] {
        let k = KernelSpec::new(
            WeightPair::unit(),
            ParameterFunction::identity(),
            lambda,
            0.0,
            1.0,
            KernelVariant::General,
        )?;
        let (p1, p2) = k.levels();
        println!("λ={lambda}: levels {p1} and {p2}, Φ={}", k.phi());
        let t = 0.5;
        let row: Vec<String> =
            (0..=4).map(|i| format!("{:+.3}", peano_kernel(&k, &ts, &(i as f64 / 4.0), &t).unwrap())).collect();
        println!("  K(s, 1/2) for s = 0, 1/4, ..., 1: {}", row.join(" "));
        let (abs, signed) = kernel_moments_h2(&k, &ts, &t)?;
        let direct =
            integrate_fn(&ts, &0.0, &1.0, &[t, *p1, *p2], &QuadratureOptions::default(), |s| Ok(k.eval(s, &t).abs()))?;
        println!("  ∫|K| = {abs:.6} (direct {direct:.6}), ∫K = {signed:.6}");
    }
    Ok(())
}
