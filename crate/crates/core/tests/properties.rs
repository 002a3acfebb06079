use num_traits::Zero;
use proptest::prelude::*;
use tsineq::harness::{evaluate_spec, plan_hash, Arithmetic, FunctionFamily, ScenarioSpec, SweepPlan};
use tsineq::inequalities::{montgomery_residual, EvalOptions, TheoremId};
use tsineq::kernels::{phi, KernelSpec, KernelVariant, ParameterFunction, WeightPair};
use tsineq::scalar::{format_sig12, round_sig12};
use tsineq::timescale::{backward_jump, delta_derivative, delta_integral, forward_jump, graininess, Order, TsFunction};
use tsineq::{Rational, Scalar, TimeScale};

fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// Sorted distinct rationals with denominator up to 4, at least two of them.
fn point_set() -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::btree_set((-40i64..40, 1i64..=4), 2..12)
        .prop_map(|set| {
            let mut v: Vec<Rational> = set.into_iter().map(|(n, d)| rat(n, d)).collect();
            v.sort();
            v.dedup();
            v
        })
        .prop_filter("two points", |v| v.len() >= 2)
}

fn coeffs() -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec((-8i64..=8, 1i64..=4), 1..=5).prop_map(|v| v.into_iter().map(|(n, d)| rat(n, d)).collect())
}

fn discrete_scale() -> impl Strategy<Value = TimeScale<Rational>> {
    prop_oneof![
        point_set().prop_map(|p| TimeScale::points(p).unwrap()),
        (-5i64..3, 2i64..8).prop_map(|(lo, len)| TimeScale::integers(lo, lo + len).unwrap()),
        (2i64..=3, -2i64..1, 2i64..5)
            .prop_map(|(q, m, len)| TimeScale::quantum(Rational::from_i64(q), m, m + len).unwrap()),
    ]
}

fn pts(ts: &TimeScale<Rational>) -> Vec<Rational> {
    ts.scattered_points(ts.min(), ts.max()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn jump_operators_are_ordered(ts in discrete_scale()) {
        for t in pts(&ts) {
            let s = forward_jump(&ts, &t).unwrap();
            let r = backward_jump(&ts, &t).unwrap();
            prop_assert!(r <= t && t <= s);
            prop_assert_eq!(graininess(&ts, &t).unwrap(), s.clone() - t.clone());
            if &t < ts.max() {
                prop_assert_eq!(backward_jump(&ts, &s).unwrap(), t.clone());
            }
        }
    }

    #[test]
    fn integral_of_derivative_is_increment(ts in discrete_scale(), c in coeffs()) {
        let f = TsFunction::polynomial(c);
        let p = pts(&ts);
        let (a, b) = (p[0].clone(), p[p.len() - 1].clone());
        let mut acc = Rational::zero();
        for t in &p[..p.len() - 1] {
            acc += graininess(&ts, t).unwrap() * delta_derivative(&ts, &f, t, Order::First).unwrap();
        }
        prop_assert_eq!(acc, f.eval(&b) - f.eval(&a));
    }

    #[test]
    fn product_rule(ts in discrete_scale(), c1 in coeffs(), c2 in coeffs()) {
        let (f, g) = (TsFunction::polynomial(c1.clone()), TsFunction::polynomial(c2.clone()));
        let p = pts(&ts);
        for t in &p[..p.len() - 1] {
            let s = forward_jump(&ts, t).unwrap();
            let fg = TsFunction::new("fg", {
                let (f, g) = (TsFunction::polynomial(c1.clone()), TsFunction::polynomial(c2.clone()));
                move |x: &Rational| f.eval(x) * g.eval(x)
            });
            let lhs = delta_derivative(&ts, &fg, t, Order::First).unwrap();
            let rhs = delta_derivative(&ts, &f, t, Order::First).unwrap() * g.eval(&s)
                + f.eval(t) * delta_derivative(&ts, &g, t, Order::First).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn integral_is_additive(ts in discrete_scale(), c in coeffs(), i in 0usize..100, j in 0usize..100, k in 0usize..100) {
        let f = TsFunction::polynomial(c);
        let p = pts(&ts);
        let mut idx = [i % p.len(), j % p.len(), k % p.len()];
        idx.sort();
        let [a, b, c] = idx.map(|i| p[i].clone());
        let whole = delta_integral(&ts, &f, &a, &c).unwrap();
        let split = delta_integral(&ts, &f, &a, &b).unwrap() + delta_integral(&ts, &f, &b, &c).unwrap();
        prop_assert_eq!(whole, split);
        // reversed limits flip the sign
        prop_assert_eq!(delta_integral(&ts, &f, &c, &a).unwrap(), -delta_integral(&ts, &f, &a, &c).unwrap());
    }

    #[test]
    fn identity_residual_is_exactly_zero(ts in discrete_scale(), c in coeffs(), i in 0usize..100, li in 0i64..=4) {
        let p = pts(&ts);
        let (a, b) = (p[0].clone(), p[p.len() - 1].clone());
        let x = p[i % p.len()].clone();
        let lambda = rat(li, 4);
        for psi in [ParameterFunction::identity(), ParameterFunction::power(2.0).unwrap(), ParameterFunction::constant(0.5).unwrap()] {
            let k = KernelSpec::new(WeightPair::unit(), psi, lambda.clone(), a.clone(), b.clone(), KernelVariant::General).unwrap();
            let scn = tsineq::inequalities::Scenario::new(&ts, TsFunction::polynomial(c.clone()), k, x.clone()).unwrap();
            prop_assert!(montgomery_residual(&scn, &EvalOptions::default()).unwrap().is_zero());
        }
    }

    #[test]
    fn branch_jump_is_minus_phi_times_weight_increment(li in 0i64..=20, lo in -5i64..5, len in 1i64..6) {
        let lambda = rat(li, 20);
        let (a, b) = (Rational::from_i64(lo), Rational::from_i64(lo + len));
        for psi in [ParameterFunction::identity(), ParameterFunction::power(2.0).unwrap(), ParameterFunction::constant(0.5).unwrap()] {
            let k = KernelSpec::new(WeightPair::unit(), psi.clone(), lambda.clone(), a.clone(), b.clone(), KernelVariant::General).unwrap();
            let ph = phi(&psi, &lambda).unwrap();
            prop_assert_eq!(k.branch_jump(), -ph * (b.clone() - a.clone()));
        }
    }

    #[test]
    fn bounds_hold_exactly_on_integer_windows(
        lo in -3i64..3, len in 2i64..6, xi in 0i64..10, li in 0i64..=10, c in coeffs(), psi in 0usize..3,
    ) {
        let x = lo + 1 + xi % (len - 1);
        let spec = ScenarioSpec {
            id: 0,
            scale: format!("Z[{lo},{}]", lo + len),
            a: lo.to_string(),
            b: (lo + len).to_string(),
            x: x.to_string(),
            lambda: format!("{li}/10"),
            psi: ["id", "pow:2", "const:1/2"][psi].parse().unwrap(),
            weight: "unit".parse().unwrap(),
            function: format!("poly:{}", c.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")).parse().unwrap(),
            arithmetic: Arithmetic::Exact,
        };
        for th in [TheoremId::WeightedOstrowski, TheoremId::OstrowskiGruss, TheoremId::FirstOrder] {
            let rep = evaluate_spec(&spec, th, &EvalOptions::default()).unwrap();
            prop_assert_eq!(rep.exact_holds, Some(true), "{} {}", th, spec.describe());
            prop_assert!(rep.slack >= -1e-12);
        }
    }

    #[test]
    fn sig12_output_round_trips(m in -1.0e6f64..1.0e6, e in -20i32..20) {
        let x = m * 10f64.powi(e);
        let text = format_sig12(x);
        let back: f64 = text.parse().unwrap();
        prop_assert_eq!(back, round_sig12(x));
        prop_assert!((back - x).abs() <= 1e-11 * x.abs());
    }

    #[test]
    fn plan_hash_tracks_seed(seed in any::<u64>()) {
        let plan = SweepPlan {
            scales: vec!["Z[0,3]".into()],
            functions: vec![FunctionFamily::Polynomials { degree: 2, count: 2 }],
            seed,
            ..SweepPlan::default()
        };
        let again = plan.clone();
        prop_assert_eq!(plan.generate().unwrap().scenarios, again.generate().unwrap().scenarios);
        let other = SweepPlan { seed: seed.wrapping_add(1), ..plan.clone() };
        prop_assert_ne!(plan_hash(&plan), plan_hash(&other));
    }
}
