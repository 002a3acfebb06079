//! Brute-force oracles on integer windows with `w = t`, `ν = 1`.
//!
//! Everything is rebuilt from plain loops over the integers: the kernel,
//! the forward differences and every sum. The evaluators under test go
//! through the generic time-scale machinery instead.

use num_traits::{Signed, Zero};
use tsineq::harness::{evaluate_spec, Arithmetic, ScenarioSpec};
use tsineq::inequalities::{montgomery_residual, second_order_remainder, EvalOptions, TheoremId};
use tsineq::kernels::{kernel_moments_h2, KernelSpec, KernelVariant, ParameterFunction, WeightPair};
use tsineq::{Rational, Scalar, TimeScale};

#[derive(Clone, Copy, Debug)]
enum Psi {
    Id,
    Square,
    Half,
}

impl Psi {
    fn eval(self, l: &Rational) -> Rational {
        match self {
            Psi::Id => l.clone(),
            Psi::Square => l.clone() * l.clone(),
            Psi::Half => q(1, 2),
        }
    }

    fn text(self) -> &'static str {
        match self {
            Psi::Id => "id",
            Psi::Square => "pow:2",
            Psi::Half => "const:1/2",
        }
    }
}

fn r(v: i64) -> Rational {
    Rational::from_i64(v)
}

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

struct Oracle {
    a: i64,
    b: i64,
    coeffs: Vec<Rational>,
    psi: Psi,
    lambda: Rational,
}

impl Oracle {
    fn f(&self, t: i64) -> Rational {
        self.coeffs.iter().rev().fold(r(0), |acc, c| acc * r(t) + c.clone())
    }

    fn d1(&self, t: i64) -> Rational {
        self.f(t + 1) - self.f(t)
    }

    fn d2(&self, t: i64) -> Rational {
        self.f(t + 2) - r(2) * self.f(t + 1) + self.f(t)
    }

    fn levels(&self) -> (Rational, Rational) {
        let half = r(self.b - self.a) / r(2);
        let left = r(self.a) + self.psi.eval(&self.lambda) * half.clone();
        let right = r(self.a) + (r(1) + self.psi.eval(&(r(1) - self.lambda.clone()))) * half;
        (left, right)
    }

    fn kernel(&self, s: i64, t: i64) -> Rational {
        let (l, rr) = self.levels();
        r(s) - if s < t { l } else { rr }
    }

    fn window(&self) -> std::ops::Range<i64> {
        self.a..self.b
    }

    fn n(&self) -> Rational {
        r(self.b - self.a)
    }

    fn phi(&self) -> Rational {
        (r(1) + self.psi.eval(&(r(1) - self.lambda.clone())) - self.psi.eval(&self.lambda)) / r(2)
    }

    fn endpoint_mix(&self) -> Rational {
        let p = self.psi.eval(&self.lambda);
        let p1 = self.psi.eval(&(r(1) - self.lambda.clone()));
        (p * self.f(self.a) + (r(1) - p1) * self.f(self.b)) / r(2)
    }

    fn mean_sigma(&self) -> Rational {
        self.window().map(|s| self.f(s + 1)).fold(r(0), |a, v| a + v)
    }

    /// Both sides of the identity: `(Φ f(x) + A_f) N` and `Σ K f^Δ + Σ f∘σ`.
    fn identity(&self, x: i64) -> (Rational, Rational) {
        let lhs = (self.phi() * self.f(x) + self.endpoint_mix()) * self.n();
        let rhs = self.window().map(|s| self.kernel(s, x) * self.d1(s)).fold(r(0), |a, v| a + v) + self.mean_sigma();
        (lhs, rhs)
    }

    /// `(1/N²) Σ_t K(t,x) Σ_s K(s,t) f^ΔΔ(s)`, and the bound `M/N² ΣΣ |K||K|`.
    fn second_order(&self, x: i64) -> (Rational, Rational) {
        let (mut signed, mut abs) = (r(0), r(0));
        for t in self.window() {
            let (mut inner, mut inner_abs) = (r(0), r(0));
            for s in self.window() {
                inner += self.kernel(s, t) * self.d2(s);
                inner_abs += self.kernel(s, t).abs();
            }
            signed += self.kernel(t, x) * inner;
            abs += self.kernel(t, x).abs() * inner_abs;
        }
        let m = self.window().map(|s| self.d2(s).abs()).fold(r(0), |a, v| if v > a { v } else { a });
        let n2 = self.n() * self.n();
        (signed / n2.clone(), m * abs / n2)
    }

    /// Grüss lhs and the product of variances.
    fn gruss(&self, x: i64) -> (Rational, Rational) {
        let len = self.n();
        let sum = |g: &dyn Fn(i64) -> Rational| self.window().map(g).fold(r(0), |a, v| a + v);
        let int_k = sum(&|s| self.kernel(s, x));
        let int_k2 = sum(&|s| self.kernel(s, x) * self.kernel(s, x));
        let int_fd = sum(&|s| self.d1(s));
        let int_fd2 = sum(&|s| self.d1(s) * self.d1(s));
        let bracket = (self.phi() * self.f(x) + self.endpoint_mix()) * self.n() / len.clone();
        let kernel_term = (self.f(self.b) - self.f(self.a)) / (len.clone() * len.clone()) * int_k.clone();
        let lhs = (bracket - self.mean_sigma() / len.clone() - kernel_term).abs();
        let var_k = int_k2 / len.clone() - (int_k.clone() / len.clone()) * (int_k / len.clone());
        let var_f = int_fd2 / len.clone() - (int_fd.clone() / len.clone()) * (int_fd / len);
        (lhs, var_k * var_f)
    }

    /// First-order lhs and bound `max |f^Δ| Σ |K(s,x)|`.
    fn first_order(&self, x: i64) -> (Rational, Rational) {
        let lhs = ((self.phi() * self.f(x) + self.endpoint_mix()) * self.n() - self.mean_sigma()).abs();
        let m = self.window().map(|s| self.d1(s).abs()).fold(r(0), |a, v| if v > a { v } else { a });
        let int_abs = self.window().map(|s| self.kernel(s, x).abs()).fold(r(0), |a, v| a + v);
        (lhs, m * int_abs)
    }

    fn spec(&self, x: i64) -> ScenarioSpec {
        ScenarioSpec {
            id: 0,
            scale: format!("Z[{},{}]", self.a, self.b),
            a: self.a.to_string(),
            b: self.b.to_string(),
            x: x.to_string(),
            lambda: self.lambda.to_string(),
            psi: self.psi.text().parse().unwrap(),
            weight: "unit".parse().unwrap(),
            function: format!("poly:{}", self.coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(","))
                .parse()
                .unwrap(),
            arithmetic: Arithmetic::Exact,
        }
    }
}

fn same(got: f64, want: &Rational) {
    let w = want.to_f64();
    assert!((got - w).abs() <= 1e-12 * (1.0 + w.abs()), "{got} vs {want}");
}

fn check(o: &Oracle, x: i64) {
    let opts = EvalOptions::default();
    let spec = o.spec(x);
    let scn = spec.build::<Rational>().unwrap();

    let (l, rr) = o.identity(x);
    assert_eq!(l, rr, "identity oracle itself");
    assert!(montgomery_residual(&scn, &opts).unwrap().is_zero());

    let (signed, bound) = o.second_order(x);
    assert_eq!(second_order_remainder(&scn, &opts).unwrap(), signed, "{}", spec.describe());
    let rep = evaluate_spec(&spec, TheoremId::WeightedOstrowski, &opts).unwrap();
    same(rep.lhs, &signed.abs());
    same(rep.rhs, &bound);
    assert_eq!(rep.exact_holds, Some(signed.abs() <= bound));
    assert!(rep.holds);

    let (lhs, var_prod) = o.gruss(x);
    let rep = evaluate_spec(&spec, TheoremId::OstrowskiGruss, &opts).unwrap();
    same(rep.lhs, &lhs);
    assert!((rep.rhs * rep.rhs - var_prod.to_f64()).abs() <= 1e-10 * (1.0 + var_prod.to_f64()));
    assert_eq!(rep.exact_holds, Some(lhs.clone() * lhs <= var_prod));

    let (lhs, bound) = o.first_order(x);
    let rep = evaluate_spec(&spec, TheoremId::FirstOrder, &opts).unwrap();
    same(rep.lhs, &lhs);
    same(rep.rhs, &bound);
    assert_eq!(rep.exact_holds, Some(lhs <= bound));
}

#[test]
fn square_on_zero_two_at_one() {
    let o = Oracle { a: 0, b: 2, coeffs: vec![r(0), r(0), r(1)], psi: Psi::Id, lambda: r(0) };
    check(&o, 1);
    // levels a and b: K(s,1) = s on s = 0 and s − 2 on s = 1
    assert_eq!(o.identity(1).0, (r(1) + o.endpoint_mix()) * r(2));
}

#[test]
fn square_on_zero_three_half_lambda() {
    let o = Oracle { a: 0, b: 3, coeffs: vec![r(0), r(0), r(1)], psi: Psi::Id, lambda: q(1, 2) };
    check(&o, 2);
}

#[test]
fn linear_first_order_lhs_is_signed_moment() {
    // f = αt + β: the identity turns the lhs into |α Σ K(s, x)|
    for lambda in [r(0), q(1, 2), r(1)] {
        let o = Oracle { a: 0, b: 2, coeffs: vec![r(5), r(-3)], psi: Psi::Id, lambda };
        let moment: Rational = o.window().map(|s| o.kernel(s, 1)).fold(r(0), |a, v| a + v);
        assert_eq!(o.first_order(1).0, (r(-3) * moment).abs());
        check(&o, 1);
    }
}

#[test]
fn exhaustive_small_windows() {
    let polys: [Vec<Rational>; 4] = [
        vec![r(1), r(-1)],
        vec![r(0), r(0), r(1)],
        vec![r(1), r(-2), r(0), r(1)],
        vec![q(1, 2), r(0), q(-3, 4), r(0), q(1, 8)],
    ];
    let mut cases = 0;
    for (a, b) in [(0, 2), (-2, 3), (1, 5)] {
        for coeffs in &polys {
            for psi in [Psi::Id, Psi::Square, Psi::Half] {
                for lambda in [r(0), q(1, 4), q(1, 2), q(3, 4), r(1)] {
                    for x in a + 1..b {
                        let o = Oracle { a, b, coeffs: coeffs.clone(), psi, lambda: lambda.clone() };
                        check(&o, x);
                        cases += 1;
                    }
                }
            }
        }
    }
    assert_eq!(cases, 4 * 3 * 5 * (1 + 4 + 3));
}

#[test]
fn kernel_moments_against_sums() {
    // Z ∩ [0,4], ψ = id, λ = 0, t = 2: sums over s ∈ {0,1,2,3}
    let o = Oracle { a: 0, b: 4, coeffs: vec![r(0)], psi: Psi::Id, lambda: r(0) };
    let abs: Rational = o.window().map(|s| o.kernel(s, 2).abs()).fold(r(0), |a, v| a + v);
    let signed: Rational = o.window().map(|s| o.kernel(s, 2)).fold(r(0), |a, v| a + v);
    assert_eq!((abs.clone(), signed.clone()), (r(4), r(-2)));
    let ts = TimeScale::<Rational>::integers(0, 4).unwrap();
    let k =
        KernelSpec::new(WeightPair::unit(), ParameterFunction::identity(), r(0), r(0), r(4), KernelVariant::General)
            .unwrap();
    assert_eq!(kernel_moments_h2(&k, &ts, &r(2)).unwrap(), (abs, signed));
}
