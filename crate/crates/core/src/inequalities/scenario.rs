use std::sync::Arc;

use crate::error::{Error, Result};
use crate::inequalities::report::{ScenarioContext, Tolerances};
use crate::inequalities::sup::SupDomain;
use crate::kernels::KernelSpec;
use crate::scalar::Scalar;
use crate::timescale::{delta_derivative, delta_derivative_flagged, Order, Piece, Segment, TimeScale, TsFunction};

/// One evaluation point: a window `[a, b]` of a time scale, a function, a
/// kernel (which carries ν, w, ψ and λ) and the point `x`.
///
/// When `b` is a left-scattered maximum of the scale, the scale is extended
/// by one natural step so that `f^Δ(b)` exists.
#[derive(Clone, Debug)]
pub struct Scenario<S: Scalar> {
    ts: Arc<TimeScale<S>>,
    f: TsFunction<S>,
    kernel: KernelSpec<S>,
    x: S,
    scale_label: String,
}

impl<S: Scalar> Scenario<S> {
    pub fn new(ts: &TimeScale<S>, f: TsFunction<S>, kernel: KernelSpec<S>, x: S) -> Result<Self> {
        let (a, b) = (kernel.a().clone(), kernel.b().clone());
        for p in [&a, &b] {
            if !ts.contains(p) {
                return Err(Error::EndpointNotInScale(p.to_f64()));
            }
        }
        if !ts.contains(&x) {
            return Err(Error::PointNotInScale(x.to_f64()));
        }
        if x < a || x > b {
            return Err(Error::DomainError(format!(
                "x = {} lies outside [{}, {}]",
                x.to_f64(),
                a.to_f64(),
                b.to_f64()
            )));
        }
        let scale_label = ts.descriptor().map(str::to_string).unwrap_or_else(|| format!("{ts:?}"));
        let ts = if &b == ts.max() && ts.max_is_left_scattered() { ts.extended_right() } else { ts.clone() };
        kernel.weight().validate(&ts, &a, &b)?;
        kernel.check_scale(&ts)?;
        Ok(Scenario { ts: Arc::new(ts), f, kernel, x, scale_label })
    }

    /// The working scale (possibly extended past `b`).
    pub fn ts(&self) -> &TimeScale<S> {
        &self.ts
    }

    pub fn f(&self) -> &TsFunction<S> {
        &self.f
    }

    pub fn kernel(&self) -> &KernelSpec<S> {
        &self.kernel
    }

    pub fn a(&self) -> &S {
        self.kernel.a()
    }

    pub fn b(&self) -> &S {
        self.kernel.b()
    }

    pub fn x(&self) -> &S {
        &self.x
    }

    pub fn lambda(&self) -> &S {
        self.kernel.lambda()
    }

    pub fn scale_label(&self) -> &str {
        &self.scale_label
    }

    /// Same scenario at another point `x`.
    pub fn at_x(&self, x: S) -> Result<Self> {
        if !self.ts.contains(&x) {
            return Err(Error::PointNotInScale(x.to_f64()));
        }
        if &x < self.a() || &x > self.b() {
            return Err(Error::DomainError(format!("x = {} lies outside the window", x.to_f64())));
        }
        Ok(Scenario { x, ..self.clone() })
    }

    /// Same scenario with `f` replaced.
    pub fn with_f(&self, f: TsFunction<S>) -> Self {
        Scenario { f, ..self.clone() }
    }

    pub fn context(&self) -> ScenarioContext {
        ScenarioContext {
            scale: self.scale_label.clone(),
            a: self.a().to_f64(),
            b: self.b().to_f64(),
            x: self.x.to_f64(),
            lambda: self.lambda().to_f64(),
            psi: self.kernel.psi().label(),
            weight: self.kernel.weight().label().to_string(),
            function: self.f.label().to_string(),
        }
    }

    /// True when `[a, b)` has no dense piece.
    pub fn is_scattered(&self) -> bool {
        self.ts.is_scattered_on(self.a(), self.b()).unwrap_or(false)
    }

    /// Whether dense parts of the window force finite differences.
    pub fn uses_finite_differences(&self, order: Order) -> bool {
        let analytic = match order {
            Order::First => self.f.d1().is_some(),
            Order::Second => self.f.d1().is_some() && self.f.d2().is_some(),
        };
        !analytic && !self.is_scattered()
    }

    pub fn fd(&self, t: &S) -> Result<S> {
        delta_derivative(&self.ts, &self.f, t, Order::First)
    }

    pub fn fdd(&self, t: &S) -> Result<S> {
        delta_derivative(&self.ts, &self.f, t, Order::Second)
    }

    /// `f(σ(t))`.
    pub fn f_sigma(&self, t: &S) -> Result<S> {
        Ok(self.f.eval(&self.ts.sigma(t)?))
    }

    /// `f^Δ(σ(t))`.
    pub fn fd_sigma(&self, t: &S) -> Result<S> {
        self.fd(&self.ts.sigma(t)?)
    }

    /// Second-order results need `f^Δ` to be Δ-differentiable, hence
    /// continuous. The only place that can fail is a left-dense,
    /// right-scattered point inside the window, where the classical slope
    /// from the left must equal the forward quotient.
    pub fn check_second_order_smooth(&self) -> Result<()> {
        let (a, b) = (self.a(), self.b());
        for seg in self.ts.segments() {
            let Segment::Dense { lo, hi } = seg else { continue };
            if hi <= a || hi >= b || self.ts.sigma(hi)? == *hi {
                continue;
            }
            let quotient = self.fd(hi)?;
            let (left, tol) = match self.f.d1() {
                Some(d1) => (d1(hi), 1e-8),
                None => {
                    let (t, h) = (hi.to_f64(), 1e-5 * (hi.to_f64() - lo.to_f64()));
                    let g = |u: f64| self.f.eval(&S::from_f64(u)).to_f64();
                    (S::from_f64((3.0 * g(t) - 4.0 * g(t - h) + g(t - 2.0 * h)) / (2.0 * h)), 1e-4)
                }
            };
            let jump = (left.clone() - quotient.clone()).abs();
            let bad = if S::EXACT && self.f.d1().is_some() {
                !jump.is_zero()
            } else {
                jump.to_f64() > tol * (1.0 + left.to_f64().abs() + quotient.to_f64().abs())
            };
            if bad {
                return Err(Error::HypothesisViolated(format!(
                    "f^Δ jumps at the left-dense point {}: slope {} from the left, quotient {}",
                    hi.to_f64(),
                    left.to_f64(),
                    quotient.to_f64()
                )));
            }
        }
        Ok(())
    }

    /// Probes `f^{Δ...}` of the given order at every scattered point of
    /// `[a, b]` and on a coarse grid of each dense piece.
    pub fn check_differentiable(&self, order: Order) -> Result<()> {
        let probe = |t: &S| delta_derivative_flagged(&self.ts, &self.f, t, order).map(|_| ());
        for piece in self.ts.pieces(self.a(), self.b())? {
            match piece {
                Piece::Jump { t, .. } => probe(&t)?,
                Piece::Dense { lo, hi } => {
                    let (l, h) = (lo.to_f64(), hi.to_f64());
                    for i in 0..=8 {
                        probe(&S::from_f64(l + (h - l) * i as f64 / 8.0))?;
                    }
                }
            }
        }
        delta_derivative_flagged(&self.ts, &self.f, self.b(), Order::First).map(|_| ())
    }
}

/// Evaluation settings shared by all evaluators.
#[derive(Clone, Debug, PartialEq)]
pub struct EvalOptions {
    pub tolerances: Tolerances,
    /// Domain of the supremum in the bound constant.
    pub sup_domain: SupDomain,
    /// Samples per dense piece for the supremum.
    pub n_grid: usize,
    /// User-supplied bound constant; replaces the estimate when set.
    pub m_override: Option<f64>,
    /// Test hook: multiplies the kernel inside the bound by this factor.
    pub bound_kernel_scale: Option<f64>,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions {
            tolerances: Tolerances::default(),
            sup_domain: SupDomain::HalfOpen,
            n_grid: 2048,
            m_override: None,
            bound_kernel_scale: None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::{KernelVariant, ParameterFunction, WeightPair};
    use crate::scalar::Rational;

    #[test]
    fn extends_past_scattered_maximum() {
        let ts = TimeScale::<Rational>::integers(0, 2).unwrap();
        let r = Rational::from_i64;
        let k = KernelSpec::new(
            WeightPair::unit(),
            ParameterFunction::identity(),
            r(0),
            r(0),
            r(2),
            KernelVariant::General,
        )
        .unwrap();
        let f = TsFunction::polynomial(vec![r(0), r(0), r(1)]);
        let scn = Scenario::new(&ts, f, k, r(1)).unwrap();
        assert_eq!(scn.fd(&r(2)).unwrap(), r(5));
        assert_eq!(scn.fdd(&r(1)).unwrap(), r(2));
        assert_eq!(scn.scale_label(), "Z[0,2]");
        scn.check_differentiable(Order::Second).unwrap();
        assert!(scn.at_x(r(3)).is_err());
    }

    #[test]
    fn slope_must_match_across_a_gap() {
        let ts = crate::timescale::parse_scale::<Rational>("U(R[0,1];2;3)").unwrap();
        let r = Rational::from_i64;
        let k = KernelSpec::new(
            WeightPair::unit(),
            ParameterFunction::identity(),
            r(0),
            r(0),
            r(3),
            KernelVariant::General,
        )
        .unwrap();
        // fΔ(1⁻) = 2 but (f(2) − f(1)) / 1 = 3
        let sq = TsFunction::polynomial(vec![r(0), r(0), r(1)]);
        let scn = Scenario::new(&ts, sq, k.clone(), r(2)).unwrap();
        assert!(matches!(scn.check_second_order_smooth(), Err(Error::HypothesisViolated(_))));
        let patched: crate::timescale::FunctionSpec = "poly:0,0,1@2=3".parse().unwrap();
        let scn = Scenario::new(&ts, patched.build(&ts).unwrap(), k, r(2)).unwrap();
        scn.check_second_order_smooth().unwrap();
    }

    #[test]
    fn rejects_points_off_scale() {
        let ts = TimeScale::<f64>::integers(0, 3).unwrap();
        let k =
            KernelSpec::new(WeightPair::unit(), ParameterFunction::identity(), 0.0, 0.0, 3.0, KernelVariant::General)
                .unwrap();
        let f = TsFunction::identity();
        assert!(matches!(Scenario::new(&ts, f.clone(), k.clone(), 1.5), Err(Error::PointNotInScale(_))));
        let k2 =
            KernelSpec::new(WeightPair::unit(), ParameterFunction::identity(), 0.0, 0.0, 4.0, KernelVariant::General)
                .unwrap();
        assert!(matches!(Scenario::new(&ts, f, k2, 1.0), Err(Error::EndpointNotInScale(_))));
    }
}
