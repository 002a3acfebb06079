//! Delta derivatives and delta integrals on a [`TimeScale`].
//!
//! At right-scattered points the derivative is the difference quotient over
//! the jump; at right-dense points it is the classical derivative (analytic
//! when the function carries one, otherwise a finite difference kept inside
//! the dense segment). Integrals add `μ(t) f(t)` for every right-scattered
//! `t` in `[a, b)` to Gauss–Kronrod quadrature over the dense pieces.

use crate::error::{Error, Result};
use crate::quadrature::{self, QuadratureOptions};
use crate::scalar::Scalar;
use crate::timescale::function::TsFunction;
use crate::timescale::scale::{Piece, TimeScale};

/// Relative step for first-order finite differences on a dense segment.
pub const FD_STEP_FIRST: f64 = 1e-5;
/// Relative step for second-order finite differences.
pub const FD_STEP_SECOND: f64 = 1e-4;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Order {
    First,
    Second,
}

/// A derivative value plus whether finite differencing was involved.
#[derive(Clone, Debug, PartialEq)]
pub struct Derivative<S> {
    pub value: S,
    pub approximate: bool,
}

pub fn forward_jump<S: Scalar>(ts: &TimeScale<S>, t: &S) -> Result<S> {
    ts.sigma(t)
}

pub fn backward_jump<S: Scalar>(ts: &TimeScale<S>, t: &S) -> Result<S> {
    ts.rho(t)
}

pub fn graininess<S: Scalar>(ts: &TimeScale<S>, t: &S) -> Result<S> {
    ts.mu(t)
}

pub fn delta_derivative<S: Scalar>(ts: &TimeScale<S>, f: &TsFunction<S>, t: &S, order: Order) -> Result<S> {
    Ok(delta_derivative_flagged(ts, f, t, order)?.value)
}

pub fn delta_derivative_flagged<S: Scalar>(
    ts: &TimeScale<S>,
    f: &TsFunction<S>,
    t: &S,
    order: Order,
) -> Result<Derivative<S>> {
    if !ts.contains(t) {
        return Err(Error::PointNotInScale(t.to_f64()));
    }
    if !ts.in_kappa(t) {
        return Err(Error::NotDifferentiableHere { t: t.to_f64(), reason: "left-scattered maximum" });
    }
    let sigma = ts.sigma(t)?;
    if &sigma != t {
        let mu = sigma.clone() - t.clone();
        let first = (f.eval(&sigma) - f.eval(t)) / mu.clone();
        return match order {
            Order::First => Ok(Derivative { value: first, approximate: false }),
            Order::Second => {
                let next = delta_derivative_flagged(ts, f, &sigma, Order::First).map_err(|e| match e {
                    Error::NotDifferentiableHere { .. } => {
                        Error::NotDifferentiableHere { t: t.to_f64(), reason: "σ(t) is outside T^κ" }
                    }
                    other => other,
                })?;
                Ok(Derivative { value: (next.value - first) / mu, approximate: next.approximate })
            }
        };
    }
    let (lo, hi) = ts
        .dense_segment_of(t)
        .ok_or(Error::NotDifferentiableHere { t: t.to_f64(), reason: "isolated point without neighbours" })?;
    dense_derivative(f, t, &lo, &hi, order)
}

fn dense_derivative<S: Scalar>(f: &TsFunction<S>, t: &S, lo: &S, hi: &S, order: Order) -> Result<Derivative<S>> {
    let (tf, lof, hif) = (t.to_f64(), lo.to_f64(), hi.to_f64());
    let len = hif - lof;
    match order {
        Order::First => {
            if let Some(d1) = f.d1() {
                return Ok(Derivative { value: d1(t), approximate: false });
            }
            let g = |x: f64| f.eval(&S::from_f64(x)).to_f64();
            let v = fd_first(g, tf, lof, hif, FD_STEP_FIRST * len)?;
            Ok(Derivative { value: S::from_f64(v), approximate: true })
        }
        Order::Second => {
            if let Some(d2) = f.d2() {
                return Ok(Derivative { value: d2(t), approximate: false });
            }
            let v = if let Some(d1) = f.d1() {
                let g = |x: f64| d1(&S::from_f64(x)).to_f64();
                fd_first(g, tf, lof, hif, FD_STEP_FIRST * len)?
            } else {
                let g = |x: f64| f.eval(&S::from_f64(x)).to_f64();
                fd_second(g, tf, lof, hif, FD_STEP_SECOND * len)?
            };
            Ok(Derivative { value: S::from_f64(v), approximate: true })
        }
    }
}

fn fd_first(g: impl Fn(f64) -> f64, t: f64, lo: f64, hi: f64, h: f64) -> Result<f64> {
    if h <= 0.0 || !h.is_finite() {
        return Err(Error::MissingDerivative(t));
    }
    if t - h >= lo && t + h <= hi {
        Ok((g(t + h) - g(t - h)) / (2.0 * h))
    } else if t + 2.0 * h <= hi {
        Ok((-3.0 * g(t) + 4.0 * g(t + h) - g(t + 2.0 * h)) / (2.0 * h))
    } else if t - 2.0 * h >= lo {
        Ok((3.0 * g(t) - 4.0 * g(t - h) + g(t - 2.0 * h)) / (2.0 * h))
    } else {
        Err(Error::MissingDerivative(t))
    }
}

fn fd_second(g: impl Fn(f64) -> f64, t: f64, lo: f64, hi: f64, h: f64) -> Result<f64> {
    if h <= 0.0 || !h.is_finite() {
        return Err(Error::MissingDerivative(t));
    }
    let h2 = h * h;
    if t - h >= lo && t + h <= hi {
        Ok((g(t + h) - 2.0 * g(t) + g(t - h)) / h2)
    } else if t + 3.0 * h <= hi {
        Ok((2.0 * g(t) - 5.0 * g(t + h) + 4.0 * g(t + 2.0 * h) - g(t + 3.0 * h)) / h2)
    } else if t - 3.0 * h >= lo {
        Ok((2.0 * g(t) - 5.0 * g(t - h) + 4.0 * g(t - 2.0 * h) - g(t - 3.0 * h)) / h2)
    } else {
        Err(Error::MissingDerivative(t))
    }
}

/// `∫_a^b f(t) Δt`.
pub fn delta_integral<S: Scalar>(ts: &TimeScale<S>, f: &TsFunction<S>, a: &S, b: &S) -> Result<S> {
    integrate_fn(ts, a, b, &[], &QuadratureOptions::default(), |t| Ok(f.eval(t)))
}

/// `∫_a^b g(t) Δt` for a fallible integrand. `breaks` are extra split points
/// for the dense quadrature (kinks and jumps of `g`). `a > b` integrates
/// backwards with a sign flip.
pub fn integrate_fn<S, G>(ts: &TimeScale<S>, a: &S, b: &S, breaks: &[f64], opts: &QuadratureOptions, g: G) -> Result<S>
where
    S: Scalar,
    G: Fn(&S) -> Result<S>,
{
    if a > b {
        return Ok(-integrate_fn(ts, b, a, breaks, opts, g)?);
    }
    let mut acc = S::zero();
    for piece in ts.pieces(a, b)? {
        match piece {
            Piece::Jump { t, mu } => acc = acc + mu * g(&t)?,
            Piece::Dense { lo, hi } => {
                let r = quadrature::integrate(
                    |x| g(&S::from_f64(x)).map(|v| v.to_f64()),
                    lo.to_f64(),
                    hi.to_f64(),
                    breaks,
                    opts,
                )?;
                acc = acc + S::from_f64(r.value);
            }
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn square<S: Scalar>() -> TsFunction<S> {
        TsFunction::polynomial(vec![S::zero(), S::zero(), S::one()])
    }

    #[test]
    fn derivative_on_integers() {
        let ts = TimeScale::<Rational>::integers(0, 6).unwrap();
        let f = square();
        let r = Rational::from_i64;
        assert_eq!(delta_derivative(&ts, &f, &r(3), Order::First).unwrap(), r(7));
        for t in 0..5 {
            assert_eq!(delta_derivative(&ts, &f, &r(t), Order::Second).unwrap(), r(2));
        }
        assert!(matches!(delta_derivative(&ts, &f, &r(6), Order::First), Err(Error::NotDifferentiableHere { .. })));
        assert!(matches!(delta_derivative(&ts, &f, &r(5), Order::Second), Err(Error::NotDifferentiableHere { .. })));
    }

    #[test]
    fn derivative_on_quantum_scale() {
        let ts = TimeScale::<Rational>::quantum(Rational::from_i64(2), 0, 4).unwrap();
        let f = square();
        let d = delta_derivative(&ts, &f, &Rational::from_i64(2), Order::First).unwrap();
        assert_eq!(d, Rational::from_i64(6));
        let d2 = delta_derivative(&ts, &f, &Rational::from_i64(2), Order::Second).unwrap();
        assert_eq!(d2, Rational::from_i64(3));
    }

    #[test]
    fn dense_derivative_analytic_and_fallback() {
        let ts = TimeScale::<f64>::dense(0.0, 1.0).unwrap();
        let f = TsFunction::<f64>::polynomial(vec![0.0, 0.0, 0.0, 1.0]);
        let exact = delta_derivative_flagged(&ts, &f, &0.5, Order::First).unwrap();
        assert_eq!(exact, Derivative { value: 0.75, approximate: false });
        let bare = f.without_derivatives();
        for t in [0.0, 0.5, 1.0] {
            let d1 = delta_derivative_flagged(&ts, &bare, &t, Order::First).unwrap();
            assert!(d1.approximate);
            assert!((d1.value - 3.0 * t * t).abs() < 1e-8, "t={t} d1={}", d1.value);
            let d2 = delta_derivative(&ts, &bare, &t, Order::Second).unwrap();
            assert!((d2 - 6.0 * t).abs() < 1e-4, "t={t} d2={d2}");
        }
    }

    #[test]
    fn dense_end_before_gap_uses_quotient() {
        let ts = crate::timescale::parse_scale::<f64>("U(R[0,1];2;3)").unwrap();
        let f = square::<f64>();
        assert_eq!(delta_derivative(&ts, &f, &1.0, Order::First).unwrap(), 3.0);
        // (fΔ(2) − fΔ(1)) / 1 = 5 − 3
        assert_eq!(delta_derivative(&ts, &f, &1.0, Order::Second).unwrap(), 2.0);
        assert_eq!(delta_derivative(&ts, &f, &0.5, Order::First).unwrap(), 1.0);
    }

    #[test]
    fn integrals_match_examples() {
        let z = TimeScale::<Rational>::integers(0, 3).unwrap();
        let id = TsFunction::<Rational>::identity();
        let r = Rational::from_i64;
        assert_eq!(delta_integral(&z, &id, &r(0), &r(3)).unwrap(), r(3));
        assert_eq!(delta_integral(&z, &id, &r(3), &r(0)).unwrap(), r(-3));

        let q = TimeScale::<Rational>::quantum(r(2), 0, 4).unwrap();
        assert_eq!(delta_integral(&q, &id, &r(1), &r(4)).unwrap(), r(5));

        let dense = TimeScale::<f64>::dense(0.0, 1.0).unwrap();
        let v = delta_integral(&dense, &TsFunction::identity(), &0.0, &1.0).unwrap();
        assert!((v - 0.5).abs() < 1e-15);
        assert!(matches!(delta_integral(&z, &id, &r(0), &Rational::half()), Err(Error::EndpointNotInScale(_))));
    }

    #[test]
    fn hybrid_integral_adds_jumps() {
        let ts = crate::timescale::parse_scale::<f64>("U(R[0,1];2;3)").unwrap();
        let v = delta_integral(&ts, &square(), &0.0, &3.0).unwrap();
        // ∫_0^1 t^2 dt + μ(1)·1 + μ(2)·4
        assert!((v - (1.0 / 3.0 + 1.0 + 4.0)).abs() < 1e-14);
    }
}
