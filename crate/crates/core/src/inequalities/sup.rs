//! Estimates of `sup |f^Δ|` and `sup |f^ΔΔ|` over a window.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::inequalities::scenario::Scenario;
use crate::scalar::Scalar;
use crate::timescale::{Order, Piece};

/// Which points of the window the supremum ranges over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SupDomain {
    /// `[a, b)`, the support of the Δ-measure on the window.
    HalfOpen,
    /// `(a, b)`.
    Open,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SupMethod {
    /// Exact maximum over finitely many scattered points.
    Analytic,
    /// Grid maximum over dense pieces, refined locally.
    Grid,
    /// Supplied by the caller.
    Override,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SupBound<S> {
    pub value: S,
    pub attained_at: Option<S>,
    pub method: SupMethod,
}

/// Growth factor under grid refinement that signals an unbounded derivative.
pub const UNBOUNDED_RATIO: f64 = 10.0;

const LOCAL_SAMPLES: usize = 256;

/// `sup |f^{Δ…}|` of the given order over the window of `scn`.
pub fn estimate_sup<S: Scalar>(
    scn: &Scenario<S>,
    order: Order,
    domain: SupDomain,
    n_grid: usize,
) -> Result<SupBound<S>> {
    let deriv = |t: &S| match order {
        Order::First => scn.fd(t),
        Order::Second => scn.fdd(t),
    };
    let a = scn.a();
    let mut best: Option<(S, S)> = None;
    let mut method = SupMethod::Analytic;
    let mut consider = |t: S, v: S| {
        let v = v.abs();
        if best.as_ref().is_none_or(|(_, b)| v > *b) {
            best = Some((t, v));
        }
    };
    for piece in scn.ts().pieces(a, scn.b())? {
        match piece {
            Piece::Jump { t, .. } => {
                if domain == SupDomain::Open && &t == a {
                    continue;
                }
                let v = deriv(&t)?;
                consider(t, v);
            }
            Piece::Dense { lo, hi } => {
                method = SupMethod::Grid;
                let skip_lo = domain == SupDomain::Open && &lo == a;
                // A right-scattered end is a jump piece of its own.
                let skip_hi = scn.ts().sigma(&hi)? != hi;
                let (t, v) = dense_sup(&deriv, lo.to_f64(), hi.to_f64(), skip_lo, skip_hi, n_grid)?;
                consider(S::from_f64(t), S::from_f64(v));
            }
        }
    }
    let (t, v) = best.ok_or_else(|| Error::DegenerateWindow(a.to_f64()))?;
    Ok(SupBound { value: v, attained_at: Some(t), method })
}

fn dense_sup<S: Scalar>(
    deriv: &impl Fn(&S) -> Result<S>,
    lo: f64,
    hi: f64,
    skip_lo: bool,
    skip_hi: bool,
    n: usize,
) -> Result<(f64, f64)> {
    let g = |t: f64| deriv(&S::from_f64(t)).map(|v| v.to_f64().abs());
    let admissible = |t: f64| !(skip_lo && t <= lo) && !(skip_hi && t >= hi);
    // Maximum over n + 1 equispaced points of [l, r], kept inside [lo, hi].
    let grid_max = |l: f64, r: f64, n: usize| -> Result<(f64, f64)> {
        let mut best = (l, f64::NEG_INFINITY);
        for i in 0..=n {
            let t = if i == n { r } else { l + (r - l) * i as f64 / n as f64 };
            if !admissible(t) {
                continue;
            }
            let v = g(t)?;
            if !v.is_finite() {
                return Err(Error::UnboundedSuspicion { coarse: best.1, fine: v });
            }
            if v > best.1 {
                best = (t, v);
            }
        }
        Ok(best)
    };
    let n = n.max(2);
    let step = (hi - lo) / n as f64;
    let (t0, coarse) = grid_max(lo, hi, n)?;
    // Refinement check: resample the two cells around the coarse maximum.
    let (l, r) = ((t0 - step).max(lo), (t0 + step).min(hi));
    let (t1, fine) = grid_max(l, r, LOCAL_SAMPLES)?;
    if fine > UNBOUNDED_RATIO * coarse.max(f64::MIN_POSITIVE) && fine > 1e-300 {
        return Err(Error::UnboundedSuspicion { coarse, fine });
    }
    let mut best = if fine > coarse { (t1, fine) } else { (t0, coarse) };
    let local = (r - l) / LOCAL_SAMPLES as f64;
    let (mut l, mut r) = ((best.0 - local).max(lo), (best.0 + local).min(hi));
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = r - inv_phi * (r - l);
    let mut d = l + inv_phi * (r - l);
    let (mut gc, mut gd) = (g(c)?, g(d)?);
    for _ in 0..80 {
        if r - l <= 1e-15 * (1.0 + hi.abs()) {
            break;
        }
        if gc > gd {
            r = d;
            d = c;
            gd = gc;
            c = r - inv_phi * (r - l);
            gc = g(c)?;
        } else {
            l = c;
            c = d;
            gc = gd;
            d = l + inv_phi * (r - l);
            gd = g(d)?;
        }
    }
    for (t, v) in [(c, gc), (d, gd)] {
        if v > best.1 && admissible(t) {
            best = (t, v);
        }
    }
    Ok(best)
}

/// The bound constant: the override when set, otherwise [`estimate_sup`].
pub fn bound_constant<S: Scalar>(
    scn: &Scenario<S>,
    order: Order,
    domain: SupDomain,
    n_grid: usize,
    m_override: Option<f64>,
) -> Result<SupBound<S>> {
    match m_override {
        Some(m) => Ok(SupBound { value: S::from_f64(m), attained_at: None, method: SupMethod::Override }),
        None => estimate_sup(scn, order, domain, n_grid),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::{KernelSpec, KernelVariant, ParameterFunction, WeightPair};
    use crate::scalar::Rational;
    use crate::timescale::{parse_scale, TimeScale, TsFunction};

    fn scenario<S: Scalar>(ts: &TimeScale<S>, a: S, b: S, f: TsFunction<S>) -> Scenario<S> {
        let k = KernelSpec::new(
            WeightPair::unit(),
            ParameterFunction::identity(),
            S::zero(),
            a.clone(),
            b,
            KernelVariant::General,
        )
        .unwrap();
        Scenario::new(ts, f, k, a).unwrap()
    }

    #[test]
    fn documented_constants() {
        let sq = |s| TsFunction::<f64>::polynomial(vec![0.0, 0.0, s]);
        let dense = TimeScale::dense(0.0, 1.0).unwrap();
        let m = estimate_sup(&scenario(&dense, 0.0, 1.0, sq(1.0)), Order::Second, SupDomain::Open, 2048).unwrap();
        assert_eq!(m.value, 2.0);
        assert_eq!(m.method, SupMethod::Grid);

        let r = Rational::from_i64;
        let z = TimeScale::<Rational>::integers(0, 4).unwrap();
        let f = TsFunction::polynomial(vec![r(0), r(0), r(1)]);
        let m = estimate_sup(&scenario(&z, r(0), r(4), f.clone()), Order::Second, SupDomain::HalfOpen, 16).unwrap();
        assert_eq!(m.value, r(2));
        assert_eq!(m.method, SupMethod::Analytic);

        let q = TimeScale::<Rational>::quantum(r(2), 0, 3).unwrap();
        let m = estimate_sup(&scenario(&q, r(1), r(8), f), Order::Second, SupDomain::HalfOpen, 16).unwrap();
        assert_eq!(m.value, r(3));
    }

    #[test]
    fn first_order_on_hybrid() {
        let ts = parse_scale::<f64>("U(R[0,1];2;3)").unwrap();
        let f = TsFunction::polynomial(vec![0.0, 0.0, 1.0]);
        let m = estimate_sup(&scenario(&ts, 0.0, 3.0, f), Order::First, SupDomain::HalfOpen, 64).unwrap();
        // fΔ(2) = 5 dominates the dense part (≤ 2) and fΔ(1) = 3
        assert_eq!(m.value, 5.0);
        assert_eq!(m.attained_at, Some(2.0));
    }

    #[test]
    fn open_domain_skips_left_end() {
        let z = TimeScale::<f64>::integers(0, 3).unwrap();
        let f = TsFunction::new("spike", |t: &f64| if *t == 0.0 { 1.0 } else { 0.0 });
        let scn = scenario(&z, 0.0, 2.0, f);
        assert_eq!(estimate_sup(&scn, Order::Second, SupDomain::HalfOpen, 8).unwrap().value, 1.0);
        assert_eq!(estimate_sup(&scn, Order::Second, SupDomain::Open, 8).unwrap().value, 0.0);
    }

    #[test]
    fn flags_unbounded_derivative() {
        let ts = TimeScale::<f64>::dense(0.0, 1.0).unwrap();
        let f = TsFunction::<f64>::from_f64_fns("sqrt", f64::sqrt, |t| 0.5 / t.sqrt(), |t| -0.25 * t.powf(-1.5));
        let scn = scenario(&ts, 0.0, 1.0, f);
        let r = estimate_sup(&scn, Order::Second, SupDomain::Open, 64);
        assert!(matches!(r, Err(Error::UnboundedSuspicion { .. })), "{r:?}");
    }
}
