use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::timescale::{delta_derivative, Order, Piece, TimeScale, TsFunction};

/// Relative tolerance for checking `w^Δ = ν` on dense pieces in floating point.
pub const WEIGHT_TOL: f64 = 1e-8;

const DENSE_SAMPLES: usize = 17;

/// A weight ν together with an antiderivative `w` (`w^Δ = ν`).
#[derive(Clone, Debug)]
pub struct WeightPair<S> {
    nu: TsFunction<S>,
    w: TsFunction<S>,
    label: String,
}

impl<S: Scalar> WeightPair<S> {
    /// Pairs `nu` with `w` without checking; see [`WeightPair::validate`].
    pub fn new(nu: TsFunction<S>, w: TsFunction<S>, label: impl Into<String>) -> Self {
        WeightPair { nu, w, label: label.into() }
    }

    /// ν = 1, w(t) = t.
    pub fn unit() -> Self {
        WeightPair::new(TsFunction::constant(S::one()), TsFunction::identity(), "unit")
    }

    /// w(t) = t² + c with ν(t) = σ(t) + t on `ts`.
    pub fn quadratic(ts: &TimeScale<S>, c: S) -> Self {
        let label = if c.is_zero() { "sigma-plus-t".to_string() } else { format!("quadratic:{}", c.to_f64()) };
        let w = TsFunction::polynomial(vec![c, S::zero(), S::one()]);
        let ts = Arc::new(ts.clone());
        let nu = TsFunction::new("sigma+t", move |t: &S| ts.sigma(t).unwrap_or_else(|_| t.clone()) + t.clone());
        WeightPair::new(nu, w, label)
    }

    /// ν = w^Δ computed on `ts`. Outside T^κ (or off the scale) the classical
    /// derivative of `w` is used when available.
    pub fn from_w(ts: &TimeScale<S>, w: TsFunction<S>, label: impl Into<String>) -> Self {
        let ts = Arc::new(ts.clone());
        let wc = w.clone();
        let nu = TsFunction::new(format!("delta({})", w.label()), move |t: &S| {
            delta_derivative(&ts, &wc, t, Order::First)
                .unwrap_or_else(|_| wc.d1().map(|d| d(t)).unwrap_or_else(S::zero))
        });
        WeightPair::new(nu, w, label)
    }

    pub fn nu(&self) -> &TsFunction<S> {
        &self.nu
    }

    pub fn w(&self) -> &TsFunction<S> {
        &self.w
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Constant `c` with `w(t) = g(t) + c` at `a`, `b` and the midpoint, if any.
    fn offset_from(&self, g: impl Fn(&S) -> S, a: &S, b: &S) -> Option<S> {
        let mid = (a.clone() + b.clone()) / S::two();
        let offs: Vec<S> = [a, &mid, b].iter().map(|t| self.w.eval(t) - g(t)).collect();
        let scale = offs.iter().fold(S::one(), |m, o| S::max_of(&m, &o.abs())).to_f64();
        let close = |x: &S, y: &S| {
            if S::EXACT {
                x == y
            } else {
                (x.clone() - y.clone()).abs().to_f64() <= 1e-12 * scale
            }
        };
        (close(&offs[0], &offs[1]) && close(&offs[0], &offs[2])).then(|| offs[0].clone())
    }

    /// True when `w(t) = t + c` on `[a, b]`.
    pub fn is_unit_slope(&self, a: &S, b: &S) -> bool {
        self.offset_from(|t| t.clone(), a, b).is_some()
    }

    /// True when `w(t) = t² + c` on `[a, b]`.
    pub fn is_quadratic(&self, a: &S, b: &S) -> bool {
        self.offset_from(|t| t.clone() * t.clone(), a, b).is_some()
    }

    /// Checks `w^Δ = ν` and `ν >= 0` on `[a, b]`, `ν > 0` on `(a, b)`.
    pub fn validate(&self, ts: &TimeScale<S>, a: &S, b: &S) -> Result<()> {
        let bad = |msg: String| Err(Error::HypothesisViolated(format!("weight {}: {msg}", self.label)));
        let check_sign = |t: &S, v: &S| -> Result<()> {
            if *v < S::zero() || (v.is_zero() && t > a && t < b) {
                return bad(format!("ν({}) = {} must be positive inside the window", t.to_f64(), v.to_f64()));
            }
            Ok(())
        };
        for piece in ts.pieces(a, b)? {
            match piece {
                Piece::Jump { t, mu } => {
                    let sigma = t.clone() + mu.clone();
                    let lhs = self.w.eval(&sigma) - self.w.eval(&t);
                    let nu = self.nu.eval(&t);
                    let rhs = mu.clone() * nu.clone();
                    let ok = if S::EXACT {
                        lhs == rhs
                    } else {
                        (lhs.clone() - rhs.clone()).abs().to_f64() <= WEIGHT_TOL * (1.0 + lhs.abs().to_f64())
                    };
                    if !ok {
                        return bad(format!("w(σ(t)) − w(t) ≠ μ(t)ν(t) at t = {}", t.to_f64()));
                    }
                    check_sign(&t, &nu)?;
                }
                Piece::Dense { lo, hi } => {
                    let (lof, hif) = (lo.to_f64(), hi.to_f64());
                    for i in 0..DENSE_SAMPLES {
                        let tf = lof + (hif - lof) * i as f64 / (DENSE_SAMPLES - 1) as f64;
                        let t = if i == 0 { lo.clone() } else { S::from_f64(tf) };
                        if ts.sigma(&t).is_ok_and(|s| s != t) {
                            // right-scattered end of the piece, checked as a jump
                            continue;
                        }
                        let nu = self.nu.eval(&t);
                        check_sign(&t, &nu)?;
                        let dw = match self.w.d1() {
                            Some(d1) => d1(&t).to_f64(),
                            None => {
                                let h = 1e-6 * (hif - lof);
                                let (l, r) = ((tf - h).max(lof), (tf + h).min(hif));
                                let wf = |x: f64| self.w.eval(&S::from_f64(x)).to_f64();
                                (wf(r) - wf(l)) / (r - l)
                            }
                        };
                        let tol = if self.w.d1().is_some() { WEIGHT_TOL } else { 1e-4 };
                        if (dw - nu.to_f64()).abs() > tol * (1.0 + dw.abs()) {
                            return bad(format!("w'({tf}) = {dw} but ν = {}", nu.to_f64()));
                        }
                    }
                }
            }
        }
        let nb = self.nu.eval(b);
        if nb < S::zero() {
            return bad(format!("ν({}) is negative", b.to_f64()));
        }
        Ok(())
    }
}

/// Scalar-agnostic weight description.
///
/// ```text
/// unit               ν = 1, w = t
/// sigma-plus-t       ν = σ(t) + t, w = t²
/// quadratic:c        ν = σ(t) + t, w = t² + c
/// poly:c0,c1,...     w given by coefficients, ν = w^Δ
/// table:v0,v1,...    w given at the scale points, ν = w^Δ
/// ```
#[derive(Clone, Debug, PartialEq)]
pub enum WeightSpec {
    Unit,
    Quadratic(String),
    Poly(Vec<String>),
    Table(Vec<String>),
}

impl WeightSpec {
    pub fn build<S: Scalar>(&self, ts: &TimeScale<S>) -> Result<WeightPair<S>> {
        let num = |s: &String| {
            S::parse_literal(s).ok_or_else(|| Error::FunctionSpec(format!("bad number `{s}` in weight {self}")))
        };
        match self {
            WeightSpec::Unit => Ok(WeightPair::unit()),
            WeightSpec::Quadratic(c) => Ok(WeightPair::quadratic(ts, num(c)?)),
            WeightSpec::Poly(cs) => {
                let coeffs = cs.iter().map(num).collect::<Result<Vec<_>>>()?;
                Ok(WeightPair::from_w(ts, TsFunction::polynomial(coeffs), self.to_string()))
            }
            WeightSpec::Table(vs) => {
                let spec = crate::timescale::FunctionSpec::Table(vs.clone());
                let w = spec.build(ts)?;
                Ok(WeightPair::from_w(ts, w, self.to_string()))
            }
        }
    }

    pub fn needs_discrete_scale(&self) -> bool {
        matches!(self, WeightSpec::Table(_))
    }
}

impl fmt::Display for WeightSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightSpec::Unit => write!(f, "unit"),
            WeightSpec::Quadratic(c) if c == "0" => write!(f, "sigma-plus-t"),
            WeightSpec::Quadratic(c) => write!(f, "quadratic:{c}"),
            WeightSpec::Poly(cs) => write!(f, "poly:{}", cs.join(",")),
            WeightSpec::Table(vs) => write!(f, "table:{}", vs.join(",")),
        }
    }
}

impl FromStr for WeightSpec {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let text: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let list = |rest: &str| -> Result<Vec<String>> {
            let items: Vec<String> = rest.split(',').map(str::to_string).collect();
            if items.iter().any(|s| f64::parse_literal(s).is_none()) {
                return Err(Error::FunctionSpec(format!("bad number list in weight `{text}`")));
            }
            Ok(items)
        };
        match text.split_once(':') {
            None if text == "unit" => Ok(WeightSpec::Unit),
            None if text == "sigma-plus-t" => Ok(WeightSpec::Quadratic("0".into())),
            Some(("quadratic", c)) => {
                list(c)?;
                Ok(WeightSpec::Quadratic(c.to_string()))
            }
            Some(("poly", rest)) => Ok(WeightSpec::Poly(list(rest)?)),
            Some(("table", rest)) => Ok(WeightSpec::Table(list(rest)?)),
            _ => Err(Error::FunctionSpec(format!("unknown weight `{text}`"))),
        }
    }
}
