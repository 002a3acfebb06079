use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::timescale::scale::TimeScale;

pub type ScalarFn<S> = Arc<dyn Fn(&S) -> S + Send + Sync>;

/// A real function on a time scale, optionally with classical first and
/// second derivatives for use on dense segments.
#[derive(Clone)]
pub struct TsFunction<S> {
    eval: ScalarFn<S>,
    d1: Option<ScalarFn<S>>,
    d2: Option<ScalarFn<S>>,
    label: String,
}

impl<S> fmt::Debug for TsFunction<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TsFunction")
            .field("label", &self.label)
            .field("d1", &self.d1.is_some())
            .field("d2", &self.d2.is_some())
            .finish()
    }
}

impl<S: Scalar> TsFunction<S> {
    pub fn new(label: impl Into<String>, eval: impl Fn(&S) -> S + Send + Sync + 'static) -> Self {
        TsFunction { eval: Arc::new(eval), d1: None, d2: None, label: label.into() }
    }

    pub fn with_d1(mut self, d1: impl Fn(&S) -> S + Send + Sync + 'static) -> Self {
        self.d1 = Some(Arc::new(d1));
        self
    }

    pub fn with_d2(mut self, d2: impl Fn(&S) -> S + Send + Sync + 'static) -> Self {
        self.d2 = Some(Arc::new(d2));
        self
    }

    pub fn eval(&self, t: &S) -> S {
        (self.eval)(t)
    }

    pub fn d1(&self) -> Option<&ScalarFn<S>> {
        self.d1.as_ref()
    }

    pub fn d2(&self) -> Option<&ScalarFn<S>> {
        self.d2.as_ref()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn has_analytic_derivatives(&self) -> bool {
        self.d1.is_some() && self.d2.is_some()
    }

    pub fn constant(c: S) -> Self {
        let label = format!("const:{}", c.to_f64());
        TsFunction::new(label, move |_| c.clone()).with_d1(|_| S::zero()).with_d2(|_| S::zero())
    }

    pub fn identity() -> Self {
        TsFunction::polynomial(vec![S::zero(), S::one()])
    }

    /// `c[0] + c[1] t + c[2] t^2 + ...`, with exact derivatives.
    pub fn polynomial(coeffs: Vec<S>) -> Self {
        let label = format!("poly:{}", coeffs.iter().map(|c| c.to_f64().to_string()).collect::<Vec<_>>().join(","));
        Self::polynomial_labeled(label, coeffs)
    }

    fn polynomial_labeled(label: String, coeffs: Vec<S>) -> Self {
        let d1c = derivative_coeffs(&coeffs);
        let d2c = derivative_coeffs(&d1c);
        TsFunction::new(label, move |t| horner(&coeffs, t))
            .with_d1(move |t| horner(&d1c, t))
            .with_d2(move |t| horner(&d2c, t))
    }

    /// Function evaluated in `f64`, for transcendental families.
    pub fn from_f64_fns(
        label: impl Into<String>,
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
        d1: impl Fn(f64) -> f64 + Send + Sync + 'static,
        d2: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        TsFunction::new(label, move |t: &S| S::from_f64(f(t.to_f64())))
            .with_d1(move |t: &S| S::from_f64(d1(t.to_f64())))
            .with_d2(move |t: &S| S::from_f64(d2(t.to_f64())))
    }

    /// Piecewise linear interpolation through `(knots[i], values[i])`,
    /// exact at the knots, constant outside them. No analytic derivatives.
    pub fn table(label: impl Into<String>, knots: Vec<S>, values: Vec<S>) -> Result<Self> {
        if knots.is_empty() || knots.len() != values.len() {
            return Err(Error::FunctionSpec("table needs one value per knot".into()));
        }
        if knots.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::FunctionSpec("table knots must be strictly increasing".into()));
        }
        Ok(TsFunction::new(label, move |t| {
            let i = knots.partition_point(|k| k <= t);
            if i == 0 {
                return values[0].clone();
            }
            if i == knots.len() || &knots[i - 1] == t {
                return values[i - 1].clone();
            }
            let (k0, k1) = (&knots[i - 1], &knots[i]);
            let (v0, v1) = (&values[i - 1], &values[i]);
            v0.clone() + (v1.clone() - v0.clone()) * (t.clone() - k0.clone()) / (k1.clone() - k0.clone())
        }))
    }

    /// `c * f`, keeping derivatives.
    pub fn scaled(&self, c: S) -> Self {
        let base = self.clone();
        let c1 = c.clone();
        let mut out = TsFunction::new(format!("{}*{}", c.to_f64(), self.label), move |t| c1.clone() * base.eval(t));
        if let Some(d1) = self.d1.clone() {
            let c = c.clone();
            out = out.with_d1(move |t| c.clone() * d1(t));
        }
        if let Some(d2) = self.d2.clone() {
            out = out.with_d2(move |t| c.clone() * d2(t));
        }
        out
    }

    /// Copy of this function with the analytic derivatives dropped, which
    /// forces the finite-difference fallback on dense segments.
    pub fn without_derivatives(&self) -> Self {
        TsFunction { eval: self.eval.clone(), d1: None, d2: None, label: self.label.clone() }
    }
}

fn horner<S: Scalar>(coeffs: &[S], t: &S) -> S {
    coeffs.iter().rev().fold(S::zero(), |acc, c| acc * t.clone() + c.clone())
}

fn derivative_coeffs<S: Scalar>(coeffs: &[S]) -> Vec<S> {
    coeffs.iter().enumerate().skip(1).map(|(k, c)| c.clone() * S::from_i64(k as i64)).collect()
}

/// Scalar-agnostic description of a test function, as written in configs
/// and sweep plans.
///
/// ```text
/// poly:c0,c1,...     polynomial with ascending coefficients
/// const:c
/// sin:amp,freq       amp * sin(freq t)
/// cos:amp,freq
/// exp:rate           exp(rate t)
/// table:v0,v1,...    values at the scale points, in order
/// <spec>@t=v@t=v     <spec> with values replaced at scattered points t
/// ```
///
/// Patching is how to keep `f^Δ` continuous where a dense interval ends at
/// a right-scattered point: choose `f(σ(t))` so that the forward quotient
/// equals the slope from the left.
#[derive(Clone, Debug, PartialEq)]
pub enum FunctionSpec {
    Poly(Vec<String>),
    Const(String),
    Sin { amp: f64, freq: f64 },
    Cos { amp: f64, freq: f64 },
    Exp { rate: f64 },
    Table(Vec<String>),
    Patched { base: Box<FunctionSpec>, points: Vec<(String, String)> },
}

impl FromStr for FunctionSpec {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let bad = || Error::FunctionSpec(text.to_string());
        if let Some((base, rest)) = text.split_once('@') {
            let base: FunctionSpec = base.parse()?;
            let points = rest
                .split('@')
                .map(|p| {
                    let (t, v) = p.split_once('=').ok_or_else(bad)?;
                    let (t, v) = (t.trim(), v.trim());
                    if f64::parse_literal(t).is_none() || f64::parse_literal(v).is_none() {
                        return Err(bad());
                    }
                    Ok((t.to_string(), v.to_string()))
                })
                .collect::<Result<Vec<_>>>()?;
            return Ok(FunctionSpec::Patched { base: Box::new(base), points });
        }
        let (kind, args) = text.trim().split_once(':').ok_or_else(bad)?;
        let list: Vec<String> = args.split(',').map(|s| s.trim().to_string()).collect();
        let check = |v: &[String]| -> Result<()> {
            if v.is_empty() || v.iter().any(|s| f64::parse_literal(s).is_none()) {
                Err(bad())
            } else {
                Ok(())
            }
        };
        let nums =
            |v: &[String]| -> Result<Vec<f64>> { v.iter().map(|s| f64::parse_literal(s).ok_or_else(bad)).collect() };
        match kind.trim() {
            "poly" => {
                check(&list)?;
                Ok(FunctionSpec::Poly(list))
            }
            "const" if list.len() == 1 => {
                check(&list)?;
                Ok(FunctionSpec::Const(list[0].clone()))
            }
            "sin" | "cos" if list.len() == 2 => {
                let v = nums(&list)?;
                Ok(if kind.trim() == "sin" {
                    FunctionSpec::Sin { amp: v[0], freq: v[1] }
                } else {
                    FunctionSpec::Cos { amp: v[0], freq: v[1] }
                })
            }
            "exp" if list.len() == 1 => Ok(FunctionSpec::Exp { rate: nums(&list)?[0] }),
            "table" => {
                check(&list)?;
                Ok(FunctionSpec::Table(list))
            }
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for FunctionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FunctionSpec::Poly(c) => write!(f, "poly:{}", c.join(",")),
            FunctionSpec::Const(c) => write!(f, "const:{c}"),
            FunctionSpec::Sin { amp, freq } => write!(f, "sin:{amp},{freq}"),
            FunctionSpec::Cos { amp, freq } => write!(f, "cos:{amp},{freq}"),
            FunctionSpec::Exp { rate } => write!(f, "exp:{rate}"),
            FunctionSpec::Table(v) => write!(f, "table:{}", v.join(",")),
            FunctionSpec::Patched { base, points } => {
                write!(f, "{base}")?;
                points.iter().try_for_each(|(t, v)| write!(f, "@{t}={v}"))
            }
        }
    }
}

impl FunctionSpec {
    /// Whether the spec needs a purely discrete scale.
    pub fn needs_discrete_scale(&self) -> bool {
        match self {
            FunctionSpec::Table(_) => true,
            FunctionSpec::Patched { base, .. } => base.needs_discrete_scale(),
            _ => false,
        }
    }

    /// True when the spec evaluates exactly in rational arithmetic.
    pub fn is_exact(&self) -> bool {
        match self {
            FunctionSpec::Poly(_) | FunctionSpec::Const(_) | FunctionSpec::Table(_) => true,
            FunctionSpec::Patched { base, .. } => base.is_exact(),
            _ => false,
        }
    }

    /// Builds the function; tables are laid over the points of `ts` in order.
    pub fn build<S: Scalar>(&self, ts: &TimeScale<S>) -> Result<TsFunction<S>> {
        let label = self.to_string();
        let lit = |s: &str| S::parse_literal(s).ok_or_else(|| Error::FunctionSpec(label.clone()));
        Ok(match self {
            FunctionSpec::Poly(c) => {
                let coeffs = c.iter().map(|s| lit(s)).collect::<Result<Vec<S>>>()?;
                TsFunction::polynomial_labeled(label.clone(), coeffs)
            }
            FunctionSpec::Const(c) => {
                let v = lit(c)?;
                TsFunction::new(label.clone(), move |_| v.clone()).with_d1(|_| S::zero()).with_d2(|_| S::zero())
            }
            &FunctionSpec::Sin { amp, freq } => TsFunction::from_f64_fns(
                label.clone(),
                move |t| amp * (freq * t).sin(),
                move |t| amp * freq * (freq * t).cos(),
                move |t| -amp * freq * freq * (freq * t).sin(),
            ),
            &FunctionSpec::Cos { amp, freq } => TsFunction::from_f64_fns(
                label.clone(),
                move |t| amp * (freq * t).cos(),
                move |t| -amp * freq * (freq * t).sin(),
                move |t| -amp * freq * freq * (freq * t).cos(),
            ),
            &FunctionSpec::Exp { rate } => TsFunction::from_f64_fns(
                label.clone(),
                move |t| (rate * t).exp(),
                move |t| rate * (rate * t).exp(),
                move |t| rate * rate * (rate * t).exp(),
            ),
            FunctionSpec::Table(vals) => {
                if !ts.is_discrete() {
                    return Err(Error::FunctionSpec(format!("{label} needs a discrete scale")));
                }
                let knots: Vec<S> = ts.segments().iter().map(|s| s.start().clone()).collect();
                if vals.len() < knots.len() {
                    return Err(Error::FunctionSpec(format!(
                        "{label} has {} values but the scale has {} points",
                        vals.len(),
                        knots.len()
                    )));
                }
                let values = vals.iter().take(knots.len()).map(|s| lit(s)).collect::<Result<Vec<S>>>()?;
                TsFunction::table(label.clone(), knots, values)?
            }
            FunctionSpec::Patched { base, points } => {
                let inner = base.build(ts)?;
                let pts = points.iter().map(|(t, v)| Ok((lit(t)?, lit(v)?))).collect::<Result<Vec<(S, S)>>>()?;
                let g = inner.clone();
                let mut out = TsFunction::new(label.clone(), move |t| {
                    pts.iter().find(|(p, _)| p == t).map(|(_, v)| v.clone()).unwrap_or_else(|| g.eval(t))
                });
                // Patch points are scattered, where only values matter.
                if let Some(d1) = inner.d1().cloned() {
                    out = out.with_d1(move |t| d1(t));
                }
                if let Some(d2) = inner.d2().cloned() {
                    out = out.with_d2(move |t| d2(t));
                }
                out
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    #[test]
    fn polynomial_derivatives() {
        let f = TsFunction::<f64>::polynomial(vec![1.0, 0.0, 3.0]);
        assert_eq!(f.eval(&2.0), 13.0);
        assert_eq!(f.d1().unwrap()(&2.0), 12.0);
        assert_eq!(f.d2().unwrap()(&2.0), 6.0);
    }

    #[test]
    fn table_is_exact_at_knots() {
        let r = |n: i64| Rational::from_i64(n);
        let f = TsFunction::table("t", vec![r(0), r(1), r(3)], vec![r(5), r(-1), r(2)]).unwrap();
        assert_eq!(f.eval(&r(1)), r(-1));
        assert_eq!(f.eval(&r(2)), Rational::new(1.into(), 2.into()));
        assert_eq!(f.eval(&r(9)), r(2));
        assert!(TsFunction::table("t", vec![r(0), r(0)], vec![r(1), r(1)]).is_err());
    }

    #[test]
    fn spec_round_trip_and_build() {
        let ts = TimeScale::<f64>::integers(0, 2).unwrap();
        for text in ["poly:0,0,1", "const:2", "sin:1,2", "exp:0.5", "table:1,2,4"] {
            let spec: FunctionSpec = text.parse().unwrap();
            assert_eq!(spec.to_string(), text);
            spec.build(&ts).unwrap();
        }
        assert!("poly:".parse::<FunctionSpec>().is_err());
        assert!("wave:1".parse::<FunctionSpec>().is_err());
        let dense = TimeScale::<f64>::dense(0.0, 1.0).unwrap();
        assert!("table:1,2".parse::<FunctionSpec>().unwrap().build(&dense).is_err());
    }
}
