use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Number of points in the validation grid for ψ.
pub const PSI_GRID: usize = 1001;

/// Built-in parameter function families.
#[derive(Clone, Debug, PartialEq)]
pub enum PsiFamily {
    /// ψ(λ) = λ
    Identity,
    /// ψ(λ) = c
    Constant(f64),
    /// ψ(λ) = λ^p; integer `p` is evaluated exactly.
    Power(f64),
    /// ψ(λ) = min(max(λ, lo), hi)
    Clamp { lo: f64, hi: f64 },
    /// Linear interpolation through `(λ_i, ψ_i)` knots spanning [0, 1].
    Table(Vec<(f64, f64)>),
}

/// A parameter function ψ: [0, 1] → [0, 1].
#[derive(Clone, Debug, PartialEq)]
pub struct ParameterFunction {
    family: PsiFamily,
}

impl ParameterFunction {
    pub fn new(family: PsiFamily) -> Result<Self> {
        let psi = ParameterFunction { family };
        psi.validate()?;
        Ok(psi)
    }

    pub fn identity() -> Self {
        ParameterFunction { family: PsiFamily::Identity }
    }

    pub fn constant(c: f64) -> Result<Self> {
        Self::new(PsiFamily::Constant(c))
    }

    pub fn power(p: f64) -> Result<Self> {
        Self::new(PsiFamily::Power(p))
    }

    pub fn family(&self) -> &PsiFamily {
        &self.family
    }

    pub fn is_identity(&self) -> bool {
        self.family == PsiFamily::Identity
    }

    pub fn label(&self) -> String {
        self.to_string()
    }

    pub fn eval<S: Scalar>(&self, lambda: &S) -> S {
        match &self.family {
            PsiFamily::Identity => lambda.clone(),
            PsiFamily::Constant(c) => S::from_f64(*c),
            PsiFamily::Power(p) => {
                if p.fract() == 0.0 && *p >= 0.0 && *p <= u32::MAX as f64 {
                    lambda.powi(*p as u32)
                } else {
                    S::from_f64(lambda.to_f64().powf(*p))
                }
            }
            PsiFamily::Clamp { lo, hi } => {
                let (lo, hi) = (S::from_f64(*lo), S::from_f64(*hi));
                S::min_of(&S::max_of(lambda, &lo), &hi)
            }
            PsiFamily::Table(knots) => {
                let x: Vec<S> = knots.iter().map(|k| S::from_f64(k.0)).collect();
                let i = x.partition_point(|k| k <= lambda);
                if i == 0 {
                    return S::from_f64(knots[0].1);
                }
                if i == knots.len() {
                    return S::from_f64(knots[i - 1].1);
                }
                let (x0, x1) = (x[i - 1].clone(), x[i].clone());
                let (y0, y1) = (S::from_f64(knots[i - 1].1), S::from_f64(knots[i].1));
                y0.clone() + (y1 - y0) * (lambda.clone() - x0.clone()) / (x1 - x0)
            }
        }
    }

    /// Checks `0 <= ψ(λ) <= 1` on a uniform grid of [`PSI_GRID`] points.
    pub fn validate(&self) -> Result<()> {
        if let PsiFamily::Table(knots) = &self.family {
            if knots.len() < 2 || knots.windows(2).any(|w| w[0].0 >= w[1].0) {
                return Err(Error::DomainError("ψ table needs at least two increasing knots".into()));
            }
            if knots[0].0 > 0.0 || knots[knots.len() - 1].0 < 1.0 {
                return Err(Error::DomainError("ψ table knots must span [0, 1]".into()));
            }
        }
        if let PsiFamily::Clamp { lo, hi } = self.family {
            if lo > hi {
                return Err(Error::DomainError("ψ clamp needs lo <= hi".into()));
            }
        }
        for i in 0..PSI_GRID {
            let lambda = i as f64 / (PSI_GRID - 1) as f64;
            let v = self.eval(&lambda);
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::DomainError(format!("ψ({lambda}) = {v} leaves [0, 1] for {self}")));
            }
        }
        Ok(())
    }
}

impl fmt::Display for ParameterFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.family {
            PsiFamily::Identity => write!(f, "id"),
            PsiFamily::Constant(c) => write!(f, "const:{c}"),
            PsiFamily::Power(p) => write!(f, "pow:{p}"),
            PsiFamily::Clamp { lo, hi } => write!(f, "clamp:{lo}:{hi}"),
            PsiFamily::Table(k) => {
                write!(f, "table:")?;
                for (i, (x, y)) in k.iter().enumerate() {
                    if i > 0 {
                        write!(f, ";")?;
                    }
                    write!(f, "{x}:{y}")?;
                }
                Ok(())
            }
        }
    }
}

impl FromStr for ParameterFunction {
    type Err = Error;

    /// `id`, `const:c`, `pow:p`, `clamp:lo:hi`, `table:x0:y0;x1:y1;...`
    fn from_str(text: &str) -> Result<Self> {
        let bad = || Error::DomainError(format!("unknown ψ spec `{text}`"));
        let num = |s: &str| f64::parse_literal(s).ok_or_else(bad);
        let text_t = text.trim();
        if text_t == "id" || text_t == "identity" {
            return Ok(Self::identity());
        }
        let (kind, rest) = text_t.split_once(':').ok_or_else(bad)?;
        let family = match kind {
            "const" => PsiFamily::Constant(num(rest)?),
            "pow" => PsiFamily::Power(num(rest)?),
            "clamp" => {
                let (lo, hi) = rest.split_once(':').ok_or_else(bad)?;
                PsiFamily::Clamp { lo: num(lo)?, hi: num(hi)? }
            }
            "table" => {
                let knots = rest
                    .split(';')
                    .map(|pair| {
                        let (x, y) = pair.split_once(':').ok_or_else(bad)?;
                        Ok((num(x)?, num(y)?))
                    })
                    .collect::<Result<Vec<_>>>()?;
                PsiFamily::Table(knots)
            }
            _ => return Err(bad()),
        };
        Self::new(family)
    }
}

/// Φ(λ) = (1 + ψ(1 − λ) − ψ(λ)) / 2.
pub fn phi<S: Scalar>(psi: &ParameterFunction, lambda: &S) -> Result<S> {
    check_lambda(lambda)?;
    let one_minus = S::one() - lambda.clone();
    Ok((S::one() + psi.eval(&one_minus) - psi.eval(lambda)) / S::two())
}

pub(crate) fn check_lambda<S: Scalar>(lambda: &S) -> Result<()> {
    if *lambda < S::zero() || *lambda > S::one() {
        return Err(Error::DomainError(format!("λ must lie in [0,1], got {}", lambda.to_f64())));
    }
    Ok(())
}
