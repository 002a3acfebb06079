//! The two-branch Peano kernel
//!
//! ```text
//! K(s, t) = w(s) − [w(a) + ψ(λ) (w(b) − w(a)) / 2]        for s < t
//! K(s, t) = w(s) − [w(a) + (1 + ψ(1−λ)) (w(b) − w(a)) / 2]  for s >= t
//! ```
//!
//! and its specialised closed forms.

use crate::error::{Error, Result};
use crate::kernels::psi::{check_lambda, phi, ParameterFunction};
use crate::kernels::weight::WeightPair;
use crate::scalar::Scalar;
use crate::timescale::{h_monomial, TimeScale};

/// Closed form used to evaluate the kernel.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum KernelVariant {
    /// Any weight pair and parameter function.
    General,
    /// `w(t) = t + c`, `ψ = id`: levels `a + λ(b−a)/2` and `b − λ(b−a)/2`.
    MidpointLambda,
    /// `w(t) = t + c`, `λ = 0`, `ψ(0) = 0`, `ψ(1) = 1`: levels `a` and `b`.
    DragomirBarnett,
    /// `w(t) = t² + c`, `ψ = id`.
    QuadraticWeight,
    /// General formula restricted to windows of a quantum scale.
    Quantum,
}

#[derive(Clone, Debug)]
pub struct KernelSpec<S> {
    weight: WeightPair<S>,
    psi: ParameterFunction,
    lambda: S,
    a: S,
    b: S,
    variant: KernelVariant,
    left_level: S,
    right_level: S,
}

impl<S: Scalar> KernelSpec<S> {
    pub fn new(
        weight: WeightPair<S>,
        psi: ParameterFunction,
        lambda: S,
        a: S,
        b: S,
        variant: KernelVariant,
    ) -> Result<Self> {
        check_lambda(&lambda)?;
        if a >= b {
            return Err(Error::DomainError(format!("window needs a < b, got [{}, {}]", a.to_f64(), b.to_f64())));
        }
        let wa = weight.w().eval(&a);
        let dw = weight.w().eval(&b) - wa.clone();
        let one_minus = S::one() - lambda.clone();
        let left_level = wa.clone() + psi.eval(&lambda) * dw.clone() / S::two();
        let right_level = wa + (S::one() + psi.eval(&one_minus)) * dw / S::two();
        let spec = KernelSpec { weight, psi, lambda, a, b, variant, left_level, right_level };
        spec.check_variant()?;
        Ok(spec)
    }

    fn check_variant(&self) -> Result<()> {
        let mismatch = |what: &str| Err(Error::VariantMismatch(format!("{:?} kernel needs {what}", self.variant)));
        let psi_is_id_here = || {
            let one_minus = S::one() - self.lambda.clone();
            self.psi.eval(&self.lambda) == self.lambda && self.psi.eval(&one_minus) == one_minus
        };
        match self.variant {
            KernelVariant::General | KernelVariant::Quantum => Ok(()),
            KernelVariant::MidpointLambda => {
                if !self.weight.is_unit_slope(&self.a, &self.b) {
                    return mismatch("w(t) = t + c");
                }
                if !psi_is_id_here() {
                    return mismatch("ψ(λ) = λ");
                }
                Ok(())
            }
            KernelVariant::DragomirBarnett => {
                if !self.weight.is_unit_slope(&self.a, &self.b) {
                    return mismatch("w(t) = t + c");
                }
                if !self.lambda.is_zero() {
                    return mismatch("λ = 0");
                }
                if !self.psi.eval(&S::zero()).is_zero() || !self.psi.eval(&S::one()).is_one() {
                    return mismatch("ψ(0) = 0 and ψ(1) = 1");
                }
                Ok(())
            }
            KernelVariant::QuadraticWeight => {
                if !self.weight.is_quadratic(&self.a, &self.b) {
                    return mismatch("w(t) = t² + c");
                }
                if !psi_is_id_here() {
                    return mismatch("ψ(λ) = λ");
                }
                Ok(())
            }
        }
    }

    pub fn weight(&self) -> &WeightPair<S> {
        &self.weight
    }

    pub fn psi(&self) -> &ParameterFunction {
        &self.psi
    }

    pub fn lambda(&self) -> &S {
        &self.lambda
    }

    pub fn a(&self) -> &S {
        &self.a
    }

    pub fn b(&self) -> &S {
        &self.b
    }

    pub fn variant(&self) -> KernelVariant {
        self.variant
    }

    /// Constants subtracted from `w(s)` on the `s < t` and `s >= t` branches.
    pub fn levels(&self) -> (&S, &S) {
        (&self.left_level, &self.right_level)
    }

    /// Φ(λ).
    pub fn phi(&self) -> S {
        phi(&self.psi, &self.lambda).expect("λ checked at construction")
    }

    /// `K(t, t) − K(t⁻, t) = −Φ(λ) (w(b) − w(a))`, the same for every `t`.
    pub fn branch_jump(&self) -> S {
        self.left_level.clone() - self.right_level.clone()
    }

    /// Kernel value without scale or window checks.
    pub fn eval(&self, s: &S, t: &S) -> S {
        let left = s < t;
        let two = S::two();
        let (a, b, l) = (&self.a, &self.b, &self.lambda);
        match self.variant {
            KernelVariant::General | KernelVariant::Quantum => self.eval_general(s, t),
            KernelVariant::MidpointLambda => {
                let half_gap = l.clone() * (b.clone() - a.clone()) / two;
                if left {
                    s.clone() - (a.clone() + half_gap)
                } else {
                    s.clone() - (b.clone() - half_gap)
                }
            }
            KernelVariant::DragomirBarnett => {
                if left {
                    s.clone() - a.clone()
                } else {
                    s.clone() - b.clone()
                }
            }
            KernelVariant::QuadraticWeight => {
                let (a2, b2) = (a.clone() * a.clone(), b.clone() * b.clone());
                let frac = if left { l.clone() } else { two.clone() - l.clone() };
                s.clone() * s.clone() - a2.clone() - frac * (b2 - a2) / two
            }
        }
    }

    /// The defining two-branch formula, whatever the variant.
    pub fn eval_general(&self, s: &S, t: &S) -> S {
        let level = if s < t { &self.left_level } else { &self.right_level };
        self.weight.w().eval(s) - level.clone()
    }

    /// Points in `(lo, hi)` where either branch of `K(·, t)` changes sign,
    /// located by sampling plus bisection in `f64`. Used as quadrature breaks.
    pub fn sign_changes(&self, lo: f64, hi: f64) -> Vec<f64> {
        const SAMPLES: usize = 64;
        let mut out = Vec::new();
        if hi <= lo {
            return out;
        }
        let w = |x: f64| self.weight.w().eval(&S::from_f64(x)).to_f64();
        for level in [self.left_level.to_f64(), self.right_level.to_f64()] {
            let g = |x: f64| w(x) - level;
            let mut x0 = lo;
            let mut g0 = g(x0);
            for i in 1..=SAMPLES {
                let x1 = lo + (hi - lo) * i as f64 / SAMPLES as f64;
                let g1 = g(x1);
                if g0 == 0.0 && x0 > lo {
                    out.push(x0);
                } else if g0 * g1 < 0.0 {
                    let (mut l, mut r) = (x0, x1);
                    for _ in 0..200 {
                        let m = 0.5 * (l + r);
                        if m <= l || m >= r {
                            break;
                        }
                        if (g(m) < 0.0) == (g0 < 0.0) {
                            l = m;
                        } else {
                            r = m;
                        }
                    }
                    out.push(0.5 * (l + r));
                }
                x0 = x1;
                g0 = g1;
            }
        }
        out.sort_by(f64::total_cmp);
        out.dedup();
        out
    }

    /// Rejects the quantum variant on windows that are not pure `q`-power
    /// grids.
    pub fn check_scale(&self, ts: &TimeScale<S>) -> Result<()> {
        if self.variant != KernelVariant::Quantum {
            return Ok(());
        }
        let pts = ts
            .scattered_points(&self.a, &self.b)
            .map_err(|_| Error::VariantMismatch("quantum kernel on a window with dense parts".into()))?;
        if pts[0] <= S::zero() {
            return Err(Error::VariantMismatch("quantum kernel needs a positive window".into()));
        }
        let q = pts[1].clone() / pts[0].clone();
        let mut prev = pts[0].clone();
        for p in &pts[1..] {
            let ratio = p.clone() / prev.clone();
            let same = if S::EXACT { ratio == q } else { (ratio.to_f64() - q.to_f64()).abs() <= 1e-12 * q.to_f64() };
            if !same {
                return Err(Error::VariantMismatch(format!(
                    "quantum kernel on a window without constant ratio near {}",
                    p.to_f64()
                )));
            }
            prev = p.clone();
        }
        Ok(())
    }
}

/// `K(s, t)` with `s, t` required to lie in `ts ∩ [a, b]`.
pub fn peano_kernel<S: Scalar>(spec: &KernelSpec<S>, ts: &TimeScale<S>, s: &S, t: &S) -> Result<S> {
    for p in [s, t] {
        if !ts.contains(p) {
            return Err(Error::PointNotInScale(p.to_f64()));
        }
        if p < spec.a() || p > spec.b() {
            return Err(Error::DomainError(format!("{} lies outside the kernel window", p.to_f64())));
        }
    }
    spec.check_scale(ts)?;
    Ok(spec.eval(s, t))
}

/// `(∫_a^b |K(s, t)| Δs, ∫_a^b K(s, t) Δs)` in closed form through `h_2`,
/// for weights `w(t) = t + c`. Needs both branch levels in the scale and
/// `t` between them.
pub fn kernel_moments_h2<S: Scalar>(spec: &KernelSpec<S>, ts: &TimeScale<S>, t: &S) -> Result<(S, S)> {
    if !spec.weight().is_unit_slope(spec.a(), spec.b()) {
        return Err(Error::VariantMismatch("h_2 moments need w(t) = t + c".into()));
    }
    let (a, b) = (spec.a(), spec.b());
    let half = (b.clone() - a.clone()) / S::two();
    let lambda = spec.lambda();
    let p1 = a.clone() + spec.psi().eval(lambda) * half.clone();
    let p2 = a.clone() + (S::one() + spec.psi().eval(&(S::one() - lambda.clone()))) * half;
    for (name, p) in [("p1", &p1), ("p2", &p2)] {
        if !ts.contains(p) {
            return Err(Error::HypothesisViolated(format!("{name} = {} is not a scale point", p.to_f64())));
        }
    }
    if t < &p1 || t > &p2 {
        return Err(Error::HypothesisViolated(format!(
            "t = {} lies outside [{}, {}]",
            t.to_f64(),
            p1.to_f64(),
            p2.to_f64()
        )));
    }
    let h2 = |x: &S, y: &S| h_monomial(ts, 2, x, y);
    let (ap1, tp1, tp2, bp2) = (h2(a, &p1)?, h2(t, &p1)?, h2(t, &p2)?, h2(b, &p2)?);
    let abs = ap1.clone() + tp1.clone() + tp2.clone() + bp2.clone();
    let signed = tp1 - ap1 + bp2 - tp2;
    Ok((abs, signed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn r(n: i64) -> Rational {
        Rational::from_i64(n)
    }

    fn unit_spec(lambda: f64, a: f64, b: f64, variant: KernelVariant) -> Result<KernelSpec<f64>> {
        KernelSpec::new(WeightPair::unit(), ParameterFunction::identity(), lambda, a, b, variant)
    }

    #[test]
    fn desk_values() {
        let k = unit_spec(0.0, 0.0, 1.0, KernelVariant::General).unwrap();
        assert_eq!(k.eval(&0.25, &0.5), 0.25);
        assert_eq!(k.eval(&0.75, &0.5), -0.25);
        assert_eq!(k.branch_jump(), -1.0);
        assert_eq!(k.phi(), 1.0);
        let k1 = unit_spec(1.0, 0.0, 1.0, KernelVariant::General).unwrap();
        assert_eq!(k1.branch_jump(), 0.0);
    }

    #[test]
    fn variants_agree_with_general_formula() {
        let ts = TimeScale::<Rational>::integers(-2, 6).unwrap();
        let lambda = Rational::new(1.into(), 2.into());
        let mid = KernelSpec::new(
            WeightPair::unit(),
            ParameterFunction::identity(),
            lambda.clone(),
            r(-2),
            r(6),
            KernelVariant::MidpointLambda,
        )
        .unwrap();
        let quad = KernelSpec::new(
            WeightPair::quadratic(&ts, r(5)),
            ParameterFunction::identity(),
            lambda,
            r(0),
            r(6),
            KernelVariant::QuadraticWeight,
        )
        .unwrap();
        let db = KernelSpec::new(
            WeightPair::unit(),
            ParameterFunction::identity(),
            r(0),
            r(-2),
            r(6),
            KernelVariant::DragomirBarnett,
        )
        .unwrap();
        for s in -2..=6 {
            for t in -2..=6 {
                let (s, t) = (r(s), r(t));
                assert_eq!(mid.eval(&s, &t), mid.eval_general(&s, &t));
                assert_eq!(db.eval(&s, &t), db.eval_general(&s, &t));
                if s >= r(0) && t >= r(0) {
                    assert_eq!(quad.eval(&s, &t), quad.eval_general(&s, &t));
                }
            }
        }
    }

    #[test]
    fn variant_preconditions() {
        assert!(matches!(unit_spec(0.5, 0.0, 1.0, KernelVariant::DragomirBarnett), Err(Error::VariantMismatch(_))));
        let pow = ParameterFunction::power(2.0).unwrap();
        assert!(matches!(
            KernelSpec::new(WeightPair::unit(), pow, 0.5, 0.0, 1.0, KernelVariant::MidpointLambda),
            Err(Error::VariantMismatch(_))
        ));
        let ts = TimeScale::<f64>::dense(0.0, 1.0).unwrap();
        assert!(matches!(
            KernelSpec::new(
                WeightPair::quadratic(&ts, 0.0),
                ParameterFunction::identity(),
                0.5,
                0.0,
                1.0,
                KernelVariant::MidpointLambda
            ),
            Err(Error::VariantMismatch(_))
        ));
        assert!(matches!(unit_spec(1.5, 0.0, 1.0, KernelVariant::General), Err(Error::DomainError(_))));

        let k = unit_spec(0.0, 0.0, 1.0, KernelVariant::Quantum).unwrap();
        assert!(matches!(peano_kernel(&k, &ts, &0.2, &0.5), Err(Error::VariantMismatch(_))));
        let k = unit_spec(0.0, 0.0, 1.0, KernelVariant::General).unwrap();
        assert!(matches!(peano_kernel(&k, &ts, &1.5, &0.5), Err(Error::PointNotInScale(_))));
    }

    #[test]
    fn quantum_variant_accepts_q_windows() {
        let ts = TimeScale::<Rational>::quantum(r(2), 0, 4).unwrap();
        let k = KernelSpec::new(
            WeightPair::unit(),
            ParameterFunction::identity(),
            r(0),
            r(1),
            r(16),
            KernelVariant::Quantum,
        )
        .unwrap();
        assert_eq!(peano_kernel(&k, &ts, &r(2), &r(4)).unwrap(), r(1));
        assert_eq!(peano_kernel(&k, &ts, &r(8), &r(4)).unwrap(), r(-8));
    }

    #[test]
    fn moments_on_reals() {
        // λ = 0, t = 1/2 on [0, 1]: ∫|K| = 1/4, ∫K = 0
        let ts = TimeScale::<f64>::dense(0.0, 1.0).unwrap();
        let k = unit_spec(0.0, 0.0, 1.0, KernelVariant::General).unwrap();
        let (abs, signed) = kernel_moments_h2(&k, &ts, &0.5).unwrap();
        assert_eq!((abs, signed), (0.25, 0.0));
        let (abs, _) = kernel_moments_h2(&k, &ts, &0.25).unwrap();
        assert!((abs - 0.3125).abs() < 1e-15);
    }

    #[test]
    fn moments_need_levels_in_scale() {
        let ts = TimeScale::<Rational>::integers(0, 3).unwrap();
        let k = KernelSpec::new(
            WeightPair::unit(),
            ParameterFunction::identity(),
            r(0),
            r(0),
            r(3),
            KernelVariant::General,
        )
        .unwrap();
        kernel_moments_h2(&k, &ts, &r(1)).unwrap();
        let k = KernelSpec::new(
            WeightPair::unit(),
            ParameterFunction::identity(),
            Rational::new(1.into(), 3.into()),
            r(0),
            r(3),
            KernelVariant::General,
        )
        .unwrap();
        assert!(matches!(kernel_moments_h2(&k, &ts, &r(1)), Err(Error::HypothesisViolated(_))));
    }

    #[test]
    fn sign_changes_found() {
        let k = unit_spec(0.5, 0.0, 1.0, KernelVariant::General).unwrap();
        let roots = k.sign_changes(0.0, 1.0);
        assert_eq!(roots.len(), 2);
        assert!((roots[0] - 0.25).abs() < 1e-14 && (roots[1] - 0.75).abs() < 1e-14);
    }
}
