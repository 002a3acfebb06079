//! Evaluators for the general weighted inequalities and the identity they
//! rest on.
//!
//! With `N = ∫ν`, `Φ = Φ(λ)`, `A_f = (ψ(λ) f(a) + (1 − ψ(1−λ)) f(b)) / 2` and
//! `K` the two-branch kernel, the identity reads
//!
//! ```text
//! (Φ f(t) + A_f) N = ∫ K(s, t) f^Δ(s) Δs + ∫ ν(s) f(σ(s)) Δs
//! ```
//!
//! and the three inequalities bound, respectively, the second-order
//! remainder obtained by applying it twice, its Chebyshev-functional form,
//! and `∫ K f^Δ` directly.

use crate::error::{Error, Result};
use crate::inequalities::report::{InequalityReport, TheoremId};
use crate::inequalities::scenario::{EvalOptions, Scenario};
use crate::inequalities::sup::{bound_constant, SupBound, SupMethod};
use crate::quadrature::QuadratureOptions;
use crate::scalar::Scalar;
use crate::timescale::{integrate_fn, Order};

pub(crate) fn quad_opts(opts: &EvalOptions) -> QuadratureOptions {
    QuadratureOptions { rel_tol: opts.tolerances.tol_quad, ..QuadratureOptions::default() }
}

/// `∫_a^b g Δt` over the scenario window.
pub(crate) fn window_integral<S: Scalar>(
    scn: &Scenario<S>,
    breaks: &[f64],
    opts: &EvalOptions,
    g: impl Fn(&S) -> Result<S>,
) -> Result<S> {
    integrate_fn(scn.ts(), scn.a(), scn.b(), breaks, &quad_opts(opts), g)
}

/// Quadrature breaks for integrands built from `K(·, t)`.
pub(crate) fn kernel_breaks<S: Scalar>(scn: &Scenario<S>, t: &S) -> Vec<f64> {
    let mut b = scn.kernel().sign_changes(scn.a().to_f64(), scn.b().to_f64());
    b.push(t.to_f64());
    b
}

/// Quantities shared by all evaluators.
pub(crate) struct Common<S> {
    pub n: S,
    pub phi: S,
    pub a_f: S,
    pub int_k: S,
    pub int_nu_f_sigma: S,
}

/// `(ψ(λ) g(a) + (1 − ψ(1−λ)) g(b)) / 2`.
pub(crate) fn endpoint_mix<S: Scalar>(scn: &Scenario<S>, ga: S, gb: S) -> S {
    let k = scn.kernel();
    let psi_l = k.psi().eval(k.lambda());
    let psi_1ml = k.psi().eval(&(S::one() - k.lambda().clone()));
    (psi_l * ga + (S::one() - psi_1ml) * gb) / S::two()
}

pub(crate) fn common<S: Scalar>(scn: &Scenario<S>, opts: &EvalOptions) -> Result<Common<S>> {
    let k = scn.kernel();
    let nu = k.weight().nu();
    let x = scn.x().clone();
    let n = window_integral(scn, &[], opts, |t| Ok(nu.eval(t)))?;
    if n <= S::zero() {
        return Err(Error::HypothesisViolated(format!("∫ν = {} must be positive", n.to_f64())));
    }
    let int_k = window_integral(scn, &kernel_breaks(scn, &x), opts, |t| Ok(k.eval(t, &x)))?;
    let int_nu_f_sigma = window_integral(scn, &[], opts, |t| Ok(nu.eval(t) * scn.f_sigma(t)?))?;
    let f = scn.f();
    Ok(Common { n, phi: k.phi(), a_f: endpoint_mix(scn, f.eval(scn.a()), f.eval(scn.b())), int_k, int_nu_f_sigma })
}

fn exact_mode<S: Scalar>(scn: &Scenario<S>) -> bool {
    S::EXACT && scn.is_scattered()
}

fn flag_common<S: Scalar>(report: &mut InequalityReport, scn: &Scenario<S>, order: Order, m: Option<&SupBound<S>>) {
    if !scn.is_scattered() {
        report.flag("quadrature");
    }
    if scn.uses_finite_differences(order) {
        report.flag("fd-derivative");
    }
    match m.map(|m| m.method) {
        Some(SupMethod::Grid) => report.flag("sup-grid"),
        Some(SupMethod::Override) => report.flag("sup-override"),
        _ => {}
    }
}

/// `|(Φ f(x) + A_f) N − ∫ K(s, x) f^Δ(s) Δs − ∫ ν f∘σ|`; zero when the
/// identity holds.
pub fn montgomery_residual<S: Scalar>(scn: &Scenario<S>, opts: &EvalOptions) -> Result<S> {
    let c = common(scn, opts)?;
    let x = scn.x().clone();
    let k = scn.kernel();
    let int_k_fd = window_integral(scn, &kernel_breaks(scn, &x), opts, |s| Ok(k.eval(s, &x) * scn.fd(s)?))?;
    let lhs = (c.phi * scn.f().eval(&x) + c.a_f) * c.n;
    Ok((lhs - int_k_fd - c.int_nu_f_sigma).abs())
}

/// `(1/N²) ∬ K(t, x) K(s, t) f^ΔΔ(s) Δs Δt`, which equals the signed
/// expression bounded by [`eval_weighted_ostrowski`].
pub fn second_order_remainder<S: Scalar>(scn: &Scenario<S>, opts: &EvalOptions) -> Result<S> {
    scn.check_second_order_smooth()?;
    let c = common(scn, opts)?;
    let k = scn.kernel();
    let x = scn.x().clone();
    let double = window_integral(scn, &kernel_breaks(scn, &x), opts, |t| {
        let inner = window_integral(scn, &kernel_breaks(scn, t), opts, |s| Ok(k.eval(s, t) * scn.fdd(s)?))?;
        Ok(k.eval(t, &x) * inner)
    })?;
    Ok(double / (c.n.clone() * c.n))
}

/// The five-term second-order expression, without absolute value.
fn weighted_expression<S: Scalar>(
    scn: &Scenario<S>,
    opts: &EvalOptions,
    report: &mut InequalityReport,
) -> Result<(S, Common<S>)> {
    scn.check_second_order_smooth()?;
    let c = common(scn, opts)?;
    let nu = scn.kernel().weight().nu();
    let int_nu_fd_sigma = window_integral(scn, &[], opts, |s| Ok(nu.eval(s) * scn.fd_sigma(s)?))?;
    let a_fd = endpoint_mix(scn, scn.fd(scn.a())?, scn.fd(scn.b())?);
    let n = c.n.clone();
    let phi = c.phi.clone();
    let t1 = phi.clone() * phi.clone() * scn.f().eval(scn.x());
    let t2 = c.int_k.clone() * int_nu_fd_sigma.clone() / (n.clone() * n.clone());
    let t3 = a_fd.clone() * c.int_k.clone() / n.clone();
    let t4 = phi.clone() * c.int_nu_f_sigma.clone() / n.clone();
    let t5 = c.a_f.clone() * phi.clone();
    for (name, v) in [
        ("int_nu", &n),
        ("phi", &phi),
        ("f_x", &scn.f().eval(scn.x())),
        ("endpoint_mix_f", &c.a_f),
        ("endpoint_mix_fdelta", &a_fd),
        ("int_kernel_x", &c.int_k),
        ("int_nu_fdelta_sigma", &int_nu_fd_sigma),
        ("int_nu_f_sigma", &c.int_nu_f_sigma),
        ("term_phi2_f_x", &t1),
        ("term_kernel_fdelta", &t2),
        ("term_endpoint_fdelta", &t3),
        ("term_phi_mean", &t4),
        ("term_endpoint_f", &t5),
    ] {
        report.note(name, v.to_f64());
    }
    Ok((t1 - t2 + t3 - t4 + t5, c))
}

/// Second-order weighted Ostrowski inequality: `|expression| <= M/N² ∬ |K(t, x)| |K(s, t)|`
/// with `M = sup |f^ΔΔ|`.
pub fn eval_weighted_ostrowski<S: Scalar>(scn: &Scenario<S>, opts: &EvalOptions) -> Result<InequalityReport> {
    let mut report = InequalityReport::new(TheoremId::WeightedOstrowski, scn.context());
    let (expr, c) = weighted_expression(scn, opts, &mut report)?;
    let m = bound_constant(scn, Order::Second, opts.sup_domain, opts.n_grid, opts.m_override)?;
    let k = scn.kernel();
    let x = scn.x().clone();
    let scale = S::from_f64(opts.bound_kernel_scale.unwrap_or(1.0));
    let double = window_integral(scn, &kernel_breaks(scn, &x), opts, |t| {
        let inner = window_integral(scn, &kernel_breaks(scn, t), opts, |s| Ok(k.eval(s, t).abs()))?;
        Ok(k.eval(t, &x).abs() * inner)
    })? * scale.clone()
        * scale;
    let lhs = expr.abs();
    let rhs = m.value.clone() * double.clone() / (c.n.clone() * c.n);
    report.note("double_abs_kernel", double.to_f64());
    report.note("M", m.value.to_f64());
    report.m = Some(m.value.to_f64());
    flag_common(&mut report, scn, Order::Second, Some(&m));
    let exact = exact_mode(scn).then(|| lhs <= rhs);
    report.finish(lhs.to_f64(), rhs.to_f64(), exact, &opts.tolerances);
    Ok(report)
}

/// Ostrowski–Grüss inequality: the identity's lhs against `√var(K) √var(f^Δ)`.
pub fn eval_ostrowski_gruss<S: Scalar>(scn: &Scenario<S>, opts: &EvalOptions) -> Result<InequalityReport> {
    let mut report = InequalityReport::new(TheoremId::OstrowskiGruss, scn.context());
    let c = common(scn, opts)?;
    let k = scn.kernel();
    let x = scn.x().clone();
    let f = scn.f();
    let len = scn.b().clone() - scn.a().clone();
    let kb = kernel_breaks(scn, &x);
    let scale = S::from_f64(opts.bound_kernel_scale.unwrap_or(1.0));
    let int_k2 = window_integral(scn, &kb, opts, |t| {
        let v = k.eval(t, &x);
        Ok(v.clone() * v)
    })?;
    let int_fd = window_integral(scn, &[], opts, |t| scn.fd(t))?;
    let int_fd2 = window_integral(scn, &[], opts, |t| {
        let v = scn.fd(t)?;
        Ok(v.clone() * v)
    })?;

    let bracket = (c.phi.clone() * f.eval(&x) + c.a_f.clone()) * c.n.clone() / len.clone();
    let mean_term = c.int_nu_f_sigma.clone() / len.clone();
    let kernel_term = (f.eval(scn.b()) - f.eval(scn.a())) / (len.clone() * len.clone()) * c.int_k.clone();
    let lhs = (bracket.clone() - mean_term.clone() - kernel_term.clone()).abs();

    let mean_k = c.int_k.clone() / len.clone();
    let mean_fd = int_fd.clone() / len.clone();
    let var_k = (int_k2.clone() / len.clone() - mean_k.clone() * mean_k) * scale.clone() * scale;
    let var_f = int_fd2.clone() / len.clone() - mean_fd.clone() * mean_fd;
    let var_k_f = clamp_variance(var_k.to_f64(), int_k2.to_f64() / len.to_f64(), opts, &mut report)?;
    let var_f_f = clamp_variance(var_f.to_f64(), int_fd2.to_f64() / len.to_f64(), opts, &mut report)?;
    let rhs = var_k_f.sqrt() * var_f_f.sqrt();

    for (name, v) in [
        ("int_nu", &c.n),
        ("phi", &c.phi),
        ("endpoint_mix_f", &c.a_f),
        ("int_kernel_x", &c.int_k),
        ("int_kernel_x_sq", &int_k2),
        ("int_fdelta", &int_fd),
        ("int_fdelta_sq", &int_fd2),
        ("int_nu_f_sigma", &c.int_nu_f_sigma),
        ("term_bracket", &bracket),
        ("term_mean", &mean_term),
        ("term_kernel", &kernel_term),
        ("var_kernel", &var_k),
        ("var_fdelta", &var_f),
    ] {
        report.note(name, v.to_f64());
    }
    flag_common(&mut report, scn, Order::First, None);
    let exact = exact_mode(scn).then(|| {
        var_k >= S::zero() && var_f >= S::zero() && lhs.clone() * lhs.clone() <= var_k.clone() * var_f.clone()
    });
    report.finish(lhs.to_f64(), rhs, exact, &opts.tolerances);
    Ok(report)
}

fn clamp_variance(v: f64, second_moment: f64, opts: &EvalOptions, report: &mut InequalityReport) -> Result<f64> {
    if v >= 0.0 {
        return Ok(v);
    }
    if -v <= opts.tolerances.tol_quad * (1.0 + second_moment.abs()) {
        report.flag("variance-clamped");
        return Ok(0.0);
    }
    Err(Error::DomainError(format!("variance {v} is negative beyond quadrature tolerance")))
}

/// First-order weighted Ostrowski inequality: `|(Φ f(x) + A_f) N − ∫ ν f∘σ| <= M ∫ |K(s, x)| Δs`
/// with `M = sup |f^Δ|`.
pub fn eval_first_order_ostrowski<S: Scalar>(scn: &Scenario<S>, opts: &EvalOptions) -> Result<InequalityReport> {
    let mut report = InequalityReport::new(TheoremId::FirstOrder, scn.context());
    let c = common(scn, opts)?;
    let k = scn.kernel();
    let x = scn.x().clone();
    let kb = kernel_breaks(scn, &x);
    let scale = S::from_f64(opts.bound_kernel_scale.unwrap_or(1.0));
    let m = bound_constant(scn, Order::First, opts.sup_domain, opts.n_grid, opts.m_override)?;
    let int_abs_k = window_integral(scn, &kb, opts, |s| Ok(k.eval(s, &x).abs()))? * scale;
    let int_k_fd = window_integral(scn, &kb, opts, |s| Ok(k.eval(s, &x) * scn.fd(s)?))?;
    let lhs = ((c.phi.clone() * scn.f().eval(&x) + c.a_f.clone()) * c.n.clone() - c.int_nu_f_sigma.clone()).abs();
    let rhs = m.value.clone() * int_abs_k.clone();
    for (name, v) in [
        ("int_nu", &c.n),
        ("phi", &c.phi),
        ("endpoint_mix_f", &c.a_f),
        ("int_nu_f_sigma", &c.int_nu_f_sigma),
        ("int_abs_kernel_x", &int_abs_k),
        ("lemma_form", &int_k_fd.abs()),
        ("M", &m.value),
    ] {
        report.note(name, v.to_f64());
    }
    report.m = Some(m.value.to_f64());
    flag_common(&mut report, scn, Order::First, Some(&m));
    let exact = exact_mode(scn).then(|| lhs <= rhs);
    report.finish(lhs.to_f64(), rhs.to_f64(), exact, &opts.tolerances);
    Ok(report)
}

/// Dispatches to the evaluator for a general theorem or a corollary.
pub fn evaluate<S: Scalar>(id: TheoremId, scn: &Scenario<S>, opts: &EvalOptions) -> Result<InequalityReport> {
    match id {
        TheoremId::WeightedOstrowski => eval_weighted_ostrowski(scn, opts),
        TheoremId::OstrowskiGruss => eval_ostrowski_gruss(scn, opts),
        TheoremId::FirstOrder => eval_first_order_ostrowski(scn, opts),
        TheoremId::Corollary(c) => crate::inequalities::corollaries::eval_corollary(c, scn, opts),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::{KernelSpec, KernelVariant, ParameterFunction, WeightPair};
    use crate::scalar::Rational;
    use crate::timescale::{TimeScale, TsFunction};

    fn desk(x: f64, lambda: f64) -> Scenario<f64> {
        let ts = TimeScale::dense(0.0, 1.0).unwrap();
        let k = KernelSpec::new(
            WeightPair::unit(),
            ParameterFunction::identity(),
            lambda,
            0.0,
            1.0,
            KernelVariant::General,
        )
        .unwrap();
        Scenario::new(&ts, TsFunction::polynomial(vec![0.0, 0.0, 1.0]), k, x).unwrap()
    }

    #[test]
    fn desk_case_values() {
        let opts = EvalOptions::default();
        let r = eval_weighted_ostrowski(&desk(0.5, 0.0), &opts).unwrap();
        assert!((r.lhs - 1.0 / 12.0).abs() < 1e-12, "{}", r.lhs);
        assert!((r.rhs - 7.0 / 48.0).abs() < 1e-12, "{}", r.rhs);
        assert!(r.holds);
        let g = eval_ostrowski_gruss(&desk(0.5, 0.0), &opts).unwrap();
        assert!((g.lhs - 1.0 / 12.0).abs() < 1e-12 && (g.rhs - 1.0 / 6.0).abs() < 1e-12);
        let f1 = eval_first_order_ostrowski(&desk(0.5, 0.0), &opts).unwrap();
        assert!((f1.lhs - 1.0 / 12.0).abs() < 1e-12);
        assert!((f1.rhs - 0.5).abs() < 1e-12, "{}", f1.rhs);
        assert!((f1.intermediates["lemma_form"] - 1.0 / 12.0).abs() < 1e-12);
    }

    #[test]
    fn identity_on_reals() {
        let opts = EvalOptions::default();
        let ts = TimeScale::dense(0.0, 1.0).unwrap();
        let k =
            KernelSpec::new(WeightPair::unit(), ParameterFunction::identity(), 0.3, 0.0, 1.0, KernelVariant::General)
                .unwrap();
        let scn = Scenario::new(&ts, TsFunction::polynomial(vec![0.0, 0.0, 0.0, 1.0]), k, 0.4).unwrap();
        assert!(montgomery_residual(&scn, &opts).unwrap() < 1e-12);
    }

    #[test]
    fn exact_on_integers() {
        let r = Rational::from_i64;
        let opts = EvalOptions::default();
        let ts = TimeScale::<Rational>::integers(0, 2).unwrap();
        let k = KernelSpec::new(
            WeightPair::unit(),
            ParameterFunction::identity(),
            r(0),
            r(0),
            r(2),
            KernelVariant::General,
        )
        .unwrap();
        let scn = Scenario::new(&ts, TsFunction::polynomial(vec![r(0), r(0), r(1)]), k, r(1)).unwrap();
        assert_eq!(montgomery_residual(&scn, &opts).unwrap(), r(0));
        let rep = eval_weighted_ostrowski(&scn, &opts).unwrap();
        assert_eq!(rep.exact_holds, Some(true));
        // the signed expression equals the double-sum remainder exactly
        let mut scratch = InequalityReport::new(TheoremId::WeightedOstrowski, scn.context());
        let (expr, _) = weighted_expression(&scn, &opts, &mut scratch).unwrap();
        assert_eq!(expr, second_order_remainder(&scn, &opts).unwrap());
    }

    #[test]
    fn constant_function_is_degenerate() {
        let ts = TimeScale::<f64>::dense(-1.0, 2.0).unwrap();
        let opts = EvalOptions::default();
        for lambda in [0.0, 0.4, 1.0] {
            let k = KernelSpec::new(
                WeightPair::unit(),
                ParameterFunction::power(2.0).unwrap(),
                lambda,
                -1.0,
                2.0,
                KernelVariant::General,
            )
            .unwrap();
            let scn = Scenario::new(&ts, TsFunction::constant(3.0), k, 0.5).unwrap();
            for rep in [
                eval_weighted_ostrowski(&scn, &opts).unwrap(),
                eval_ostrowski_gruss(&scn, &opts).unwrap(),
                eval_first_order_ostrowski(&scn, &opts).unwrap(),
            ] {
                assert!(rep.lhs <= 1e-12, "{:?} {}", rep.theorem_id, rep.lhs);
                assert!(rep.rhs >= 0.0 && rep.holds);
            }
        }
    }

    #[test]
    fn corrupted_bound_is_detected() {
        let opts = EvalOptions { bound_kernel_scale: Some(0.1), ..EvalOptions::default() };
        let r = eval_weighted_ostrowski(&desk(0.5, 0.0), &opts).unwrap();
        assert!(!r.holds);
    }
}
