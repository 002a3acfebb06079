//! Specialised inequalities, each evaluated from its own closed form
//! (`h_2` moments, plain sums, Jackson sums, classical integrals) rather
//! than by calling the general evaluators, then compared against them.
//!
//! On `q`-power windows every sum carries the Jackson weight
//! `μ(q^j) = (q − 1) q^j`, so that the sums are the Δ-integrals they stand for.

use crate::error::{Error, Result};
use crate::inequalities::report::{Consistency, CorollaryId, InequalityReport, TheoremId};
use crate::inequalities::scenario::{EvalOptions, Scenario};
use crate::inequalities::sup::{bound_constant, SupDomain};
use crate::inequalities::theorems::{evaluate, quad_opts};
use crate::quadrature;
use crate::scalar::Scalar;
use crate::timescale::{h_monomial, integrate_fn, Order, Piece};

/// Evaluates corollary `id` on `scn`, checking its hypotheses, and attaches
/// a comparison with the general theorem it specialises.
pub fn eval_corollary<S: Scalar>(id: CorollaryId, scn: &Scenario<S>, opts: &EvalOptions) -> Result<InequalityReport> {
    let mut report = match id {
        CorollaryId::MidpointLambda => midpoint_lambda(scn, opts)?,
        CorollaryId::DragomirBarnett => dragomir_barnett(scn, opts)?,
        CorollaryId::RealWeighted => real_weighted(scn, opts)?,
        CorollaryId::IntegerWeighted => integer_weighted(scn, opts)?,
        CorollaryId::QuantumWeighted => quantum_weighted(scn, opts)?,
        CorollaryId::QuadraticWeightGruss => quadratic_gruss(scn, opts, false)?,
        CorollaryId::QuadraticWeightGrussLambda0 => quadratic_gruss(scn, opts, true)?,
        CorollaryId::RealGruss => real_gruss(scn, opts)?,
        CorollaryId::IntegerGruss => integer_gruss(scn, opts)?,
        CorollaryId::QuantumGruss => quantum_gruss(scn, opts)?,
    };
    let parent = evaluate(id.parent(), scn, opts)?;
    let tol = opts.tolerances.tol_ineq;
    let close = |u: f64, v: f64| (u - v).abs() <= tol * (1.0 + u.abs().max(v.abs()));
    let lhs_ok = close(report.lhs, parent.lhs);
    // Outside its bracket the h_2 form over-estimates ∫|K(s, t)| Δs.
    let rhs_ok = close(report.rhs, parent.rhs)
        || (id == CorollaryId::MidpointLambda && report.rhs >= parent.rhs - opts.tolerances.allowance(parent.rhs));
    report.consistency = Some(Consistency {
        against: id.parent(),
        lhs: parent.lhs,
        rhs: parent.rhs,
        lhs_diff: report.lhs - parent.lhs,
        rhs_diff: report.rhs - parent.rhs,
        agrees: lhs_ok && rhs_ok,
    });
    Ok(report)
}

fn violated<T>(id: CorollaryId, msg: impl Into<String>) -> Result<T> {
    Err(Error::HypothesisViolated(format!("{id}: {}", msg.into())))
}

fn psi_is_identity_here<S: Scalar>(scn: &Scenario<S>) -> bool {
    let k = scn.kernel();
    let l = k.lambda().clone();
    let one_minus = S::one() - l.clone();
    k.psi().eval(&l) == l && k.psi().eval(&one_minus) == one_minus
}

fn flag_dense<S: Scalar>(report: &mut InequalityReport, scn: &Scenario<S>, order: Order) {
    if !scn.is_scattered() {
        report.flag("quadrature");
    }
    if scn.uses_finite_differences(order) {
        report.flag("fd-derivative");
    }
}

fn finish<S: Scalar>(report: &mut InequalityReport, scn: &Scenario<S>, lhs: S, rhs: S, opts: &EvalOptions) {
    let exact = (S::EXACT && scn.is_scattered()).then(|| lhs <= rhs);
    report.finish(lhs.to_f64(), rhs.to_f64(), exact, &opts.tolerances);
}

// ---------------------------------------------------------------------------
// h_2 forms with w(t) = t, ψ = id

fn midpoint_lambda<S: Scalar>(scn: &Scenario<S>, opts: &EvalOptions) -> Result<InequalityReport> {
    scn.check_second_order_smooth()?;
    let id = CorollaryId::MidpointLambda;
    if !scn.kernel().weight().is_unit_slope(scn.a(), scn.b()) || !psi_is_identity_here(scn) {
        return violated(id, "needs w(t) = t + c and ψ(λ) = λ");
    }
    let ts = scn.ts();
    let (a, b, x, l) = (scn.a(), scn.b(), scn.x(), scn.lambda());
    let len = b.clone() - a.clone();
    let half = l.clone() * len.clone() / S::two();
    let p1 = a.clone() + half.clone();
    let p2 = b.clone() - half;
    if !ts.contains(&p1) || !ts.contains(&p2) {
        return violated(
            id,
            format!("a + λ(b−a)/2 = {} and b − λ(b−a)/2 = {} must be scale points", p1.to_f64(), p2.to_f64()),
        );
    }
    if x < &p1 || x > &p2 {
        return violated(id, format!("x = {} must lie in [{}, {}]", x.to_f64(), p1.to_f64(), p2.to_f64()));
    }
    let h2 = |t: &S, s: &S| h_monomial(ts, 2, t, s);
    let f = scn.f();
    let qo = quad_opts(opts);
    let bracket_x = h2(x, &p1)? - h2(a, &p1)? + h2(b, &p2)? - h2(x, &p2)?;
    let int_fd_sigma = integrate_fn(ts, a, b, &[], &qo, |s| scn.fd(&ts.sigma(s)?))?;
    let int_f_sigma = integrate_fn(ts, a, b, &[], &qo, |t| Ok(f.eval(&ts.sigma(t)?)))?;
    let one = S::one();
    let t1 = (l.clone() * l.clone() - S::two() * l.clone() + one.clone()) * f.eval(x);
    let t2 = int_fd_sigma.clone() / (len.clone() * len.clone()) * bracket_x.clone();
    let t3 = l.clone() * (scn.fd(a)? + scn.fd(b)?) / (S::two() * len.clone()) * bracket_x.clone();
    let t4 = (one.clone() - l.clone()) / len.clone() * int_f_sigma.clone();
    let t5 = l.clone() * (one - l.clone()) * (f.eval(a) + f.eval(b)) / S::two();
    let lhs = (t1 - t2 + t3 - t4 + t5).abs();

    let m = bound_constant(scn, Order::Second, opts.sup_domain, opts.n_grid, opts.m_override)?;
    let kern = |t: &S| if t < x { t.clone() - p1.clone() } else { t.clone() - p2.clone() };
    let h_a = h2(a, &p1)?;
    let h_b = h2(b, &p2)?;
    let breaks = [x.to_f64(), p1.to_f64(), p2.to_f64()];
    let integral = integrate_fn(ts, a, b, &breaks, &qo, |t| {
        Ok(kern(t).abs() * (h_a.clone() + h2(t, &p1)? + h2(t, &p2)? + h_b.clone()))
    })?;
    let rhs = m.value.clone() / (len.clone() * len) * integral.clone();

    let mut report = InequalityReport::new(TheoremId::Corollary(id), scn.context());
    report.note("h2_bracket_x", bracket_x.to_f64());
    report.note("int_fdelta_sigma", int_fd_sigma.to_f64());
    report.note("int_f_sigma", int_f_sigma.to_f64());
    report.note("bound_integral", integral.to_f64());
    report.m = Some(m.value.to_f64());
    flag_dense(&mut report, scn, Order::Second);
    finish(&mut report, scn, lhs, rhs, opts);
    Ok(report)
}

fn dragomir_barnett<S: Scalar>(scn: &Scenario<S>, opts: &EvalOptions) -> Result<InequalityReport> {
    scn.check_second_order_smooth()?;
    let id = CorollaryId::DragomirBarnett;
    if !scn.kernel().weight().is_unit_slope(scn.a(), scn.b()) {
        return violated(id, "needs w(t) = t + c");
    }
    if !scn.lambda().is_zero() {
        return violated(id, "needs λ = 0");
    }
    let psi = scn.kernel().psi();
    if !psi.eval(&S::zero()).is_zero() || !psi.eval(&S::one()).is_one() {
        return violated(id, "needs ψ(0) = 0 and ψ(1) = 1");
    }
    let ts = scn.ts();
    let (a, b, x) = (scn.a(), scn.b(), scn.x());
    let len = b.clone() - a.clone();
    let h2 = |t: &S, s: &S| h_monomial(ts, 2, t, s);
    let f = scn.f();
    let qo = quad_opts(opts);
    let bracket_x = h2(x, a)? - h2(x, b)?;
    let int_fd_sigma = integrate_fn(ts, a, b, &[], &qo, |s| scn.fd(&ts.sigma(s)?))?;
    let int_f_sigma = integrate_fn(ts, a, b, &[], &qo, |t| Ok(f.eval(&ts.sigma(t)?)))?;
    let t1 = f.eval(x);
    let t2 = int_fd_sigma.clone() / (len.clone() * len.clone()) * bracket_x.clone();
    let t3 = S::one() / len.clone() * int_f_sigma.clone();
    let lhs = (t1 - t2 - t3).abs();

    let m = bound_constant(scn, Order::Second, opts.sup_domain, opts.n_grid, opts.m_override)?;
    let kern = |t: &S| if t < x { t.clone() - a.clone() } else { t.clone() - b.clone() };
    let breaks = [x.to_f64(), a.to_f64(), b.to_f64()];
    let integral = integrate_fn(ts, a, b, &breaks, &qo, |t| Ok(kern(t).abs() * (h2(t, a)? + h2(t, b)?)))?;
    let rhs = m.value.clone() / (len.clone() * len) * integral.clone();

    let mut report = InequalityReport::new(TheoremId::Corollary(id), scn.context());
    report.note("h2_bracket_x", bracket_x.to_f64());
    report.note("int_fdelta_sigma", int_fd_sigma.to_f64());
    report.note("int_f_sigma", int_f_sigma.to_f64());
    report.note("bound_integral", integral.to_f64());
    report.m = Some(m.value.to_f64());
    flag_dense(&mut report, scn, Order::Second);
    finish(&mut report, scn, lhs, rhs, opts);
    Ok(report)
}

// ---------------------------------------------------------------------------
// Classical forms on an interval of ℝ

fn require_interval<S: Scalar>(id: CorollaryId, scn: &Scenario<S>) -> Result<()> {
    let pieces = scn.ts().pieces(scn.a(), scn.b())?;
    if pieces.len() != 1 || !matches!(pieces[0], Piece::Dense { .. }) {
        return violated(id, "needs [a, b] to be an interval of ℝ");
    }
    Ok(())
}

/// Levels `w(a) + ψ(λ)(w(b)−w(a))/2` and `w(a) + (1+ψ(1−λ))(w(b)−w(a))/2` in f64.
fn levels_f64<S: Scalar>(scn: &Scenario<S>) -> (f64, f64, f64, f64) {
    let k = scn.kernel();
    let w = |t: f64| k.weight().w().eval(&S::from_f64(t)).to_f64();
    let (a, b) = (scn.a().to_f64(), scn.b().to_f64());
    let psi_l = k.psi().eval(k.lambda()).to_f64();
    let psi_1ml = k.psi().eval(&(S::one() - k.lambda().clone())).to_f64();
    let dw = w(b) - w(a);
    (w(a) + psi_l * dw / 2.0, w(a) + (1.0 + psi_1ml) * dw / 2.0, psi_l, psi_1ml)
}

struct Classical<'a, S: Scalar> {
    scn: &'a Scenario<S>,
    opts: crate::quadrature::QuadratureOptions,
    lo: f64,
    hi: f64,
    left: f64,
    right: f64,
    breaks: Vec<f64>,
}

impl<S: Scalar> Classical<'_, S> {
    fn f(&self, t: f64) -> f64 {
        self.scn.f().eval(&S::from_f64(t)).to_f64()
    }

    fn df(&self, t: f64) -> Result<f64> {
        match self.scn.f().d1() {
            Some(d1) => Ok(d1(&S::from_f64(t)).to_f64()),
            None => self.scn.fd(&S::from_f64(t)).map(|v| v.to_f64()),
        }
    }

    fn nu(&self, t: f64) -> f64 {
        let w = self.scn.kernel().weight();
        match w.w().d1() {
            Some(d1) => d1(&S::from_f64(t)).to_f64(),
            None => w.nu().eval(&S::from_f64(t)).to_f64(),
        }
    }

    fn kernel(&self, s: f64, t: f64) -> f64 {
        let ws = self.scn.kernel().weight().w().eval(&S::from_f64(s)).to_f64();
        if s < t {
            ws - self.left
        } else {
            ws - self.right
        }
    }

    fn integrate(&self, extra: &[f64], g: impl Fn(f64) -> Result<f64>) -> Result<f64> {
        let mut breaks = self.breaks.clone();
        breaks.extend_from_slice(extra);
        Ok(quadrature::integrate(g, self.lo, self.hi, &breaks, &self.opts)?.value)
    }
}

fn classical<'a, S: Scalar>(scn: &'a Scenario<S>, opts: &EvalOptions) -> Classical<'a, S> {
    let (left, right, _, _) = levels_f64(scn);
    let (lo, hi) = (scn.a().to_f64(), scn.b().to_f64());
    let breaks = scn.kernel().sign_changes(lo, hi);
    Classical { scn, opts: quad_opts(opts), lo, hi, left, right, breaks }
}

fn real_weighted<S: Scalar>(scn: &Scenario<S>, opts: &EvalOptions) -> Result<InequalityReport> {
    let id = CorollaryId::RealWeighted;
    require_interval(id, scn)?;
    let c = classical(scn, opts);
    let (_, _, psi_l, psi_1ml) = levels_f64(scn);
    let x = scn.x().to_f64();
    let (a, b) = (c.lo, c.hi);
    let n = c.integrate(&[], |t| Ok(c.nu(t)))?;
    let int_k = c.integrate(&[x], |t| Ok(c.kernel(t, x)))?;
    let int_nu_df = c.integrate(&[], |s| Ok(c.nu(s) * c.df(s)?))?;
    let int_nu_f = c.integrate(&[], |t| Ok(c.nu(t) * c.f(t)))?;
    let phi = (1.0 + psi_1ml - psi_l) / 2.0;
    let mix_df = (psi_l * c.df(a)? + (1.0 - psi_1ml) * c.df(b)?) / 2.0;
    let mix_f = (psi_l * c.f(a) + (1.0 - psi_1ml) * c.f(b)) / 2.0;
    let expr = phi * phi * c.f(x) - int_k * int_nu_df / (n * n) + mix_df / n * int_k - phi / n * int_nu_f + mix_f * phi;
    let m = bound_constant(scn, Order::Second, opts.sup_domain, opts.n_grid, opts.m_override)?.value.to_f64();
    let double = c.integrate(&[x], |t| {
        let inner = c.integrate(&[t], |s| Ok(c.kernel(s, t).abs()))?;
        Ok(c.kernel(t, x).abs() * inner)
    })?;
    let rhs = m / (n * n) * double;

    let mut report = InequalityReport::new(TheoremId::Corollary(id), scn.context());
    report.note("int_nu", n);
    report.note("int_kernel_x", int_k);
    report.note("int_nu_fprime", int_nu_df);
    report.note("int_nu_f", int_nu_f);
    report.note("double_abs_kernel", double);
    report.m = Some(m);
    report.flag("quadrature");
    if scn.f().d1().is_none() || scn.f().d2().is_none() {
        report.flag("fd-derivative");
    }
    report.finish(expr.abs(), rhs, None, &opts.tolerances);
    Ok(report)
}

fn real_gruss<S: Scalar>(scn: &Scenario<S>, opts: &EvalOptions) -> Result<InequalityReport> {
    let id = CorollaryId::RealGruss;
    require_interval(id, scn)?;
    let c = classical(scn, opts);
    let (_, _, psi_l, psi_1ml) = levels_f64(scn);
    let x = scn.x().to_f64();
    let (a, b) = (c.lo, c.hi);
    let len = b - a;
    let int_dw = c.integrate(&[], |t| Ok(c.nu(t)))?;
    let int_dw_f = c.integrate(&[], |t| Ok(c.nu(t) * c.f(t)))?;
    let int_k = c.integrate(&[x], |t| Ok(c.kernel(t, x)))?;
    let int_k2 = c.integrate(&[x], |t| Ok(c.kernel(t, x).powi(2)))?;
    let int_df = c.integrate(&[], |t| c.df(t))?;
    let int_df2 = c.integrate(&[], |t| Ok(c.df(t)?.powi(2)))?;
    let bracket = ((1.0 + psi_1ml - psi_l) / (2.0 * len) * c.f(x)
        + (psi_l * c.f(a) + (1.0 - psi_1ml) * c.f(b)) / (2.0 * len))
        * int_dw;
    let lhs = (bracket - int_dw_f / len - (c.f(b) - c.f(a)) / (len * len) * int_k).abs();
    let mut report = InequalityReport::new(TheoremId::Corollary(id), scn.context());
    let var_k = clamp(int_k2 / len - (int_k / len).powi(2), opts, &mut report);
    let var_f = clamp(int_df2 / len - (int_df / len).powi(2), opts, &mut report);
    report.note("int_wprime", int_dw);
    report.note("int_kernel_x", int_k);
    report.note("var_kernel", var_k);
    report.note("var_fprime", var_f);
    report.flag("quadrature");
    if scn.f().d1().is_none() {
        report.flag("fd-derivative");
    }
    report.finish(lhs, var_k.sqrt() * var_f.sqrt(), None, &opts.tolerances);
    Ok(report)
}

fn clamp(v: f64, opts: &EvalOptions, report: &mut InequalityReport) -> f64 {
    if v < 0.0 {
        if v < -opts.tolerances.tol_quad {
            report.flag("negative-variance");
        } else {
            report.flag("variance-clamped");
        }
        return 0.0;
    }
    v
}

// ---------------------------------------------------------------------------
// Sums on integer windows

fn integer_points<S: Scalar>(id: CorollaryId, scn: &Scenario<S>) -> Result<Vec<S>> {
    let mut pts = Vec::new();
    for p in scn.ts().pieces(scn.a(), scn.b())? {
        match p {
            Piece::Jump { t, mu } if mu.is_one() => pts.push(t),
            _ => return violated(id, "needs a window of consecutive integers"),
        }
    }
    Ok(pts)
}

fn integer_weighted<S: Scalar>(scn: &Scenario<S>, opts: &EvalOptions) -> Result<InequalityReport> {
    let id = CorollaryId::IntegerWeighted;
    let pts = integer_points(id, scn)?;
    let k = scn.kernel();
    let (a, b, x) = (scn.a(), scn.b(), scn.x());
    let f = |t: &S| scn.f().eval(t);
    let nu = |t: &S| k.weight().nu().eval(t);
    let one = S::one();
    let two = S::two();
    let wa = k.weight().w().eval(a);
    let dw = k.weight().w().eval(b) - wa.clone();
    let psi_l = k.psi().eval(k.lambda());
    let psi_1ml = k.psi().eval(&(one.clone() - k.lambda().clone()));
    let left = wa.clone() + psi_l.clone() * dw.clone() / two.clone();
    let right = wa + (one.clone() + psi_1ml.clone()) * dw / two.clone();
    let kern = |s: &S, t: &S| k.weight().w().eval(s) - if s < t { left.clone() } else { right.clone() };
    let sum = |g: &dyn Fn(&S) -> S| pts.iter().fold(S::zero(), |acc, t| acc + g(t));

    let n = sum(&|t| nu(t));
    let sum_k = sum(&|t| kern(t, x));
    let sum_nu_df_next = sum(&|s| nu(s) * (f(&(s.clone() + two.clone())) - f(&(s.clone() + one.clone()))));
    let sum_nu_f_next = sum(&|t| nu(t) * f(&(t.clone() + one.clone())));
    let phi = (one.clone() + psi_1ml.clone() - psi_l.clone()) / two.clone();
    let mix_df = (psi_l.clone() * (f(&(a.clone() + one.clone())) - f(a))
        + (one.clone() - psi_1ml.clone()) * (f(&(b.clone() + one.clone())) - f(b)))
        / (two.clone() * n.clone());
    let mix_f = (psi_l * f(a) + (one.clone() - psi_1ml) * f(b)) / two.clone();
    let expr = phi.clone() * phi.clone() * f(x) - sum_k.clone() * sum_nu_df_next.clone() / (n.clone() * n.clone())
        + mix_df * sum_k.clone()
        - phi.clone() / n.clone() * sum_nu_f_next.clone()
        + mix_f * phi;

    // Forward second difference f(t+2) − 2f(t+1) + f(t) over the Δ-support.
    let m = match opts.m_override {
        Some(m) => S::from_f64(m),
        None => pts
            .iter()
            .filter(|t| opts.sup_domain == SupDomain::HalfOpen || *t != a)
            .map(|t| (f(&(t.clone() + two.clone())) - two.clone() * f(&(t.clone() + one.clone())) + f(t)).abs())
            .fold(S::zero(), |m, v| S::max_of(&m, &v)),
    };
    let scale = S::from_f64(opts.bound_kernel_scale.unwrap_or(1.0));
    let double = sum(&|t| kern(t, x).abs() * sum(&|s| kern(s, t).abs())) * scale.clone() * scale;
    let rhs = m.clone() / (n.clone() * n.clone()) * double.clone();

    let mut report = InequalityReport::new(TheoremId::Corollary(id), scn.context());
    report.note("sum_nu", n.to_f64());
    report.note("sum_kernel_x", sum_k.to_f64());
    report.note("sum_nu_fdelta_next", sum_nu_df_next.to_f64());
    report.note("sum_nu_f_next", sum_nu_f_next.to_f64());
    report.note("double_sum_abs_kernel", double.to_f64());
    report.m = Some(m.to_f64());
    finish(&mut report, scn, expr.abs(), rhs, opts);
    Ok(report)
}

fn integer_gruss<S: Scalar>(scn: &Scenario<S>, opts: &EvalOptions) -> Result<InequalityReport> {
    let id = CorollaryId::IntegerGruss;
    let pts = integer_points(id, scn)?;
    let k = scn.kernel();
    let (a, b, x) = (scn.a(), scn.b(), scn.x());
    let f = |t: &S| scn.f().eval(t);
    let w = |t: &S| k.weight().w().eval(t);
    let one = S::one();
    let two = S::two();
    let fwd = |g: &dyn Fn(&S) -> S, t: &S| g(&(t.clone() + one.clone())) - g(t);
    let psi_l = k.psi().eval(k.lambda());
    let psi_1ml = k.psi().eval(&(one.clone() - k.lambda().clone()));
    let dw = w(b) - w(a);
    let left = w(a) + psi_l.clone() * dw.clone() / two.clone();
    let right = w(a) + (one.clone() + psi_1ml.clone()) * dw / two.clone();
    let kern = |t: &S| w(t) - if t < x { left.clone() } else { right.clone() };
    let sum = |g: &dyn Fn(&S) -> S| pts.iter().fold(S::zero(), |acc, t| acc + g(t));
    let len = b.clone() - a.clone();

    let sum_dw = sum(&|t| fwd(&w, t));
    let sum_dw_f = sum(&|t| fwd(&w, t) * f(&(t.clone() + one.clone())));
    let sum_k = sum(&|t| kern(t));
    let sum_k2 = sum(&|t| kern(t) * kern(t));
    let sum_df = sum(&|t| fwd(&f, t));
    let sum_df2 = sum(&|t| fwd(&f, t) * fwd(&f, t));
    let bracket = ((one.clone() + psi_1ml.clone() - psi_l.clone()) / (two.clone() * len.clone()) * f(x)
        + (psi_l * f(a) + (one - psi_1ml) * f(b)) / (two * len.clone()))
        * sum_dw.clone();
    let lhs = (bracket - sum_dw_f / len.clone() - (f(b) - f(a)) / (len.clone() * len.clone()) * sum_k.clone()).abs();
    let scale = S::from_f64(opts.bound_kernel_scale.unwrap_or(1.0));
    let var_k = (sum_k2 / len.clone() - (sum_k.clone() / len.clone()) * (sum_k / len.clone())) * scale.clone() * scale;
    let var_f = sum_df2 / len.clone() - (sum_df.clone() / len.clone()) * (sum_df / len);

    let mut report = InequalityReport::new(TheoremId::Corollary(id), scn.context());
    report.note("sum_delta_w", sum_dw.to_f64());
    report.note("var_kernel", var_k.to_f64());
    report.note("var_delta_f", var_f.to_f64());
    gruss_finish(&mut report, scn, lhs, var_k, var_f, opts);
    Ok(report)
}

fn gruss_finish<S: Scalar>(
    report: &mut InequalityReport,
    scn: &Scenario<S>,
    lhs: S,
    var_k: S,
    var_f: S,
    opts: &EvalOptions,
) {
    let vk = clamp(var_k.to_f64(), opts, report);
    let vf = clamp(var_f.to_f64(), opts, report);
    let exact = (S::EXACT && scn.is_scattered()).then(|| {
        var_k >= S::zero() && var_f >= S::zero() && lhs.clone() * lhs.clone() <= var_k.clone() * var_f.clone()
    });
    report.finish(lhs.to_f64(), vk.sqrt() * vf.sqrt(), exact, &opts.tolerances);
}

// ---------------------------------------------------------------------------
// Jackson sums on q-power windows

/// Points `q^m, ..., q^(n−1)` of the window and the ratio `q`.
fn quantum_points<S: Scalar>(id: CorollaryId, scn: &Scenario<S>) -> Result<(Vec<S>, S)> {
    let pieces = scn.ts().pieces(scn.a(), scn.b())?;
    let mut pts = Vec::with_capacity(pieces.len());
    let mut q: Option<S> = None;
    for p in pieces {
        let Piece::Jump { t, mu } = p else {
            return violated(id, "needs a window of q-powers");
        };
        if t <= S::zero() {
            return violated(id, "needs a positive window");
        }
        let ratio = (t.clone() + mu) / t.clone();
        match &q {
            None => q = Some(ratio),
            Some(q0) => {
                let same =
                    if S::EXACT { &ratio == q0 } else { (ratio.to_f64() - q0.to_f64()).abs() <= 1e-12 * q0.to_f64() };
                if !same {
                    return violated(id, "needs a constant ratio σ(t)/t");
                }
            }
        }
        pts.push(t);
    }
    let q = q.ok_or_else(|| Error::DegenerateWindow(scn.a().to_f64()))?;
    Ok((pts, q))
}

fn quantum_weighted<S: Scalar>(scn: &Scenario<S>, opts: &EvalOptions) -> Result<InequalityReport> {
    let id = CorollaryId::QuantumWeighted;
    let (pts, q) = quantum_points(id, scn)?;
    let k = scn.kernel();
    let (a, b, x) = (scn.a(), scn.b(), scn.x());
    let f = |t: &S| scn.f().eval(t);
    let nu = |t: &S| k.weight().nu().eval(t);
    let one = S::one();
    let two = S::two();
    let qm1 = q.clone() - one.clone();
    let wa = k.weight().w().eval(a);
    let dw = k.weight().w().eval(b) - wa.clone();
    let psi_l = k.psi().eval(k.lambda());
    let psi_1ml = k.psi().eval(&(one.clone() - k.lambda().clone()));
    let left = wa.clone() + psi_l.clone() * dw.clone() / two.clone();
    let right = wa + (one.clone() + psi_1ml.clone()) * dw / two.clone();
    let kern = |s: &S, t: &S| k.weight().w().eval(s) - if s < t { left.clone() } else { right.clone() };
    // Jackson sum Σ (q − 1) q^j g(q^j)
    let jackson = |g: &dyn Fn(&S) -> S| pts.iter().fold(S::zero(), |acc, t| acc + qm1.clone() * t.clone() * g(t));

    let n = jackson(&|t| nu(t));
    let sum_k = jackson(&|t| kern(t, x));
    let int_nu_dq_next = jackson(&|s| {
        let qs = q.clone() * s.clone();
        nu(s) * (f(&(q.clone() * qs.clone())) - f(&qs)) / (qm1.clone() * qs)
    });
    let int_nu_f_next = jackson(&|t| nu(t) * f(&(q.clone() * t.clone())));
    let phi = (one.clone() + psi_1ml.clone() - psi_l.clone()) / two.clone();
    let mix_dq = (b.clone() * psi_l.clone() * (f(&(q.clone() * a.clone())) - f(a))
        + a.clone() * (one.clone() - psi_1ml.clone()) * (f(&(q.clone() * b.clone())) - f(b)))
        / (two.clone() * a.clone() * b.clone() * qm1.clone() * n.clone());
    let mix_f = (psi_l * f(a) + (one - psi_1ml) * f(b)) / two.clone();
    let expr = phi.clone() * phi.clone() * f(x) - sum_k.clone() * int_nu_dq_next.clone() / (n.clone() * n.clone())
        + mix_dq * sum_k.clone()
        - phi.clone() / n.clone() * int_nu_f_next.clone()
        + mix_f * phi;

    let m = match opts.m_override {
        Some(m) => S::from_f64(m),
        None => pts
            .iter()
            .filter(|t| opts.sup_domain == SupDomain::HalfOpen || *t != a)
            .map(|t| {
                let qt = q.clone() * t.clone();
                let num = f(&(q.clone() * qt.clone())) - (q.clone() + S::one()) * f(&qt) + q.clone() * f(t);
                (num / (q.clone() * qm1.clone() * qm1.clone() * t.clone() * t.clone())).abs()
            })
            .fold(S::zero(), |m, v| S::max_of(&m, &v)),
    };
    let scale = S::from_f64(opts.bound_kernel_scale.unwrap_or(1.0));
    let double = jackson(&|t| kern(t, x).abs() * jackson(&|s| kern(s, t).abs())) * scale.clone() * scale;
    let rhs = m.clone() / (n.clone() * n.clone()) * double.clone();

    let mut report = InequalityReport::new(TheoremId::Corollary(id), scn.context());
    report.note("q", q.to_f64());
    report.note("jackson_nu", n.to_f64());
    report.note("jackson_kernel_x", sum_k.to_f64());
    report.note("jackson_nu_dq_next", int_nu_dq_next.to_f64());
    report.note("jackson_nu_f_next", int_nu_f_next.to_f64());
    report.note("double_jackson_abs_kernel", double.to_f64());
    report.m = Some(m.to_f64());
    finish(&mut report, scn, expr.abs(), rhs, opts);
    Ok(report)
}

fn quantum_gruss<S: Scalar>(scn: &Scenario<S>, opts: &EvalOptions) -> Result<InequalityReport> {
    let id = CorollaryId::QuantumGruss;
    let (pts, q) = quantum_points(id, scn)?;
    let k = scn.kernel();
    let (a, b, x) = (scn.a(), scn.b(), scn.x());
    let f = |t: &S| scn.f().eval(t);
    let w = |t: &S| k.weight().w().eval(t);
    let one = S::one();
    let two = S::two();
    let qm1 = q.clone() - one.clone();
    let dq = |g: &dyn Fn(&S) -> S, t: &S| (g(&(q.clone() * t.clone())) - g(t)) / (qm1.clone() * t.clone());
    let psi_l = k.psi().eval(k.lambda());
    let psi_1ml = k.psi().eval(&(one.clone() - k.lambda().clone()));
    let dw = w(b) - w(a);
    let left = w(a) + psi_l.clone() * dw.clone() / two.clone();
    let right = w(a) + (one.clone() + psi_1ml.clone()) * dw / two.clone();
    let kern = |t: &S| w(t) - if t < x { left.clone() } else { right.clone() };
    let jackson = |g: &dyn Fn(&S) -> S| pts.iter().fold(S::zero(), |acc, t| acc + qm1.clone() * t.clone() * g(t));
    let len = b.clone() - a.clone();

    let int_dqw = jackson(&|t| dq(&w, t));
    let int_dqw_f = jackson(&|t| dq(&w, t) * f(&(q.clone() * t.clone())));
    let sum_k = jackson(&|t| kern(t));
    let sum_k2 = jackson(&|t| kern(t) * kern(t));
    let sum_df = jackson(&|t| dq(&f, t));
    let sum_df2 = jackson(&|t| dq(&f, t) * dq(&f, t));
    let bracket = ((one.clone() + psi_1ml.clone() - psi_l.clone()) / (two.clone() * len.clone()) * f(x)
        + (psi_l * f(a) + (one - psi_1ml) * f(b)) / (two * len.clone()))
        * int_dqw.clone();
    let lhs = (bracket - int_dqw_f / len.clone() - (f(b) - f(a)) / (len.clone() * len.clone()) * sum_k.clone()).abs();
    let scale = S::from_f64(opts.bound_kernel_scale.unwrap_or(1.0));
    let var_k = (sum_k2 / len.clone() - (sum_k.clone() / len.clone()) * (sum_k / len.clone())) * scale.clone() * scale;
    let var_f = sum_df2 / len.clone() - (sum_df.clone() / len.clone()) * (sum_df / len);

    let mut report = InequalityReport::new(TheoremId::Corollary(id), scn.context());
    report.note("q", q.to_f64());
    report.note("jackson_dq_w", int_dqw.to_f64());
    report.note("var_kernel", var_k.to_f64());
    report.note("var_dq_f", var_f.to_f64());
    gruss_finish(&mut report, scn, lhs, var_k, var_f, opts);
    Ok(report)
}

// ---------------------------------------------------------------------------
// Quadratic weight w(t) = t² + c, ν(t) = σ(t) + t

fn quadratic_gruss<S: Scalar>(scn: &Scenario<S>, opts: &EvalOptions, lambda0: bool) -> Result<InequalityReport> {
    let id = if lambda0 { CorollaryId::QuadraticWeightGrussLambda0 } else { CorollaryId::QuadraticWeightGruss };
    if !scn.kernel().weight().is_quadratic(scn.a(), scn.b()) {
        return violated(id, "needs w(t) = t² + c");
    }
    if !psi_is_identity_here(scn) {
        return violated(id, "needs ψ(λ) = λ");
    }
    if lambda0 && !scn.lambda().is_zero() {
        return violated(id, "needs λ = 0");
    }
    let ts = scn.ts();
    let (a, b, x, l) = (scn.a(), scn.b(), scn.x(), scn.lambda());
    let f = |t: &S| scn.f().eval(t);
    let one = S::one();
    let two = S::two();
    let len = b.clone() - a.clone();
    let (a2, b2) = (a.clone() * a.clone(), b.clone() * b.clone());
    let kern = |t: &S| {
        let frac = if t < x { l.clone() } else { two.clone() - l.clone() };
        t.clone() * t.clone() - a2.clone() - frac * (b2.clone() - a2.clone()) / two.clone()
    };
    let sig_plus = |t: &S| -> Result<S> { Ok(ts.sigma(t)? + t.clone()) };
    let qo = quad_opts(opts);
    let breaks = scn.kernel().sign_changes(a.to_f64(), b.to_f64()).into_iter().chain([x.to_f64()]).collect::<Vec<_>>();
    let int = |br: &[f64], g: &dyn Fn(&S) -> Result<S>| integrate_fn(ts, a, b, br, &qo, g);

    let int_nu = int(&[], &|t| sig_plus(t))?;
    let int_nu_f = int(&[], &|t| Ok(sig_plus(t)? * f(&ts.sigma(t)?)))?;
    let int_k = int(&breaks, &|t| Ok(kern(t)))?;
    let int_k2 = int(&breaks, &|t| Ok(kern(t) * kern(t)))?;
    let int_df = int(&[], &|t| scn.fd(t))?;
    let int_df2 = int(&[], &|t| {
        let v = scn.fd(t)?;
        Ok(v.clone() * v)
    })?;
    let coeff = if lambda0 {
        one.clone() / len.clone() * f(x)
    } else {
        (one.clone() - l.clone()) / len.clone() * f(x) + l.clone() * (f(a) + f(b)) / (two.clone() * len.clone())
    };
    let lhs = (coeff * int_nu.clone()
        - one / len.clone() * int_nu_f
        - (f(b) - f(a)) / (len.clone() * len.clone()) * int_k.clone())
    .abs();
    let scale = S::from_f64(opts.bound_kernel_scale.unwrap_or(1.0));
    let var_k = (int_k2 / len.clone() - (int_k.clone() / len.clone()) * (int_k / len.clone())) * scale.clone() * scale;
    let var_f = int_df2 / len.clone() - (int_df.clone() / len.clone()) * (int_df / len);

    let mut report = InequalityReport::new(TheoremId::Corollary(id), scn.context());
    report.note("int_sigma_plus_t", int_nu.to_f64());
    report.note("var_kernel", var_k.to_f64());
    report.note("var_fdelta", var_f.to_f64());
    flag_dense(&mut report, scn, Order::First);
    gruss_finish(&mut report, scn, lhs, var_k, var_f, opts);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::{KernelSpec, KernelVariant, ParameterFunction, WeightPair};
    use crate::scalar::Rational;
    use crate::timescale::{TimeScale, TsFunction};

    fn unit_scn<S: Scalar>(ts: &TimeScale<S>, a: S, b: S, lambda: S, x: S, f: TsFunction<S>) -> Scenario<S> {
        let k =
            KernelSpec::new(WeightPair::unit(), ParameterFunction::identity(), lambda, a, b, KernelVariant::General)
                .unwrap();
        Scenario::new(ts, f, k, x).unwrap()
    }

    #[test]
    fn dragomir_barnett_desk_case() {
        let ts = TimeScale::dense(0.0, 1.0).unwrap();
        let scn = unit_scn(&ts, 0.0, 1.0, 0.0, 0.5, TsFunction::polynomial(vec![0.0, 0.0, 1.0]));
        let opts = EvalOptions::default();
        let db = eval_corollary(CorollaryId::DragomirBarnett, &scn, &opts).unwrap();
        assert!((db.lhs - 1.0 / 12.0).abs() < 1e-12);
        assert!((db.rhs - 7.0 / 48.0).abs() < 1e-12);
        assert!(db.consistency.unwrap().agrees);
        let mid = eval_corollary(CorollaryId::MidpointLambda, &scn, &opts).unwrap();
        assert_eq!((mid.lhs, mid.rhs), (db.lhs, db.rhs));
    }

    #[test]
    fn native_scale_coherence() {
        let opts = EvalOptions::default();
        let r = Rational::from_i64;
        let half = Rational::new(1.into(), 2.into());
        let cubic = TsFunction::polynomial(vec![r(1), r(-2), r(0), r(1)]);
        let z = TimeScale::<Rational>::integers(0, 6).unwrap();
        let scn = unit_scn(&z, r(0), r(6), half.clone(), r(2), cubic.clone());
        for id in [CorollaryId::IntegerWeighted, CorollaryId::IntegerGruss] {
            let rep = eval_corollary(id, &scn, &opts).unwrap();
            let c = rep.consistency.unwrap();
            assert_eq!(c.lhs_diff, 0.0, "{id}");
            assert!(c.agrees && rep.holds, "{id}");
        }
        let q = TimeScale::<Rational>::quantum(r(2), 0, 4).unwrap();
        let scn = unit_scn(&q, r(1), r(16), half, r(4), cubic);
        for id in [CorollaryId::QuantumWeighted, CorollaryId::QuantumGruss] {
            let rep = eval_corollary(id, &scn, &opts).unwrap();
            let c = rep.consistency.unwrap();
            assert!(c.agrees && rep.holds, "{id} {c:?}");
            assert_eq!(rep.exact_holds, Some(true));
        }
        let ts = TimeScale::dense(-1.0, 2.0).unwrap();
        let scn = unit_scn(&ts, -1.0, 2.0, 0.3, 0.2, TsFunction::polynomial(vec![1.0, -2.0, 0.0, 1.0]));
        for id in [CorollaryId::RealWeighted, CorollaryId::RealGruss] {
            let rep = eval_corollary(id, &scn, &opts).unwrap();
            assert!(rep.consistency.unwrap().agrees, "{id}");
        }
    }

    #[test]
    fn quadratic_weight_forms() {
        let opts = EvalOptions::default();
        let r = Rational::from_i64;
        let z = TimeScale::<Rational>::integers(1, 5).unwrap();
        let k = KernelSpec::new(
            WeightPair::quadratic(&z, r(0)),
            ParameterFunction::identity(),
            r(0),
            r(1),
            r(5),
            KernelVariant::QuadraticWeight,
        )
        .unwrap();
        let scn = Scenario::new(&z, TsFunction::polynomial(vec![r(0), r(0), r(1)]), k, r(3)).unwrap();
        for id in [CorollaryId::QuadraticWeightGruss, CorollaryId::QuadraticWeightGrussLambda0] {
            let rep = eval_corollary(id, &scn, &opts).unwrap();
            assert!(rep.consistency.as_ref().unwrap().agrees, "{id}");
            assert_eq!(rep.exact_holds, Some(true));
        }
    }

    #[test]
    fn hypotheses_enforced() {
        let opts = EvalOptions::default();
        let z = TimeScale::<f64>::integers(0, 4).unwrap();
        let scn = unit_scn(&z, 0.0, 4.0, 0.5, 2.0, TsFunction::identity());
        assert!(matches!(eval_corollary(CorollaryId::RealWeighted, &scn, &opts), Err(Error::HypothesisViolated(_))));
        assert!(matches!(eval_corollary(CorollaryId::QuantumGruss, &scn, &opts), Err(Error::HypothesisViolated(_))));
        assert!(matches!(eval_corollary(CorollaryId::DragomirBarnett, &scn, &opts), Err(Error::HypothesisViolated(_))));
        let k = KernelSpec::new(
            WeightPair::unit(),
            ParameterFunction::constant(0.5).unwrap(),
            0.0,
            0.0,
            4.0,
            KernelVariant::General,
        )
        .unwrap();
        let scn = Scenario::new(&z, TsFunction::identity(), k, 2.0).unwrap();
        assert!(matches!(eval_corollary(CorollaryId::DragomirBarnett, &scn, &opts), Err(Error::HypothesisViolated(_))));
        // a + λ(b−a)/2 = 1 is a scale point, but x = 0 is outside [1, 3]
        let scn = unit_scn(&z, 0.0, 4.0, 0.5, 0.0, TsFunction::identity());
        assert!(matches!(eval_corollary(CorollaryId::MidpointLambda, &scn, &opts), Err(Error::HypothesisViolated(_))));
    }

    #[test]
    fn linear_function_on_quantum_window_has_zero_gruss_lhs() {
        let r = Rational::from_i64;
        let q = TimeScale::<Rational>::quantum(r(2), 0, 2).unwrap();
        let scn = unit_scn(&q, r(1), r(4), r(0), r(2), TsFunction::identity());
        let rep = eval_corollary(CorollaryId::QuantumGruss, &scn, &EvalOptions::default()).unwrap();
        assert_eq!(rep.lhs, 0.0);
        assert!(rep.holds);
    }
}
