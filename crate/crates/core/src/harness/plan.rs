use std::fmt::Write as _;

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::inequalities::{EvalOptions, Scenario, TheoremId};
use crate::kernels::{KernelSpec, KernelVariant, ParameterFunction, WeightSpec};
use crate::scalar::{Rational, Scalar};
use crate::timescale::{parse_scale, Descriptor, FunctionSpec, Piece, TimeScale};

/// Which points of the window become evaluation points `x`.
#[derive(Clone, Debug, PartialEq)]
pub enum XRule {
    /// Interior scale points on scattered parts, plus an 8-panel grid
    /// (endpoints included) on each dense piece.
    All,
    /// `n + 1` equispaced points of `[a, b]` that lie in the scale.
    Grid(usize),
    /// Explicit literals; points off the scale are filtered.
    Values(Vec<String>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Arithmetic {
    /// Exact rationals on discrete scales with exactly representable
    /// inputs, `f64` elsewhere.
    #[default]
    Auto,
    Float,
    Exact,
}

/// Test functions of a plan.
#[derive(Clone, Debug, PartialEq)]
pub enum FunctionFamily {
    Spec(FunctionSpec),
    /// `count` random polynomials of exactly this degree, coefficients in
    /// `{-2, -7/4, ..., 2}`.
    Polynomials {
        degree: usize,
        count: usize,
    },
    /// Random `sin`/`cos`; only on scales with a dense part.
    Trig {
        count: usize,
    },
    /// Random value tables; only on discrete scales.
    RandomTable {
        count: usize,
    },
}

/// A declarative, seeded description of a batch of scenarios.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepPlan {
    pub scales: Vec<String>,
    /// Common window; each scale's full extent when absent.
    pub window: Option<(String, String)>,
    pub functions: Vec<FunctionFamily>,
    pub psis: Vec<ParameterFunction>,
    pub weights: Vec<WeightSpec>,
    pub lambdas: Vec<String>,
    pub x_rule: XRule,
    pub theorems: Vec<TheoremId>,
    pub seed: u64,
    pub arithmetic: Arithmetic,
    /// Extra random scenarios appended after the grid.
    pub random_scenarios: usize,
    pub eval: EvalOptions,
}

impl Default for SweepPlan {
    fn default() -> Self {
        SweepPlan {
            scales: Vec::new(),
            window: None,
            functions: Vec::new(),
            psis: vec![ParameterFunction::identity()],
            weights: vec![WeightSpec::Unit],
            lambdas: vec!["0".into()],
            x_rule: XRule::All,
            theorems: vec![TheoremId::WeightedOstrowski],
            seed: 0,
            arithmetic: Arithmetic::Auto,
            random_scenarios: 0,
            eval: EvalOptions::default(),
        }
    }
}

/// The eleven-point λ grid `0, 1/10, ..., 1`.
pub fn lambda_grid() -> Vec<String> {
    (0..=10).map(|i| if i == 0 || i == 10 { (i / 10).to_string() } else { format!("{i}/10") }).collect()
}

/// ψ ∈ {id, λ², 1/2}.
pub fn default_psis() -> Vec<ParameterFunction> {
    vec![
        ParameterFunction::identity(),
        ParameterFunction::power(2.0).expect("valid"),
        ParameterFunction::constant(0.5).expect("valid"),
    ]
}

fn poly(text: &str) -> FunctionFamily {
    FunctionFamily::Spec(text.parse().expect("valid literal"))
}

/// The shipped plans: one per scale `R[0,1]`, `R[-1,2]`, `Z[0,6]`,
/// `Z[-2,3]`, `Q(2)[0,4]`, `Q(3)[0,3]`, each with polynomials up to degree
/// four, the default ψ family and the eleven-point λ grid.
pub fn default_plans() -> Vec<(String, SweepPlan)> {
    let scales = ["R[0,1]", "R[-1,2]", "Z[0,6]", "Z[-2,3]", "Q(2)[0,4]", "Q(3)[0,3]"];
    scales
        .iter()
        .map(|s| {
            let positive = !s.starts_with('R') && !s.starts_with("Z[-");
            let mut weights = vec![WeightSpec::Unit];
            if positive {
                weights.push(WeightSpec::Quadratic("0".into()));
            }
            let plan = SweepPlan {
                scales: vec![s.to_string()],
                functions: ["poly:0,1", "poly:0,0,1", "poly:1,-2,0,1", "poly:0,1,0,-1,1/2", "poly:1/2,-1,1/4"]
                    .into_iter()
                    .map(poly)
                    .collect(),
                psis: default_psis(),
                weights,
                lambdas: lambda_grid(),
                theorems: vec![TheoremId::WeightedOstrowski, TheoremId::OstrowskiGruss, TheoremId::FirstOrder],
                ..SweepPlan::default()
            };
            (s.to_string(), plan)
        })
        .collect()
}

/// One concrete, validated combination of a plan, kept scalar-agnostic so
/// it can be evaluated in either arithmetic.
#[derive(Clone, Debug, PartialEq)]
pub struct ScenarioSpec {
    pub id: usize,
    pub scale: String,
    pub a: String,
    pub b: String,
    pub x: String,
    pub lambda: String,
    pub psi: ParameterFunction,
    pub weight: WeightSpec,
    pub function: FunctionSpec,
    pub arithmetic: Arithmetic,
}

impl ScenarioSpec {
    pub fn build<S: Scalar>(&self) -> Result<Scenario<S>> {
        let ts: TimeScale<S> = parse_scale(&self.scale)?;
        let lit = |s: &str| S::parse_literal(s).ok_or_else(|| Error::DomainError(format!("bad literal `{s}`")));
        let (a, b, x, lambda) = (lit(&self.a)?, lit(&self.b)?, lit(&self.x)?, lit(&self.lambda)?);
        if a == b {
            return Err(Error::DegenerateWindow(a.to_f64()));
        }
        let f = self.function.build(&ts)?;
        let weight = self.weight.build(&ts)?;
        let kernel = KernelSpec::new(weight, self.psi.clone(), lambda, a, b, KernelVariant::General)?;
        Scenario::new(&ts, f, kernel, x)
    }

    /// The arithmetic [`Arithmetic::Auto`] resolves to.
    pub fn resolved_arithmetic(&self) -> Arithmetic {
        match self.arithmetic {
            Arithmetic::Auto => {
                let discrete = self.scale.parse::<Descriptor>().map(|d| d.is_discrete()).unwrap_or(false);
                if discrete && self.function.is_exact() {
                    Arithmetic::Exact
                } else {
                    Arithmetic::Float
                }
            }
            a => a,
        }
    }

    pub fn describe(&self) -> String {
        format!(
            "#{} {} [{}, {}] x={} λ={} ψ={} w={} f={}",
            self.id, self.scale, self.a, self.b, self.x, self.lambda, self.psi, self.weight, self.function
        )
    }
}

/// A combination dropped by the hypothesis filter.
#[derive(Clone, Debug, PartialEq)]
pub struct Filtered {
    pub what: String,
    pub reason: String,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct GeneratedScenarios {
    pub scenarios: Vec<ScenarioSpec>,
    pub filtered: Vec<Filtered>,
}

fn render(r: &Rational) -> String {
    r.to_string()
}

fn checks_out(spec: &ScenarioSpec) -> Result<()> {
    match spec.resolved_arithmetic() {
        Arithmetic::Exact => spec.build::<Rational>().map(|_| ()),
        _ => spec.build::<f64>().map(|_| ()),
    }
}

/// Evaluation points of `[a, b]` under `rule`, in increasing order.
fn x_points(ts: &TimeScale<Rational>, a: &Rational, b: &Rational, rule: &XRule) -> Result<Vec<Rational>> {
    let mut pts: Vec<Rational> = match rule {
        XRule::All => {
            let mut v = Vec::new();
            for piece in ts.pieces(a, b)? {
                match piece {
                    Piece::Jump { t, .. } => v.push(t),
                    Piece::Dense { lo, hi } => {
                        let n = 8;
                        for i in 0..=n {
                            v.push(
                                lo.clone() + (hi.clone() - lo.clone()) * Rational::from_i64(i) / Rational::from_i64(n),
                            );
                        }
                    }
                }
            }
            let dense_here = |t: &Rational| ts.dense_segment_of(t).is_some();
            v.retain(|t| (t > a && t < b) || dense_here(t));
            v
        }
        XRule::Grid(n) => {
            let n = (*n).max(1) as i64;
            (0..=n)
                .map(|i| a.clone() + (b.clone() - a.clone()) * Rational::from_i64(i) / Rational::from_i64(n))
                .filter(|t| ts.contains(t))
                .collect()
        }
        XRule::Values(vals) => vals
            .iter()
            .map(|s| Rational::parse_literal(s).ok_or_else(|| Error::DomainError(format!("bad x literal `{s}`"))))
            .collect::<Result<Vec<_>>>()?,
    };
    pts.sort();
    pts.dedup();
    Ok(pts)
}

fn coeff(rng: &mut ChaCha8Rng) -> String {
    let k: i64 = rng.random_range(-8..=8);
    render(&(Rational::from_i64(k) / Rational::from_i64(4)))
}

fn random_poly(rng: &mut ChaCha8Rng, degree: usize) -> FunctionSpec {
    let mut cs: Vec<String> = (0..=degree).map(|_| coeff(rng)).collect();
    if degree > 0 && cs[degree] == "0" {
        cs[degree] = "1".into();
    }
    FunctionSpec::Poly(cs)
}

fn random_trig(rng: &mut ChaCha8Rng) -> FunctionSpec {
    let amp = rng.random_range(1..=4) as f64 / 2.0;
    let freq = rng.random_range(1..=6) as f64 / 2.0;
    if rng.random_bool(0.5) {
        FunctionSpec::Sin { amp, freq }
    } else {
        FunctionSpec::Cos { amp, freq }
    }
}

fn random_table(rng: &mut ChaCha8Rng, n: usize) -> FunctionSpec {
    FunctionSpec::Table((0..n).map(|_| coeff(rng)).collect())
}

/// Sub-seed for one labelled stream, so that adding a scale does not
/// reshuffle the draws of the others.
fn stream(seed: u64, label: &str) -> ChaCha8Rng {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in label.bytes() {
        h = (h ^ b as u64).wrapping_mul(0x0100_0000_01b3);
    }
    ChaCha8Rng::seed_from_u64(seed ^ h)
}

impl SweepPlan {
    /// Canonical text of the plan, hashed into report summaries.
    pub fn canonical(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "scales={}", self.scales.join("|"));
        if let Some((a, b)) = &self.window {
            let _ = writeln!(s, "window={a},{b}");
        }
        let fams: Vec<String> = self
            .functions
            .iter()
            .map(|f| match f {
                FunctionFamily::Spec(spec) => spec.to_string(),
                FunctionFamily::Polynomials { degree, count } => format!("random-poly:{degree}x{count}"),
                FunctionFamily::Trig { count } => format!("random-trig:{count}"),
                FunctionFamily::RandomTable { count } => format!("random-table:{count}"),
            })
            .collect();
        let _ = writeln!(s, "functions={}", fams.join("|"));
        let _ = writeln!(s, "psi={}", self.psis.iter().map(|p| p.to_string()).collect::<Vec<_>>().join("|"));
        let _ = writeln!(s, "weight={}", self.weights.iter().map(|w| w.to_string()).collect::<Vec<_>>().join("|"));
        let _ = writeln!(s, "lambda={}", self.lambdas.join("|"));
        let _ = writeln!(s, "x={:?}", self.x_rule);
        let _ = writeln!(s, "theorems={}", self.theorems.iter().map(|t| t.to_string()).collect::<Vec<_>>().join("|"));
        let _ = writeln!(s, "seed={}", self.seed);
        let _ = writeln!(s, "arithmetic={:?}", self.arithmetic);
        let _ = writeln!(s, "random={}", self.random_scenarios);
        let _ = writeln!(s, "eval={:?}", self.eval);
        s
    }

    fn check(&self) -> Result<()> {
        let empty = |what: &str| Err(Error::EmptyPlan(format!("no {what}")));
        if self.scales.is_empty() && self.random_scenarios == 0 {
            return empty("scales");
        }
        if self.functions.is_empty() && self.random_scenarios == 0 {
            return empty("functions");
        }
        if self.psis.is_empty() {
            return empty("ψ");
        }
        if self.weights.is_empty() {
            return empty("weights");
        }
        if self.lambdas.is_empty() {
            return empty("λ values");
        }
        if self.theorems.is_empty() {
            return empty("theorems");
        }
        Ok(())
    }

    fn functions_for(&self, scale: &str, ts: &TimeScale<Rational>, filtered: &mut Vec<Filtered>) -> Vec<FunctionSpec> {
        let mut rng = stream(self.seed, scale);
        let mut out = Vec::new();
        let n_points = if ts.is_discrete() { ts.segments().len() } else { 0 };
        for fam in &self.functions {
            match fam {
                FunctionFamily::Spec(spec) => out.push(spec.clone()),
                FunctionFamily::Polynomials { degree, count } => {
                    out.extend((0..*count).map(|_| random_poly(&mut rng, *degree)));
                }
                FunctionFamily::Trig { count } if !ts.is_discrete() => {
                    out.extend((0..*count).map(|_| random_trig(&mut rng)));
                }
                FunctionFamily::RandomTable { count } if ts.is_discrete() => {
                    out.extend((0..*count).map(|_| random_table(&mut rng, n_points)));
                }
                other => filtered.push(Filtered {
                    what: format!("{scale} {other:?}"),
                    reason: "function family does not apply to this scale".into(),
                }),
            }
        }
        out
    }

    /// Expands the plan into validated scenarios. Combinations that fail a
    /// hypothesis are counted in `filtered`, not emitted.
    pub fn generate(&self) -> Result<GeneratedScenarios> {
        self.check()?;
        let mut out = GeneratedScenarios::default();
        for scale in &self.scales {
            let ts: TimeScale<Rational> = parse_scale(scale)?;
            let (a, b) = match &self.window {
                Some((a, b)) => {
                    let p = |s: &str| {
                        Rational::parse_literal(s)
                            .ok_or_else(|| Error::DomainError(format!("bad window literal `{s}`")))
                    };
                    (p(a)?, p(b)?)
                }
                None => (ts.min().clone(), ts.max().clone()),
            };
            if a >= b {
                out.filtered.push(Filtered {
                    what: format!("{scale} [{}, {}]", render(&a), render(&b)),
                    reason: Error::DegenerateWindow(a.to_f64()).to_string(),
                });
                continue;
            }
            if !ts.contains(&a) || !ts.contains(&b) {
                out.filtered.push(Filtered {
                    what: format!("{scale} [{}, {}]", render(&a), render(&b)),
                    reason: "window endpoints must be scale points".into(),
                });
                continue;
            }
            let xs = x_points(&ts, &a, &b, &self.x_rule)?;
            let functions = self.functions_for(scale, &ts, &mut out.filtered);
            for function in &functions {
                for psi in &self.psis {
                    for weight in &self.weights {
                        for lambda in &self.lambdas {
                            for x in &xs {
                                let spec = ScenarioSpec {
                                    id: out.scenarios.len(),
                                    scale: scale.clone(),
                                    a: render(&a),
                                    b: render(&b),
                                    x: render(x),
                                    lambda: lambda.clone(),
                                    psi: psi.clone(),
                                    weight: weight.clone(),
                                    function: function.clone(),
                                    arithmetic: self.arithmetic,
                                };
                                match checks_out(&spec) {
                                    Ok(()) => out.scenarios.push(spec),
                                    Err(e) => {
                                        out.filtered.push(Filtered { what: spec.describe(), reason: e.to_string() })
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        let mut rng = stream(self.seed, "random-scenarios");
        let target = out.scenarios.len() + self.random_scenarios;
        let mut attempts = 0usize;
        while out.scenarios.len() < target {
            attempts += 1;
            if attempts > 50 * self.random_scenarios.max(1) {
                return Err(Error::EmptyPlan("random generation keeps failing the hypothesis filter".into()));
            }
            let mut spec = random_scenario(&mut rng, &self.psis, &self.lambdas);
            spec.id = out.scenarios.len();
            spec.arithmetic = self.arithmetic;
            match checks_out(&spec) {
                Ok(()) => out.scenarios.push(spec),
                Err(e) => out.filtered.push(Filtered { what: spec.describe(), reason: e.to_string() }),
            }
        }
        Ok(out)
    }
}

/// Sorted distinct integers from a window of width 12, at least two.
fn random_points(rng: &mut ChaCha8Rng, lo: i64, k: usize) -> Vec<i64> {
    let pool: Vec<i64> = (lo..lo + 12).collect();
    let mut pts: Vec<i64> = pool.choose_multiple(rng, k.max(2)).copied().collect();
    pts.sort();
    pts
}

/// Random descriptor: an interval of ℝ, an integer window, a `q`-scale
/// (`q` ∈ {2, 3}), a random discrete set, or one interval with up to five
/// scattered points.
pub fn random_scale(rng: &mut ChaCha8Rng) -> String {
    match rng.random_range(0..6) {
        0 => {
            let lo: i64 = rng.random_range(-2..=1);
            let len: i64 = rng.random_range(1..=3);
            format!("R[{lo},{}]", lo + len)
        }
        1 => {
            let lo: i64 = rng.random_range(-3..=2);
            format!("Z[{lo},{}]", lo + rng.random_range(2..=8))
        }
        2 | 3 => {
            let q = if rng.random_bool(0.5) { 2 } else { 3 };
            let m: i64 = rng.random_range(-1..=1);
            format!("Q({q})[{m},{}]", m + rng.random_range(2..=4))
        }
        4 => {
            let k = rng.random_range(3..=7);
            let lo = rng.random_range(-3..=0);
            let pts = random_points(rng, lo, k);
            format!("U({})", pts.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(";"))
        }
        _ => {
            let lo: i64 = rng.random_range(-1..=1);
            let hi = lo + rng.random_range(1..=2);
            let k = rng.random_range(1..=5);
            let mut members = vec![format!("R[{lo},{hi}]")];
            let after = random_points(rng, hi + 1, k);
            members.extend(after.iter().take(k).map(|p| p.to_string()));
            format!("U({})", members.join(";"))
        }
    }
}

/// Scale points and dense-grid points of `ts` in `[a, b]`.
fn candidate_points(ts: &TimeScale<Rational>, a: &Rational, b: &Rational) -> Vec<Rational> {
    let mut v = vec![a.clone(), b.clone()];
    if let Ok(pieces) = ts.pieces(a, b) {
        for piece in pieces {
            match piece {
                Piece::Jump { t, .. } => v.push(t),
                Piece::Dense { lo, hi } => {
                    for i in 0..=16 {
                        v.push(lo.clone() + (hi.clone() - lo.clone()) * Rational::from_i64(i) / Rational::from_i64(16));
                    }
                }
            }
        }
    }
    v.sort();
    v.dedup();
    v
}

/// Patches `spec` at the right neighbour of every dense piece that ends
/// at a right-scattered point, so that `f^Δ` is continuous there:
/// `f(σ(t)) = f(t) + μ(t) f'(t⁻)`. Specs without an analytic slope are
/// returned unchanged.
pub fn smooth_across_gaps(ts: &TimeScale<Rational>, spec: FunctionSpec) -> FunctionSpec {
    let mut points = Vec::new();
    let Ok(f) = spec.build(ts) else { return spec };
    let Some(d1) = f.d1().cloned() else { return spec };
    for seg in ts.segments() {
        let crate::timescale::Segment::Dense { hi, .. } = seg else { continue };
        let Ok(next) = ts.sigma(hi) else { continue };
        if next == *hi {
            continue;
        }
        let v = f.eval(hi) + (next.clone() - hi.clone()) * d1(hi);
        let v = if spec.is_exact() { render(&v) } else { format!("{:?}", v.to_f64()) };
        points.push((render(&next), v));
    }
    if points.is_empty() {
        spec
    } else {
        FunctionSpec::Patched { base: Box::new(spec), points }
    }
}

/// One random scenario; the caller applies the hypothesis filter.
pub fn random_scenario(rng: &mut ChaCha8Rng, psis: &[ParameterFunction], lambdas: &[String]) -> ScenarioSpec {
    let scale = random_scale(rng);
    let ts: TimeScale<Rational> = parse_scale(&scale).expect("generated descriptor parses");
    let all = candidate_points(&ts, ts.min(), ts.max());
    let i = rng.random_range(0..all.len() - 1);
    let j = rng.random_range(i + 1..all.len());
    let (a, b) = (all[i].clone(), all[j].clone());
    let inside = candidate_points(&ts, &a, &b);
    let x = inside.choose(rng).expect("non-empty").clone();
    let discrete = ts.is_discrete();
    let function = match rng.random_range(0..10) {
        0 | 1 if !discrete => random_trig(rng),
        0 if discrete => random_table(rng, ts.segments().len()),
        _ => {
            let degree = rng.random_range(0..=4);
            random_poly(rng, degree)
        }
    };
    let function = smooth_across_gaps(&ts, function);
    let weight = if a > Rational::from_i64(0) && rng.random_bool(0.25) {
        WeightSpec::Quadratic("0".into())
    } else {
        WeightSpec::Unit
    };
    let psi = psis.choose(rng).cloned().unwrap_or_else(ParameterFunction::identity);
    let lambda = lambdas.choose(rng).cloned().unwrap_or_else(|| "0".into());
    ScenarioSpec {
        id: 0,
        scale,
        a: render(&a),
        b: render(&b),
        x: render(&x),
        lambda,
        psi,
        weight,
        function,
        arithmetic: Arithmetic::Auto,
    }
}
