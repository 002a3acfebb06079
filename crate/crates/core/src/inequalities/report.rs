use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::format_sig12;

/// Tolerances shared by every evaluator.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Tolerances {
    /// Target accuracy of dense quadrature, also the floor for "zero".
    pub tol_quad: f64,
    /// Allowed negative slack, absolute and relative to `|rhs|`.
    pub tol_ineq: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { tol_quad: 1e-10, tol_ineq: 1e-8 }
    }
}

impl Tolerances {
    /// Largest negative slack still counted as holding.
    pub fn allowance(&self, rhs: f64) -> f64 {
        self.tol_ineq * (1.0 + rhs.abs())
    }

    pub fn holds(&self, lhs: f64, rhs: f64) -> bool {
        rhs - lhs >= -self.allowance(rhs)
    }

    /// Parses `tol_quad=1e-9,tol_ineq=1e-7` (either key optional) on top of `self`.
    pub fn with_overrides(mut self, text: &str) -> Result<Self> {
        for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| Error::DomainError(format!("tolerance override `{item}` needs key=value")))?;
            let v: f64 =
                value.trim().parse().map_err(|_| Error::DomainError(format!("tolerance `{value}` is not a number")))?;
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::DomainError(format!("tolerance `{key}` must be positive")));
            }
            match key.trim() {
                "tol_quad" => self.tol_quad = v,
                "tol_ineq" => self.tol_ineq = v,
                other => return Err(Error::DomainError(format!("unknown tolerance `{other}`"))),
            }
        }
        Ok(self)
    }
}

/// Specialised inequalities, each evaluated from its own closed form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum CorollaryId {
    /// `w = t`, `ψ = id`, kernel moments through `h_2`.
    MidpointLambda,
    /// The `λ = 0` case of [`CorollaryId::MidpointLambda`].
    DragomirBarnett,
    /// Second-order bound on an interval of ℝ with classical integrals.
    RealWeighted,
    /// Second-order bound on an integer window with plain sums.
    IntegerWeighted,
    /// Second-order bound on a `q`-power window with Jackson sums.
    QuantumWeighted,
    /// Grüss-type bound with `w = t² + c`, `ν = σ(t) + t`, `ψ = id`.
    QuadraticWeightGruss,
    /// The `λ = 0` case of [`CorollaryId::QuadraticWeightGruss`].
    QuadraticWeightGrussLambda0,
    RealGruss,
    IntegerGruss,
    QuantumGruss,
}

impl CorollaryId {
    pub const ALL: [CorollaryId; 10] = [
        CorollaryId::MidpointLambda,
        CorollaryId::DragomirBarnett,
        CorollaryId::RealWeighted,
        CorollaryId::IntegerWeighted,
        CorollaryId::QuantumWeighted,
        CorollaryId::QuadraticWeightGruss,
        CorollaryId::QuadraticWeightGrussLambda0,
        CorollaryId::RealGruss,
        CorollaryId::IntegerGruss,
        CorollaryId::QuantumGruss,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CorollaryId::MidpointLambda => "midpoint-lambda",
            CorollaryId::DragomirBarnett => "dragomir-barnett",
            CorollaryId::RealWeighted => "real-weighted",
            CorollaryId::IntegerWeighted => "integer-weighted",
            CorollaryId::QuantumWeighted => "quantum-weighted",
            CorollaryId::QuadraticWeightGruss => "quadratic-weight-gruss",
            CorollaryId::QuadraticWeightGrussLambda0 => "quadratic-weight-gruss-lambda0",
            CorollaryId::RealGruss => "real-gruss",
            CorollaryId::IntegerGruss => "integer-gruss",
            CorollaryId::QuantumGruss => "quantum-gruss",
        }
    }

    /// The general theorem this corollary specialises.
    pub fn parent(self) -> TheoremId {
        match self {
            CorollaryId::MidpointLambda
            | CorollaryId::DragomirBarnett
            | CorollaryId::RealWeighted
            | CorollaryId::IntegerWeighted
            | CorollaryId::QuantumWeighted => TheoremId::WeightedOstrowski,
            _ => TheoremId::OstrowskiGruss,
        }
    }

    fn alias(text: &str) -> Option<Self> {
        Some(match text {
            "corthm1" => CorollaryId::MidpointLambda,
            "corDB" => CorollaryId::DragomirBarnett,
            "cor1" => CorollaryId::RealWeighted,
            "cor2" => CorollaryId::IntegerWeighted,
            "Ineqcor3" => CorollaryId::QuantumWeighted,
            "corMR2" => CorollaryId::QuadraticWeightGruss,
            "corMR2-lambda0" => CorollaryId::QuadraticWeightGrussLambda0,
            "cor3" => CorollaryId::RealGruss,
            "cor4" => CorollaryId::IntegerGruss,
            "cor5" => CorollaryId::QuantumGruss,
            _ => return None,
        })
    }
}

impl fmt::Display for CorollaryId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.as_str())
    }
}

impl FromStr for CorollaryId {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let text = text.trim();
        CorollaryId::ALL
            .into_iter()
            .find(|c| c.as_str() == text)
            .or_else(|| CorollaryId::alias(text))
            .ok_or_else(|| Error::UnknownCorollary(text.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum TheoremId {
    /// Second-order weighted Ostrowski bound with constant `sup |f^ΔΔ|`.
    WeightedOstrowski,
    /// Ostrowski–Grüss bound through the Cauchy–Schwarz inequality.
    OstrowskiGruss,
    /// First-order weighted Ostrowski bound with constant `sup |f^Δ|`.
    FirstOrder,
    Corollary(CorollaryId),
}

impl TheoremId {
    pub fn as_str(&self) -> &'static str {
        match self {
            TheoremId::WeightedOstrowski => "weighted-ostrowski",
            TheoremId::OstrowskiGruss => "ostrowski-gruss",
            TheoremId::FirstOrder => "first-order",
            TheoremId::Corollary(c) => c.as_str(),
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.as_str())
    }
}

impl FromStr for TheoremId {
    type Err = Error;

    /// Accepts the ids printed by [`TheoremId::as_str`] plus the short names
    /// `IneqMR1`, `IneqMR2` and `Nwaeze` used in older configs.
    fn from_str(text: &str) -> Result<Self> {
        let text = text.trim();
        match text {
            "weighted-ostrowski" | "IneqMR1" => Ok(TheoremId::WeightedOstrowski),
            "ostrowski-gruss" | "IneqMR2" => Ok(TheoremId::OstrowskiGruss),
            "first-order" | "Nwaeze" => Ok(TheoremId::FirstOrder),
            other => other
                .parse::<CorollaryId>()
                .map(TheoremId::Corollary)
                .map_err(|_| Error::UnknownCorollary(format!("unknown theorem id `{other}`"))),
        }
    }
}

/// Agreement between a corollary and the general theorem on the same input.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Consistency {
    pub against: TheoremId,
    pub lhs: f64,
    pub rhs: f64,
    pub lhs_diff: f64,
    pub rhs_diff: f64,
    /// Both differences within `tol_ineq * (1 + max magnitude)`.
    pub agrees: bool,
}

/// Where a scenario lives, copied into each report for serialisation.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct ScenarioContext {
    pub scale: String,
    pub a: f64,
    pub b: f64,
    pub x: f64,
    pub lambda: f64,
    pub psi: String,
    pub weight: String,
    pub function: String,
}

/// Both sides of one evaluated inequality.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InequalityReport {
    pub theorem_id: TheoremId,
    pub context: ScenarioContext,
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs − lhs`.
    pub slack: f64,
    pub holds: bool,
    /// Verdict of the exact comparison, when the run used exact arithmetic.
    pub exact_holds: Option<bool>,
    #[serde(rename = "M")]
    pub m: Option<f64>,
    pub intermediates: BTreeMap<String, f64>,
    pub approx_flags: BTreeSet<String>,
    pub consistency: Option<Consistency>,
}

/// CSV header, in the fixed column order.
pub const CSV_HEADER: [&str; 14] = [
    "theorem_id",
    "scale",
    "a",
    "b",
    "x",
    "lambda",
    "psi",
    "weight",
    "lhs",
    "rhs",
    "slack",
    "holds",
    "M",
    "approx_flags",
];

impl InequalityReport {
    pub(crate) fn new(theorem_id: TheoremId, context: ScenarioContext) -> Self {
        InequalityReport {
            theorem_id,
            context,
            lhs: 0.0,
            rhs: 0.0,
            slack: 0.0,
            holds: true,
            exact_holds: None,
            m: None,
            intermediates: BTreeMap::new(),
            approx_flags: BTreeSet::new(),
            consistency: None,
        }
    }

    pub(crate) fn note(&mut self, name: &str, value: f64) {
        self.intermediates.insert(name.to_string(), value);
    }

    pub(crate) fn flag(&mut self, name: &str) {
        self.approx_flags.insert(name.to_string());
    }

    /// Sets both sides, slack and the holds flag.
    pub(crate) fn finish(&mut self, lhs: f64, rhs: f64, exact_holds: Option<bool>, tol: &Tolerances) {
        self.lhs = lhs;
        self.rhs = rhs;
        self.slack = rhs - lhs;
        self.exact_holds = exact_holds;
        self.holds = tol.holds(lhs, rhs) && exact_holds != Some(false);
    }

    /// `lhs / max(rhs, floor)`, the sharpness objective.
    pub fn ratio(&self, floor: f64) -> f64 {
        self.lhs / self.rhs.max(floor)
    }

    pub fn csv_record(&self) -> [String; 14] {
        let c = &self.context;
        [
            self.theorem_id.to_string(),
            c.scale.clone(),
            format_sig12(c.a),
            format_sig12(c.b),
            format_sig12(c.x),
            format_sig12(c.lambda),
            c.psi.clone(),
            c.weight.clone(),
            format_sig12(self.lhs),
            format_sig12(self.rhs),
            format_sig12(self.slack),
            self.holds.to_string(),
            self.m.map(format_sig12).unwrap_or_default(),
            self.approx_flags.iter().cloned().collect::<Vec<_>>().join(";"),
        ]
    }

    /// Flat JSON object with the CSV columns first, then the intermediates.
    pub fn to_json(&self) -> serde_json::Value {
        let mut map = serde_json::Map::new();
        let c = &self.context;
        map.insert("theorem_id".into(), self.theorem_id.to_string().into());
        map.insert("scale".into(), c.scale.clone().into());
        map.insert("a".into(), c.a.into());
        map.insert("b".into(), c.b.into());
        map.insert("x".into(), c.x.into());
        map.insert("lambda".into(), c.lambda.into());
        map.insert("psi".into(), c.psi.clone().into());
        map.insert("weight".into(), c.weight.clone().into());
        map.insert("lhs".into(), self.lhs.into());
        map.insert("rhs".into(), self.rhs.into());
        map.insert("slack".into(), self.slack.into());
        map.insert("holds".into(), self.holds.into());
        map.insert("M".into(), self.m.into());
        map.insert("approx_flags".into(), self.approx_flags.iter().cloned().collect::<Vec<_>>().join(";").into());
        map.insert("function".into(), c.function.clone().into());
        if let Some(e) = self.exact_holds {
            map.insert("exact_holds".into(), e.into());
        }
        for (k, v) in &self.intermediates {
            map.insert(k.clone(), (*v).into());
        }
        if let Some(cons) = &self.consistency {
            map.insert("consistent_with".into(), cons.against.to_string().into());
            map.insert("consistency_lhs_diff".into(), cons.lhs_diff.into());
            map.insert("consistency_rhs_diff".into(), cons.rhs_diff.into());
            map.insert("consistent".into(), cons.agrees.into());
        }
        serde_json::Value::Object(map)
    }

    /// One-line human summary, e.g. `lhs=0.083333, rhs=0.145833, HOLDS`.
    pub fn summary_line(&self) -> String {
        format!("lhs={:.6}, rhs={:.6}, {}", self.lhs, self.rhs, if self.holds { "HOLDS" } else { "VIOLATED" })
    }
}
