//! Line-oriented `key = value` configs with optional `[section]` headers.
//!
//! ```text
//! # desk case
//! scale  = R[0,1]
//! f      = poly:0,0,1
//! x      = 1/2
//! theorem = IneqMR1
//!
//! [output]
//! csv = out/desk.csv
//! ```
//!
//! Spec lists (`scale`, `f`, `weight`, `psi`) are separated by `;` outside
//! brackets, because descriptors and coefficient lists contain commas.
//! Number and id lists (`lambda`, `x`, `theorem`) take `,` or `;`. Repeating
//! a list key appends to it.

use std::path::PathBuf;

use thiserror::Error;

use crate::harness::{Arithmetic, FunctionFamily, SweepPlan, XRule};
use crate::inequalities::{SupDomain, TheoremId};
use crate::kernels::{ParameterFunction, WeightSpec};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid config: {0}")]
    Validation(String),
}

/// A parsed config: the plan plus output paths.
#[derive(Clone, Debug, PartialEq)]
pub struct Config {
    pub plan: SweepPlan,
    pub out_csv: Option<PathBuf>,
    pub out_json: Option<PathBuf>,
}

const SECTIONS: [(&str, &[&str]); 5] = [
    (
        "scenario",
        &[
            "scale",
            "window",
            "f",
            "function",
            "weight",
            "psi",
            "lambda",
            "x",
            "theorem",
            "seed",
            "arithmetic",
            "random",
        ],
    ),
    (
        "sweep",
        &[
            "scale",
            "window",
            "f",
            "function",
            "weight",
            "psi",
            "lambda",
            "x",
            "theorem",
            "seed",
            "arithmetic",
            "random",
        ],
    ),
    ("eval", &["sup_domain", "n_grid", "M", "debug_corrupt_kernel"]),
    ("tolerances", &["tol_quad", "tol_ineq"]),
    ("output", &["csv", "json"]),
];

fn allowed(section: Option<&str>, key: &str) -> bool {
    match section {
        None => SECTIONS.iter().any(|(_, keys)| keys.contains(&key)),
        Some(s) => SECTIONS.iter().any(|(name, keys)| *name == s && keys.contains(&key)),
    }
}

/// Splits on `sep` outside `()` and `[]`, trimming and dropping empties.
fn split_top(s: &str, sep: char) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for c in s.chars() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            _ => {}
        }
        if c == sep && depth == 0 {
            out.push(std::mem::take(&mut cur));
        } else {
            cur.push(c);
        }
    }
    out.push(cur);
    out.into_iter().map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect()
}

fn simple_list(s: &str) -> Vec<String> {
    s.split([',', ';']).map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect()
}

fn parse_family(text: &str) -> Result<FunctionFamily, String> {
    let count = |s: Option<&str>| -> Result<usize, String> {
        s.map_or(Ok(1), |c| c.trim().parse().map_err(|_| format!("bad count in `{text}`")))
    };
    let mut parts = text.split(':');
    match parts.next().map(str::trim) {
        Some("random-poly") => {
            let degree = parts
                .next()
                .ok_or_else(|| format!("`{text}` needs a degree"))?
                .trim()
                .parse()
                .map_err(|_| format!("bad degree in `{text}`"))?;
            Ok(FunctionFamily::Polynomials { degree, count: count(parts.next())? })
        }
        Some("random-trig") => Ok(FunctionFamily::Trig { count: count(parts.next())? }),
        Some("random-table") => Ok(FunctionFamily::RandomTable { count: count(parts.next())? }),
        _ => text.parse().map(FunctionFamily::Spec).map_err(|e: crate::Error| e.to_string()),
    }
}

fn bool_value(s: &str) -> Result<bool, String> {
    match s {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(format!("expected true or false, got `{s}`")),
    }
}

/// Parses and validates a config.
pub fn parse_config(text: &str) -> Result<Config, ConfigError> {
    let mut plan = SweepPlan {
        psis: Vec::new(),
        weights: Vec::new(),
        lambdas: Vec::new(),
        theorems: Vec::new(),
        ..SweepPlan::default()
    };
    let mut out_csv = None;
    let mut out_json = None;
    let mut section: Option<String> = None;
    let mut lambda_lines = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let perr = |message: String| ConfigError::Parse { line, message };
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(name) = content.strip_prefix('[') {
            let name = name.strip_suffix(']').ok_or_else(|| perr("unterminated section header".into()))?.trim();
            if !SECTIONS.iter().any(|(s, _)| *s == name) {
                return Err(perr(format!("unknown section `[{name}]`")));
            }
            section = Some(name.to_string());
            continue;
        }
        let (key, value) =
            content.split_once('=').ok_or_else(|| perr(format!("expected `key = value`, got `{content}`")))?;
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() {
            return Err(perr("missing key".into()));
        }
        if !allowed(section.as_deref(), key) {
            let place = section.as_ref().map(|s| format!(" in [{s}]")).unwrap_or_default();
            return Err(ConfigError::Validation(format!("unknown key `{key}`{place} (line {line})")));
        }
        if value.is_empty() {
            return Err(perr(format!("`{key}` has no value")));
        }
        let num = |v: &str| -> Result<f64, ConfigError> {
            f64::parse_literal(v).ok_or_else(|| perr(format!("`{key}`: `{v}` is not a number")))
        };
        match key {
            "scale" => {
                for d in split_top(value, ';') {
                    d.parse::<crate::timescale::Descriptor>().map_err(|e| perr(e.to_string()))?;
                    plan.scales.push(d);
                }
            }
            "window" => {
                let v = simple_list(value);
                if v.len() != 2 {
                    return Err(perr("`window` takes two endpoints `a, b`".into()));
                }
                num(&v[0])?;
                num(&v[1])?;
                plan.window = Some((v[0].clone(), v[1].clone()));
            }
            "f" | "function" => {
                for t in split_top(value, ';') {
                    plan.functions.push(parse_family(&t).map_err(perr)?);
                }
            }
            "weight" => {
                for t in split_top(value, ';') {
                    plan.weights.push(t.parse::<WeightSpec>().map_err(|e| perr(e.to_string()))?);
                }
            }
            "psi" => {
                for t in split_top(value, ';') {
                    plan.psis.push(t.parse::<ParameterFunction>().map_err(|e| perr(e.to_string()))?);
                }
            }
            "lambda" => {
                for t in simple_list(value) {
                    num(&t)?;
                    lambda_lines.push((line, t));
                }
            }
            "x" => {
                plan.x_rule = match value {
                    "all" => XRule::All,
                    v if v.starts_with("grid:") => {
                        XRule::Grid(v[5..].trim().parse().map_err(|_| perr(format!("bad grid size in `{v}`")))?)
                    }
                    v => {
                        let vals = simple_list(v);
                        for t in &vals {
                            num(t)?;
                        }
                        match &mut plan.x_rule {
                            XRule::Values(prev) => {
                                prev.extend(vals);
                                XRule::Values(std::mem::take(prev))
                            }
                            _ => XRule::Values(vals),
                        }
                    }
                }
            }
            "theorem" => {
                for t in simple_list(value) {
                    plan.theorems.push(t.parse::<TheoremId>().map_err(|e| perr(e.to_string()))?);
                }
            }
            "seed" => plan.seed = value.parse().map_err(|_| perr(format!("bad seed `{value}`")))?,
            "random" => plan.random_scenarios = value.parse().map_err(|_| perr(format!("bad count `{value}`")))?,
            "arithmetic" => {
                plan.arithmetic = match value {
                    "auto" => Arithmetic::Auto,
                    "float" => Arithmetic::Float,
                    "exact" => Arithmetic::Exact,
                    _ => return Err(perr(format!("arithmetic must be auto, float or exact, got `{value}`"))),
                }
            }
            "sup_domain" => {
                plan.eval.sup_domain = match value {
                    "half-open" => SupDomain::HalfOpen,
                    "open" => SupDomain::Open,
                    _ => return Err(perr(format!("sup_domain must be half-open or open, got `{value}`"))),
                }
            }
            "n_grid" => plan.eval.n_grid = value.parse().map_err(|_| perr(format!("bad n_grid `{value}`")))?,
            "M" => {
                let m = num(value)?;
                if m < 0.0 {
                    return Err(ConfigError::Validation("M must be non-negative".into()));
                }
                plan.eval.m_override = Some(m);
            }
            "debug_corrupt_kernel" => {
                if bool_value(value).map_err(perr)? {
                    plan.eval.bound_kernel_scale = Some(0.1);
                }
            }
            "tol_quad" => plan.eval.tolerances.tol_quad = num(value)?,
            "tol_ineq" => plan.eval.tolerances.tol_ineq = num(value)?,
            "csv" => out_csv = Some(PathBuf::from(value)),
            "json" => out_json = Some(PathBuf::from(value)),
            _ => unreachable!("key table and match arms disagree on `{key}`"),
        }
    }

    for (line, l) in &lambda_lines {
        let v = f64::parse_literal(l).unwrap_or(f64::NAN);
        if !(0.0..=1.0).contains(&v) {
            return Err(ConfigError::Validation(format!("λ must lie in [0,1], got {l} (line {line})")));
        }
    }
    plan.lambdas = lambda_lines.into_iter().map(|(_, l)| l).collect();
    if plan.lambdas.is_empty() {
        plan.lambdas.push("0".into());
    }
    if plan.psis.is_empty() {
        plan.psis.push(ParameterFunction::identity());
    }
    if plan.weights.is_empty() {
        plan.weights.push(WeightSpec::Unit);
    }
    if plan.theorems.is_empty() {
        plan.theorems.push(TheoremId::WeightedOstrowski);
    }
    if plan.scales.is_empty() && plan.random_scenarios == 0 {
        return Err(ConfigError::Validation("no `scale` given".into()));
    }
    if plan.functions.is_empty() && plan.random_scenarios == 0 {
        return Err(ConfigError::Validation("no function `f` given".into()));
    }
    let t = &plan.eval.tolerances;
    if !(t.tol_quad > 0.0 && t.tol_ineq > 0.0) {
        return Err(ConfigError::Validation("tolerances must be positive".into()));
    }
    Ok(Config { plan, out_csv, out_json })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config() {
        let c = parse_config("scale=R[0,1]\nf=poly:0,0,1\ntheorem=IneqMR1\n").unwrap();
        assert_eq!(c.plan.scales, ["R[0,1]"]);
        assert_eq!(c.plan.theorems, [TheoremId::WeightedOstrowski]);
        assert_eq!(c.plan.x_rule, XRule::All);
        assert_eq!(c.out_csv, None);
    }

    #[test]
    fn lists_sections_and_comments() {
        let text = "\
# two scales, a hybrid among them
scale = Z[0,4]; U(R[0,1];2;3)
f = poly:0,1 ; poly:0,0,1@2=3
f = random-poly:3:2
psi = id; pow:2; const:0.5
lambda = 0, 1/2, 1
x = grid:4
theorem = IneqMR1, IneqMR2, first-order
seed = 9

[eval]
sup_domain = open
debug_corrupt_kernel = true

[tolerances]
tol_ineq = 1e-7

[output]
csv = out.csv
json = out.json
";
        let c = parse_config(text).unwrap();
        assert_eq!(c.plan.scales.len(), 2);
        assert_eq!(c.plan.functions.len(), 3);
        assert_eq!(c.plan.psis.len(), 3);
        assert_eq!(c.plan.lambdas, ["0", "1/2", "1"]);
        assert_eq!(c.plan.x_rule, XRule::Grid(4));
        assert_eq!(c.plan.theorems.len(), 3);
        assert_eq!(c.plan.seed, 9);
        assert_eq!(c.plan.eval.sup_domain, SupDomain::Open);
        assert_eq!(c.plan.eval.bound_kernel_scale, Some(0.1));
        assert_eq!(c.plan.eval.tolerances.tol_ineq, 1e-7);
        assert_eq!(c.out_json, Some(PathBuf::from("out.json")));
    }

    #[test]
    fn unknown_key_is_named() {
        let err = parse_config("scale=R[0,1]\nf=poly:0,1\nkernel_shape = tent\n").unwrap_err();
        assert!(matches!(&err, ConfigError::Validation(m) if m.contains("kernel_shape")), "{err}");
        let err = parse_config("[output]\nscale=R[0,1]\n").unwrap_err();
        assert!(matches!(err, ConfigError::Validation(_)));
    }

    #[test]
    fn lambda_out_of_range() {
        let err = parse_config("scale=R[0,1]\nf=poly:0,1\nlambda=1.5\n").unwrap_err();
        assert!(err.to_string().contains("λ must lie in [0,1]"), "{err}");
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = parse_config("scale=R[0,1]\n\nthis line has no equals\n").unwrap_err();
        assert_eq!(
            err,
            ConfigError::Parse { line: 3, message: "expected `key = value`, got `this line has no equals`".into() }
        );
        let err = parse_config("scale=R[0,1\n").unwrap_err();
        assert!(matches!(err, ConfigError::Parse { line: 1, .. }));
        let err = parse_config("scale=R[0,1]\nf=poly:0,1\nx=1/2\n[bogus]\n").unwrap_err();
        assert!(matches!(err, ConfigError::Parse { line: 4, .. }));
    }
}
