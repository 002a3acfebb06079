//! Text descriptors for time scales.
//!
//! ```text
//! R[a,b]           dense closed interval
//! Z[a,b]           integers a..=b
//! Q(q)[m,n]        quantum points q^m, ..., q^n  (q > 1)
//! t                a single point
//! U(seg;seg;...)   union of the above
//! ```

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::timescale::scale::{Continuation, Segment, TimeScale};

/// Parsed scale descriptor. Numeric literals are kept as text so that
/// building in exact arithmetic does not go through `f64`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Descriptor {
    Real { lo: String, hi: String },
    Integer { lo: i64, hi: i64 },
    Quantum { q: String, m: i64, n: i64 },
    Point(String),
    Union(Vec<Descriptor>),
}

fn err(text: &str, reason: impl Into<String>) -> Error {
    Error::Descriptor { text: text.to_string(), reason: reason.into() }
}

fn check_literal(text: &str, lit: &str) -> Result<String> {
    let lit = lit.trim();
    f64::parse_literal(lit).ok_or_else(|| err(text, format!("`{lit}` is not a number")))?;
    Ok(lit.to_string())
}

fn bracket_pair<'a>(text: &str, body: &'a str) -> Result<(&'a str, &'a str)> {
    let inner =
        body.strip_prefix('[').and_then(|b| b.strip_suffix(']')).ok_or_else(|| err(text, "expected `[lo,hi]`"))?;
    inner.split_once(',').ok_or_else(|| err(text, "expected two comma separated bounds"))
}

fn parse_int(text: &str, s: &str) -> Result<i64> {
    s.trim().parse().map_err(|_| err(text, format!("`{}` is not an integer", s.trim())))
}

fn split_top_level(s: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            ';' if depth == 0 => {
                parts.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(&s[start..]);
    parts
}

impl FromStr for Descriptor {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if let Some(body) = s.strip_prefix('R') {
            let (lo, hi) = bracket_pair(text, body)?;
            let (lo, hi) = (check_literal(text, lo)?, check_literal(text, hi)?);
            if f64::parse_literal(&lo) >= f64::parse_literal(&hi) {
                return Err(err(text, "dense interval needs lo < hi"));
            }
            return Ok(Descriptor::Real { lo, hi });
        }
        if let Some(body) = s.strip_prefix('Z') {
            let (lo, hi) = bracket_pair(text, body)?;
            let (lo, hi) = (parse_int(text, lo)?, parse_int(text, hi)?);
            if lo > hi {
                return Err(err(text, "integer window needs lo <= hi"));
            }
            return Ok(Descriptor::Integer { lo, hi });
        }
        if let Some(body) = s.strip_prefix("Q(") {
            let (q, rest) = body.split_once(')').ok_or_else(|| err(text, "expected `Q(q)[m,n]`"))?;
            let q = check_literal(text, q)?;
            if f64::parse_literal(&q).is_none_or(|v| v <= 1.0) {
                return Err(err(text, "quantum scale needs q > 1"));
            }
            let (m, n) = bracket_pair(text, rest)?;
            let (m, n) = (parse_int(text, m)?, parse_int(text, n)?);
            if m > n {
                return Err(err(text, "quantum window needs m <= n"));
            }
            return Ok(Descriptor::Quantum { q, m, n });
        }
        if let Some(body) = s.strip_prefix("U(") {
            let inner = body.strip_suffix(')').ok_or_else(|| err(text, "unterminated union"))?;
            let mut members = Vec::new();
            for part in split_top_level(inner) {
                if part.is_empty() {
                    return Err(err(text, "empty union member"));
                }
                match part.parse::<Descriptor>()? {
                    Descriptor::Union(inner) => members.extend(inner),
                    d => members.push(d),
                }
            }
            if members.is_empty() {
                return Err(err(text, "empty union"));
            }
            return Ok(Descriptor::Union(members));
        }
        if s.is_empty() {
            return Err(err(text, "empty descriptor"));
        }
        Ok(Descriptor::Point(check_literal(text, &s)?))
    }
}

impl fmt::Display for Descriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Descriptor::Real { lo, hi } => write!(f, "R[{lo},{hi}]"),
            Descriptor::Integer { lo, hi } => write!(f, "Z[{lo},{hi}]"),
            Descriptor::Quantum { q, m, n } => write!(f, "Q({q})[{m},{n}]"),
            Descriptor::Point(p) => write!(f, "{p}"),
            Descriptor::Union(members) => {
                write!(f, "U(")?;
                for (i, m) in members.iter().enumerate() {
                    if i > 0 {
                        write!(f, ";")?;
                    }
                    write!(f, "{m}")?;
                }
                write!(f, ")")
            }
        }
    }
}

impl Descriptor {
    fn literal<S: Scalar>(&self, lit: &str) -> Result<S> {
        S::parse_literal(lit).ok_or_else(|| err(&self.to_string(), format!("`{lit}` is not a number")))
    }

    fn collect<S: Scalar>(&self, out: &mut Vec<(Segment<S>, Continuation<S>)>) -> Result<()> {
        match self {
            Descriptor::Real { lo, hi } => {
                out.push((Segment::Dense { lo: self.literal(lo)?, hi: self.literal(hi)? }, Continuation::None))
            }
            Descriptor::Integer { lo, hi } => {
                for k in *lo..=*hi {
                    out.push((Segment::Point(S::from_i64(k)), Continuation::Step(S::one())));
                }
            }
            Descriptor::Quantum { q, m, n } => {
                let q: S = self.literal(q)?;
                let ts = TimeScale::quantum(q.clone(), *m, *n)?;
                for seg in ts.segments() {
                    out.push((seg.clone(), Continuation::Ratio(q.clone())));
                }
            }
            Descriptor::Point(p) => {
                out.push((Segment::Point(self.literal(p)?), Continuation::None));
            }
            Descriptor::Union(members) => {
                for m in members {
                    m.collect(out)?;
                }
            }
        }
        Ok(())
    }

    /// Builds the scale in the requested arithmetic.
    pub fn build<S: Scalar>(&self) -> Result<TimeScale<S>> {
        let mut parts = Vec::new();
        self.collect::<S>(&mut parts)?;
        let top = parts
            .iter()
            .max_by(|x, y| x.0.end().partial_cmp(y.0.end()).expect("ordered"))
            .map(|(_, c)| c.clone())
            .expect("non-empty");
        let segments: Vec<Segment<S>> = parts.into_iter().map(|(s, _)| s).collect();
        let ts = TimeScale::new(segments).map_err(|e| err(&self.to_string(), e.to_string()))?;
        // Integer and quantum members continue by their own rule; bare
        // points and dense ends keep the default (last gap / none).
        let ts = match top {
            Continuation::None => ts,
            c => ts.with_continuation(c),
        };
        Ok(ts.with_descriptor(self.to_string()))
    }

    /// True when the described set contains no dense interval.
    pub fn is_discrete(&self) -> bool {
        match self {
            Descriptor::Real { .. } => false,
            Descriptor::Union(ms) => ms.iter().all(Descriptor::is_discrete),
            _ => true,
        }
    }
}

/// Parses a descriptor and builds the scale in one step.
pub fn parse_scale<S: Scalar>(text: &str) -> Result<TimeScale<S>> {
    text.parse::<Descriptor>()?.build()
}
