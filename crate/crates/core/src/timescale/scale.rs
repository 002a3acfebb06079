use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// One building block of a [`TimeScale`].
#[derive(Clone, Debug, PartialEq)]
pub enum Segment<S> {
    /// Closed interval `[lo, hi]` with `lo < hi`.
    Dense { lo: S, hi: S },
    /// A single point.
    Point(S),
}

impl<S: Scalar> Segment<S> {
    pub fn start(&self) -> &S {
        match self {
            Segment::Dense { lo, .. } => lo,
            Segment::Point(t) => t,
        }
    }

    pub fn end(&self) -> &S {
        match self {
            Segment::Dense { hi, .. } => hi,
            Segment::Point(t) => t,
        }
    }

    pub fn contains(&self, t: &S) -> bool {
        match self {
            Segment::Dense { lo, hi } => lo <= t && t <= hi,
            Segment::Point(p) => p == t,
        }
    }

    pub fn is_dense(&self) -> bool {
        matches!(self, Segment::Dense { .. })
    }
}

/// How a scale continues past its maximum, used by [`TimeScale::extended_right`].
#[derive(Clone, Debug, PartialEq)]
pub enum Continuation<S> {
    /// The maximum is left-dense; nothing to add.
    None,
    /// Next point is `max + step`.
    Step(S),
    /// Next point is `max * ratio`.
    Ratio(S),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Dense,
    Scattered,
}

/// A scale point with its jump classification.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalePoint<S> {
    pub value: S,
    pub right: Side,
    pub left: Side,
}

impl<S> ScalePoint<S> {
    pub fn is_isolated(&self) -> bool {
        self.right == Side::Scattered && self.left == Side::Scattered
    }

    pub fn is_dense(&self) -> bool {
        self.right == Side::Dense && self.left == Side::Dense
    }
}

/// A contiguous piece of the Δ-measure on a window.
#[derive(Clone, Debug, PartialEq)]
pub enum Piece<S> {
    /// Right-scattered point `t` carrying mass `mu = σ(t) − t`.
    Jump { t: S, mu: S },
    /// Lebesgue measure on `[lo, hi]`.
    Dense { lo: S, hi: S },
}

/// A finitely described time scale: a sorted union of disjoint closed
/// intervals and isolated points.
#[derive(Clone, PartialEq)]
pub struct TimeScale<S> {
    segments: Vec<Segment<S>>,
    continuation: Continuation<S>,
    descriptor: Option<String>,
}

impl<S: Scalar> fmt::Debug for TimeScale<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.descriptor {
            Some(d) => write!(f, "TimeScale({d})"),
            None => f.debug_list().entries(self.segments.iter()).finish(),
        }
    }
}

impl<S: Scalar> TimeScale<S> {
    /// Builds a scale from segments in any order. Segments must be pairwise
    /// disjoint and dense segments must have `lo < hi`.
    pub fn new(mut segments: Vec<Segment<S>>) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::InvalidScale("a time scale must be non-empty".into()));
        }
        for seg in &segments {
            if let Segment::Dense { lo, hi } = seg {
                if lo >= hi {
                    return Err(Error::InvalidScale(format!(
                        "dense segment [{}, {}] needs lo < hi",
                        lo.to_f64(),
                        hi.to_f64()
                    )));
                }
            }
        }
        segments.sort_by(|x, y| x.start().partial_cmp(y.start()).expect("scale values are ordered"));
        for pair in segments.windows(2) {
            if pair[0].end() >= pair[1].start() {
                return Err(Error::InvalidScale(format!("segments overlap or touch at {}", pair[1].start().to_f64())));
            }
        }
        let continuation = default_continuation(&segments);
        Ok(TimeScale { segments, continuation, descriptor: None })
    }

    pub fn dense(lo: S, hi: S) -> Result<Self> {
        let mut ts = Self::new(vec![Segment::Dense { lo: lo.clone(), hi: hi.clone() }])?;
        ts.descriptor = Some(format!("R[{},{}]", lo.to_f64(), hi.to_f64()));
        Ok(ts)
    }

    /// `{lo, lo+1, ..., hi}`.
    pub fn integers(lo: i64, hi: i64) -> Result<Self> {
        if lo > hi {
            return Err(Error::InvalidScale(format!("Z[{lo},{hi}] is empty")));
        }
        let segs = (lo..=hi).map(|k| Segment::Point(S::from_i64(k))).collect();
        let mut ts = Self::new(segs)?;
        ts.continuation = Continuation::Step(S::one());
        ts.descriptor = Some(format!("Z[{lo},{hi}]"));
        Ok(ts)
    }

    /// `{q^m, q^(m+1), ..., q^n}` with `q > 1`.
    pub fn quantum(q: S, m: i64, n: i64) -> Result<Self> {
        if q <= S::one() {
            return Err(Error::InvalidScale(format!("quantum scale needs q > 1, got {}", q.to_f64())));
        }
        if m > n {
            return Err(Error::InvalidScale(format!("quantum window needs m <= n, got {m} > {n}")));
        }
        let base = if m >= 0 { q.powi(m as u32) } else { S::one() / q.powi(m.unsigned_abs() as u32) };
        let mut pts = Vec::with_capacity((n - m + 1) as usize);
        let mut cur = base;
        for _ in m..=n {
            pts.push(Segment::Point(cur.clone()));
            cur = cur * q.clone();
        }
        let mut ts = Self::new(pts)?;
        ts.continuation = Continuation::Ratio(q.clone());
        ts.descriptor = Some(format!("Q({})[{m},{n}]", q.to_f64()));
        Ok(ts)
    }

    /// Finite set of isolated points.
    pub fn points(pts: Vec<S>) -> Result<Self> {
        Self::new(pts.into_iter().map(Segment::Point).collect())
    }

    pub(crate) fn with_descriptor(mut self, text: String) -> Self {
        self.descriptor = Some(text);
        self
    }

    pub(crate) fn with_continuation(mut self, c: Continuation<S>) -> Self {
        self.continuation = c;
        self
    }

    /// Descriptor text this scale was built from, if any.
    pub fn descriptor(&self) -> Option<&str> {
        self.descriptor.as_deref()
    }

    pub fn segments(&self) -> &[Segment<S>] {
        &self.segments
    }

    pub fn continuation(&self) -> &Continuation<S> {
        &self.continuation
    }

    pub fn min(&self) -> &S {
        self.segments[0].start()
    }

    pub fn max(&self) -> &S {
        self.segments[self.segments.len() - 1].end()
    }

    /// Index of the segment holding `t`.
    pub fn locate(&self, t: &S) -> Option<usize> {
        let idx = self.segments.partition_point(|seg| seg.start() <= t);
        if idx == 0 {
            return None;
        }
        self.segments[idx - 1].contains(t).then_some(idx - 1)
    }

    pub fn contains(&self, t: &S) -> bool {
        self.locate(t).is_some()
    }

    fn require(&self, t: &S) -> Result<usize> {
        self.locate(t).ok_or_else(|| Error::PointNotInScale(t.to_f64()))
    }

    /// Forward jump σ(t) = inf{s ∈ T : s > t}, with σ(max) = max.
    pub fn sigma(&self, t: &S) -> Result<S> {
        let i = self.require(t)?;
        Ok(self.sigma_at(i, t))
    }

    fn sigma_at(&self, i: usize, t: &S) -> S {
        if let Segment::Dense { hi, .. } = &self.segments[i] {
            if t < hi {
                return t.clone();
            }
        }
        match self.segments.get(i + 1) {
            Some(next) => next.start().clone(),
            None => t.clone(),
        }
    }

    /// Backward jump ρ(t) = sup{s ∈ T : s < t}, with ρ(min) = min.
    pub fn rho(&self, t: &S) -> Result<S> {
        let i = self.require(t)?;
        if let Segment::Dense { lo, .. } = &self.segments[i] {
            if t > lo {
                return Ok(t.clone());
            }
        }
        Ok(match i.checked_sub(1) {
            Some(j) => self.segments[j].end().clone(),
            None => t.clone(),
        })
    }

    /// Graininess μ(t) = σ(t) − t.
    pub fn mu(&self, t: &S) -> Result<S> {
        Ok(self.sigma(t)? - t.clone())
    }

    pub fn classify(&self, t: &S) -> Result<ScalePoint<S>> {
        let sigma = self.sigma(t)?;
        let rho = self.rho(t)?;
        let side = |jumped: bool| if jumped { Side::Scattered } else { Side::Dense };
        Ok(ScalePoint { value: t.clone(), right: side(&sigma != t), left: side(&rho != t) })
    }

    /// Whether the maximum is left-scattered (so T^κ drops it).
    pub fn max_is_left_scattered(&self) -> bool {
        !self.segments[self.segments.len() - 1].is_dense() && (self.segments.len() > 1)
    }

    /// Membership in T^κ.
    pub fn in_kappa(&self, t: &S) -> bool {
        self.contains(t) && !(t == self.max() && self.max_is_left_scattered())
    }

    fn check_window(&self, a: &S, b: &S) -> Result<()> {
        if !self.contains(a) {
            return Err(Error::EndpointNotInScale(a.to_f64()));
        }
        if !self.contains(b) {
            return Err(Error::EndpointNotInScale(b.to_f64()));
        }
        Ok(())
    }

    /// Decomposes the Δ-measure on `[a, b)` into ordered pieces. Requires
    /// `a <= b`, both in the scale.
    pub fn pieces(&self, a: &S, b: &S) -> Result<Vec<Piece<S>>> {
        self.check_window(a, b)?;
        let mut out = Vec::new();
        if a >= b {
            return Ok(out);
        }
        let first = self.locate(a).expect("checked");
        for (i, seg) in self.segments.iter().enumerate().skip(first) {
            if seg.start() >= b {
                break;
            }
            if let Segment::Dense { lo, hi } = seg {
                let lo = S::max_of(lo, a);
                let hi_c = S::min_of(hi, b);
                if lo < hi_c {
                    out.push(Piece::Dense { lo, hi: hi_c });
                }
            }
            let end = seg.end();
            if end >= a && end < b {
                let sigma = self.sigma_at(i, end);
                out.push(Piece::Jump { t: end.clone(), mu: sigma - end.clone() });
            }
        }
        Ok(out)
    }

    /// True when `[a, b)` contains no dense piece.
    pub fn is_scattered_on(&self, a: &S, b: &S) -> Result<bool> {
        Ok(self.pieces(a, b)?.iter().all(|p| matches!(p, Piece::Jump { .. })))
    }

    /// True when the whole scale is a finite set of points.
    pub fn is_discrete(&self) -> bool {
        self.segments.iter().all(|s| !s.is_dense())
    }

    /// Scale points of `[a, b]` when that window is purely scattered.
    pub fn scattered_points(&self, a: &S, b: &S) -> Result<Vec<S>> {
        let mut pts = Vec::new();
        for p in self.pieces(a, b)? {
            match p {
                Piece::Jump { t, .. } => pts.push(t),
                Piece::Dense { lo, hi } => {
                    return Err(Error::InvalidScale(format!(
                        "window contains the dense piece [{}, {}]",
                        lo.to_f64(),
                        hi.to_f64()
                    )))
                }
            }
        }
        if a <= b {
            pts.push(b.clone());
        }
        Ok(pts)
    }

    /// Appends one natural continuation point past a left-scattered maximum
    /// (`max + step` or `max * ratio`). Dense maxima are left unchanged.
    pub fn extended_right(&self) -> TimeScale<S> {
        let next = match &self.continuation {
            Continuation::None => return self.clone(),
            Continuation::Step(h) => self.max().clone() + h.clone(),
            Continuation::Ratio(q) => self.max().clone() * q.clone(),
        };
        let mut segments = self.segments.clone();
        segments.push(Segment::Point(next));
        TimeScale { segments, continuation: self.continuation.clone(), descriptor: self.descriptor.clone() }
    }

    /// The dense segment `[lo, hi]` containing `t`, if `t` lies in one.
    pub fn dense_segment_of(&self, t: &S) -> Option<(S, S)> {
        let i = self.locate(t)?;
        match &self.segments[i] {
            Segment::Dense { lo, hi } => Some((lo.clone(), hi.clone())),
            Segment::Point(_) => None,
        }
    }
}

fn default_continuation<S: Scalar>(segments: &[Segment<S>]) -> Continuation<S> {
    let n = segments.len();
    match &segments[n - 1] {
        Segment::Dense { .. } => Continuation::None,
        Segment::Point(p) => match n.checked_sub(2).map(|j| segments[j].end()) {
            Some(prev) => Continuation::Step(p.clone() - prev.clone()),
            None => Continuation::Step(S::one()),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    #[test]
    fn integer_jumps() {
        let ts = TimeScale::<f64>::integers(0, 5).unwrap();
        assert_eq!(ts.sigma(&3.0).unwrap(), 4.0);
        assert_eq!(ts.rho(&3.0).unwrap(), 2.0);
        assert_eq!(ts.mu(&2.0).unwrap(), 1.0);
        assert_eq!(ts.sigma(&5.0).unwrap(), 5.0);
        assert_eq!(ts.sigma(&2.5), Err(Error::PointNotInScale(2.5)));
        assert!(ts.classify(&3.0).unwrap().is_isolated());
    }

    #[test]
    fn dense_and_quantum_jumps() {
        let r = TimeScale::<f64>::dense(0.0, 1.0).unwrap();
        assert_eq!(r.sigma(&0.5).unwrap(), 0.5);
        assert_eq!(r.mu(&0.25).unwrap(), 0.0);
        assert!(r.classify(&0.5).unwrap().is_dense());

        let q = TimeScale::<f64>::quantum(2.0, 0, 4).unwrap();
        assert_eq!(q.sigma(&4.0).unwrap(), 8.0);
        assert_eq!(q.mu(&4.0).unwrap(), 4.0);
        assert_eq!(*q.max(), 16.0);
    }

    #[test]
    fn hybrid_classification() {
        let ts =
            TimeScale::<f64>::new(vec![Segment::Dense { lo: 0.0, hi: 1.0 }, Segment::Point(2.0), Segment::Point(3.0)])
                .unwrap();
        let end = ts.classify(&1.0).unwrap();
        assert_eq!((end.left, end.right), (Side::Dense, Side::Scattered));
        let two = ts.classify(&2.0).unwrap();
        assert!(two.is_isolated());
        assert_eq!(ts.mu(&1.0).unwrap(), 1.0);
        assert!(!ts.in_kappa(&3.0));
        assert!(ts.in_kappa(&2.0));
        let pieces = ts.pieces(&0.5, &3.0).unwrap();
        assert_eq!(
            pieces,
            vec![Piece::Dense { lo: 0.5, hi: 1.0 }, Piece::Jump { t: 1.0, mu: 1.0 }, Piece::Jump { t: 2.0, mu: 1.0 },]
        );
    }

    #[test]
    fn rejects_overlap_and_empty() {
        assert!(TimeScale::<f64>::new(vec![]).is_err());
        assert!(TimeScale::new(vec![Segment::Dense { lo: 0.0, hi: 1.0 }, Segment::Point(1.0)]).is_err());
        assert!(TimeScale::new(vec![Segment::Dense { lo: 1.0, hi: 1.0 }]).is_err());
        assert!(TimeScale::<f64>::quantum(1.0, 0, 3).is_err());
    }

    #[test]
    fn extension_follows_the_scale() {
        let z = TimeScale::<Rational>::integers(0, 4).unwrap().extended_right();
        assert_eq!(*z.max(), Rational::from_i64(5));
        let q = TimeScale::<Rational>::quantum(Rational::from_i64(3), 0, 2).unwrap().extended_right();
        assert_eq!(*q.max(), Rational::from_i64(27));
        let r = TimeScale::<f64>::dense(0.0, 1.0).unwrap().extended_right();
        assert_eq!(*r.max(), 1.0);
    }
}
