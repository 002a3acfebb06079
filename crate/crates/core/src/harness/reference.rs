use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::timescale::{Piece, TimeScale, TsFunction};

/// Independent Δ-integral oracle: exact sums over scattered points plus a
/// non-adaptive composite midpoint rule with `2^level` panels on every dense
/// piece. Meant for cross-checking, not for speed.
pub fn reference_integral<S: Scalar>(ts: &TimeScale<S>, f: &TsFunction<S>, a: &S, b: &S, level: u32) -> Result<S> {
    if level == 0 {
        return Err(Error::DomainError("reference level must be at least 1".into()));
    }
    if a > b {
        return Ok(-reference_integral(ts, f, b, a, level)?);
    }
    let panels = 1u64 << level.min(30);
    let mut total = S::zero();
    for piece in ts.pieces(a, b)? {
        match piece {
            Piece::Jump { t, mu } => total = total + mu * f.eval(&t),
            Piece::Dense { lo, hi } => {
                let (lo, hi) = (lo.to_f64(), hi.to_f64());
                let h = (hi - lo) / panels as f64;
                let sum: f64 = (0..panels).map(|i| f.eval(&S::from_f64(lo + (i as f64 + 0.5) * h)).to_f64()).sum();
                total = total + S::from_f64(sum * h);
            }
        }
    }
    Ok(total)
}
