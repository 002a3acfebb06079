//! Generalized monomials `h_0 = 1`, `h_{k+1}(t, s) = ∫_s^t h_k(τ, s) Δτ`.
//!
//! [`h_monomial_walk`] evaluates the recursion exactly by walking the
//! Δ-measure from `s` to `t`: a jump of size μ maps `h_{j+1} ← h_{j+1} + μ h_j`,
//! and a dense stretch of length `L` shifts the whole vector like a Taylor
//! series, `h_j ← Σ_i h_i L^{j-i} / (j-i)!`. The same rules run backwards
//! when `t < s`.

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::timescale::scale::{Piece, TimeScale};

/// Largest supported order.
pub const K_MAX: usize = 8;

fn factorial<S: Scalar>(n: usize) -> S {
    (1..=n).fold(S::one(), |acc, k| acc * S::from_i64(k as i64))
}

/// `h_k(t, s)`; uses closed forms on purely dense or unit-step windows.
pub fn h_monomial<S: Scalar>(ts: &TimeScale<S>, k: usize, t: &S, s: &S) -> Result<S> {
    check(ts, k, t, s)?;
    let (lo, hi) = if s <= t { (s, t) } else { (t, s) };
    let pieces = ts.pieces(lo, hi)?;
    if pieces.iter().all(|p| matches!(p, Piece::Dense { .. })) {
        return Ok(closed_form_dense(k, t, s));
    }
    if pieces.iter().all(|p| matches!(p, Piece::Jump { mu, .. } if mu == &S::one())) {
        return Ok(closed_form_unit_step(k, t, s));
    }
    walk(&pieces, k, s <= t)
}

/// `h_k(t, s)` by the exact recursion walk, without fast paths.
pub fn h_monomial_walk<S: Scalar>(ts: &TimeScale<S>, k: usize, t: &S, s: &S) -> Result<S> {
    check(ts, k, t, s)?;
    let (lo, hi) = if s <= t { (s, t) } else { (t, s) };
    walk(&ts.pieces(lo, hi)?, k, s <= t)
}

fn check<S: Scalar>(ts: &TimeScale<S>, k: usize, t: &S, s: &S) -> Result<()> {
    if k > K_MAX {
        return Err(Error::DomainError(format!("h_k supports k <= {K_MAX}, got {k}")));
    }
    for p in [t, s] {
        if !ts.contains(p) {
            return Err(Error::PointNotInScale(p.to_f64()));
        }
    }
    Ok(())
}

/// `(t − s)^k / k!`.
pub fn closed_form_dense<S: Scalar>(k: usize, t: &S, s: &S) -> S {
    (t.clone() - s.clone()).powi(k as u32) / factorial(k)
}

/// `(t − s)(t − s − 1)···(t − s − k + 1) / k!`, the unit-step form.
pub fn closed_form_unit_step<S: Scalar>(k: usize, t: &S, s: &S) -> S {
    let d = t.clone() - s.clone();
    (0..k).fold(S::one(), |acc, i| acc * (d.clone() - S::from_i64(i as i64))) / factorial(k)
}

fn walk<S: Scalar>(pieces: &[Piece<S>], k: usize, forward: bool) -> Result<S> {
    let mut v = vec![S::zero(); k + 1];
    v[0] = S::one();
    let taylor = |v: &[S], len: S| -> Vec<S> {
        (0..=k)
            .map(|j| (0..=j).fold(S::zero(), |acc, i| acc + v[i].clone() * len.powi((j - i) as u32) / factorial(j - i)))
            .collect()
    };
    if forward {
        for p in pieces {
            match p {
                Piece::Jump { mu, .. } => {
                    for j in (1..=k).rev() {
                        v[j] = v[j].clone() + mu.clone() * v[j - 1].clone();
                    }
                }
                Piece::Dense { lo, hi } => v = taylor(&v, hi.clone() - lo.clone()),
            }
        }
    } else {
        for p in pieces.iter().rev() {
            match p {
                Piece::Jump { mu, .. } => {
                    for j in 1..=k {
                        v[j] = v[j].clone() - mu.clone() * v[j - 1].clone();
                    }
                }
                Piece::Dense { lo, hi } => v = taylor(&v, lo.clone() - hi.clone()),
            }
        }
    }
    Ok(v.swap_remove(k))
}
