//! Calculus on time scales and numerical checks of weighted Ostrowski and
//! Ostrowski–Grüss inequalities.
//!
//! The crate is organised bottom-up:
//!
//! * [`timescale`]: finitely described time scales (dense intervals plus
//!   scattered points), jump operators, delta derivatives and integrals,
//!   and the `h_k` monomials.
//! * [`kernels`]: parameter functions ψ, the coefficient Φ(λ), weight pairs
//!   `(ν, w)` and the weighted Peano kernel with its specialisations.
//! * [`inequalities`]: evaluators that compute both sides of each inequality
//!   and the underlying identity, reporting slack.
//! * [`harness`]: deterministic sweep plans, parallel sweeps, sharpness
//!   search and an independent reference integrator.
//! * [`cli`]: the config-driven batch front end behind the `tsineq` binary.
//!
//! Every evaluator is generic over [`Scalar`]; run it with [`Rational`] on
//! purely scattered windows to get exact answers.

pub mod cli;
pub mod error;
pub mod harness;
pub mod inequalities;
pub mod kernels;
pub mod quadrature;
pub mod scalar;
pub mod timescale;

pub use error::{Error, Result};
pub use scalar::{Rational, Scalar};
pub use timescale::{Descriptor, TimeScale, TsFunction};
