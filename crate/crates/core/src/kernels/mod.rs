//! Parameter functions ψ, weight pairs `(ν, w)` and the Peano kernel.

mod kernel;
mod psi;
mod weight;

pub use kernel::{kernel_moments_h2, peano_kernel, KernelSpec, KernelVariant};
pub use psi::{phi, ParameterFunction, PsiFamily, PSI_GRID};
pub use weight::{WeightPair, WeightSpec, WEIGHT_TOL};
