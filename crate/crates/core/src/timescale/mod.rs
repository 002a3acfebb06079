//! Computable time scales and the delta calculus on them.

pub mod calculus;
pub mod descriptor;
pub mod function;
pub mod monomial;
pub mod scale;

pub use calculus::{
    backward_jump, delta_derivative, delta_derivative_flagged, delta_integral, forward_jump, graininess, integrate_fn,
    Derivative, Order,
};
pub use descriptor::{parse_scale, Descriptor};
pub use function::{FunctionSpec, TsFunction};
pub use monomial::{h_monomial, h_monomial_walk, K_MAX};
pub use scale::{Continuation, Piece, ScalePoint, Segment, Side, TimeScale};
