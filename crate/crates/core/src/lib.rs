//! Exact symbolic calculus for the anchor ring (torus) in Euclidean 3-space.
//!
//! The crate builds the Laplace-Beltrami operator of the induced metric on
//! the anchor ring, iterates it exactly on the Gauss-map and position
//! coordinates, and certifies the absence of any monic annihilating
//! polynomial in the operator up to a configurable order. All core
//! arithmetic is exact: arbitrary-precision rationals, sparse polynomials
//! in the two ring parameters `a` and `r`, and a canonical quotient algebra
//! generated by `sin t`, `cos t` and `1/(a + r cos t)`.
//!
//! Modules:
//! - [`exactnum`]: rationals, parameter polynomials, their fraction field,
//!   and fraction-free linear algebra.
//! - [`trigring`]: canonical trigonometric-rational normal forms and exact
//!   differentiation in `t`.
//! - [`surface`]: the anchor-ring geometry (metric, curvatures, Gauss map,
//!   Beltrami operator) and its structural identities.
//! - [`finitetype`]: iterated-Laplacian traces, leading-coefficient
//!   extraction, annihilator search, and the infinite-type certificate.
//! - [`numeric`]: floating-point evaluation and the independent
//!   finite-difference oracle used to adjudicate symbolic results.
//! - [`cli`]: the command-line surface and deterministic text/JSON reports.

pub mod cli;
pub mod exactnum;
pub mod finitetype;
pub mod numeric;
pub mod surface;
pub mod trigring;

pub use exactnum::{ParamMatrix, ParamPoly, ParamRational, Rational};
pub use trigring::{GradedTrig, PhiHarmonic, RingParams, TrigNum, TrigPoly};
