//! Numerical laboratory for even Minkowski-type Monge-Ampère problems on the
//! sphere and for the associated Brunn-Minkowski-family inequalities.
//!
//! The crate solves `det(∇²h + h δ) = f · h^{p-1}` for origin-symmetric data
//! with `0 ≤ p < 1`, tracks solution branches along density homotopies, probes
//! uniqueness with seeded multi-starts, computes the spectrum of the
//! linearized operator, and verifies the p-Minkowski, p-Brunn-Minkowski and
//! log-Minkowski inequalities on generated convex bodies.
//!
//! Module map:
//! * [`grid`]: antipodally symmetric quadrature grids on S^1 and S^2;
//! * [`bodies`]: support fields, polytopes, Wulff shapes, p-combinations,
//!   volumes, surface-area / cone-volume measures, inscribed ellipsoids;
//! * [`solver`]: chart stencils, Monge-Ampère residuals, damped Newton,
//!   the classical (p = 1) inner solver and the linearized-operator spectrum;
//! * [`continuation`]: density homotopies, exponent sweeps, multi-start
//!   clustering;
//! * [`verify`]: inequality verifiers and variational minimizers.

pub mod bodies;
pub mod continuation;
pub mod error;
pub mod grid;
pub mod par;
pub mod solver;
pub mod verify;

pub use error::{Error, Result};
