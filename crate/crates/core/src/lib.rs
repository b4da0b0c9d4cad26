//! Exact symbolic engine and floating-point oracle for the differential
//! geometry of the equivariant embeddings of complex projective space.
//!
//! CP^n embeds equivariantly into the space V_k of bihomogeneous polynomials
//! of bidegree (k, k) on C^{n+1} by sending a unit functional x to |x x̄|^k,
//! and every equivariant embedding is a direct sum of these. This crate
//! computes the second fundamental forms of the Φ_k exactly, splits off the
//! pluri-mean curvature part, differentiates it covariantly, and decides
//! which embeddings keep it parallel: only k = 1 does.
//!
//! Module map:
//! - [`scalar`]: exact Gaussian-rational scalars and the shared coefficient
//!   abstraction.
//! - [`reduced`]: the four-symbol calculus {x, v, x̄, v̄} in which every
//!   curvature computation closes, with the great-circle derivative,
//!   isotropy eigenprojections and the exact L² Gram matrix.
//! - [`bipoly`]: the full coordinate model of V_k, the unitary substitution
//!   action, L² inner products and the orbit-span rank test.
//! - [`geometry`]: fundamental forms, the (1,1)/(2,0)+(0,2) splitting, both
//!   readings of the covariant derivative, and the parallelism verdict.
//! - [`oracle`]: independent finite-difference verification of every exact
//!   result in the full coefficient model.
//! - [`report`]: deterministic JSON and CSV serialization.

pub mod bipoly;
pub mod error;
pub mod geometry;
pub mod oracle;
pub mod reduced;
pub mod report;
pub mod scalar;

pub use error::Error;
