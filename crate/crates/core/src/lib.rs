//! Homogeneous nonlinear lifts between Minkowski-normed spaces.
//!
//! Given a Minkowski norm `F₁` on `V₁` and a linear surjection `μ: V₁ → V₂`,
//! every `v ∈ V₂` has a unique `F₁`-shortest preimage `h(v)`. The map `h` is a
//! positively homogeneous (generally nonlinear) right inverse of `μ`, and
//! `F₂ = F₁ ∘ h` is a Minkowski norm on `V₂` that turns `μ` into a Minkowski
//! submersion. The crate computes these objects numerically and checks their
//! defining properties:
//!
//! - [`norms`]: closed-form norm families with analytic energy derivatives.
//! - [`minksub`]: the fiber minimization, subduced norms and an independent
//!   grid-search oracle.
//! - [`euclid`]: the inner products `Hess E` and the induced Euclidean submersion.
//! - [`chart`]: bundle-chart families, splitting coefficients and spray tangency.
//! - [`liealg`]: structure constants, Killing form and the `so(4)/so(3)` example.
//!
//! The crate is `no_std` and needs only `alloc`.

#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod chart;
pub mod error;
pub mod euclid;
pub mod liealg;
pub mod linalg;
pub mod minksub;
pub mod norms;

pub use error::{Error, Result};
pub use linalg::{Matrix, Vector};
pub use minksub::{LiftSolution, LinearSurjection, SolverConfig, SubducedNorm};
pub use norms::{MinkowskiFunction, NormSpec, VerificationReport};
